"""
Configuration d'une invocation de la CLI.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from src.models.vector_model import NormSpec, Tolerance


class RunConfig(BaseModel):
    """Paramètres résolus d'une commande (arguments, fichiers et variables d'environnement)"""
    command: str = Field(..., description="Sous-commande (eval, hh, map, solve, claims)")
    norm_specs: List[NormSpec] = Field(default_factory=list, description="Norme(s) référencées")
    dim: Optional[int] = Field(None, ge=1, description="Dimension de l'espace")
    eps: Optional[float] = Field(None, description="Paramètre ε")
    seed: int = Field(default=0, ge=0, description="Graine")
    trials: Optional[int] = Field(None, ge=1, description="Nombre d'essais")
    tolerance: Tolerance = Field(default_factory=Tolerance, description="Tolérance des comparaisons")
    input_paths: List[str] = Field(default_factory=list, description="Fichiers d'entrée")
    output_format: Literal["json", "csv", "markdown"] = Field(default="json", description="Format de sortie")

    @field_validator("eps")
    @classmethod
    def verifier_eps(cls, eps: Optional[float]) -> Optional[float]:
        if eps is not None and not 0 <= eps < 1:
            raise ValueError("ε doit appartenir à [0, 1)")
        return eps
