"""
Modèles des résultats d'optimisation et de recherche de racine 1-D.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from src.models.vector_model import LpNormSpec, NormSpec, Tolerance


class RootResult(BaseModel):
    """Racine localisée par encadrement puis dichotomie"""
    location: float = Field(..., description="Position de la racine")
    residual: float = Field(..., description="Valeur de la fonction à la racine")
    iterations: int = Field(..., ge=0, description="Nombre d'évaluations de dichotomie")
    bracket: Tuple[float, float] = Field(..., description="Encadrement final")
    converged: bool = Field(default=True, description="|résidu| ≤ tolérance demandée")

    class Config:
        json_schema_extra = {
            "example": {
                "location": -1.0,
                "residual": 0.0,
                "iterations": 54,
                "bracket": [-1.0000000000000002, -0.9999999999999998],
                "converged": True
            }
        }


class LineMinResult(BaseModel):
    """Minimum de t ↦ ‖x + t·y‖"""
    t_star: float = Field(..., description="Minimiseur")
    value: float = Field(..., ge=0, description="Valeur minimale")
    bracket: Tuple[float, float] = Field(..., description="Intervalle de recherche")


class BetaResult(BaseModel):
    """Minimum de β ↦ ‖x/β‖² + ‖βy‖²"""
    beta_star: Optional[float] = Field(None, description="Minimiseur (absent si l'infimum n'est pas atteint)")
    value: float = Field(..., ge=0, description="Valeur minimale (= 2‖x‖‖y‖)")
    attained: bool = Field(..., description="Le minimum est-il atteint")
    method: Literal["analytic", "golden-section"] = Field(default="analytic", description="Méthode")


class SolveRequestModel(BaseModel):
    """Requête pour les solveurs 1-D"""
    norm: NormSpec = Field(default_factory=lambda: LpNormSpec(p=2), description="Norme de l'espace")
    x: List[float] = Field(..., min_length=1, description="Vecteur x")
    y: List[float] = Field(..., min_length=1, description="Vecteur y")
    tolerance: Optional[Tolerance] = Field(None, description="Tolérance")

    class Config:
        json_schema_extra = {
            "example": {
                "norm": {"kind": "lp", "p": "inf"},
                "x": [1.0, 0.0],
                "y": [1.0, 1.0]
            }
        }
