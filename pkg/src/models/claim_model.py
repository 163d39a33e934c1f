"""
Modèles du banc d'audit des assertions : spécification d'une campagne,
témoin de contre-exemple et rapport.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from src.models.vector_model import NormSpec


class ClaimStatus(str, Enum):
    """Issue d'un audit"""
    CONFIRMED = "confirmed"
    COUNTEREXAMPLE = "counterexample"
    INCONCLUSIVE = "inconclusive"


class ClaimMode(str, Enum):
    """Échantillonnage seul, optimisation locale seule, ou les deux"""
    SAMPLE = "sample"
    OPTIMIZE = "optimize"
    BOTH = "both"


class ClaimUniverse(BaseModel):
    """Univers d'échantillonnage : dimensions, normes et grille de ε"""
    dims: Tuple[int, int] = Field(default=(2, 6), description="Dimensions min et max (incluses)")
    norm_specs: List[NormSpec] = Field(default_factory=list, description="Normes candidates (vide = Gram SPD aléatoires)")
    eps_grid: List[float] = Field(
        default_factory=lambda: [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8],
        description="Valeurs privilégiées de ε"
    )

    @field_validator("eps_grid")
    @classmethod
    def verifier_eps(cls, valeurs: List[float]) -> List[float]:
        if any(not 0 <= e < 1 for e in valeurs):
            raise ValueError("Les valeurs de ε doivent appartenir à [0, 1)")
        return valeurs

    @field_validator("dims")
    @classmethod
    def verifier_dims(cls, dims: Tuple[int, int]) -> Tuple[int, int]:
        if dims[0] < 1 or dims[1] < dims[0]:
            raise ValueError("dims doit vérifier 1 ≤ min ≤ max")
        return dims


class ClaimSpec(BaseModel):
    """Paramètres d'une campagne d'audit"""
    id: str = Field(..., description="Identifiant de l'assertion")
    universe: Optional[ClaimUniverse] = Field(None, description="Univers (défaut de l'assertion si absent)")
    trials: Optional[int] = Field(None, ge=1, description="Nombre d'essais (défaut de l'assertion si absent)")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Graine 64 bits")
    mode: ClaimMode = Field(default=ClaimMode.BOTH, description="Stratégie de recherche")

    class Config:
        json_schema_extra = {
            "example": {
                "id": "C11-forward",
                "trials": 20000,
                "seed": 0,
                "mode": "both"
            }
        }


class Witness(BaseModel):
    """Instance concrète sérialisée, réévaluable indépendamment"""
    trial_index: int = Field(..., description="Indice de l'essai (−1 pour une instance raffinée)")
    payload: Dict[str, Any] = Field(..., description="Vecteurs, matrices, normes et paramètres de l'instance")
    premise_margin: float = Field(..., description="Marge de la prémisse")
    conclusion_margin: float = Field(..., description="Marge de la conclusion")
    conclusion_allowance: float = Field(..., ge=0, description="Tolérance appliquée à la conclusion")
    relative_margin: float = Field(..., description="(marge + tolérance)/échelle de la conclusion, < 0 ⇔ violation")


class ClaimReport(BaseModel):
    """Rapport d'audit d'une assertion"""
    id: str = Field(..., description="Identifiant de l'assertion")
    statement: str = Field(..., description="Énoncé audité")
    status: ClaimStatus = Field(..., description="confirmed, counterexample ou inconclusive")
    trials_run: int = Field(..., ge=0, description="Essais effectués")
    premise_hits: int = Field(..., ge=0, description="Essais où la prémisse était satisfaite")
    violations: int = Field(..., ge=0, description="Essais violant la conclusion")
    worst_witness: Optional[Witness] = Field(None, description="Instance de plus petite marge relative")
    elapsed: float = Field(..., ge=0, description="Durée en secondes")
    seed: int = Field(..., description="Graine utilisée")
    notes: List[str] = Field(default_factory=list, description="Remarques (vérification du témoin, raffinement)")

    class Config:
        json_schema_extra = {
            "example": {
                "id": "C11-forward",
                "statement": "relative ε-HH-I ⇒ δ-orthogonality with δ = 2ε",
                "status": "counterexample",
                "trials_run": 100000,
                "premise_hits": 61234,
                "violations": 5120,
                "worst_witness": None,
                "elapsed": 1.8,
                "seed": 0,
                "notes": ["witness re-verified"]
            }
        }


class ClaimRunRequestModel(BaseModel):
    """Requête HTTP d'exécution d'une ou plusieurs assertions"""
    ids: Optional[List[str]] = Field(None, description="Identifiants (toutes si absent)")
    seed: int = Field(default=0, ge=0, description="Graine")
    trials: Optional[int] = Field(None, ge=1, le=1_000_000, description="Nombre d'essais imposé")


class ClaimInfo(BaseModel):
    """Entrée du registre des assertions"""
    id: str = Field(..., description="Identifiant stable")
    statement: str = Field(..., description="Énoncé")
    default_trials: int = Field(..., ge=1, description="Budget d'essais par défaut")
    legs: int = Field(..., ge=1, description="Nombre d'implications vérifiées (2 pour une équivalence)")
    refinable: bool = Field(..., description="Optimisation locale des candidats")


class WitnessCheck(BaseModel):
    """Réévaluation d'un témoin par la voie scalaire"""
    verified: bool = Field(..., description="Prémisse satisfaite et conclusion violée")
    premise_holds: bool = Field(..., description="Prémisse satisfaite (à la tolérance près)")
    premise_margin: Optional[float] = Field(None, description="Marge de prémisse recalculée")
    conclusion_margin: Optional[float] = Field(None, description="Marge de conclusion recalculée")
    conclusion_allowance: Optional[float] = Field(None, description="Tolérance de conclusion recalculée")
    relative_margin: Optional[float] = Field(None, description="Marge relative recalculée")
    error: Optional[str] = Field(None, description="Erreur rencontrée pendant la réévaluation")
