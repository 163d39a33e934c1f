"""
Modèles pour les relations d'orthogonalité et leurs verdicts.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.models.vector_model import LpNormSpec, NormSpec, Tolerance


class RelationId(str, Enum):
    """Identifiants stables des relations d'orthogonalité"""
    CLASSIC = "classic"
    BIRKHOFF = "birkhoff"
    ISOSCELES = "isosceles"
    EPS_INNER = "eps_inner"
    DRAGOMIR_BIRKHOFF = "dragomir_birkhoff"
    CHMIELINSKI_BIRKHOFF = "chmielinski_birkhoff"
    ISO_ADDITIVE = "iso_additive"
    ISO_MULTIPLICATIVE = "iso_multiplicative"
    HH_EXACT = "hh_exact"
    HH_RELATIVE = "hh_relative"
    HH_ABSOLUTE = "hh_absolute"


# Relations paramétrées par ε
EPSILON_RELATIONS = frozenset({
    RelationId.EPS_INNER,
    RelationId.DRAGOMIR_BIRKHOFF,
    RelationId.CHMIELINSKI_BIRKHOFF,
    RelationId.ISO_ADDITIVE,
    RelationId.ISO_MULTIPLICATIVE,
    RelationId.HH_RELATIVE,
    RelationId.HH_ABSOLUTE,
})

# Relations qui n'ont de sens que pour une norme issue d'un produit scalaire
INNER_PRODUCT_RELATIONS = frozenset({RelationId.CLASSIC, RelationId.EPS_INNER})


class OrthoVerdict(BaseModel):
    """
    Verdict d'une relation : holds ⇔ margin ≥ −allowance.
    margin = membre de droite − membre de gauche de l'inégalité définissante.
    """
    holds: bool = Field(..., description="La relation est-elle satisfaite (à la tolérance près)")
    margin: float = Field(..., description="Marge signée (≥ 0 quand la relation est satisfaite)")
    allowance: float = Field(..., ge=0, description="Tolérance appliquée à la marge")
    relation: RelationId = Field(..., description="Relation évaluée")
    epsilon: Optional[float] = Field(None, description="Paramètre ε éventuel")
    details: Dict[str, Any] = Field(default_factory=dict, description="Diagnostics (minimiseur, rapports, ...)")

    class Config:
        json_schema_extra = {
            "example": {
                "holds": False,
                "margin": -0.1,
                "allowance": 3.3e-10,
                "relation": "hh_relative",
                "epsilon": 0.15,
                "details": {"ratio": 1.142857, "lower_bound": 0.7391, "upper_bound": 1.3529}
            }
        }


class EvalRequestModel(BaseModel):
    """Requête d'évaluation d'une relation pour un couple (x, y)"""
    relation: RelationId = Field(..., description="Relation à évaluer")
    norm: NormSpec = Field(default_factory=lambda: LpNormSpec(p=2), description="Norme de l'espace")
    x: List[float] = Field(..., min_length=1, description="Vecteur x")
    y: List[float] = Field(..., min_length=1, description="Vecteur y")
    eps: Optional[float] = Field(None, description="Paramètre ε (relations approchées)")
    tolerance: Optional[Tolerance] = Field(None, description="Tolérance des comparaisons")

    class Config:
        json_schema_extra = {
            "example": {
                "relation": "hh_relative",
                "norm": {"kind": "lp", "p": 2},
                "x": [2.0, 0.0],
                "y": [0.45, 0.8930285549745876],
                "eps": 0.15
            }
        }
