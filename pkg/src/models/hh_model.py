"""
Modèles pour les intégrales de type Hermite–Hadamard
I₊(x,y) = ∫₀¹‖(1−t)x+ty‖²dt et I₋(x,y) = ∫₀¹‖(1−t)x−ty‖²dt.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from src.models.vector_model import NormSpec, Tolerance


class HHValues(BaseModel):
    """Valeurs des deux intégrales, de leur écart et de leur somme"""
    i_plus: float = Field(..., ge=0, description="I₊ = ∫₀¹‖(1−t)x+ty‖²dt")
    i_minus: float = Field(..., ge=0, description="I₋ = ∫₀¹‖(1−t)x−ty‖²dt")
    gap: float = Field(..., description="I₊ − I₋")
    total: float = Field(..., ge=0, description="I₊ + I₋")
    method: Literal["closed-form", "quadrature"] = Field(..., description="Méthode de calcul")
    est_abs_error: float = Field(default=0.0, ge=0, description="Erreur absolue estimée (somme des deux intégrales)")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "i_plus": 5.333333333333333,
                "i_minus": 4.666666666666667,
                "gap": 0.6666666666666661,
                "total": 10.0,
                "method": "closed-form",
                "est_abs_error": 0.0
            }
        }

    @classmethod
    def from_integrals(cls, i_plus: float, i_minus: float, method: str, est_abs_error: float = 0.0) -> "HHValues":
        """Construire les valeurs en dérivant gap et total des deux intégrales"""
        i_plus = max(float(i_plus), 0.0)
        i_minus = max(float(i_minus), 0.0)
        return cls(
            i_plus=i_plus,
            i_minus=i_minus,
            gap=i_plus - i_minus,
            total=i_plus + i_minus,
            method=method,
            est_abs_error=float(est_abs_error),
        )


class HHRequestModel(BaseModel):
    """Requête de calcul des intégrales pour un couple (x, y)"""
    norm: NormSpec = Field(..., description="Norme de l'espace")
    x: List[float] = Field(..., min_length=1, description="Vecteur x")
    y: List[float] = Field(..., min_length=1, description="Vecteur y")
    tolerance: Optional[Tolerance] = Field(None, description="Tolérance de quadrature")
    method: Literal["auto", "quadrature", "closed-form"] = Field(default="auto", description="Méthode imposée")

    class Config:
        json_schema_extra = {
            "example": {
                "norm": {"kind": "lp", "p": "inf"},
                "x": [1.0, 0.0],
                "y": [0.0, 1.0],
                "method": "auto"
            }
        }
