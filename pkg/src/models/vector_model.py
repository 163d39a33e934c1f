"""
Modèles de l'espace vectoriel : vecteurs, spécifications de norme et tolérances.
"""

import math
from typing import Annotated, List, Literal, Union

import numpy as np
from pydantic import BaseModel, BeforeValidator, Field, PlainSerializer, model_validator


def _parse_extended_float(value):
    """Accepter "inf" / "infinity" comme valeur infinie"""
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity", "∞"):
        return math.inf
    return value


def _serialize_extended_float(value: float):
    """Sérialiser l'infini sous la forme "inf" (JSON ne connaît pas l'infini)"""
    if math.isinf(value) and value > 0:
        return "inf"
    return value


# Réel étendu : un flottant ou la valeur symbolique "inf"
ExtendedFloat = Annotated[
    float,
    BeforeValidator(_parse_extended_float),
    PlainSerializer(_serialize_extended_float, return_type=Union[float, str], when_used="json"),
]


class Vector(BaseModel):
    """Vecteur réel de dimension finie"""
    dim: int = Field(..., ge=1, description="Dimension de l'espace")
    components: List[float] = Field(..., description="Composantes (longueur = dim)")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "dim": 2,
                "components": [3.0, 4.0]
            }
        }

    @model_validator(mode="after")
    def verifier_composantes(self) -> "Vector":
        if len(self.components) != self.dim:
            raise ValueError(f"{len(self.components)} composantes pour une dimension {self.dim}")
        if not all(math.isfinite(c) for c in self.components):
            raise ValueError("Toutes les composantes doivent être finies")
        return self

    @classmethod
    def of(cls, values) -> "Vector":
        """Construire un vecteur depuis une séquence ou un tableau numpy"""
        composantes = [float(v) for v in np.asarray(values, dtype=float).ravel()]
        return cls(dim=len(composantes), components=composantes)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=float)


class LpNormSpec(BaseModel):
    """Norme ℓp (p ∈ [1, ∞])"""
    kind: Literal["lp"] = "lp"
    p: ExtendedFloat = Field(..., description="Exposant p, ou \"inf\"")

    class Config:
        frozen = True
        json_schema_extra = {"example": {"kind": "lp", "p": "inf"}}


class WeightedLpNormSpec(BaseModel):
    """
    Norme ℓp pondérée : (Σ wᵢ|vᵢ|^p)^(1/p), et max wᵢ|vᵢ| pour p = ∞
    (poids appliqués linéairement à l'infini)
    """
    kind: Literal["wlp"] = "wlp"
    p: ExtendedFloat = Field(..., description="Exposant p, ou \"inf\"")
    weights: List[float] = Field(..., description="Poids strictement positifs")

    class Config:
        frozen = True
        json_schema_extra = {"example": {"kind": "wlp", "p": 2, "weights": [1.0, 4.0]}}


class InnerProductNormSpec(BaseModel):
    """Norme induite par un produit scalaire ⟨x, y⟩ = xᵀ·G·y (G symétrique définie positive)"""
    kind: Literal["ip"] = "ip"
    gram: List[List[float]] = Field(..., description="Matrice de Gram SPD")

    class Config:
        frozen = True
        json_schema_extra = {"example": {"kind": "ip", "gram": [[2.0, 0.0], [0.0, 1.0]]}}


NormSpec = Annotated[
    Union[LpNormSpec, WeightedLpNormSpec, InnerProductNormSpec],
    Field(discriminator="kind"),
]

NORM_SPEC_TYPES = (LpNormSpec, WeightedLpNormSpec, InnerProductNormSpec)


def describe_norm_spec(spec) -> str:
    """Libellé court d'une norme, dans la mini-syntaxe de la CLI"""
    if isinstance(spec, LpNormSpec):
        return f"lp:{'inf' if math.isinf(spec.p) else format(spec.p, 'g')}"
    if isinstance(spec, WeightedLpNormSpec):
        p = "inf" if math.isinf(spec.p) else format(spec.p, "g")
        return f"wlp:{p}:" + ",".join(format(w, "g") for w in spec.weights)
    return f"ip:{len(spec.gram)}x{len(spec.gram)}"


class Tolerance(BaseModel):
    """
    Tolérance des comparaisons à zéro : une différence est négligeable
    si elle ne dépasse pas max(abs_tol, rel_tol · échelle)
    """
    abs_tol: float = Field(default=1e-12, ge=0, description="Tolérance absolue")
    rel_tol: float = Field(default=1e-10, ge=0, description="Tolérance relative")

    class Config:
        frozen = True
        json_schema_extra = {"example": {"abs_tol": 1e-12, "rel_tol": 1e-10}}

    @model_validator(mode="after")
    def verifier_positivite(self) -> "Tolerance":
        if self.abs_tol <= 0 and self.rel_tol <= 0:
            raise ValueError("abs_tol ou rel_tol doit être strictement positif")
        return self

    def allowance(self, scale):
        """Marge admissible pour une échelle donnée (scalaire ou tableau)"""
        if isinstance(scale, np.ndarray):
            return np.maximum(self.abs_tol, self.rel_tol * np.abs(scale))
        return max(self.abs_tol, self.rel_tol * abs(float(scale)))
