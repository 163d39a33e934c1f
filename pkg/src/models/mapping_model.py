"""
Modèles pour l'analyse des applications linéaires entre espaces normés.
"""

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.models.vector_model import ExtendedFloat, LpNormSpec, NormSpec


class LinearMap(BaseModel):
    """Application linéaire g : X → Y donnée par une matrice dense m×n"""
    matrix: List[List[float]] = Field(..., description="Matrice m×n (lignes)")
    domain_spec: NormSpec = Field(default_factory=lambda: LpNormSpec(p=2), description="Norme de X (dimension n)")
    codomain_spec: NormSpec = Field(default_factory=lambda: LpNormSpec(p=2), description="Norme de Y (dimension m)")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "matrix": [[2.0, 0.0], [0.0, 1.0]],
                "domain_spec": {"kind": "lp", "p": 2},
                "codomain_spec": {"kind": "lp", "p": 2}
            }
        }

    @model_validator(mode="after")
    def verifier_matrice(self) -> "LinearMap":
        if not self.matrix or not self.matrix[0]:
            raise ValueError("La matrice doit avoir au moins une ligne et une colonne")
        largeur = len(self.matrix[0])
        if any(len(ligne) != largeur for ligne in self.matrix):
            raise ValueError("La matrice doit être rectangulaire")
        if not all(math.isfinite(v) for ligne in self.matrix for v in ligne):
            raise ValueError("Tous les coefficients doivent être finis")
        return self

    @classmethod
    def of(cls, matrix, domain_spec=None, codomain_spec=None) -> "LinearMap":
        kwargs = {"matrix": np.asarray(matrix, dtype=float).tolist()}
        if domain_spec is not None:
            kwargs["domain_spec"] = domain_spec
        if codomain_spec is not None:
            kwargs["codomain_spec"] = codomain_spec
        return cls(**kwargs)

    @property
    def shape(self):
        return len(self.matrix), len(self.matrix[0])

    def to_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)


class MapProfile(BaseModel):
    """Norme d'opérateur ‖g‖, co-norme [g] et constantes dérivées"""
    op_norm: float = Field(..., ge=0, description="‖g‖ = sup ‖gx‖ sur la sphère unité")
    co_norm: float = Field(..., ge=0, description="[g] = inf ‖gx‖ sur la sphère unité")
    kappa: ExtendedFloat = Field(..., description="‖g‖/[g] (\"inf\" si [g] = 0)")
    eps_star: float = Field(..., ge=0, le=1, description="Plus petit ε tel que ‖g‖² ≤ (1+ε)/(1−ε)·[g]²")
    unbounded: bool = Field(default=False, description="[g] = 0 : aucun ε < 1 ne convient")
    cert_max: List[float] = Field(..., description="Vecteur unité réalisant ‖g‖")
    cert_min: List[float] = Field(..., description="Vecteur unité réalisant [g]")
    method: Literal["exact-ip", "estimated"] = Field(..., description="Calcul exact (produit scalaire) ou estimation")

    class Config:
        json_schema_extra = {
            "example": {
                "op_norm": 2.0,
                "co_norm": 1.0,
                "kappa": 2.0,
                "eps_star": 0.6,
                "unbounded": False,
                "cert_max": [1.0, 0.0],
                "cert_min": [0.0, 1.0],
                "method": "exact-ip"
            }
        }


class BoundsReport(BaseModel):
    """
    Rapport d'échantillonnage des bornes
    (1−ε)/(1+ε)·η_bas²·‖x‖² ≤ ‖gx‖² ≤ (1+ε)/(1−ε)·η_haut²·‖x‖²
    """
    condition: Literal["bounds-12", "bounds-13"] = Field(..., description="Forme vérifiée")
    eps: float = Field(..., description="Paramètre ε")
    eta: Optional[float] = Field(None, description="η utilisé (forme interpolée)")
    passes: bool = Field(..., description="Tous les échantillons respectent les bornes")
    samples: int = Field(..., ge=0, description="Nombre de vecteurs testés")
    ratio_min: float = Field(..., description="min ‖gx‖²/‖x‖² observé")
    ratio_max: float = Field(..., description="max ‖gx‖²/‖x‖² observé")
    lower_bound: float = Field(..., description="Borne inférieure du rapport")
    upper_bound: float = Field(..., description="Borne supérieure du rapport")
    worst_margin: float = Field(..., description="Plus petite marge (négative en cas d'échec)")
    witness: Optional[List[float]] = Field(None, description="Vecteur réalisant la pire marge")


class Condition17Report(BaseModel):
    """Rapport d'échantillonnage de ‖gx‖²‖y‖² ≤ (1+ε)/(1−ε)·‖gy‖²‖x‖²"""
    eps: float = Field(..., description="Paramètre ε")
    passes: bool = Field(..., description="Aucune violation sur les paires testées")
    samples: int = Field(..., ge=0, description="Nombre de paires testées")
    worst_ratio: ExtendedFloat = Field(..., description="max ‖gx‖²‖y‖²/(‖gy‖²‖x‖²) observé")
    bound: float = Field(..., description="(1+ε)/(1−ε)")
    kappa_squared: ExtendedFloat = Field(..., description="κ² du profil")
    consistent_with_profile: bool = Field(..., description="Verdict identique à ‖g‖² ≤ (1+ε)/(1−ε)[g]²")
    witness_x: Optional[List[float]] = Field(None, description="x de la pire paire")
    witness_y: Optional[List[float]] = Field(None, description="y de la pire paire")


class Condition11Result(BaseModel):
    """Plus petit ε tel que g envoie toute paire HH-I-orthogonale sur une paire ε-HH-I-orthogonale (relative)"""
    eps_min: float = Field(..., ge=0, description="sup |gap(gu,gw)|/total(gu,gw)")
    witness_u: List[float] = Field(..., description="u de la paire extrémale")
    witness_w: List[float] = Field(..., description="w de la paire extrémale")
    approximate: bool = Field(..., description="Estimation par recherche (pas de garantie d'optimalité)")
    method: str = Field(..., description="theta-grid, multi-start-ip ou pencil-search")
    evaluations: int = Field(..., ge=0, description="Nombre de paires évaluées")


class EmbeddingConstants(BaseModel):
    """Constantes optimales m‖x‖₁ ≤ ‖x‖₂ ≤ M‖x‖₁"""
    m: float = Field(..., gt=0, description="inf ‖x‖₂ sur la sphère de ‖·‖₁")
    M: float = Field(..., gt=0, description="sup ‖x‖₂ sur la sphère de ‖·‖₁")
    eta: float = Field(..., ge=0, description="(M−m)/(M+m)")
    eta_squared: float = Field(..., ge=0, description="(M²−m²)/(M²+m²)")
    method: Literal["analytic", "exact-ip", "estimated"] = Field(..., description="Méthode")


class IsometryReport(BaseModel):
    """Cas ε = 0 : les bornes ne passent que pour un multiple d'isométrie ‖gx‖ = η‖x‖"""
    passes_bounds_12: bool = Field(..., description="Bornes à ε = 0 respectées sur les échantillons")
    kappa: ExtendedFloat = Field(..., description="Conditionnement ‖g‖/[g]")
    scaled_isometry: bool = Field(..., description="κ = 1 à la tolérance près")
    eta: float = Field(..., ge=0, description="η = ‖g‖")
    max_deviation: float = Field(..., ge=0, description="max |‖gx‖ − η‖x‖| / ‖x‖ observé")
    samples: int = Field(..., ge=0, description="Nombre de vecteurs testés")
    consistent: bool = Field(..., description="passes_bounds_12 ⇔ scaled_isometry, et écart nul dans ce cas")


class MapAnalysisModel(BaseModel):
    """Analyse complète d'une application : profil et conditions quantitatives"""
    profile: MapProfile
    min_eps_condition_14: float
    condition_11: Condition11Result
    bounds_12: Optional[BoundsReport] = None
    condition_17: Optional[Condition17Report] = None


class MapRequestModel(BaseModel):
    """Requête d'analyse d'une application linéaire"""
    map: LinearMap = Field(..., description="Application à analyser")
    eps: Optional[float] = Field(None, ge=0, lt=1, description="ε pour les rapports de conditions")
    seed: int = Field(default=0, description="Graine des échantillonnages")
    samples: int = Field(default=2000, ge=1, le=200000, description="Nombre d'échantillons")

    class Config:
        json_schema_extra = {
            "example": {
                "map": {"matrix": [[2.0, 0.0], [0.0, 1.0]]},
                "eps": 0.3,
                "seed": 0,
                "samples": 2000
            }
        }
