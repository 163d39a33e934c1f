"""
Service de l'espace vectoriel : normes ℓp, ℓp pondérées et normes issues
d'un produit scalaire, produits scalaires et validation des spécifications.

Toutes les fonctions sont pures et opèrent sur des tableaux numpy ; les versions
« batch » évaluent des piles de vecteurs le long du dernier axe.
"""

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from src.exceptions import (
    DimensionMismatchError,
    InvalidNormSpecError,
    InvalidVectorError,
    NotInnerProductError,
)
from src.models.vector_model import (
    InnerProductNormSpec,
    LpNormSpec,
    Vector,
    WeightedLpNormSpec,
)

logger = logging.getLogger(__name__)

# Symétrie relative exigée d'une matrice de Gram
GRAM_SYMMETRY_TOL = 1e-12

ArrayLike = Union[Vector, Sequence[float], np.ndarray]


def as_vector(v: ArrayLike, name: str = "v") -> np.ndarray:
    """
    Convertir une entrée (Vector, liste, tableau) en vecteur numpy 1-D fini

    Raises:
        InvalidVectorError: vecteur vide, non 1-D ou contenant NaN/∞
    """
    if isinstance(v, Vector):
        return v.to_array()
    try:
        arr = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidVectorError(f"{name} n'est pas un vecteur réel : {e}")
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidVectorError(f"{name} doit être un vecteur 1-D non vide (forme {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise InvalidVectorError(f"{name} contient des composantes non finies")
    return arr


def as_pair(x: ArrayLike, y: ArrayLike):
    """Convertir un couple (x, y) de même dimension"""
    xa = as_vector(x, "x")
    ya = as_vector(y, "y")
    if xa.shape != ya.shape:
        raise DimensionMismatchError(f"x est de dimension {xa.size}, y de dimension {ya.size}")
    return xa, ya


def as_batch(X, name: str = "X") -> np.ndarray:
    """Pile de vecteurs (B, n) finie"""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise InvalidVectorError(f"{name} doit être une pile de vecteurs (B, n), forme {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidVectorError(f"{name} contient des composantes non finies")
    return arr


def spec_dimension(spec) -> Optional[int]:
    """Dimension imposée par une spécification (None pour ℓp, valable en toute dimension)"""
    if isinstance(spec, WeightedLpNormSpec):
        return len(spec.weights)
    if isinstance(spec, InnerProductNormSpec):
        return len(spec.gram)
    return None


def validate_spec(spec, dim: Optional[int] = None) -> Optional[str]:
    """
    Vérifier les invariants d'une spécification de norme à une dimension donnée

    Args:
        spec: Spécification (LpNormSpec, WeightedLpNormSpec ou InnerProductNormSpec)
        dim: Dimension de l'espace ; si absente, celle de la spécification

    Returns:
        None si la spécification est valide, sinon la description du premier invariant violé
    """
    if isinstance(spec, (LpNormSpec, WeightedLpNormSpec)):
        if math.isnan(spec.p):
            return "p is not a number"
        if spec.p < 1:
            return "p < 1"
    if isinstance(spec, LpNormSpec):
        return None

    if isinstance(spec, WeightedLpNormSpec):
        weights = np.asarray(spec.weights, dtype=float)
        if weights.size == 0:
            return "weights must not be empty"
        if dim is not None and weights.size != dim:
            return f"weights length {weights.size} does not match dimension {dim}"
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            return "weights must be strictly positive"
        return None

    if isinstance(spec, InnerProductNormSpec):
        rows = spec.gram
        if not rows or any(len(r) != len(rows) for r in rows):
            return "gram is not square"
        gram = np.asarray(rows, dtype=float)
        if dim is not None and gram.shape[0] != dim:
            return f"gram dimension {gram.shape[0]} does not match dimension {dim}"
        if not np.all(np.isfinite(gram)):
            return "gram has non-finite entries"
        scale = np.max(np.abs(gram))
        if np.max(np.abs(gram - gram.T)) > GRAM_SYMMETRY_TOL * scale:
            return "gram is not symmetric"
        try:
            np.linalg.cholesky(0.5 * (gram + gram.T))
        except np.linalg.LinAlgError:
            return "not positive definite"
        return None

    return f"unknown norm spec {type(spec).__name__}"


def require_valid_spec(spec, dim: Optional[int] = None) -> None:
    """Lever InvalidNormSpecError si la spécification est invalide"""
    error = validate_spec(spec, dim)
    if error is not None:
        raise InvalidNormSpecError(error)


def _lp_batch(V: np.ndarray, p: float) -> np.ndarray:
    """Norme ℓp le long du dernier axe (mise à l'échelle par le max pour éviter les débordements)"""
    A = np.abs(V)
    if math.isinf(p):
        return A.max(axis=-1)
    if p == 1:
        return A.sum(axis=-1)
    if p == 2:
        return np.sqrt(np.einsum("...i,...i->...", V, V))
    m = A.max(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return np.where(m > 0, safe * np.sum((A / safe[..., None]) ** p, axis=-1) ** (1.0 / p), 0.0)


def norm_batch(spec, V, check: bool = True) -> np.ndarray:
    """
    Normes d'une pile de vecteurs le long du dernier axe

    Args:
        spec: Spécification de norme
        V: Tableau (..., n)
        check: Valider la spécification à la dimension n
    """
    V = np.asarray(V, dtype=float)
    dim = V.shape[-1]
    if check:
        require_valid_spec(spec, dim)

    if isinstance(spec, LpNormSpec):
        return _lp_batch(V, spec.p)

    if isinstance(spec, WeightedLpNormSpec):
        w = np.asarray(spec.weights, dtype=float)
        if math.isinf(spec.p):
            # poids appliqués linéairement
            return np.max(w * np.abs(V), axis=-1)
        return _lp_batch(V * w ** (1.0 / spec.p), spec.p)

    gram = np.asarray(spec.gram, dtype=float)
    q = np.einsum("...i,ij,...j->...", V, gram, V)
    return np.sqrt(np.maximum(q, 0.0))


def norm(spec, v: ArrayLike) -> float:
    """‖v‖ pour la norme décrite par spec"""
    arr = as_vector(v)
    dim = spec_dimension(spec)
    if dim is not None and dim != arr.size:
        raise DimensionMismatchError(f"norme de dimension {dim} appliquée à un vecteur de dimension {arr.size}")
    return float(norm_batch(spec, arr))


def is_inner_product_type(spec) -> bool:
    """Norme issue d'un produit scalaire : InnerProduct, ℓ2 ou ℓ2 pondérée"""
    if isinstance(spec, InnerProductNormSpec):
        return True
    return isinstance(spec, (LpNormSpec, WeightedLpNormSpec)) and spec.p == 2


def gram_of(spec, dim: int) -> np.ndarray:
    """
    Matrice de Gram d'une norme de type produit scalaire

    Raises:
        NotInnerProductError: la norme n'est pas issue d'un produit scalaire
    """
    require_valid_spec(spec, dim)
    if isinstance(spec, InnerProductNormSpec):
        gram = np.asarray(spec.gram, dtype=float)
        return 0.5 * (gram + gram.T)
    if isinstance(spec, LpNormSpec) and spec.p == 2:
        return np.eye(dim)
    if isinstance(spec, WeightedLpNormSpec) and spec.p == 2:
        return np.diag(np.asarray(spec.weights, dtype=float))
    raise NotInnerProductError("norm is not induced by an inner product")


def resolve_gram(spec_or_gram, dim: int) -> np.ndarray:
    """Accepter une spécification de type produit scalaire ou directement une matrice de Gram"""
    if isinstance(spec_or_gram, (LpNormSpec, WeightedLpNormSpec, InnerProductNormSpec)):
        return gram_of(spec_or_gram, dim)
    gram = np.asarray(spec_or_gram, dtype=float)
    return gram_of(InnerProductNormSpec(gram=gram.tolist()), dim)


def as_spec(spec_or_gram):
    """Spécification à partir d'une spécification ou d'une matrice de Gram brute"""
    if isinstance(spec_or_gram, (LpNormSpec, WeightedLpNormSpec, InnerProductNormSpec)):
        return spec_or_gram
    return InnerProductNormSpec(gram=np.asarray(spec_or_gram, dtype=float).tolist())


def inner_batch(gram: np.ndarray, X, Y) -> np.ndarray:
    """xᵀ·G·y le long du dernier axe (G déjà validée)"""
    return np.einsum("...i,ij,...j->...", np.asarray(X, dtype=float), gram, np.asarray(Y, dtype=float))


def inner(gram, x: ArrayLike, y: ArrayLike) -> float:
    """
    Produit scalaire ⟨x, y⟩ = xᵀ·G·y

    Args:
        gram: Matrice SPD (ou spécification de type produit scalaire)
        x, y: Vecteurs de même dimension
    """
    xa, ya = as_pair(x, y)
    G = resolve_gram(gram, xa.size)
    return float(inner_batch(G, xa, ya))


def scaled_spec(spec, eta: float, dim: int):
    """
    La norme η·‖·‖ exprimée dans la même famille de spécifications

    Args:
        spec: Norme de départ
        eta: Facteur strictement positif
        dim: Dimension de l'espace (nécessaire pour ℓp, sans poids explicites)
    """
    if not eta > 0 or not math.isfinite(eta):
        raise InvalidNormSpecError("scale factor must be positive and finite")
    require_valid_spec(spec, dim)
    if isinstance(spec, InnerProductNormSpec):
        gram = np.asarray(spec.gram, dtype=float) * eta ** 2
        return InnerProductNormSpec(gram=gram.tolist())
    if isinstance(spec, LpNormSpec):
        weights = np.ones(dim)
    else:
        weights = np.asarray(spec.weights, dtype=float)
    factor = eta if math.isinf(spec.p) else eta ** spec.p
    return WeightedLpNormSpec(p=spec.p, weights=(weights * factor).tolist())
