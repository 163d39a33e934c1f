"""
Service de calcul des intégrales de type Hermite–Hadamard

    I₊(x, y) = ∫₀¹ ‖(1−t)x + ty‖² dt,    I₋(x, y) = ∫₀¹ ‖(1−t)x − ty‖² dt

Forme close pour les normes issues d'un produit scalaire, quadrature de
Gauss–Legendre composite adaptative (16 nœuds par panneau) pour toutes les normes.
La quadrature avance niveau par niveau sur une pile de couples : chaque niveau
de bissection est une seule évaluation numpy.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import roots_legendre

from src.exceptions import ConvergenceError, DimensionMismatchError, NotInnerProductError, OrthogonalityError
from src.models.hh_model import HHValues
from src.models.vector_model import LpNormSpec, Tolerance, WeightedLpNormSpec
from src.services.vector_space_service import (
    as_batch,
    as_pair,
    as_spec,
    gram_of,
    inner_batch,
    is_inner_product_type,
    norm_batch,
    require_valid_spec,
)
from src.utils import get_default_tolerance

logger = logging.getLogger(__name__)

GL_ORDER = 16
MAX_DEPTH = 30
METHODS = ("auto", "quadrature", "closed-form")

_nodes, _weights = roots_legendre(GL_ORDER)
# Nœuds et poids ramenés sur [0, 1]
GL_NODES = 0.5 * (_nodes + 1.0)
GL_WEIGHTS = 0.5 * _weights


@dataclass(frozen=True)
class HHBatch:
    """Valeurs des intégrales pour une pile de couples"""
    i_plus: np.ndarray
    i_minus: np.ndarray
    est_abs_error: np.ndarray
    method: str

    @property
    def gap(self) -> np.ndarray:
        return self.i_plus - self.i_minus

    @property
    def total(self) -> np.ndarray:
        return self.i_plus + self.i_minus

    def row(self, i: int) -> HHValues:
        return HHValues.from_integrals(self.i_plus[i], self.i_minus[i], self.method, self.est_abs_error[i])


def _resolve_method(spec, method: str) -> str:
    if method not in METHODS:
        raise OrthogonalityError(f"Méthode inconnue : {method} (attendu : {', '.join(METHODS)})")
    if method == "auto":
        return "closed-form" if is_inner_product_type(spec) else "quadrature"
    if method == "closed-form" and not is_inner_product_type(spec):
        raise NotInnerProductError("closed form requires a norm induced by an inner product")
    return method


def _breakpoints(spec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """
    Points de non-régularité de t ↦ ‖(1−t)x + ty‖² dans (0, 1), complétés par 1.0
    pour former un tableau rectangulaire (B, K)
    """
    B, n = X.shape
    if not isinstance(spec, (LpNormSpec, WeightedLpNormSpec)) or spec.p == 2:
        return np.ones((B, 0))

    # u_i(t) = a_i + t·b_i
    a = X
    b = Y - X
    with np.errstate(divide="ignore", invalid="ignore"):
        candidates = [-a / b]
        if math.isinf(spec.p):
            w = np.ones(n) if isinstance(spec, LpNormSpec) else np.asarray(spec.weights, dtype=float)
            wa = w * a
            wb = w * b
            i, j = np.triu_indices(n, k=1)
            for sigma in (1.0, -1.0):
                # w_i·u_i(t) = σ·w_j·u_j(t), retenu seulement si la coordonnée i réalise le max
                t = (sigma * wa[:, j] - wa[:, i]) / (wb[:, i] - sigma * wb[:, j])
                level = np.abs(wa[:, None, :] + t[..., None] * wb[:, None, :])
                active = np.abs(wa[:, i] + t * wb[:, i]) >= level.max(axis=-1) * (1.0 - 1e-12)
                candidates.append(np.where(active, t, np.nan))
        T = np.concatenate(candidates, axis=1)
    inside = np.isfinite(T) & (T > 0.0) & (T < 1.0)
    return np.where(inside, T, 1.0)


def _gl_panels(spec, X, Y, owner, a, b) -> np.ndarray:
    """Règle de Gauss–Legendre à 16 nœuds sur chaque panneau [a, b] du couple owner"""
    width = b - a
    t = a[:, None] + width[:, None] * GL_NODES[None, :]
    U = X[owner][:, None, :] * (1.0 - t)[..., None] + Y[owner][:, None, :] * t[..., None]
    values = norm_batch(spec, U, check=False) ** 2
    return width * (values @ GL_WEIGHTS)


def _integrate_batch(spec, X: np.ndarray, Y: np.ndarray, tol: Tolerance):
    """
    ∫₀¹ ‖(1−t)x + ty‖² dt pour chaque ligne, par bissection adaptative synchronisée

    Un panneau est accepté lorsque |gauche + droite − entier| ≤ seuil·largeur,
    où seuil = max(abs_tol, rel_tol·|estimation initiale|).

    Returns:
        (valeurs, erreurs absolues estimées)
    """
    B = X.shape[0]
    T = np.concatenate([np.zeros((B, 1)), _breakpoints(spec, X, Y), np.ones((B, 1))], axis=1)
    T.sort(axis=1)
    lo = T[:, :-1].ravel()
    hi = T[:, 1:].ravel()
    owner = np.repeat(np.arange(B), T.shape[1] - 1)
    keep = hi - lo > 0.0
    lo, hi, owner = lo[keep], hi[keep], owner[keep]

    whole = _gl_panels(spec, X, Y, owner, lo, hi)
    estimate = np.bincount(owner, weights=whole, minlength=B)
    threshold = tol.allowance(estimate)

    values = np.zeros(B)
    errors = np.zeros(B)
    depth = 0
    while owner.size:
        mid = 0.5 * (lo + hi)
        halves = _gl_panels(
            spec, X, Y,
            np.concatenate([owner, owner]),
            np.concatenate([lo, mid]),
            np.concatenate([mid, hi]),
        )
        left, right = halves[: owner.size], halves[owner.size:]
        refined = left + right
        diff = np.abs(refined - whole)
        accept = diff <= threshold[owner] * (hi - lo)

        values += np.bincount(owner[accept], weights=refined[accept], minlength=B)
        errors += np.bincount(owner[accept], weights=diff[accept], minlength=B)

        todo = ~accept
        if not np.any(todo):
            break
        depth += 1
        if depth > MAX_DEPTH:
            raise ConvergenceError(
                f"quadrature non convergée après {MAX_DEPTH} bissections ({int(todo.sum())} panneaux restants)"
            )
        owner = np.concatenate([owner[todo], owner[todo]])
        lo, hi, whole = (
            np.concatenate([lo[todo], mid[todo]]),
            np.concatenate([mid[todo], hi[todo]]),
            np.concatenate([left[todo], right[todo]]),
        )

    logger.debug(f"🔄 Quadrature : {B} intégrales, profondeur {depth}")
    return values, errors


def _closed_form_batch(spec, X: np.ndarray, Y: np.ndarray) -> HHBatch:
    G = gram_of(spec, X.shape[1])
    nx2 = inner_batch(G, X, X)
    ny2 = inner_batch(G, Y, Y)
    xy = inner_batch(G, X, Y)
    return HHBatch(
        i_plus=np.maximum((nx2 + ny2 + xy) / 3.0, 0.0),
        i_minus=np.maximum((nx2 + ny2 - xy) / 3.0, 0.0),
        est_abs_error=np.zeros(X.shape[0]),
        method="closed-form",
    )


def hh_values_batch(spec, X, Y, tol: Optional[Tolerance] = None, method: str = "auto") -> HHBatch:
    """
    I₊ et I₋ pour une pile de couples (B, n)

    Args:
        spec: Norme de l'espace
        X, Y: Piles de vecteurs de même forme
        tol: Tolérance de quadrature (défaut : configuration d'environnement)
        method: auto, quadrature ou closed-form
    """
    X = as_batch(X, "X")
    Y = as_batch(Y, "Y")
    if X.shape != Y.shape:
        raise DimensionMismatchError(f"X {X.shape} et Y {Y.shape} n'ont pas la même forme")
    require_valid_spec(spec, X.shape[1])
    tol = tol or get_default_tolerance()
    method = _resolve_method(spec, method)

    if method == "closed-form":
        return _closed_form_batch(spec, X, Y)

    B = X.shape[0]
    values, errors = _integrate_batch(spec, np.concatenate([X, X]), np.concatenate([Y, -Y]), tol)
    return HHBatch(
        i_plus=values[:B],
        i_minus=values[B:],
        est_abs_error=errors[:B] + errors[B:],
        method="quadrature",
    )


def hh_values(spec, x, y, tol: Optional[Tolerance] = None, method: str = "auto") -> HHValues:
    """
    I₊, I₋, leur écart et leur somme pour un couple (x, y)

    Returns:
        HHValues (forme close pour les normes de type produit scalaire en mode auto)
    """
    xa, ya = as_pair(x, y)
    return hh_values_batch(spec, xa[None, :], ya[None, :], tol, method).row(0)


def _single_integral(spec, x, y, tol: Optional[Tolerance], method: str, sign: float) -> float:
    xa, ya = as_pair(x, y)
    require_valid_spec(spec, xa.size)
    tol = tol or get_default_tolerance()
    if _resolve_method(spec, method) == "closed-form":
        batch = _closed_form_batch(spec, xa[None, :], ya[None, :])
        return float(batch.i_plus[0] if sign > 0 else batch.i_minus[0])
    values, _ = _integrate_batch(spec, xa[None, :], sign * ya[None, :], tol)
    return float(values[0])


def hh_plus(spec, x, y, tol: Optional[Tolerance] = None, method: str = "auto") -> float:
    """I₊(x, y) = ∫₀¹ ‖(1−t)x + ty‖² dt"""
    return _single_integral(spec, x, y, tol, method, 1.0)


def hh_minus(spec, x, y, tol: Optional[Tolerance] = None, method: str = "auto") -> float:
    """I₋(x, y) = ∫₀¹ ‖(1−t)x − ty‖² dt"""
    return _single_integral(spec, x, y, tol, method, -1.0)


def hh_closed_form_ip(gram, x, y) -> HHValues:
    """
    Forme close dans un espace préhilbertien :
    I± = (‖x‖² + ‖y‖² ± ⟨x, y⟩)/3

    Args:
        gram: Matrice de Gram SPD (ou spécification de type produit scalaire)
    """
    xa, ya = as_pair(x, y)
    return _closed_form_batch(as_spec(gram), xa[None, :], ya[None, :]).row(0)
