"""
Service des relations d'orthogonalité.

Chaque relation produit une marge signée (membre de droite − membre de gauche de
l'inégalité qui la définit) et une tolérance : la relation est satisfaite si
marge ≥ −tolérance. Les évaluations se font sur des piles de couples ; les
prédicats scalaires en sont le cas B = 1.
"""

import logging
import math
from typing import Callable, Dict, Optional, Union

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidEpsilonError, UnknownRelationError
from src.models.orthogonality_model import EPSILON_RELATIONS, OrthoVerdict, RelationId
from src.models.vector_model import Tolerance
from src.services.hh_integral_service import hh_values_batch
from src.services.solver_service import golden_section, minimize_norm_on_line_batch
from src.services.vector_space_service import (
    as_batch,
    as_pair,
    as_spec,
    gram_of,
    inner_batch,
    norm_batch,
    require_valid_spec,
)
from src.utils import get_default_tolerance

logger = logging.getLogger(__name__)

Batch = Dict[str, np.ndarray]

# Domaine admissible de ε pour chaque relation paramétrée : (borne haute, borne haute incluse)
EPSILON_DOMAINS = {
    RelationId.EPS_INNER: (math.inf, False),
    RelationId.DRAGOMIR_BIRKHOFF: (1.0, True),
    RelationId.CHMIELINSKI_BIRKHOFF: (1.0, True),
    RelationId.ISO_ADDITIVE: (1.0, False),
    RelationId.ISO_MULTIPLICATIVE: (1.0, False),
    RelationId.HH_RELATIVE: (1.0, False),
    RelationId.HH_ABSOLUTE: (1.0, False),
}


def parse_relation(relation: Union[str, RelationId]) -> RelationId:
    """Convertir un identifiant textuel en RelationId"""
    try:
        return RelationId(relation)
    except ValueError:
        valides = ", ".join(r.value for r in RelationId)
        raise UnknownRelationError(f"Relation inconnue : {relation} (attendu : {valides})")


def check_epsilon(relation: RelationId, eps) -> np.ndarray:
    """Valider ε (scalaire ou tableau) pour une relation paramétrée"""
    if eps is None:
        raise InvalidEpsilonError(f"{relation.value} requires eps")
    arr = np.asarray(eps, dtype=float)
    upper, inclusive = EPSILON_DOMAINS[relation]
    too_big = arr > upper if inclusive else arr >= upper
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(too_big):
        bracket = "]" if inclusive else ")"
        raise InvalidEpsilonError(f"eps must lie in [0, {upper:g}{bracket} for {relation.value}")
    return arr


def _result(margin, scale, tol: Tolerance, **extra) -> Batch:
    out = {"margin": margin, "scale": scale, "allowance": tol.allowance(scale)}
    out.update(extra)
    return out


# Relations dans un espace préhilbertien

def _classic(spec, X, Y, nx, ny, eps, tol) -> Batch:
    G = gram_of(spec, X.shape[1])
    cosine = np.abs(inner_batch(G, X, Y)) / (nx * ny)
    return _result(-cosine, np.ones_like(cosine), tol, cosine=cosine)


def _eps_inner(spec, X, Y, nx, ny, eps, tol) -> Batch:
    G = gram_of(spec, X.shape[1])
    ip = np.abs(inner_batch(G, X, Y))
    bound = eps * nx * ny
    return _result(bound - ip, np.maximum(bound, ip), tol, inner=ip, bound=bound)


# Relations de type Birkhoff

def _birkhoff(spec, X, Y, nx, ny, eps, tol) -> Batch:
    t_star, value = minimize_norm_on_line_batch(spec, X, Y)
    return _result(value - nx, nx, tol, t_star=t_star, min_value=value)


def _dragomir_birkhoff(spec, X, Y, nx, ny, eps, tol) -> Batch:
    t_star, value = minimize_norm_on_line_batch(spec, X, Y)
    return _result(value - (1.0 - eps) * nx, nx, tol, t_star=t_star, min_value=value)


def _chmielinski_birkhoff(spec, X, Y, nx, ny, eps, tol) -> Batch:
    """inf sur t de ‖x+ty‖² + 2ε‖x‖‖y‖|t|, convexe sur chaque demi-droite"""
    penalty = 2.0 * eps * nx * ny * np.ones(X.shape[0])
    radius = 2.0 * nx / ny

    def g(t):
        return norm_batch(spec, X + t[:, None] * Y, check=False) ** 2 + penalty * np.abs(t)

    t_pos, v_pos = golden_section(g, np.zeros_like(radius), radius)
    t_neg, v_neg = golden_section(g, -radius, np.zeros_like(radius))
    value = np.minimum(np.minimum(v_pos, v_neg), nx ** 2)
    t_star = np.where(v_pos <= v_neg, t_pos, t_neg)
    t_star = np.where(value >= nx ** 2, 0.0, t_star)
    return _result(value - nx ** 2, nx ** 2, tol, t_star=t_star, min_value=value)


# Relations de type isocèle

def _isosceles(spec, X, Y, nx, ny, eps, tol) -> Batch:
    a = norm_batch(spec, X + Y, check=False)
    b = norm_batch(spec, X - Y, check=False)
    return _result(-np.abs(a - b), np.maximum(a, b), tol, norm_sum=a, norm_diff=b)


def _iso_additive(spec, X, Y, nx, ny, eps, tol) -> Batch:
    a2 = norm_batch(spec, X + Y, check=False) ** 2
    b2 = norm_batch(spec, X - Y, check=False) ** 2
    lhs = np.abs(a2 - b2)
    rhs = 4.0 * eps * nx * ny
    return _result(rhs - lhs, np.maximum.reduce([a2, b2, rhs]), tol, lhs=lhs, rhs=rhs)


def _iso_multiplicative(spec, X, Y, nx, ny, eps, tol) -> Batch:
    """Inégalité stricte évaluée au sens large ; x = ±y rend le membre de droite nul"""
    a = norm_batch(spec, X + Y, check=False)
    b = norm_batch(spec, X - Y, check=False)
    lhs = np.abs(a - b)
    rhs = eps * a * b
    out = _result(rhs - lhs, np.maximum(a, b), tol, lhs=lhs, rhs=rhs)
    out["degenerate"] = (a == 0) | (b == 0)
    return out


# Relations HH-I

def _hh_common(spec, X, Y, nx, ny, tol):
    values = hh_values_batch(spec, X, Y, tol)
    gap = values.gap
    total = values.total
    scale = np.maximum(total, nx ** 2 + ny ** 2)
    extra = {
        "i_plus": values.i_plus,
        "i_minus": values.i_minus,
        "gap": gap,
        "total": total,
        "est_abs_error": values.est_abs_error,
    }
    return gap, total, scale, values.est_abs_error, extra


def _hh_exact(spec, X, Y, nx, ny, eps, tol) -> Batch:
    gap, total, scale, err, extra = _hh_common(spec, X, Y, nx, ny, tol)
    out = _result(-np.abs(gap), scale, tol, **extra)
    out["allowance"] = out["allowance"] + err
    return out


def _hh_relative(spec, X, Y, nx, ny, eps, tol) -> Batch:
    gap, total, scale, err, extra = _hh_common(spec, X, Y, nx, ny, tol)
    out = _result(eps * total - np.abs(gap), scale, tol, **extra)
    # |gap| et ε·total portent chacun l'erreur de quadrature
    out["allowance"] = out["allowance"] + (1.0 + eps) * err
    return out


def _hh_absolute(spec, X, Y, nx, ny, eps, tol) -> Batch:
    gap, total, scale, err, extra = _hh_common(spec, X, Y, nx, ny, tol)
    out = _result((2.0 / 3.0) * eps * nx * ny - np.abs(gap), scale, tol, **extra)
    out["allowance"] = out["allowance"] + err
    return out


_RELATIONS: Dict[RelationId, Callable[..., Batch]] = {
    RelationId.CLASSIC: _classic,
    RelationId.BIRKHOFF: _birkhoff,
    RelationId.ISOSCELES: _isosceles,
    RelationId.EPS_INNER: _eps_inner,
    RelationId.DRAGOMIR_BIRKHOFF: _dragomir_birkhoff,
    RelationId.CHMIELINSKI_BIRKHOFF: _chmielinski_birkhoff,
    RelationId.ISO_ADDITIVE: _iso_additive,
    RelationId.ISO_MULTIPLICATIVE: _iso_multiplicative,
    RelationId.HH_EXACT: _hh_exact,
    RelationId.HH_RELATIVE: _hh_relative,
    RelationId.HH_ABSOLUTE: _hh_absolute,
}


def margins_batch(relation, spec, X, Y, eps=None, tol: Optional[Tolerance] = None) -> Batch:
    """
    Marges d'une relation sur une pile de couples

    Args:
        relation: Identifiant de la relation
        spec: Norme (ou matrice de Gram pour classic / eps_inner)
        X, Y: Piles (B, n)
        eps: ε scalaire ou tableau (B,) pour les relations paramétrées
        tol: Tolérance (défaut : configuration d'environnement)

    Returns:
        Dictionnaire de tableaux (B,) : margin, allowance, scale, holds, degenerate,
        plus les diagnostics propres à la relation
    """
    relation = parse_relation(relation)
    spec = as_spec(spec)
    X = as_batch(X, "X")
    Y = as_batch(Y, "Y")
    if X.shape != Y.shape:
        raise DimensionMismatchError(f"X {X.shape} et Y {Y.shape} n'ont pas la même forme")
    B, n = X.shape
    require_valid_spec(spec, n)
    if relation in (RelationId.CLASSIC, RelationId.EPS_INNER):
        gram_of(spec, n)
    tol = tol or get_default_tolerance()

    if relation in EPSILON_RELATIONS:
        eps_arr = np.broadcast_to(check_epsilon(relation, eps), (B,)).astype(float)
    else:
        eps_arr = np.zeros(B)

    nx = norm_batch(spec, X, check=False)
    ny = norm_batch(spec, Y, check=False)
    degenerate = (nx == 0) | (ny == 0)
    rows = np.flatnonzero(~degenerate)

    out: Batch = {
        "margin": np.zeros(B),
        "allowance": np.full(B, tol.allowance(0.0)),
        "scale": np.zeros(B),
        "degenerate": degenerate.copy(),
        "eps": eps_arr if relation in EPSILON_RELATIONS else np.full(B, np.nan),
    }
    if rows.size:
        partial = _RELATIONS[relation](spec, X[rows], Y[rows], nx[rows], ny[rows], eps_arr[rows], tol)
        for key, values in partial.items():
            values = np.asarray(values)
            if key not in out:
                out[key] = np.zeros(B, dtype=values.dtype)
            out[key][rows] = values
    out["holds"] = out["margin"] >= -out["allowance"]
    return out


def evaluate(relation, spec, x, y, eps: Optional[float] = None, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """
    Évaluer une relation d'orthogonalité pour un couple (x, y)

    Returns:
        OrthoVerdict avec marge, tolérance et diagnostics
    """
    relation = parse_relation(relation)
    xa, ya = as_pair(x, y)
    out = margins_batch(relation, spec, xa[None, :], ya[None, :], eps, tol)

    details = {}
    for key, values in out.items():
        if key in ("margin", "allowance", "holds", "eps"):
            continue
        value = values[0].item()
        if isinstance(value, float) and not math.isfinite(value):
            continue
        details[key] = value

    if relation is RelationId.HH_RELATIVE and not out["degenerate"][0]:
        e = float(out["eps"][0])
        i_minus = details.get("i_minus", 0.0)
        details["ratio"] = details["i_plus"] / i_minus if i_minus > 0 else None
        details["lower_bound"] = (1.0 - e) / (1.0 + e)
        details["upper_bound"] = (1.0 + e) / (1.0 - e)

    verdict = OrthoVerdict(
        holds=bool(out["holds"][0]),
        margin=float(out["margin"][0]),
        allowance=float(out["allowance"][0]),
        relation=relation,
        epsilon=float(out["eps"][0]) if relation in EPSILON_RELATIONS else None,
        details=details,
    )
    if details.get("degenerate"):
        logger.debug(f"⚠️ Couple dégénéré pour {relation.value}")
    return verdict


def classic(gram, x, y, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """⟨x, y⟩ = 0 (relatif : |⟨x,y⟩| ≤ tol·‖x‖‖y‖)"""
    return evaluate(RelationId.CLASSIC, gram, x, y, None, tol)


def birkhoff(spec, x, y, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """‖x + αy‖ ≥ ‖x‖ pour tout α réel"""
    return evaluate(RelationId.BIRKHOFF, spec, x, y, None, tol)


def isosceles(spec, x, y, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """‖x + y‖ = ‖x − y‖"""
    return evaluate(RelationId.ISOSCELES, spec, x, y, None, tol)


def eps_inner(gram, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """|⟨x, y⟩| ≤ ε‖x‖‖y‖ (ε ≥ 0)"""
    return evaluate(RelationId.EPS_INNER, gram, x, y, eps, tol)


def dragomir_birkhoff(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """‖x + ty‖ ≥ (1 − ε)‖x‖ pour tout t"""
    return evaluate(RelationId.DRAGOMIR_BIRKHOFF, spec, x, y, eps, tol)


def chmielinski_birkhoff(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """‖x + ty‖² ≥ ‖x‖² − 2ε‖x‖‖ty‖ pour tout t"""
    return evaluate(RelationId.CHMIELINSKI_BIRKHOFF, spec, x, y, eps, tol)


def iso_additive(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """|‖x+y‖² − ‖x−y‖²| ≤ 4ε‖x‖‖y‖"""
    return evaluate(RelationId.ISO_ADDITIVE, spec, x, y, eps, tol)


def iso_multiplicative(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """|‖x+y‖ − ‖x−y‖| ≤ ε‖x+y‖‖x−y‖"""
    return evaluate(RelationId.ISO_MULTIPLICATIVE, spec, x, y, eps, tol)


def hh_exact(spec, x, y, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """I₊(x, y) = I₋(x, y)"""
    return evaluate(RelationId.HH_EXACT, spec, x, y, None, tol)


def hh_relative(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """|I₊ − I₋| ≤ ε(I₊ + I₋)"""
    return evaluate(RelationId.HH_RELATIVE, spec, x, y, eps, tol)


def hh_absolute(spec, x, y, eps: float, tol: Optional[Tolerance] = None) -> OrthoVerdict:
    """|I₊ − I₋| ≤ (2/3)ε‖x‖‖y‖"""
    return evaluate(RelationId.HH_ABSOLUTE, spec, x, y, eps, tol)
