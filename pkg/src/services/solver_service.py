"""
Solveurs unidimensionnels : section dorée vectorisée, minimisation de la norme
sur une droite, racine de la fonction d'écart HH-I dans un pinceau et
fonctionnelle β ↦ ‖x/β‖² + ‖βy‖².
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from src.exceptions import ConvergenceError, InvalidVectorError, OrthogonalityError
from src.models.solver_model import BetaResult, LineMinResult, RootResult
from src.models.vector_model import Tolerance
from src.services.hh_integral_service import hh_values_batch
from src.services.vector_space_service import as_batch, as_pair, norm_batch, require_valid_spec
from src.utils import get_default_tolerance

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_MAX_ITER = 200
GOLDEN_REL_WIDTH = 1e-14
MAX_DOUBLINGS = 60
BISECTION_MAX_ITER = 200
BETA_MAX_LOG = 300.0
PENCIL_REL_SHARE = 0.5
PENCIL_REL_FLOOR = 1e-14


def golden_section(
    f: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    max_iter: int = GOLDEN_MAX_ITER,
    rel_width: float = GOLDEN_REL_WIDTH,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Section dorée sur des intervalles [lo, hi] empilés

    f reçoit un tableau de positions (une par intervalle) et renvoie les valeurs.
    Arrêt après max_iter itérations ou lorsque chaque largeur est < rel_width·largeur initiale.

    Returns:
        (minimiseurs, valeurs) : le meilleur des deux points intérieurs finaux
    """
    lo = np.array(lo, dtype=float, ndmin=1)
    hi = np.array(hi, dtype=float, ndmin=1)
    stop = rel_width * np.abs(hi - lo)
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc = f(c)
    fd = f(d)
    for _ in range(max_iter):
        if np.all(np.abs(hi - lo) <= stop):
            break
        left = fc <= fd
        # minimum dans [lo, d] si f(c) ≤ f(d), sinon dans [c, hi]
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = hi - INV_PHI * (hi - lo)
        new_d = lo + INV_PHI * (hi - lo)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        c, d, fc, fd = (
            np.where(left, probe, d),
            np.where(left, c, probe),
            np.where(left, fp, fd),
            np.where(left, fc, fp),
        )
    best_left = fc <= fd
    return np.where(best_left, c, d), np.where(best_left, fc, fd)


def _line_min_width(tol: Optional[Tolerance]) -> float:
    # ‖x + t·y‖ est ‖y‖-lipschitzienne sur un intervalle de largeur 4‖x‖/‖y‖
    if tol is None:
        return GOLDEN_REL_WIDTH
    return max(tol.rel_tol / 4.0, GOLDEN_REL_WIDTH)


def minimize_norm_on_line_batch(spec, X, Y, tol: Optional[Tolerance] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    min sur t de ‖x + t·y‖ pour une pile de couples (y non nul)

    La fonction est convexe ; en dehors de [−2‖x‖/‖y‖, 2‖x‖/‖y‖] elle dépasse ‖x‖.
    t = 0 est toujours candidat. Avec tol, la section dorée s'arrête dès que
    l'erreur sur la valeur est sous tol.rel_tol·‖x‖ ; sans tol, à la précision machine.
    """
    X = as_batch(X, "X")
    Y = as_batch(Y, "Y")
    nx = norm_batch(spec, X, check=False)
    ny = norm_batch(spec, Y, check=False)
    radius = np.where(nx > 0, 2.0 * nx / ny, 1.0)

    def f(t):
        return norm_batch(spec, X + t[:, None] * Y, check=False)

    t_star, value = golden_section(f, -radius, radius, rel_width=_line_min_width(tol))
    at_zero = nx <= value
    return np.where(at_zero, 0.0, t_star), np.where(at_zero, nx, value)


def minimize_norm_on_line(spec, x, y, tol: Optional[Tolerance] = None) -> LineMinResult:
    """
    Minimiser t ↦ ‖x + t·y‖ (infimum de la relation de Birkhoff)

    tol règle la largeur finale de la section dorée (voir minimize_norm_on_line_batch).

    Raises:
        InvalidVectorError: y = 0
    """
    xa, ya = as_pair(x, y)
    require_valid_spec(spec, xa.size)
    ny = float(norm_batch(spec, ya, check=False))
    if ny == 0:
        raise InvalidVectorError("y must be non-zero")
    nx = float(norm_batch(spec, xa, check=False))
    radius = 2.0 * nx / ny if nx > 0 else 1.0
    t_star, value = minimize_norm_on_line_batch(spec, xa[None, :], ya[None, :], tol)
    return LineMinResult(t_star=float(t_star[0]), value=float(value[0]), bracket=(-radius, radius))


def _pencil_gap(spec, X, Y, s, tol, rows):
    # seuil relatif sans plancher absolu : invariant par changement d'échelle de la norme
    batch = hh_values_batch(spec, X[rows], Y[rows] + s[rows, None] * X[rows], tol)
    share = max(PENCIL_REL_SHARE * tol.rel_tol, PENCIL_REL_FLOOR)
    return batch.gap, share * batch.total + batch.est_abs_error


def hh_orthogonal_in_pencil_batch(spec, X, Y, tol: Optional[Tolerance] = None):
    """
    Racines s de F(s) = I₊(x, y + s·x) − I₋(x, y + s·x) pour une pile de couples (x non nul)

    Encadrement géométrique à partir de ±(1 + 2‖y‖/‖x‖) puis dichotomie ;
    seules les lignes non résolues sont réévaluées à chaque étape.

    Returns:
        (s, résidus, itérations, bornes basses, bornes hautes, convergé)

    Raises:
        ConvergenceError: aucun changement de signe après 60 doublements
    """
    X = as_batch(X, "X")
    Y = as_batch(Y, "Y")
    require_valid_spec(spec, X.shape[1])
    tol = tol or get_default_tolerance()
    nx = norm_batch(spec, X, check=False)
    if np.any(nx == 0):
        raise InvalidVectorError("x must be non-zero")
    ny = norm_batch(spec, Y, check=False)
    B = X.shape[0]
    every = np.arange(B)

    s = np.zeros(B)
    residual, allowance = _pencil_gap(spec, X, Y, s, tol, every)
    done = np.abs(residual) <= allowance
    iterations = np.zeros(B, dtype=int)

    radius = 1.0 + 2.0 * ny / nx
    lo, hi = -radius, radius.copy()
    f_lo = np.zeros(B)
    f_hi = np.zeros(B)
    rows = np.flatnonzero(~done)
    f_lo[rows] = _pencil_gap(spec, X, Y, lo, tol, rows)[0]
    f_hi[rows] = _pencil_gap(spec, X, Y, hi, tol, rows)[0]
    for _ in range(MAX_DOUBLINGS):
        rows = np.flatnonzero(~done & (np.sign(f_lo) == np.sign(f_hi)))
        if not rows.size:
            break
        lo[rows] *= 2.0
        hi[rows] *= 2.0
        f_lo[rows] = _pencil_gap(spec, X, Y, lo, tol, rows)[0]
        f_hi[rows] = _pencil_gap(spec, X, Y, hi, tol, rows)[0]
    else:
        if np.any(~done & (np.sign(f_lo) == np.sign(f_hi))):
            raise ConvergenceError("no sign change found after bracket expansion")

    stop = 1e-13 * (1.0 + np.maximum(np.abs(lo), np.abs(hi)))
    lo[done] = 0.0
    hi[done] = 0.0
    rows = np.flatnonzero(~done)
    for _ in range(BISECTION_MAX_ITER):
        if not rows.size:
            break
        mid = 0.5 * (lo + hi)
        f_mid, allow_mid = _pencil_gap(spec, X, Y, mid, tol, rows)
        iterations[rows] += 1
        s[rows] = mid[rows]
        residual[rows] = f_mid
        allowance[rows] = allow_mid
        same = np.sign(f_mid) == np.sign(f_lo[rows])
        lo[rows[same]] = mid[rows[same]]
        f_lo[rows[same]] = f_mid[same]
        hi[rows[~same]] = mid[rows[~same]]
        keep = (np.abs(f_mid) > allow_mid) & (hi[rows] - lo[rows] > stop[rows])
        rows = rows[keep]

    converged = np.abs(residual) <= allowance
    logger.debug(f"🔄 Pinceau HH-I : {B} racines, {int(iterations.max(initial=0))} itérations max")
    return s, residual, iterations, lo, hi, converged


def hh_orthogonal_in_pencil(spec, x, y, tol: Optional[Tolerance] = None) -> RootResult:
    """
    Trouver s tel que x soit HH-I orthogonal à y + s·x

    La racine n'est pas forcément unique pour une norme quelconque ;
    la première racine encadrée est renvoyée.
    """
    xa, ya = as_pair(x, y)
    s, residual, iterations, lo, hi, converged = hh_orthogonal_in_pencil_batch(
        spec, xa[None, :], ya[None, :], tol
    )
    location = float(s[0])
    bracket = (min(float(lo[0]), location), max(float(hi[0]), location))
    return RootResult(
        location=location,
        residual=float(residual[0]),
        iterations=int(iterations[0]),
        bracket=bracket,
        converged=bool(converged[0]),
    )


def beta_functional_min(spec, x, y) -> BetaResult:
    """
    min sur β ≠ 0 de ‖x/β‖² + ‖βy‖² = 2‖x‖‖y‖, atteint en β = √(‖x‖/‖y‖)
    """
    xa, ya = as_pair(x, y)
    require_valid_spec(spec, xa.size)
    nx = float(norm_batch(spec, xa, check=False))
    ny = float(norm_batch(spec, ya, check=False))
    if nx == 0:
        return BetaResult(beta_star=1.0, value=0.0, attained=True)
    if ny == 0:
        # infimum 0 approché quand β → ∞
        return BetaResult(beta_star=None, value=0.0, attained=False)
    return BetaResult(beta_star=math.sqrt(nx / ny), value=2.0 * nx * ny, attained=True)


def beta_functional_numeric_batch(spec, X, Y) -> Tuple[np.ndarray, np.ndarray]:
    """
    Minimisation numérique de β ↦ ‖x/β‖² + ‖βy‖² sur log β, avec intervalle élargi
    tant que le minimiseur touche un bord (x et y non nuls)

    Returns:
        (β minimiseurs, valeurs minimales)
    """
    X = as_batch(X, "X")
    Y = as_batch(Y, "Y")

    def h(u, rows):
        beta = np.exp(u)
        return (
            norm_batch(spec, X[rows] / beta[:, None], check=False) ** 2
            + norm_batch(spec, Y[rows] * beta[:, None], check=False) ** 2
        )

    B = X.shape[0]
    half_width = np.ones(B)
    u_star = np.zeros(B)
    value = np.zeros(B)
    pending = np.arange(B)
    while pending.size:
        L = half_width[pending]
        u, v = golden_section(lambda t: h(t, pending), -L, L)
        u_star[pending] = u
        value[pending] = v
        at_edge = (np.abs(u) > L * (1.0 - 1e-6)) & (L < BETA_MAX_LOG)
        half_width[pending[at_edge]] = np.minimum(2.0 * L[at_edge], BETA_MAX_LOG)
        pending = pending[at_edge]
    return np.exp(u_star), value


def beta_functional_numeric(spec, x, y) -> BetaResult:
    """Contre-vérification numérique de beta_functional_min par section dorée"""
    xa, ya = as_pair(x, y)
    require_valid_spec(spec, xa.size)
    nx = float(norm_batch(spec, xa, check=False))
    ny = float(norm_batch(spec, ya, check=False))
    if nx == 0 or ny == 0:
        analytic = beta_functional_min(spec, xa, ya)
        return analytic.model_copy(update={"method": "golden-section"})
    beta, value = beta_functional_numeric_batch(spec, xa[None, :], ya[None, :])
    return BetaResult(beta_star=float(beta[0]), value=float(value[0]), attained=True, method="golden-section")


SOLVERS = {
    "pencil": lambda spec, x, y, tol: hh_orthogonal_in_pencil(spec, x, y, tol),
    "beta": lambda spec, x, y, tol: beta_functional_min(spec, x, y),
    "beta-numeric": lambda spec, x, y, tol: beta_functional_numeric(spec, x, y),
    "line-min": lambda spec, x, y, tol: minimize_norm_on_line(spec, x, y, tol),
}


def solve(kind: str, spec, x, y, tol: Optional[Tolerance] = None):
    """
    Aiguillage des solveurs par nom : pencil, beta, beta-numeric ou line-min

    Raises:
        OrthogonalityError: solveur inconnu
    """
    solver = SOLVERS.get(kind)
    if solver is None:
        raise OrthogonalityError(f"Solveur inconnu : {kind} (attendu : {', '.join(SOLVERS)})")
    return solver(spec, x, y, tol)
