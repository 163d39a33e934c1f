"""
Service d'analyse des applications linéaires g : X → Y entre espaces normés.

Chemin exact (normes de type produit scalaire) : blanchiment du domaine par
Cholesky et spectre complet par rotations de Jacobi cycliques.
Autres normes : optimisation multi-départs de ‖gx‖/‖x‖, résultats étiquetés
« estimated » (norme d'opérateur = minorant certifié, co-norme = majorant certifié).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import minimize

from src.exceptions import DimensionMismatchError, InvalidEpsilonError, NotInnerProductError
from src.models.mapping_model import (
    BoundsReport,
    Condition11Result,
    Condition17Report,
    EmbeddingConstants,
    IsometryReport,
    LinearMap,
    MapAnalysisModel,
    MapProfile,
)
from src.models.vector_model import LpNormSpec, Tolerance
from src.services.hh_integral_service import hh_values_batch
from src.services.solver_service import golden_section, hh_orthogonal_in_pencil_batch
from src.services.vector_space_service import (
    gram_of,
    is_inner_product_type,
    norm_batch,
    require_valid_spec,
    spec_dimension,
)
from src.utils import get_default_tolerance

logger = logging.getLogger(__name__)

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50
DEFAULT_STARTS = 64
# λmin ≤ SINGULAR_TOL·λmax : application considérée comme non injective
SINGULAR_TOL = 1e-14
DEFAULT_SAMPLES = 2000
EXACT_BUDGET = 10000
QUADRATURE_BUDGET = 1000
PENCIL_BUDGET = 256


def jacobi_eigh(S, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Décomposition spectrale de matrices symétriques par rotations de Jacobi cycliques

    Args:
        S: Matrice (n, n) ou pile (B, n, n)
        tol: Seuil relatif sur la norme de Frobenius hors diagonale
        max_sweeps: Nombre maximal de balayages

    Returns:
        (valeurs propres croissantes, vecteurs propres en colonnes)
    """
    A = np.array(S, dtype=float)
    single = A.ndim == 2
    if single:
        A = A[None]
    A = 0.5 * (A + np.swapaxes(A, 1, 2))
    B, n, _ = A.shape
    V = np.broadcast_to(np.eye(n), (B, n, n)).copy()
    scale = np.sqrt(np.einsum("bij,bij->b", A, A))
    off_mask = ~np.eye(n, dtype=bool)

    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.sqrt(np.sum(A[:, off_mask] ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                rotate = np.abs(apq) > 1e-300
                if not np.any(rotate):
                    continue
                safe = np.where(rotate, apq, 1.0)
                theta = (A[:, q, q] - A[:, p, p]) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta ** 2 + 1.0))
                t = np.where(rotate, t, 0.0)
                c = 1.0 / np.sqrt(t ** 2 + 1.0)
                s = t * c

                col_p = A[:, :, p].copy()
                col_q = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * col_p - s[:, None] * col_q
                A[:, :, q] = s[:, None] * col_p + c[:, None] * col_q
                row_p = A[:, p, :].copy()
                row_q = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * row_p - s[:, None] * row_q
                A[:, q, :] = s[:, None] * row_p + c[:, None] * row_q

                v_p = V[:, :, p].copy()
                v_q = V[:, :, q].copy()
                V[:, :, p] = c[:, None] * v_p - s[:, None] * v_q
                V[:, :, q] = s[:, None] * v_p + c[:, None] * v_q
    else:
        logger.warning(f"⚠️ Jacobi : {max_sweeps} balayages atteints sans convergence complète")

    w = np.diagonal(A, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    logger.debug(f"🔄 Jacobi : {B} matrices {n}×{n}, {sweeps} balayages")
    if single:
        return w[0], V[0]
    return w, V


def map_arrays(linear_map: LinearMap) -> np.ndarray:
    """Matrice de l'application, après vérification des normes du domaine et du codomaine"""
    g = linear_map.to_array()
    m, n = g.shape
    for label, spec, dim in (("domaine", linear_map.domain_spec, n), ("codomaine", linear_map.codomain_spec, m)):
        expected = spec_dimension(spec)
        if expected is not None and expected != dim:
            raise DimensionMismatchError(f"norme du {label} de dimension {expected}, attendu {dim}")
        require_valid_spec(spec, dim)
    return g


def whitening(domain_spec, n: int) -> np.ndarray:
    """R⁻¹ tel que ‖R⁻¹z‖ (domaine) = ‖z‖₂, avec G = RᵀR"""
    G = gram_of(domain_spec, n)
    R = np.linalg.cholesky(G).T
    return solve_triangular(R, np.eye(n), lower=False)


@dataclass(frozen=True)
class ProfileBatch:
    """Profils exacts d'une pile d'applications (normes de type produit scalaire)"""
    op_norm: np.ndarray
    co_norm: np.ndarray
    eps_star: np.ndarray
    unbounded: np.ndarray
    cert_max: np.ndarray
    cert_min: np.ndarray
    spectrum: np.ndarray
    eigvecs: np.ndarray


def profile_batch(matrices, domain_spec, codomain_spec) -> ProfileBatch:
    """
    ‖g‖, [g] et ε* pour une pile (B, m, n) d'applications entre espaces préhilbertiens

    S = R⁻ᵀ gᵀ G_Y g R⁻¹ ; ‖g‖² = λmax(S), [g]² = λmin(S)
    """
    g = np.asarray(matrices, dtype=float)
    if g.ndim == 2:
        g = g[None]
    _, m, n = g.shape
    if not (is_inner_product_type(domain_spec) and is_inner_product_type(codomain_spec)):
        raise NotInnerProductError("exact profile requires inner-product norms on both spaces")
    R_inv = whitening(domain_spec, n)
    G_c = gram_of(codomain_spec, m)
    gz = g @ R_inv
    S = np.einsum("bki,kl,blj->bij", gz, G_c, gz)
    w, V = jacobi_eigh(S)
    lam_max = np.maximum(w[:, -1], 0.0)
    lam_min = np.maximum(w[:, 0], 0.0)
    singular = (lam_max == 0) | (lam_min <= SINGULAR_TOL * lam_max)
    op = np.sqrt(lam_max)
    co = np.where(singular, 0.0, np.sqrt(lam_min))
    with np.errstate(invalid="ignore", divide="ignore"):
        eps_star = np.where(singular, 1.0, (lam_max - lam_min) / (lam_max + lam_min))
    return ProfileBatch(
        op_norm=op,
        co_norm=co,
        eps_star=np.clip(eps_star, 0.0, 1.0),
        unbounded=singular,
        cert_max=np.einsum("ij,bj->bi", R_inv, V[:, :, -1]),
        cert_min=np.einsum("ij,bj->bi", R_inv, V[:, :, 0]),
        spectrum=w,
        eigvecs=V,
    )


def _extremize_ratio(
    numerator: Callable[[np.ndarray], np.ndarray],
    denominator: Callable[[np.ndarray], np.ndarray],
    n: int,
    seed: int,
    starts: int = DEFAULT_STARTS,
):
    """
    sup et inf de numerator(x)/denominator(x) par Powell multi-départs
    (vecteurs de base puis départs gaussiens), fusion par (valeur, indice de départ)

    Returns:
        (x_max, r_max, x_min, r_min) où r_max, r_min sont les rapports réellement atteints
    """
    rng = np.random.default_rng(seed)
    initial = np.vstack([np.eye(n), rng.standard_normal((max(starts - n, 0), n))])[:starts]

    def ratio(x):
        x = np.atleast_2d(x)
        den = denominator(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(den > 0, numerator(x) / den, np.nan)

    def objective(sign):
        def f(x):
            r = float(ratio(x)[0])
            return math.inf if math.isnan(r) else -sign * r
        return f

    found = {}
    for sign in (1.0, -1.0):
        candidates = []
        for index, x0 in enumerate(initial):
            result = minimize(objective(sign), x0, method="Powell",
                              options={"xtol": 1e-10, "ftol": 1e-15, "maxfev": 400 * n})
            value = float(ratio(result.x)[0])
            if math.isfinite(value):
                candidates.append((-sign * value, index, result.x))
        candidates.sort(key=lambda c: (c[0], c[1]))
        best = candidates[0]
        found[sign] = (best[2], -sign * best[0])
    x_max, r_max = found[1.0]
    x_min, r_min = found[-1.0]
    return x_max, r_max, x_min, r_min


def _unit(spec, x: np.ndarray) -> np.ndarray:
    nx = float(norm_batch(spec, x, check=False))
    return x / nx if nx > 0 else x


def profile(linear_map: LinearMap, seed: int = 0, starts: int = DEFAULT_STARTS) -> MapProfile:
    """
    Norme d'opérateur ‖g‖ = sup ‖gx‖ et co-norme [g] = inf ‖gx‖ sur la sphère unité du domaine

    Args:
        linear_map: Application et normes
        seed: Graine des départs (chemin estimé)
        starts: Nombre de départs (chemin estimé)
    """
    g = map_arrays(linear_map)
    n = g.shape[1]
    dom, cod = linear_map.domain_spec, linear_map.codomain_spec

    if is_inner_product_type(dom) and is_inner_product_type(cod):
        batch = profile_batch(g, dom, cod)
        op, co = float(batch.op_norm[0]), float(batch.co_norm[0])
        return MapProfile(
            op_norm=op,
            co_norm=co,
            kappa=op / co if co > 0 else math.inf,
            eps_star=float(batch.eps_star[0]),
            unbounded=bool(batch.unbounded[0]),
            cert_max=batch.cert_max[0].tolist(),
            cert_min=batch.cert_min[0].tolist(),
            method="exact-ip",
        )

    logger.info(f"🔄 Profil estimé ({starts} départs) pour une application {g.shape[0]}×{n}")
    x_max, op, x_min, co = _extremize_ratio(
        lambda X: norm_batch(cod, X @ g.T, check=False),
        lambda X: norm_batch(dom, X, check=False),
        n, seed, starts,
    )
    unbounded = op == 0 or co <= SINGULAR_TOL ** 0.5 * op
    if unbounded:
        co = 0.0
    eps_star = 1.0 if unbounded else (op ** 2 - co ** 2) / (op ** 2 + co ** 2)
    return MapProfile(
        op_norm=op,
        co_norm=co,
        kappa=op / co if co > 0 else math.inf,
        eps_star=min(max(eps_star, 0.0), 1.0),
        unbounded=unbounded,
        cert_max=_unit(dom, x_max).tolist(),
        cert_min=_unit(dom, x_min).tolist(),
        method="estimated",
    )


def min_eps_condition_14(linear_map: LinearMap, seed: int = 0) -> float:
    """
    sup sur ‖x‖ = ‖y‖ de |‖gx‖² − ‖gy‖²| / (‖gx‖² + ‖gy‖²)

    x et y parcourant indépendamment la sphère, le sup vaut (‖g‖² − [g]²)/(‖g‖² + [g]²) = ε*
    """
    return profile(linear_map, seed).eps_star


def _check_eps(eps: float) -> float:
    if eps is None or not 0 <= eps < 1:
        raise InvalidEpsilonError("eps must lie in [0, 1)")
    return float(eps)


def _sample_vectors(linear_map: LinearMap, prof: MapProfile, samples: int, seed: int) -> np.ndarray:
    """Certificats, vecteurs de base et échantillons gaussiens, normalisés dans le domaine"""
    n = linear_map.shape[1]
    rng = np.random.default_rng(seed)
    V = np.vstack([
        np.asarray(prof.cert_min, dtype=float),
        np.asarray(prof.cert_max, dtype=float),
        np.eye(n),
        rng.standard_normal((samples, n)),
    ])
    nv = norm_batch(linear_map.domain_spec, V, check=False)
    return V[nv > 0] / nv[nv > 0, None]


def _squared_ratios(linear_map: LinearMap, V: np.ndarray) -> np.ndarray:
    g = linear_map.to_array()
    num = norm_batch(linear_map.codomain_spec, V @ g.T, check=False) ** 2
    den = norm_batch(linear_map.domain_spec, V, check=False) ** 2
    return num / den


def _bounds_report(condition, eps, eta, V, ratios, lower, upper, tol: Tolerance) -> BoundsReport:
    m_low = ratios - lower
    m_up = upper - ratios
    a_low = tol.allowance(np.maximum(ratios, lower))
    a_up = tol.allowance(np.maximum(ratios, upper))
    fail_low = m_low < -a_low
    fail_up = m_up < -a_up
    if np.any(fail_low):
        idx = int(np.argmin(m_low))
    elif np.any(fail_up):
        idx = int(np.argmin(m_up))
    else:
        idx = int(np.argmin(np.minimum(m_low, m_up)))
    passes = not (np.any(fail_low) or np.any(fail_up))
    return BoundsReport(
        condition=condition,
        eps=eps,
        eta=eta,
        passes=passes,
        samples=int(V.shape[0]),
        ratio_min=float(ratios.min()),
        ratio_max=float(ratios.max()),
        lower_bound=float(lower),
        upper_bound=float(upper),
        worst_margin=float(min(m_low.min(), m_up.min())),
        witness=None if passes else V[idx].tolist(),
    )


def check_bounds_12(
    linear_map: LinearMap,
    eps: float,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: Optional[Tolerance] = None,
) -> BoundsReport:
    """
    Échantillonner (1−ε)/(1+ε)·‖g‖²‖x‖² ≤ ‖gx‖² ≤ (1+ε)/(1−ε)·[g]²‖x‖²

    Le témoin d'un échec est pris du côté de la borne inférieure lorsqu'elle échoue.
    """
    eps = _check_eps(eps)
    tol = tol or get_default_tolerance()
    prof = profile(linear_map, seed)
    V = _sample_vectors(linear_map, prof, samples, seed)
    ratios = _squared_ratios(linear_map, V)
    alpha, beta = (1 - eps) / (1 + eps), (1 + eps) / (1 - eps)
    report = _bounds_report("bounds-12", eps, None, V, ratios,
                            alpha * prof.op_norm ** 2, beta * prof.co_norm ** 2, tol)
    logger.debug(f"📊 Bornes (12) à ε={eps} : {'OK' if report.passes else 'ÉCHEC'}")
    return report


def check_bounds_13(
    linear_map: LinearMap,
    eps: float,
    etas: Optional[Sequence[float]] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: Optional[Tolerance] = None,
) -> List[BoundsReport]:
    """
    Forme interpolée (1−ε)/(1+ε)·η²‖x‖² ≤ ‖gx‖² ≤ (1+ε)/(1−ε)·η²‖x‖²,
    un rapport par η (défaut : 5 valeurs régulières dans [[g], ‖g‖])
    """
    eps = _check_eps(eps)
    tol = tol or get_default_tolerance()
    prof = profile(linear_map, seed)
    if etas is None:
        etas = np.linspace(prof.co_norm, prof.op_norm, 5)
    V = _sample_vectors(linear_map, prof, samples, seed)
    ratios = _squared_ratios(linear_map, V)
    alpha, beta = (1 - eps) / (1 + eps), (1 + eps) / (1 - eps)
    return [
        _bounds_report("bounds-13", eps, float(eta), V, ratios, alpha * eta ** 2, beta * eta ** 2, tol)
        for eta in etas
    ]


def check_condition_17(
    linear_map: LinearMap,
    eps: float,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: Optional[Tolerance] = None,
) -> Condition17Report:
    """
    Échantillonner ‖gx‖²‖y‖² ≤ (1+ε)/(1−ε)·‖gy‖²‖x‖² sur des couples (le couple
    des certificats en premier) et comparer au verdict de ‖g‖² ≤ (1+ε)/(1−ε)·[g]²
    """
    eps = _check_eps(eps)
    tol = tol or get_default_tolerance()
    prof = profile(linear_map, seed)
    n = linear_map.shape[1]
    rng = np.random.default_rng(seed)
    Xs = np.vstack([np.asarray(prof.cert_max, dtype=float)[None], rng.standard_normal((samples, n))])
    Ys = np.vstack([np.asarray(prof.cert_min, dtype=float)[None], rng.standard_normal((samples, n))])
    rx = _squared_ratios(linear_map, Xs)
    ry = _squared_ratios(linear_map, Ys)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ry > 0, rx / ry, np.where(rx > 0, np.inf, 1.0))
    idx = int(np.argmax(ratio))
    worst = float(ratio[idx])
    bound = (1 + eps) / (1 - eps)
    limit = bound + tol.allowance(bound)
    passes = worst <= limit
    kappa_sq = math.inf if prof.co_norm == 0 else (prof.op_norm / prof.co_norm) ** 2
    return Condition17Report(
        eps=eps,
        passes=passes,
        samples=int(Xs.shape[0]),
        worst_ratio=worst,
        bound=bound,
        kappa_squared=kappa_sq,
        consistent_with_profile=(kappa_sq <= limit) == passes,
        witness_x=None if passes else Xs[idx].tolist(),
        witness_y=None if passes else Ys[idx].tolist(),
    )


def remark_isometry_check(
    linear_map: LinearMap,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: Optional[Tolerance] = None,
) -> IsometryReport:
    """
    À ε = 0 les bornes (12) imposent κ = 1, et alors ‖gx‖ = η‖x‖ avec η = ‖g‖
    """
    tol = tol or get_default_tolerance()
    prof = profile(linear_map, seed)
    report = check_bounds_12(linear_map, 0.0, samples, seed, tol)
    V = _sample_vectors(linear_map, prof, samples, seed)
    image = norm_batch(linear_map.codomain_spec, V @ linear_map.to_array().T, check=False)
    deviation = float(np.max(np.abs(image - prof.op_norm)))
    kappa = prof.op_norm / prof.co_norm if prof.co_norm > 0 else math.inf
    scaled_isometry = prof.op_norm ** 2 - prof.co_norm ** 2 <= tol.allowance(prof.op_norm ** 2)
    tight = deviation <= tol.allowance(prof.op_norm) * 10
    return IsometryReport(
        passes_bounds_12=report.passes,
        kappa=kappa,
        scaled_isometry=scaled_isometry,
        eta=prof.op_norm,
        max_deviation=deviation,
        samples=report.samples,
        consistent=(report.passes == scaled_isometry) and (tight or not scaled_isometry),
    )


def _hill_climb(evaluate: Callable[[np.ndarray], np.ndarray], start: np.ndarray, value: float,
                rng: np.random.Generator, steps: int = 40, population: int = 32):
    """Montée locale : perturbations gaussiennes de pas décroissant, meilleure valeur conservée"""
    best, best_value = start.copy(), value
    step = 0.3
    evaluations = 0
    for _ in range(steps):
        trial = best[None, :] + step * np.linalg.norm(best) * rng.standard_normal((population, best.size))
        values = evaluate(trial)
        evaluations += population
        k = int(np.argmax(values))
        if values[k] > best_value:
            best, best_value = trial[k], float(values[k])
        else:
            step *= 0.5
    return best, best_value, evaluations


def _pair_ratio_ip(S: np.ndarray, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """|C|/(2√(AB)) : ε requis pour le couple orthonormé (u, w), échelles optimisées"""
    A = np.einsum("bi,ij,bj->b", U, S, U)
    B = np.einsum("bi,ij,bj->b", W, S, W)
    C = np.einsum("bi,ij,bj->b", U, S, W)
    AB = A * B
    safe = np.where(AB > 0, AB, 1.0)
    return np.where(AB > 0, np.abs(C) / (2.0 * np.sqrt(safe)), 0.0)


def _balanced_pair(S: np.ndarray, u: np.ndarray, w: np.ndarray):
    """Échelles a, b telles que a²A = b²B (optimum du rapport)"""
    A = float(u @ S @ u)
    B = float(w @ S @ w)
    if A > 0 and B > 0:
        return u * B ** 0.25, w * A ** 0.25
    return u, w


def _orthonormal_pairs(P: np.ndarray, Q: np.ndarray):
    """Gram–Schmidt ligne à ligne (pour le produit scalaire euclidien)"""
    U = P / np.linalg.norm(P, axis=1, keepdims=True)
    W = Q - np.sum(Q * U, axis=1, keepdims=True) * U
    nw = np.linalg.norm(W, axis=1, keepdims=True)
    return U, W / np.where(nw > 0, nw, 1.0)


def _hh_ratio(codomain_spec, GU: np.ndarray, GW: np.ndarray) -> np.ndarray:
    values = hh_values_batch(codomain_spec, GU, GW)
    total = values.total
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total > 0, np.abs(values.gap) / total, 0.0)


def min_eps_condition_11(linear_map: LinearMap, budget: Optional[int] = None, seed: int = 0) -> Condition11Result:
    """
    Plus petit ε tel que x ⊥_HH-I y ⇒ g(x) ε-⊥_HH-I g(y) (relative) sur les couples explorés,
    c'est-à-dire sup |gap(gu, gw)| / total(gu, gw) sur les couples HH-I orthogonaux

    - domaine préhilbertien de dimension 2, codomaine préhilbertien : grille en θ puis section dorée
    - domaine préhilbertien de dimension > 2, codomaine préhilbertien : multi-départs amorcés
      par le couple (v_max ± v_min)/√2 du spectre blanchi
    - domaine préhilbertien, autre codomaine : échantillonnage puis montée locale (approché)
    - autre domaine : couples engendrés par le pinceau HH-I puis montée locale (approché)
    """
    g = map_arrays(linear_map)
    m, n = g.shape
    dom, cod = linear_map.domain_spec, linear_map.codomain_spec
    rng = np.random.default_rng(seed)

    if n == 1:
        # tout couple orthogonal contient le vecteur nul
        return Condition11Result(eps_min=0.0, witness_u=[1.0], witness_w=[0.0], approximate=False,
                                 method="one-dimensional", evaluations=0)

    if is_inner_product_type(dom):
        R_inv = whitening(dom, n)
        gz = g @ R_inv

        if is_inner_product_type(cod):
            S = gz.T @ gram_of(cod, m) @ gz
            budget = budget or EXACT_BUDGET
            if n == 2:
                theta = np.linspace(0.0, np.pi, budget, endpoint=False)

                def f(th):
                    U = np.stack([np.cos(th), np.sin(th)], axis=1)
                    W = np.stack([-np.sin(th), np.cos(th)], axis=1)
                    return _pair_ratio_ip(S, U, W)

                values = f(theta)
                k = int(np.argmax(values))
                h = np.pi / budget
                th_star, neg = golden_section(lambda t: -f(t), theta[k] - h, theta[k] + h)
                th = float(th_star[0]) if -neg[0] >= values[k] else float(theta[k])
                u = np.array([math.cos(th), math.sin(th)])
                w = np.array([-math.sin(th), math.cos(th)])
                eps_min = float(f(np.array([th]))[0])
                method, evaluations = "theta-grid", budget
            else:
                w_eig, V = jacobi_eigh(S)
                seed_u = (V[:, -1] + V[:, 0]) / math.sqrt(2.0)
                seed_w = (V[:, -1] - V[:, 0]) / math.sqrt(2.0)
                best_u, best_w = seed_u, seed_w
                best = float(_pair_ratio_ip(S, seed_u[None], seed_w[None])[0])
                evaluations = 1
                starts = max(1, min(16, budget // 500))
                for index in range(starts):
                    x0 = rng.standard_normal(2 * n)

                    def neg_ratio(z):
                        U, W = _orthonormal_pairs(z[None, :n], z[None, n:])
                        return -float(_pair_ratio_ip(S, U, W)[0])

                    result = minimize(neg_ratio, x0, method="Powell", options={"maxfev": 200 * n})
                    evaluations += int(result.nfev)
                    if -result.fun > best:
                        U, W = _orthonormal_pairs(result.x[None, :n], result.x[None, n:])
                        best, best_u, best_w = -float(result.fun), U[0], W[0]
                u, w, eps_min = best_u, best_w, best
                method = "multi-start-ip"
            u, w = _balanced_pair(S, u, w)
            return Condition11Result(
                eps_min=eps_min,
                witness_u=(R_inv @ u).tolist(),
                witness_w=(R_inv @ w).tolist(),
                approximate=False,
                method=method,
                evaluations=evaluations,
            )

        budget = budget or QUADRATURE_BUDGET

        def evaluate_ip(Z):
            U, W = _orthonormal_pairs(Z[:, :n], Z[:, n:2 * n])
            W = W * np.exp(Z[:, 2 * n])[:, None]
            return _hh_ratio(cod, U @ gz.T, W @ gz.T)

        Z = np.hstack([rng.standard_normal((budget, 2 * n)), rng.uniform(-math.log(100), math.log(100), (budget, 1))])
        values = evaluate_ip(Z)
        k = int(np.argmax(values))
        z, eps_min, extra = _hill_climb(evaluate_ip, Z[k], float(values[k]), rng)
        U, W = _orthonormal_pairs(z[None, :n], z[None, n:2 * n])
        u, w = R_inv @ U[0], R_inv @ (W[0] * math.exp(z[2 * n]))
        return Condition11Result(eps_min=eps_min, witness_u=u.tolist(), witness_w=w.tolist(),
                                 approximate=True, method="sampled-ip", evaluations=budget + extra)

    budget = budget or PENCIL_BUDGET

    def evaluate_pencil(Z):
        U, W0 = Z[:, :n], Z[:, n:]
        s = hh_orthogonal_in_pencil_batch(dom, U, W0)[0]
        W = W0 + s[:, None] * U
        return _hh_ratio(cod, U @ g.T, W @ g.T)

    Z = rng.standard_normal((budget, 2 * n))
    values = evaluate_pencil(Z)
    k = int(np.argmax(values))
    z, eps_min, extra = _hill_climb(evaluate_pencil, Z[k], float(values[k]), rng, steps=20, population=16)
    s = hh_orthogonal_in_pencil_batch(dom, z[None, :n], z[None, n:])[0]
    u, w = z[:n], z[n:] + s[0] * z[:n]
    logger.info(f"📊 Condition (11) estimée par pinceau : ε ≈ {eps_min:.6f}")
    return Condition11Result(eps_min=eps_min, witness_u=u.tolist(), witness_w=w.tolist(),
                             approximate=True, method="pencil-search", evaluations=budget + extra)


def two_norm_embedding(norm1, norm2, dim: int, seed: int = 0, starts: int = DEFAULT_STARTS) -> EmbeddingConstants:
    """
    Constantes optimales m‖x‖₁ ≤ ‖x‖₂ ≤ M‖x‖₁ (‖·‖₁ = norm1, ‖·‖₂ = norm2)

    Analytique pour deux normes ℓp, exact (valeurs propres généralisées) pour deux
    normes de type produit scalaire, estimé sinon.
    """
    require_valid_spec(norm1, dim)
    require_valid_spec(norm2, dim)

    if norm1 == norm2:
        m, M, method = 1.0, 1.0, "analytic"
    elif isinstance(norm1, LpNormSpec) and isinstance(norm2, LpNormSpec):
        inv1 = 0.0 if math.isinf(norm1.p) else 1.0 / norm1.p
        inv2 = 0.0 if math.isinf(norm2.p) else 1.0 / norm2.p
        # ‖x‖₂/‖x‖₁ varie entre 1 et dim^(1/p₂ − 1/p₁)
        c = dim ** (inv2 - inv1)
        m, M, method = min(1.0, c), max(1.0, c), "analytic"
    elif is_inner_product_type(norm1) and is_inner_product_type(norm2):
        R_inv = whitening(norm1, dim)
        w, _ = jacobi_eigh(R_inv.T @ gram_of(norm2, dim) @ R_inv)
        m, M, method = math.sqrt(max(w[0], 0.0)), math.sqrt(max(w[-1], 0.0)), "exact-ip"
    else:
        _, M, _, m = _extremize_ratio(
            lambda X: norm_batch(norm2, X, check=False),
            lambda X: norm_batch(norm1, X, check=False),
            dim, seed, starts,
        )
        method = "estimated"

    return EmbeddingConstants(
        m=m,
        M=M,
        eta=(M - m) / (M + m),
        eta_squared=(M ** 2 - m ** 2) / (M ** 2 + m ** 2),
        method=method,
    )


def analyze(linear_map: LinearMap, eps: Optional[float] = None, seed: int = 0,
            samples: int = DEFAULT_SAMPLES) -> MapAnalysisModel:
    """Profil, conditions (14) et (11), et rapports (12) et (17) si ε est fourni"""
    logger.info(f"🚀 Analyse d'une application {linear_map.shape[0]}×{linear_map.shape[1]}")
    prof = profile(linear_map, seed)
    analysis = MapAnalysisModel(
        profile=prof,
        min_eps_condition_14=prof.eps_star,
        condition_11=min_eps_condition_11(linear_map, seed=seed),
        bounds_12=check_bounds_12(linear_map, eps, samples, seed) if eps is not None else None,
        condition_17=check_condition_17(linear_map, eps, samples, seed) if eps is not None else None,
    )
    logger.info(f"✅ ε* = {prof.eps_star:.6g}, ε(11) = {analysis.condition_11.eps_min:.6g}")
    return analysis
