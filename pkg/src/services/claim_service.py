"""
Service d'audit des assertions sur l'orthogonalité HH-I.

Chaque assertion est une liste d'implications (prémisse ⇒ conclusion), deux
pour une équivalence. Les essais sont tirés par lots déterministes :

    graine du lot = SeedSequence([graine, empreinte(id), indice du lot])

Un lot tire toujours ORTHO_CLAIM_BATCH essais avant troncature, si bien
qu'augmenter le budget prolonge l'échantillon sans le modifier. Un essai compte
pour une implication lorsque sa prémisse est satisfaite (marge ≥ 0, ou
≥ −tolérance pour les relations exactes) ; il la viole lorsque la marge de la
conclusion passe sous −tolérance. Un contre-exemple n'est rapporté qu'après
sérialisation JSON du témoin et réévaluation par les fonctions scalaires.
"""

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, TypeAdapter

from src.exceptions import ConvergenceError, OrthogonalityError, UnknownClaimError
from src.models.claim_model import (
    ClaimInfo,
    ClaimMode,
    ClaimReport,
    ClaimSpec,
    ClaimStatus,
    ClaimUniverse,
    Witness,
    WitnessCheck,
)
from src.models.mapping_model import LinearMap
from src.models.orthogonality_model import EPSILON_RELATIONS, RelationId
from src.models.vector_model import (
    InnerProductNormSpec,
    LpNormSpec,
    NormSpec,
    Tolerance,
    WeightedLpNormSpec,
)
from src.services.mapping_service import (
    check_bounds_12,
    check_bounds_13,
    check_condition_17,
    min_eps_condition_11,
    profile,
    profile_batch,
    two_norm_embedding,
)
from src.services.orthogonality_service import evaluate, margins_batch, parse_relation
from src.services.solver_service import (
    beta_functional_min,
    beta_functional_numeric,
    beta_functional_numeric_batch,
    hh_orthogonal_in_pencil_batch,
)
from src.services.vector_space_service import (
    gram_of,
    inner,
    inner_batch,
    norm,
    norm_batch,
    scaled_spec,
    spec_dimension,
)
from src.utils import get_default_tolerance, get_env_int, stable_hash, to_jsonable

logger = logging.getLogger(__name__)

DEFAULT_BATCH = 1000
DEFAULT_SEARCH_BUDGET = 10000
REFINE_CANDIDATES = 8
REFINE_STARTS = 4
REFINE_STEPS = 30
REFINE_POPULATION = 32
BETA_REL_TOL = 1e-8
VERIFY_SAMPLES = 64

LP2 = LpNormSpec(p=2)
SPEC_KEYS = ("spec", "norm1", "norm2", "spec1", "spec2")
SCALE_FIELDS = ("alpha", "beta")
FIELD_BOUNDS = {"eps": (0.0, 0.999), "eta_frac": (0.0, 1.0)}

IP_FAMILIES = ("ip", "lp:2", "wlp:2")
ALL_FAMILIES = ("ip", "lp:2", "wlp:2", "lp:1", "lp:1.5", "lp:3", "lp:inf", "wlp:inf")
LP_FAMILIES = ("lp:1", "lp:3", "lp:inf")
SCALED_FAMILIES = ("lp:2", "ip", "lp:1", "lp:inf")
EMBEDDING_PAIRS = (
    ("lp:2", "lp:inf"),
    ("lp:inf", "lp:2"),
    ("lp:1", "lp:2"),
    ("ip", "lp:2"),
    ("lp:2", "wlp:2"),
)

_spec_adapter = TypeAdapter(NormSpec)


# Lots d'essais

@dataclass
class Trials:
    """Lot d'essais : contexte commun (normes, dimension) et champs empilés (B, ...)"""
    context: Dict[str, Any]
    fields: Dict[str, np.ndarray]

    @property
    def size(self) -> int:
        return len(next(iter(self.fields.values())))

    def take(self, rows) -> "Trials":
        return Trials(self.context, {k: v[rows] for k, v in self.fields.items()})

    def payload(self, i: int) -> Dict[str, Any]:
        """Instance i sous forme JSON (normes sérialisées, tableaux en listes)"""
        data: Dict[str, Any] = {}
        for key, value in self.context.items():
            data[key] = value.model_dump(mode="json") if isinstance(value, BaseModel) else to_jsonable(value)
        for key, value in self.fields.items():
            data[key] = to_jsonable(value[i])
        return data

    @classmethod
    def from_payload(cls, payload: Dict[str, Any]) -> "Trials":
        context: Dict[str, Any] = {}
        fields: Dict[str, np.ndarray] = {}
        for key, value in payload.items():
            if key in SPEC_KEYS:
                context[key] = _spec_adapter.validate_python(value)
            elif key == "dim":
                context[key] = int(value)
            else:
                fields[key] = np.asarray(value, dtype=float)[None]
        return cls(context, fields)


class _Draws:
    """Tirages dimensionnés sur le lot complet puis tronqués aux `size` premiers essais"""

    def __init__(self, rng: np.random.Generator, full: int, size: int):
        self.rng = rng
        self.full = full
        self.size = size

    def normal(self, *shape: int) -> np.ndarray:
        return self.rng.standard_normal((self.full,) + shape)[: self.size]

    def uniform(self, low: float, high: float, *shape: int) -> np.ndarray:
        return self.rng.uniform(low, high, (self.full,) + shape)[: self.size]

    def choice(self, values: Sequence[float]) -> np.ndarray:
        picks = self.rng.integers(len(values), size=self.full)[: self.size]
        return np.asarray(values, dtype=float)[picks]

    def coin(self) -> np.ndarray:
        return (self.rng.random(self.full) < 0.5)[: self.size]


def _random_gram(rng: np.random.Generator, n: int) -> np.ndarray:
    """Q·diag(λ)·Qᵀ, λ log-uniformes dans [0.1, 10]"""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = 10.0 ** rng.uniform(-1.0, 1.0, n)
    G = (Q * lam) @ Q.T
    return 0.5 * (G + G.T)


def _family_spec(rng: np.random.Generator, family: str, dim: int):
    """Norme d'une famille : ip (Gram SPD aléatoire), lp:p ou wlp:p (poids aléatoires)"""
    if family == "ip":
        return InnerProductNormSpec(gram=_random_gram(rng, dim).tolist())
    kind, raw = family.split(":")
    p = math.inf if raw == "inf" else float(raw)
    if kind == "wlp":
        return WeightedLpNormSpec(p=p, weights=(10.0 ** rng.uniform(-1.0, 1.0, dim)).tolist())
    return LpNormSpec(p=p)


def _pick_space(rng: np.random.Generator, universe: ClaimUniverse, families: Sequence[str]):
    lo, hi = universe.dims
    if universe.norm_specs:
        spec = universe.norm_specs[int(rng.integers(len(universe.norm_specs)))]
        dim = spec_dimension(spec) or int(rng.integers(lo, hi + 1))
        return spec, dim
    dim = int(rng.integers(lo, hi + 1))
    return _family_spec(rng, families[int(rng.integers(len(families)))], dim), dim


def _pair(draws: _Draws, spec, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """Couples gaussiens ; pour la moitié, ‖y‖/‖x‖ log-uniforme dans [1e-2, 1e2]"""
    X = draws.normal(dim)
    Y = draws.normal(dim)
    ratio = 10.0 ** draws.uniform(-2.0, 2.0)
    rescale = draws.coin()
    nx = norm_batch(spec, X, check=False)
    ny = norm_batch(spec, Y, check=False)
    factor = np.where(rescale & (ny > 0), ratio * nx / np.where(ny > 0, ny, 1.0), 1.0)
    return X, Y * factor[:, None]


def _epsilons(draws: _Draws, grid: Sequence[float]) -> np.ndarray:
    """Moitié sur la grille de l'univers, moitié uniforme dans [0, 1)"""
    uniform = draws.uniform(0.0, 1.0)
    if not grid:
        return uniform
    return np.where(draws.coin(), draws.choice(grid), uniform)


Sampler = Callable[[np.random.Generator, int, int, ClaimUniverse], Trials]


def _pair_sampler(families: Sequence[str], scales: bool = False) -> Sampler:
    def sample(rng, full, size, universe):
        spec, dim = _pick_space(rng, universe, families)
        draws = _Draws(rng, full, size)
        X, Y = _pair(draws, spec, dim)
        fields = {"x": X, "y": Y, "eps": _epsilons(draws, universe.eps_grid)}
        if scales:
            for key in SCALE_FIELDS:
                fields[key] = np.where(draws.coin(), 1.0, -1.0) * 10.0 ** draws.uniform(-2.0, 2.0)
        return Trials({"spec": spec, "dim": dim}, fields)

    return sample


def _map_sampler() -> Sampler:
    """g = U·diag(σ)·Vᵀ, conditionnement uniforme dans [1, 3], échelle log-uniforme"""
    def sample(rng, full, size, universe):
        lo, hi = universe.dims
        n = int(rng.integers(lo, hi + 1))
        draws = _Draws(rng, full, size)
        U, _ = np.linalg.qr(draws.normal(n, n))
        V, _ = np.linalg.qr(draws.normal(n, n))
        kappa = draws.uniform(1.0, 3.0)
        scale = 10.0 ** draws.uniform(-1.0, 1.0)
        t = np.sort(draws.uniform(0.0, 1.0, n), axis=1)
        t[:, 0] = 0.0
        t[:, -1] = 1.0
        sigma = scale[:, None] * kappa[:, None] ** t
        g = (U * sigma[:, None, :]) @ np.swapaxes(V, 1, 2)
        fields = {"g": g, "eps": _epsilons(draws, universe.eps_grid), "eta_frac": draws.uniform(0.0, 1.0)}
        return Trials({"dim": n}, fields)

    return sample


def _embedding_sampler(constant: str) -> Sampler:
    """Couples HH-I orthogonaux pour norm1 (racine du pinceau), constante η de norm1 vers norm2"""
    def sample(rng, full, size, universe):
        lo, hi = universe.dims
        dim = int(rng.integers(lo, hi + 1))
        fam1, fam2 = EMBEDDING_PAIRS[int(rng.integers(len(EMBEDDING_PAIRS)))]
        norm1, norm2 = _family_spec(rng, fam1, dim), _family_spec(rng, fam2, dim)
        eta = getattr(two_norm_embedding(norm1, norm2, dim), constant)
        draws = _Draws(rng, full, size)
        X, W = _pair(draws, norm1, dim)
        s = hh_orthogonal_in_pencil_batch(norm1, X, W)[0]
        fields = {"x": X, "y": W + s[:, None] * X, "eta": np.full(X.shape[0], eta)}
        return Trials({"norm1": norm1, "norm2": norm2, "dim": dim}, fields)

    return sample


def _equal_norms_sampler(fixed: Optional[Tuple[Any, Any]] = None) -> Sampler:
    """
    Couples HH-I orthogonaux pour spec1 (une moitié) ou spec2 (l'autre),
    spec2 = η·spec1 avec η log-uniforme dans [0.1, 10] sauf couple imposé
    """
    def sample(rng, full, size, universe):
        lo, hi = universe.dims
        dim = int(rng.integers(lo, hi + 1))
        if fixed is not None:
            spec1, spec2 = fixed
        else:
            spec1 = _family_spec(rng, SCALED_FAMILIES[int(rng.integers(len(SCALED_FAMILIES)))], dim)
            spec2 = scaled_spec(spec1, float(10.0 ** rng.uniform(-1.0, 1.0)), dim)
        draws = _Draws(rng, full, size)
        X, W = _pair(draws, spec1, dim)
        first = draws.coin()
        Y = W.copy()
        for spec, rows in ((spec1, np.flatnonzero(first)), (spec2, np.flatnonzero(~first))):
            if rows.size:
                s = hh_orthogonal_in_pencil_batch(spec, X[rows], W[rows])[0]
                Y[rows] = W[rows] + s[:, None] * X[rows]
        return Trials({"spec1": spec1, "spec2": spec2, "dim": dim}, {"x": X, "y": Y})

    return sample


# Inégalités évaluées

@dataclass(frozen=True)
class Margins:
    margin: np.ndarray
    allowance: np.ndarray
    scale: np.ndarray


def _one(margin: float, allowance: float, scale: float) -> Margins:
    return Margins(np.array([float(margin)]), np.array([float(allowance)]), np.array([float(scale)]))


class Check:
    """Inégalité sur un lot (voie vectorisée) ou sur un essai isolé (voie scalaire)"""
    exact = False

    def batch(self, trials: Trials, tol: Tolerance) -> Margins:
        raise NotImplementedError

    def single(self, trials: Trials, tol: Tolerance) -> Margins:
        return self.batch(trials, tol)


class RelationCheck(Check):
    """Une relation du service d'orthogonalité, avec transformation éventuelle de x, y et ε"""

    def __init__(self, relation, spec_key: str = "spec", x=None, y=None, eps=None):
        self.relation = RelationId(relation)
        self.spec_key = spec_key
        self.x = x or (lambda f: f["x"])
        self.y = y or (lambda f: f["y"])
        self.eps = eps or (lambda f: f["eps"])
        self.exact = self.relation not in EPSILON_RELATIONS

    def _eps(self, fields):
        return self.eps(fields) if self.relation in EPSILON_RELATIONS else None

    def batch(self, trials, tol):
        f = trials.fields
        out = margins_batch(self.relation, trials.context[self.spec_key], self.x(f), self.y(f), self._eps(f), tol)
        return Margins(out["margin"], out["allowance"], out["scale"])

    def single(self, trials, tol):
        f = trials.fields
        eps = self._eps(f)
        verdict = evaluate(
            self.relation,
            trials.context[self.spec_key],
            self.x(f)[0],
            self.y(f)[0],
            None if eps is None else float(np.asarray(eps).reshape(-1)[0]),
            tol,
        )
        return _one(verdict.margin, verdict.allowance, verdict.details.get("scale", 0.0))


class FunctionCheck(Check):
    def __init__(self, batch_fn, single_fn=None, exact: bool = False):
        self._batch = batch_fn
        self._single = single_fn or batch_fn
        self.exact = exact

    def batch(self, trials, tol):
        return self._batch(trials, tol)

    def single(self, trials, tol):
        return self._single(trials, tol)


def _const(value: float):
    return lambda f: np.full(len(f["x"]), float(value))


def _companion_eta(eps):
    """η tel que 2η/(1+η²) = ε, soit (1 − √(1−ε²))/ε sous forme stable"""
    eps = np.asarray(eps, dtype=float)
    return eps / (1.0 + np.sqrt(1.0 - eps ** 2))


def _threshold_check(factor: Callable[[np.ndarray], np.ndarray]) -> FunctionCheck:
    """|⟨x, y⟩| ≤ c(ε)·(‖x‖² + ‖y‖²) dans un espace préhilbertien"""
    def run_batch(trials, tol):
        f = trials.fields
        G = gram_of(trials.context["spec"], trials.context["dim"])
        ip = np.abs(inner_batch(G, f["x"], f["y"]))
        bound = factor(f["eps"]) * (inner_batch(G, f["x"], f["x"]) + inner_batch(G, f["y"], f["y"]))
        scale = np.maximum(bound, ip)
        return Margins(bound - ip, tol.allowance(scale), scale)

    def run_single(trials, tol):
        spec, f = trials.context["spec"], trials.fields
        x, y = f["x"][0], f["y"][0]
        ip = abs(inner(spec, x, y))
        bound = float(factor(f["eps"][0])) * (norm(spec, x) ** 2 + norm(spec, y) ** 2)
        scale = max(bound, ip)
        return _one(bound - ip, tol.allowance(scale), scale)

    return FunctionCheck(run_batch, run_single)


def _beta_batch(trials, tol):
    spec, f = trials.context["spec"], trials.fields
    analytic = 2.0 * norm_batch(spec, f["x"]) * norm_batch(spec, f["y"])
    _, numeric = beta_functional_numeric_batch(spec, f["x"], f["y"])
    return Margins(BETA_REL_TOL * analytic - np.abs(numeric - analytic), tol.allowance(analytic), analytic)


def _beta_single(trials, tol):
    spec, f = trials.context["spec"], trials.fields
    analytic = beta_functional_min(spec, f["x"][0], f["y"][0]).value
    numeric = beta_functional_numeric(spec, f["x"][0], f["y"][0]).value
    return _one(BETA_REL_TOL * analytic - abs(numeric - analytic), tol.allowance(analytic), analytic)


# Conditions sur une application linéaire entre deux espaces ℓ2

def _map_profile(trials):
    pb = profile_batch(trials.fields["g"], LP2, LP2)
    return pb.op_norm ** 2, pb.co_norm ** 2, pb.eps_star


def _bound_factors(eps):
    return (1.0 - eps) / (1.0 + eps), (1.0 + eps) / (1.0 - eps)


def _map_of(trials) -> Tuple[LinearMap, float]:
    return LinearMap.of(trials.fields["g"][0]), float(trials.fields["eps"][0])


def _cond12_batch(trials, tol):
    op2, co2, _ = _map_profile(trials)
    alpha, beta = _bound_factors(trials.fields["eps"])
    return Margins(np.minimum(co2 - alpha * op2, beta * co2 - op2), tol.allowance(op2), op2)


def _cond12_single(trials, tol):
    linear_map, eps = _map_of(trials)
    op2 = profile(linear_map).op_norm ** 2
    report = check_bounds_12(linear_map, eps, samples=VERIFY_SAMPLES, tol=tol)
    return _one(report.worst_margin, tol.allowance(op2), op2)


def _cond11_batch(trials, tol):
    # entre deux espaces préhilbertiens, le plus petit ε de (11) vaut ε*/2
    _, _, eps_star = _map_profile(trials)
    margin = trials.fields["eps"] - 0.5 * eps_star
    return Margins(margin, np.full_like(margin, tol.allowance(1.0)), np.ones_like(margin))


def _cond11_single(trials, tol):
    linear_map, eps = _map_of(trials)
    return _one(eps - min_eps_condition_11(linear_map).eps_min, tol.allowance(1.0), 1.0)


def _cond13_batch(trials, tol):
    op2, co2, _ = _map_profile(trials)
    co, op = np.sqrt(co2), np.sqrt(op2)
    eta2 = (co + trials.fields["eta_frac"] * (op - co)) ** 2
    alpha, beta = _bound_factors(trials.fields["eps"])
    return Margins(np.minimum(co2 - alpha * eta2, beta * eta2 - op2), tol.allowance(op2), op2)


def _cond13_single(trials, tol):
    linear_map, eps = _map_of(trials)
    prof = profile(linear_map)
    eta = prof.co_norm + float(trials.fields["eta_frac"][0]) * (prof.op_norm - prof.co_norm)
    report = check_bounds_13(linear_map, eps, [eta], samples=VERIFY_SAMPLES, tol=tol)[0]
    op2 = prof.op_norm ** 2
    return _one(report.worst_margin, tol.allowance(op2), op2)


def _cond16_batch(trials, tol):
    op2, co2, _ = _map_profile(trials)
    _, beta = _bound_factors(trials.fields["eps"])
    return Margins(beta * co2 - op2, tol.allowance(op2), op2)


def _cond16_single(trials, tol):
    linear_map, eps = _map_of(trials)
    prof = profile(linear_map)
    _, beta = _bound_factors(eps)
    op2 = prof.op_norm ** 2
    return _one(beta * prof.co_norm ** 2 - op2, tol.allowance(op2), op2)


def _cond17_batch(trials, tol):
    op2, co2, _ = _map_profile(trials)
    _, beta = _bound_factors(trials.fields["eps"])
    return Margins(beta - op2 / co2, tol.allowance(beta), beta)


def _cond17_single(trials, tol):
    linear_map, eps = _map_of(trials)
    report = check_condition_17(linear_map, eps, samples=VERIFY_SAMPLES, tol=tol)
    return _one(report.bound - report.worst_ratio, tol.allowance(report.bound), report.bound)


# Registre

Leg = Tuple[Optional[Check], Check]


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    legs: Tuple[Leg, ...]
    sampler: Sampler
    default_trials: int
    universe: ClaimUniverse = field(default_factory=ClaimUniverse)
    refinable: bool = True

    def info(self) -> ClaimInfo:
        return ClaimInfo(
            id=self.id,
            statement=self.statement,
            default_trials=self.default_trials,
            legs=len(self.legs),
            refinable=self.refinable,
        )


def _both(a: Check, b: Check) -> Tuple[Leg, Leg]:
    return (a, b), (b, a)


def _build_registry() -> Dict[str, Claim]:
    hh_rel = RelationCheck(RelationId.HH_RELATIVE)
    hh_abs = RelationCheck(RelationId.HH_ABSOLUTE)
    swapped = {"x": lambda f: f["y"], "y": lambda f: f["x"]}
    scaled = {"x": lambda f: f["alpha"][:, None] * f["x"], "y": lambda f: f["beta"][:, None] * f["y"]}
    eps_inner_2 = RelationCheck(RelationId.EPS_INNER, eps=lambda f: 2.0 * f["eps"])
    hh_rel_eta = RelationCheck(RelationId.HH_RELATIVE, eps=lambda f: _companion_eta(f["eps"]))

    cond11 = FunctionCheck(_cond11_batch, _cond11_single)
    cond12 = FunctionCheck(_cond12_batch, _cond12_single)
    cond13 = FunctionCheck(_cond13_batch, _cond13_single)
    cond16 = FunctionCheck(_cond16_batch, _cond16_single)
    cond17 = FunctionCheck(_cond17_batch, _cond17_single)

    map_universe = ClaimUniverse(dims=(2, 4))
    small_universe = ClaimUniverse(dims=(2, 4))

    def exact_in(key):
        return RelationCheck(RelationId.HH_EXACT, spec_key=key)

    embedding_conclusion = RelationCheck(RelationId.HH_RELATIVE, spec_key="norm2", eps=lambda f: f["eta"])

    claims = [
        Claim(
            "C1",
            "symétrie : x ε-⊥ y ⇒ y ε-⊥ x pour les relations HH-I relative et absolue",
            ((hh_rel, RelationCheck(RelationId.HH_RELATIVE, **swapped)),
             (hh_abs, RelationCheck(RelationId.HH_ABSOLUTE, **swapped))),
            _pair_sampler(ALL_FAMILIES), 100_000,
        ),
        Claim(
            "C2",
            "homogénéité de la relation HH-I absolue (préhilbertien) : x ⊥ᵉ y ⇒ αx ⊥ᵉ βy",
            ((hh_abs, RelationCheck(RelationId.HH_ABSOLUTE, **scaled)),),
            _pair_sampler(IP_FAMILIES, scales=True), 100_000,
        ),
        Claim(
            "C2-lp",
            "homogénéité de la relation HH-I absolue dans ℓp : x ⊥ᵉ y ⇒ αx ⊥ᵉ βy",
            ((hh_abs, RelationCheck(RelationId.HH_ABSOLUTE, **scaled)),),
            _pair_sampler(LP_FAMILIES, scales=True), 20_000,
        ),
        Claim(
            "C3",
            "homogénéité de la relation HH-I relative : x ᵉ⊥ y ⇒ αx ᵉ⊥ βy",
            ((hh_rel, RelationCheck(RelationId.HH_RELATIVE, **scaled)),),
            _pair_sampler(IP_FAMILIES, scales=True), 100_000,
        ),
        Claim(
            "C4",
            "préhilbertien : x ⊥ᵉ_HH-I y ⇔ |⟨x, y⟩| ≤ ε‖x‖‖y‖",
            _both(hh_abs, RelationCheck(RelationId.EPS_INNER)),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C5",
            "préhilbertien : x ᵉ⊥_HH-I y ⇔ |⟨x, y⟩| ≤ ε/(1+ε²)·(‖x‖² + ‖y‖²)",
            _both(hh_rel, _threshold_check(lambda e: e / (1.0 + e ** 2))),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C5-closed-form",
            "préhilbertien : x ᵉ⊥_HH-I y ⇔ |⟨x, y⟩| ≤ ε·(‖x‖² + ‖y‖²)",
            _both(hh_rel, _threshold_check(lambda e: e)),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C6",
            "g envoie les couples HH-I orthogonaux sur des couples ε-HH-I orthogonaux ⇒ "
            "(1−ε)/(1+ε)·‖g‖²‖x‖² ≤ ‖gx‖² ≤ (1+ε)/(1−ε)·[g]²‖x‖²",
            ((cond11, cond12),),
            _map_sampler(), 100_000, map_universe,
        ),
        Claim(
            "C7",
            "bornes en ‖g‖ et [g] ⇒ préservation ε-HH-I et bornes en η pour tout η ∈ [[g], ‖g‖]",
            ((cond12, cond11), (cond12, cond13)),
            _map_sampler(), 100_000, map_universe,
        ),
        Claim(
            "C8",
            "bornes en ‖g‖ et [g] ⇔ ‖g‖² ≤ (1+ε)/(1−ε)·[g]² ⇔ ‖gx‖²‖y‖² ≤ (1+ε)/(1−ε)·‖gy‖²‖x‖²",
            _both(cond12, cond16) + _both(cond12, cond17),
            _map_sampler(), 100_000, map_universe,
        ),
        Claim(
            "C9",
            "x ⊥_HH-I y pour ‖·‖₁ ⇒ x ᵑ⊥_HH-I y pour ‖·‖₂, η = (M−m)/(M+m)",
            ((exact_in("norm1"), embedding_conclusion),),
            _embedding_sampler("eta"), 5_000, small_universe, refinable=False,
        ),
        Claim(
            "C9-squared",
            "x ⊥_HH-I y pour ‖·‖₁ ⇒ x ᵑ⊥_HH-I y pour ‖·‖₂, η = (M²−m²)/(M²+m²)",
            ((exact_in("norm1"), embedding_conclusion),),
            _embedding_sampler("eta_squared"), 5_000, small_universe, refinable=False,
        ),
        Claim(
            "C10",
            "min sur β ≠ 0 de ‖x/β‖² + ‖βy‖² = 2‖x‖‖y‖",
            ((None, FunctionCheck(_beta_batch, _beta_single)),),
            _pair_sampler(ALL_FAMILIES), 100_000,
        ),
        Claim(
            "C11-forward",
            "x ᵉ⊥_HH-I y ⇒ x ⊥^δ y avec δ = 2ε",
            ((hh_rel, eps_inner_2),),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C11-converse",
            "x ⊥^δ y avec δ = 2ε ⇒ x ᵉ⊥_HH-I y",
            ((eps_inner_2, hh_rel),),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C12-forward",
            "x ⊥ᵉ_HH-I y ⇒ x ᵑ⊥_HH-I y avec η = (1 − √(1−ε²))/ε",
            ((hh_abs, hh_rel_eta),),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C12-reverse",
            "x ᵑ⊥_HH-I y ⇒ x ⊥ᵉ_HH-I y avec η = (1 − √(1−ε²))/ε",
            ((hh_rel_eta, hh_abs),),
            _pair_sampler(IP_FAMILIES), 100_000,
        ),
        Claim(
            "C13-scaled",
            "‖·‖₂ = η‖·‖₁ ⇒ ⊥_HH-I pour ‖·‖₁ = ⊥_HH-I pour ‖·‖₂",
            _both(exact_in("spec1"), exact_in("spec2")),
            _equal_norms_sampler(), 20_000, small_universe, refinable=False,
        ),
        Claim(
            "C13-linf",
            "⊥_HH-I dans ℓ2 = ⊥_HH-I dans ℓ∞",
            _both(exact_in("spec1"), exact_in("spec2")),
            _equal_norms_sampler((LP2, LpNormSpec(p=math.inf))), 5_000, small_universe, refinable=False,
        ),
    ]
    return {claim.id: claim for claim in claims}


# Évaluation des lots

@dataclass
class _Evaluation:
    premise_ok: np.ndarray
    relative: np.ndarray
    premise_margin: np.ndarray
    conclusion_margin: np.ndarray
    conclusion_allowance: np.ndarray

    @property
    def violated(self) -> np.ndarray:
        return self.premise_ok & (self.relative < 0)

    def witness(self, trials: Trials, i: int, trial_index: int) -> Witness:
        return Witness(
            trial_index=trial_index,
            payload=trials.payload(i),
            premise_margin=float(self.premise_margin[i]),
            conclusion_margin=float(self.conclusion_margin[i]),
            conclusion_allowance=float(self.conclusion_allowance[i]),
            relative_margin=float(self.relative[i]),
        )


def _evaluate(claim: Claim, trials: Trials, tol: Tolerance, single: bool = False,
              relaxed: bool = False) -> _Evaluation:
    """
    Marges de chaque implication ; pour chaque essai, l'implication de plus petite
    marge relative (marge + tolérance)/échelle parmi celles dont la prémisse tient.
    Sans prémisse, la marge de prémisse rapportée vaut 0.
    """
    B = trials.size
    hit = np.zeros(B, dtype=bool)
    relative = np.full(B, np.inf)
    premise_margin = np.zeros(B)
    conclusion_margin = np.zeros(B)
    conclusion_allowance = np.zeros(B)

    for premise, conclusion in claim.legs:
        if premise is None:
            ok = np.ones(B, dtype=bool)
            p_margin = np.zeros(B)
        else:
            p = premise.single(trials, tol) if single else premise.batch(trials, tol)
            floor = -p.allowance if (premise.exact or relaxed) else 0.0
            ok = p.margin >= floor
            p_margin = p.margin
        rows = np.flatnonzero(ok)
        if not rows.size:
            continue
        sub = trials if rows.size == B else trials.take(rows)
        c = conclusion.single(sub, tol) if single else conclusion.batch(sub, tol)
        rel = (c.margin + c.allowance) / np.where(c.scale > 0, c.scale, 1.0)
        better = rel < relative[rows]
        idx = rows[better]
        relative[idx] = rel[better]
        premise_margin[idx] = p_margin[idx]
        conclusion_margin[idx] = c.margin[better]
        conclusion_allowance[idx] = c.allowance[better]
        hit |= ok

    return _Evaluation(hit, relative, premise_margin, conclusion_margin, conclusion_allowance)


@dataclass(order=True)
class _Candidate:
    relative: float
    index: int
    trials: Trials = field(compare=False)
    witness: Witness = field(compare=False)


@dataclass
class _BatchResult:
    trials: int
    premise_hits: int
    violations: int
    candidates: List[_Candidate]


def _run_batch(claim: Claim, universe: ClaimUniverse, seed: int, index: int, size: int,
               full: int, tol: Tolerance) -> _BatchResult:
    rng = np.random.default_rng(np.random.SeedSequence([seed, stable_hash(claim.id), index]))
    trials = claim.sampler(rng, full, size, universe)
    ev = _evaluate(claim, trials, tol)
    rows = np.flatnonzero(ev.premise_ok)
    rows = rows[np.argsort(ev.relative[rows], kind="stable")][:REFINE_CANDIDATES]
    candidates = [
        _Candidate(float(ev.relative[i]), index * full + int(i), trials.take([i]),
                   ev.witness(trials, int(i), index * full + int(i)))
        for i in rows
    ]
    return _BatchResult(size, int(ev.premise_ok.sum()), int(ev.violated.sum()), candidates)


def _perturb(fields: Dict[str, np.ndarray], rng: np.random.Generator, size: int,
             sigma: float) -> Dict[str, np.ndarray]:
    out = {}
    for key, value in fields.items():
        base = np.repeat(value, size, axis=0)
        noise = rng.standard_normal(base.shape)
        if key in FIELD_BOUNDS:
            lo, hi = FIELD_BOUNDS[key]
            out[key] = np.clip(base + sigma * (hi - lo) * noise, lo, hi)
        elif key in SCALE_FIELDS:
            out[key] = base * np.exp(sigma * noise)
        else:
            spread = float(np.sqrt(np.mean(value ** 2))) or 1.0
            out[key] = base + sigma * spread * noise
    return out


class ClaimService:
    """
    Registre des assertions et exécution des campagnes d'audit
    """

    def __init__(self, batch_size: Optional[int] = None, workers: Optional[int] = None):
        self.batch_size = batch_size or get_env_int("ORTHO_CLAIM_BATCH", DEFAULT_BATCH)
        self.workers = workers or get_env_int("ORTHO_WORKERS", 1)
        self.claims = _build_registry()
        logger.info(f"✅ Registre des assertions : {len(self.claims)} entrées")

    def list_claims(self) -> List[ClaimInfo]:
        return [claim.info() for claim in self.claims.values()]

    def get_claim(self, claim_id: str) -> Claim:
        try:
            return self.claims[claim_id]
        except KeyError:
            raise UnknownClaimError(f"Assertion inconnue : {claim_id} (attendu : {', '.join(self.claims)})")

    def run_claim(self, spec: ClaimSpec, workers: Optional[int] = None) -> ClaimReport:
        """
        Auditer une assertion du registre

        Args:
            spec: Identifiant, univers, budget, graine et mode
            workers: Nombre de lots évalués en parallèle (défaut : ORTHO_WORKERS)

        Returns:
            ClaimReport ; un statut counterexample porte toujours un témoin revérifié
        """
        return self._run(self.get_claim(spec.id), spec, workers)

    def run_claims(self, ids: Optional[Sequence[str]] = None, seed: int = 0,
                   trials: Optional[int] = None, workers: Optional[int] = None) -> List[ClaimReport]:
        """Auditer plusieurs assertions (toutes par défaut), dans l'ordre du registre si ids est absent"""
        ids = list(ids) if ids else list(self.claims)
        return [self.run_claim(ClaimSpec(id=claim_id, seed=seed, trials=trials), workers) for claim_id in ids]

    def verify_witness(self, claim_id: str, witness: Witness) -> WitnessCheck:
        """Réévaluer un témoin par la voie scalaire après aller-retour JSON, marges recalculées comprises"""
        return self._verify(self.get_claim(claim_id), witness)

    def search_counterexample(
        self,
        premise,
        conclusion,
        premise_eps: Optional[float] = None,
        conclusion_eps: Optional[float] = None,
        universe: Optional[ClaimUniverse] = None,
        budget: int = DEFAULT_SEARCH_BUDGET,
        seed: int = 0,
    ) -> Optional[Witness]:
        """
        Chercher un couple satisfaisant la prémisse mais pas la conclusion

        Args:
            premise, conclusion: Identifiants de relations
            premise_eps, conclusion_eps: ε fixés (None : ε tiré dans l'univers)
            universe: Univers d'échantillonnage (défaut : normes de type produit scalaire)
            budget: Nombre d'essais
            seed: Graine

        Returns:
            Témoin revérifié, ou None si aucun contre-exemple n'a été trouvé
        """
        premise = parse_relation(premise)
        conclusion = parse_relation(conclusion)
        claim = Claim(
            f"search:{premise.value}=>{conclusion.value}",
            f"{premise.value} ⇒ {conclusion.value}",
            ((RelationCheck(premise, eps=None if premise_eps is None else _const(premise_eps)),
              RelationCheck(conclusion, eps=None if conclusion_eps is None else _const(conclusion_eps))),),
            _pair_sampler(IP_FAMILIES),
            budget,
            universe or ClaimUniverse(),
        )
        report = self._run(claim, ClaimSpec(id=claim.id, trials=budget, seed=seed))
        return report.worst_witness if report.status is ClaimStatus.COUNTEREXAMPLE else None

    def _verify(self, claim: Claim, witness: Witness) -> WitnessCheck:
        payload = json.loads(json.dumps(witness.payload))
        try:
            ev = _evaluate(claim, Trials.from_payload(payload), get_default_tolerance(), single=True, relaxed=True)
        except (OrthogonalityError, ConvergenceError) as e:
            logger.warning(f"⚠️ Témoin non réévaluable pour {claim.id} : {e}")
            return WitnessCheck(verified=False, premise_holds=False, error=str(e))
        if not ev.premise_ok[0]:
            return WitnessCheck(verified=False, premise_holds=False)
        return WitnessCheck(
            verified=bool(ev.violated[0]),
            premise_holds=True,
            premise_margin=float(ev.premise_margin[0]),
            conclusion_margin=float(ev.conclusion_margin[0]),
            conclusion_allowance=float(ev.conclusion_allowance[0]),
            relative_margin=float(ev.relative[0]),
        )

    def _refine(self, claim: Claim, candidates: List[_Candidate], seed: int, stage: int,
                tol: Tolerance) -> Optional[_Candidate]:
        """Montée locale aléatoire depuis les meilleurs candidats d'un préfixe de lots"""
        rng = np.random.default_rng(np.random.SeedSequence([seed, stable_hash(f"{claim.id}:refine"), stage]))
        best: Optional[_Candidate] = None
        for start in candidates[:REFINE_STARTS]:
            current, value, witness = start.trials, start.relative, None
            sigma = 0.1
            for _ in range(REFINE_STEPS):
                proposal = Trials(current.context, _perturb(current.fields, rng, REFINE_POPULATION, sigma))
                try:
                    ev = _evaluate(claim, proposal, tol)
                except (OrthogonalityError, ConvergenceError):
                    sigma *= 0.5
                    continue
                k = int(np.argmin(ev.relative))
                if ev.relative[k] < value:
                    current, value = proposal.take([k]), float(ev.relative[k])
                    witness = ev.witness(proposal, k, -1)
                else:
                    sigma *= 0.5
            if witness is not None and (best is None or value < best.relative):
                best = _Candidate(value, -1, current, witness)
        return best

    def _refine_prefixes(self, claim: Claim, universe: ClaimUniverse, seed: int, sizes: List[int],
                         results: List[_BatchResult], tol: Tolerance) -> List[_Candidate]:
        """
        Raffiner depuis les préfixes de 1, 2, 4, ... lots complets

        Chaque préfixe ne dépend que de la graine : un témoin raffiné à un budget
        donné est retrouvé à tout budget supérieur. Le lot 0 est toujours pris entier.
        """
        full = self.batch_size
        first = results[0] if sizes[0] == full else _run_batch(claim, universe, seed, 0, full, full, tol)
        complete = sum(1 for size in sizes if size == full)
        refined: List[_Candidate] = []
        stage, width = 0, 1
        while stage == 0 or width <= complete:
            batches = [first] + results[1:width]
            starts = sorted(c for r in batches for c in r.candidates)
            best = self._refine(claim, starts, seed, stage, tol)
            if best is not None:
                refined.append(best)
            stage, width = stage + 1, width * 2
        return refined

    def _run(self, claim: Claim, spec: ClaimSpec, workers: Optional[int] = None) -> ClaimReport:
        universe = spec.universe or claim.universe
        budget = spec.trials or claim.default_trials
        full = self.batch_size
        if spec.mode is ClaimMode.OPTIMIZE:
            budget = min(budget, full)
        tol = get_default_tolerance()
        workers = workers or self.workers
        started = time.perf_counter()
        logger.info(f"🚀 Audit {claim.id} : {budget} essais, graine {spec.seed}, mode {spec.mode.value}")

        sizes = [min(full, budget - k * full) for k in range(math.ceil(budget / full))]

        def job(k: int) -> _BatchResult:
            return _run_batch(claim, universe, spec.seed, k, sizes[k], full, tol)

        if workers > 1 and len(sizes) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                results = list(executor.map(job, range(len(sizes))))
        else:
            results = [job(k) for k in range(len(sizes))]

        premise_hits = sum(r.premise_hits for r in results)
        violations = sum(r.violations for r in results)
        pool = sorted(c for r in results for c in r.candidates)[:REFINE_CANDIDATES]
        notes: List[str] = []

        if spec.mode is not ClaimMode.SAMPLE and claim.refinable and pool:
            refined = self._refine_prefixes(claim, universe, spec.seed, sizes, results, tol)
            found = sum(1 for c in refined if c.relative < 0)
            if violations == 0 and found:
                violations += found
                notes.append("violation trouvée par raffinement local")
            pool = sorted(pool + refined)

        witness: Optional[Witness] = pool[0].witness if pool else None
        if premise_hits == 0:
            status = ClaimStatus.INCONCLUSIVE
            notes.append("aucun essai ne satisfait la prémisse")
        elif violations == 0:
            status = ClaimStatus.CONFIRMED
        else:
            status = ClaimStatus.INCONCLUSIVE
            for candidate in pool:
                if candidate.relative < 0 and self._verify(claim, candidate.witness).verified:
                    status, witness = ClaimStatus.COUNTEREXAMPLE, candidate.witness
                    notes.append("témoin revérifié par la voie scalaire")
                    break
            else:
                notes.append("aucun témoin confirmé par la voie scalaire")

        elapsed = time.perf_counter() - started
        logger.info(f"📊 {claim.id} : {status.value} ({premise_hits} prémisses, {violations} violations, {elapsed:.2f}s)")
        return ClaimReport(
            id=claim.id,
            statement=claim.statement,
            status=status,
            trials_run=sum(sizes),
            premise_hits=premise_hits,
            violations=violations,
            worst_witness=witness,
            elapsed=elapsed,
            seed=spec.seed,
            notes=notes,
        )


_claim_service_instance: Optional[ClaimService] = None


def get_claim_service() -> ClaimService:
    """Obtenir l'instance du service d'audit (singleton)"""
    global _claim_service_instance
    if _claim_service_instance is None:
        _claim_service_instance = ClaimService()
    return _claim_service_instance
