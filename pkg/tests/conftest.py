"""
Fixtures partagées : normes usuelles, applications de référence et service d'audit
à petits lots.
"""

import math

import numpy as np
import pytest

from src.models.mapping_model import LinearMap
from src.models.vector_model import InnerProductNormSpec, LpNormSpec, WeightedLpNormSpec
from src.services.claim_service import ClaimService


@pytest.fixture(autouse=True)
def environnement(monkeypatch):
    """Configuration d'environnement figée (la CLI peut surcharger les tolérances)"""
    monkeypatch.setenv("ORTHO_ABS_TOL", "1e-12")
    monkeypatch.setenv("ORTHO_REL_TOL", "1e-10")
    monkeypatch.setenv("ORTHO_SEED", "0")
    monkeypatch.setenv("ORTHO_WORKERS", "1")


@pytest.fixture
def lp2():
    return LpNormSpec(p=2)


@pytest.fixture
def lp1():
    return LpNormSpec(p=1)


@pytest.fixture
def lpinf():
    return LpNormSpec(p=math.inf)


@pytest.fixture
def ip_spec():
    return InnerProductNormSpec(gram=[[2.0, 0.5], [0.5, 1.0]])


@pytest.fixture
def all_specs(lp2, lp1, lpinf, ip_spec):
    """Une norme de chaque famille, en dimension 2"""
    return [
        lp1,
        LpNormSpec(p=1.5),
        lp2,
        LpNormSpec(p=3),
        lpinf,
        WeightedLpNormSpec(p=2, weights=[1.0, 4.0]),
        ip_spec,
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def diag_map():
    """diag(2, 1) dans ℓ2 : ‖g‖ = 2, [g] = 1, ε* = 0.6"""
    return LinearMap.of([[2.0, 0.0], [0.0, 1.0]])


@pytest.fixture
def claim_service():
    return ClaimService(batch_size=500, workers=1)
