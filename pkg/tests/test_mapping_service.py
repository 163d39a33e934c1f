import math

import numpy as np
import pytest

from src.exceptions import DimensionMismatchError, InvalidEpsilonError
from src.models.mapping_model import LinearMap
from src.models.vector_model import InnerProductNormSpec, LpNormSpec, WeightedLpNormSpec
from src.services.mapping_service import (
    analyze,
    check_bounds_12,
    check_bounds_13,
    check_condition_17,
    jacobi_eigh,
    min_eps_condition_11,
    min_eps_condition_14,
    profile,
    remark_isometry_check,
    two_norm_embedding,
)
from src.services.vector_space_service import norm

PHI = (1 + math.sqrt(5)) / 2


class TestProfil:

    def test_diagonale(self, diag_map):
        prof = profile(diag_map)
        assert prof.method == "exact-ip"
        assert prof.op_norm == pytest.approx(2.0, abs=1e-12)
        assert prof.co_norm == pytest.approx(1.0, abs=1e-12)
        assert prof.eps_star == pytest.approx(0.6, abs=1e-12)
        assert prof.kappa == pytest.approx(2.0)
        assert abs(prof.cert_max[0]) == pytest.approx(1.0)
        assert abs(prof.cert_min[1]) == pytest.approx(1.0)

    def test_cisaillement_nombre_d_or(self):
        prof = profile(LinearMap.of([[1.0, 1.0], [0.0, 1.0]]))
        assert prof.op_norm == pytest.approx(PHI, abs=1e-10)
        assert prof.co_norm == pytest.approx(1 / PHI, abs=1e-10)

    def test_identite(self):
        prof = profile(LinearMap.of(np.eye(3)))
        assert prof.eps_star == pytest.approx(0.0, abs=1e-12)
        assert not prof.unbounded

    def test_application_singuliere(self):
        prof = profile(LinearMap.of([[1.0, 0.0], [0.0, 0.0]]))
        assert prof.unbounded
        assert prof.co_norm == 0.0
        assert prof.eps_star == 1.0
        assert prof.model_dump(mode="json")["kappa"] == "inf"

    def test_profil_estime_linf(self, lpinf):
        prof = profile(LinearMap.of([[2.0, 0.0], [0.0, 1.0]], lpinf, lpinf))
        assert prof.method == "estimated"
        assert prof.op_norm == pytest.approx(2.0, rel=1e-9)
        assert prof.co_norm == pytest.approx(1.0, rel=1e-9)

    def test_condition_14(self, diag_map):
        assert min_eps_condition_14(diag_map) == pytest.approx(0.6, abs=1e-8)

    def test_dimension_incompatible(self):
        linear_map = LinearMap.of(np.eye(2), WeightedLpNormSpec(p=2, weights=[1.0, 2.0, 3.0]))
        with pytest.raises(DimensionMismatchError):
            profile(linear_map)


def test_jacobi_contre_numpy(rng):
    A = rng.standard_normal((5, 5))
    S = A + A.T
    w, V = jacobi_eigh(S)
    assert np.allclose(w, np.linalg.eigvalsh(S), atol=1e-10)
    assert np.allclose(V.T @ V, np.eye(5), atol=1e-10)
    assert np.allclose(S @ V, V * w, atol=1e-9)


class TestConditions:

    def test_condition_11_moitie_de_eps_star(self, diag_map):
        result = min_eps_condition_11(diag_map)
        assert result.method == "theta-grid"
        assert not result.approximate
        assert result.eps_min == pytest.approx(0.3, abs=1e-3)

    def test_condition_11_grande_dimension(self):
        result = min_eps_condition_11(LinearMap.of(np.diag([3.0, 2.0, 1.0])))
        assert result.method == "multi-start-ip"
        assert result.eps_min == pytest.approx(0.4, abs=1e-3)

    def test_bornes_12_echouent(self, diag_map):
        report = check_bounds_12(diag_map, 0.3)
        assert not report.passes
        assert report.worst_margin < 0
        assert abs(report.witness[0]) == pytest.approx(0.0, abs=1e-12)
        assert abs(report.witness[1]) == pytest.approx(1.0)

    def test_bornes_12_passent_au_dela_de_eps_star(self, diag_map):
        report = check_bounds_12(diag_map, 0.7)
        assert report.passes
        assert report.witness is None

    def test_bornes_13_interpolees(self, diag_map):
        reports = check_bounds_13(diag_map, 0.7)
        assert len(reports) == 5
        assert all(r.passes for r in reports)
        assert reports[0].eta == pytest.approx(1.0)
        assert reports[-1].eta == pytest.approx(2.0)

    def test_condition_17(self, diag_map):
        report = check_condition_17(diag_map, 0.5)
        assert not report.passes
        assert report.bound == pytest.approx(3.0)
        assert report.worst_ratio == pytest.approx(4.0)
        assert report.kappa_squared == pytest.approx(4.0)
        assert report.consistent_with_profile
        assert abs(report.witness_x[0]) == pytest.approx(1.0)
        assert abs(report.witness_y[1]) == pytest.approx(1.0)

    def test_condition_17_coherente_au_seuil(self, diag_map):
        assert check_condition_17(diag_map, 0.65).passes

    def test_eps_invalide(self, diag_map):
        with pytest.raises(InvalidEpsilonError):
            check_bounds_12(diag_map, 1.0)


class TestIsometrie:

    def test_multiple_d_isometrie(self):
        report = remark_isometry_check(LinearMap.of(2.0 * np.eye(2)))
        assert report.passes_bounds_12
        assert report.scaled_isometry
        assert report.eta == pytest.approx(2.0)
        assert report.consistent

    def test_non_isometrie(self, diag_map):
        report = remark_isometry_check(diag_map)
        assert not report.passes_bounds_12
        assert not report.scaled_isometry
        assert report.consistent


class TestPlongement:

    def test_l1_vers_l2(self, lp1, lp2):
        constants = two_norm_embedding(lp1, lp2, 2)
        assert constants.method == "analytic"
        assert constants.m == pytest.approx(1 / math.sqrt(2))
        assert constants.M == pytest.approx(1.0)
        assert constants.eta == pytest.approx((1 - 1 / math.sqrt(2)) / (1 + 1 / math.sqrt(2)))
        assert constants.eta_squared == pytest.approx(1 / 3)

    def test_produits_scalaires(self, lp2):
        constants = two_norm_embedding(lp2, WeightedLpNormSpec(p=2, weights=[1.0, 4.0]), 2)
        assert constants.method == "exact-ip"
        assert constants.m == pytest.approx(1.0)
        assert constants.M == pytest.approx(2.0)

    def test_normes_egales(self, lp2):
        constants = two_norm_embedding(lp2, LpNormSpec(p=2), 3)
        assert constants.eta == 0.0


def test_analyse_complete(diag_map):
    analysis = analyze(diag_map, eps=0.3, samples=500)
    assert analysis.profile.eps_star == pytest.approx(0.6)
    assert analysis.min_eps_condition_14 == pytest.approx(0.6)
    assert analysis.condition_11.eps_min == pytest.approx(0.3, abs=1e-3)
    assert not analysis.bounds_12.passes
    assert not analysis.condition_17.passes


def test_analyse_sans_eps(diag_map):
    analysis = analyze(diag_map)
    assert analysis.bounds_12 is None
    assert analysis.condition_17 is None


def application_aleatoire(rng, n, kappa, domain=None, codomain=None):
    """U·diag(σ)·Vᵀ de conditionnement kappa"""
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    sigma = np.linspace(1.0, kappa, n)
    matrix = (U * sigma) @ V.T
    return LinearMap.of(matrix, domain or LpNormSpec(p=2), codomain or LpNormSpec(p=2))


class TestCertificats:

    @pytest.mark.parametrize("domain, codomain", [
        (LpNormSpec(p=2), LpNormSpec(p=2)),
        (InnerProductNormSpec(gram=[[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 3.0]]), LpNormSpec(p=2)),
        (LpNormSpec(p=math.inf), LpNormSpec(p=1)),
    ])
    def test_certificats_realisent_les_extremums(self, domain, codomain, rng):
        linear_map = application_aleatoire(rng, 3, 2.5, domain, codomain)
        prof = profile(linear_map)
        g = np.asarray(linear_map.matrix)
        assert norm(domain, prof.cert_max) == pytest.approx(1.0, rel=1e-8)
        assert norm(domain, prof.cert_min) == pytest.approx(1.0, rel=1e-8)
        assert norm(codomain, g @ prof.cert_max) == pytest.approx(prof.op_norm, rel=1e-8)
        assert norm(codomain, g @ prof.cert_min) == pytest.approx(prof.co_norm, rel=1e-8)

    @pytest.mark.parametrize("lam", [-3.0, 0.25, 7.0])
    def test_profil_homogene(self, lam, rng):
        linear_map = application_aleatoire(rng, 3, 2.0)
        scaled = LinearMap.of(lam * np.asarray(linear_map.matrix))
        base, other = profile(linear_map), profile(scaled)
        assert other.op_norm == pytest.approx(abs(lam) * base.op_norm, rel=1e-10)
        assert other.co_norm == pytest.approx(abs(lam) * base.co_norm, rel=1e-10)
        assert other.eps_star == pytest.approx(base.eps_star, abs=1e-12)

    def test_profil_homogene_norme_estimee(self, lpinf):
        linear_map = LinearMap.of([[2.0, 1.0], [0.0, 1.0]], lpinf, lpinf)
        scaled = LinearMap.of([[-4.0, -2.0], [0.0, -2.0]], lpinf, lpinf)
        base, other = profile(linear_map), profile(scaled)
        assert other.op_norm == pytest.approx(2.0 * base.op_norm, rel=1e-6)
        assert other.co_norm == pytest.approx(2.0 * base.co_norm, rel=1e-6)
        assert other.eps_star == pytest.approx(base.eps_star, abs=1e-6)


class TestSeuilEpsStar:

    DELTA = 1e-8

    @pytest.mark.parametrize("n, kappa", [(2, 1.5), (3, 2.0), (4, 3.0)])
    def test_chaine_des_seuils(self, n, kappa, rng):
        linear_map = application_aleatoire(rng, n, kappa)
        eps_star = profile(linear_map).eps_star
        assert eps_star == pytest.approx((kappa ** 2 - 1) / (kappa ** 2 + 1), abs=1e-8)
        assert min_eps_condition_14(linear_map) == pytest.approx(eps_star, abs=1e-8)
        above, below = eps_star + self.DELTA, eps_star - self.DELTA
        assert check_bounds_12(linear_map, above, samples=300).passes
        assert not check_bounds_12(linear_map, below, samples=300).passes
        assert check_condition_17(linear_map, above, samples=300).passes
        assert not check_condition_17(linear_map, below, samples=300).passes
