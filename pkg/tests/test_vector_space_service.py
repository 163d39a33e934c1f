import math

import numpy as np
import pytest

from src.exceptions import (
    DimensionMismatchError,
    InvalidNormSpecError,
    InvalidVectorError,
    NotInnerProductError,
)
from src.models.vector_model import InnerProductNormSpec, LpNormSpec, Tolerance, WeightedLpNormSpec, describe_norm_spec
from src.services.vector_space_service import (
    as_vector,
    gram_of,
    inner,
    inner_batch,
    is_inner_product_type,
    norm,
    norm_batch,
    scaled_spec,
    validate_spec,
)


class TestNormes:

    def test_normes_lp_usuelles(self, lp1, lp2, lpinf):
        assert norm(lp2, [3, 4]) == pytest.approx(5.0)
        assert norm(lp1, [3, -4]) == pytest.approx(7.0)
        assert norm(lpinf, [3, -4]) == pytest.approx(4.0)
        assert norm(LpNormSpec(p=3), [1, 1]) == pytest.approx(2 ** (1 / 3))

    def test_norme_ponderee(self):
        assert norm(WeightedLpNormSpec(p=2, weights=[1.0, 4.0]), [1, 1]) == pytest.approx(math.sqrt(5))
        assert norm(WeightedLpNormSpec(p="inf", weights=[1.0, 4.0]), [3, 1]) == pytest.approx(4.0)

    def test_norme_produit_scalaire(self):
        spec = InnerProductNormSpec(gram=[[2.0, 0.0], [0.0, 1.0]])
        assert norm(spec, [1, 1]) == pytest.approx(math.sqrt(3))

    def test_lp_sans_debordement(self):
        assert norm(LpNormSpec(p=3), [1e200, 1e200]) == pytest.approx(1e200 * 2 ** (1 / 3))

    def test_homogeneite_et_inegalite_triangulaire(self, all_specs, rng):
        X = rng.standard_normal((200, 2))
        Y = rng.standard_normal((200, 2))
        lam = rng.uniform(-5, 5, 200)
        for spec in all_specs:
            nx = norm_batch(spec, X)
            assert np.allclose(norm_batch(spec, lam[:, None] * X), np.abs(lam) * nx, rtol=1e-12)
            assert np.all(norm_batch(spec, X + Y) <= nx + norm_batch(spec, Y) + 1e-12)

    def test_dimension_incompatible(self):
        with pytest.raises(DimensionMismatchError):
            norm(WeightedLpNormSpec(p=2, weights=[1.0, 2.0]), [1, 2, 3])

    def test_vecteur_non_fini(self, lp2):
        with pytest.raises(InvalidVectorError):
            as_vector([1.0, float("nan")])
        with pytest.raises(InvalidVectorError):
            norm(lp2, [])


class TestSpecifications:

    def test_p_inferieur_a_un(self):
        assert validate_spec(LpNormSpec(p=0.5)) == "p < 1"

    def test_gram_non_definie_positive(self):
        spec = InnerProductNormSpec(gram=[[1.0, 2.0], [2.0, 1.0]])
        assert validate_spec(spec) == "not positive definite"

    def test_gram_non_symetrique(self):
        spec = InnerProductNormSpec(gram=[[1.0, 0.5], [0.0, 1.0]])
        assert validate_spec(spec) == "gram is not symmetric"

    def test_poids_negatifs(self):
        with pytest.raises(InvalidNormSpecError):
            norm(WeightedLpNormSpec(p=2, weights=[1.0, -1.0]), [1, 1])

    def test_type_produit_scalaire(self, lp2, lpinf, ip_spec):
        assert is_inner_product_type(lp2)
        assert is_inner_product_type(ip_spec)
        assert is_inner_product_type(WeightedLpNormSpec(p=2, weights=[1.0, 3.0]))
        assert not is_inner_product_type(lpinf)

    def test_gram_of(self, lp2):
        assert np.array_equal(gram_of(lp2, 3), np.eye(3))
        assert np.array_equal(gram_of(WeightedLpNormSpec(p=2, weights=[1.0, 3.0]), 2), np.diag([1.0, 3.0]))
        with pytest.raises(NotInnerProductError):
            gram_of(LpNormSpec(p=3), 2)

    def test_produit_scalaire(self, ip_spec):
        assert inner(ip_spec, [1, 0], [0, 1]) == pytest.approx(0.5)
        assert inner([[1.0, 0.0], [0.0, 1.0]], [1, 2], [3, 4]) == pytest.approx(11.0)

    def test_libelle_mini_syntaxe(self):
        assert describe_norm_spec(LpNormSpec(p="inf")) == "lp:inf"
        assert describe_norm_spec(WeightedLpNormSpec(p=2, weights=[1.0, 4.0])) == "wlp:2:1,4"

    def test_infini_serialise(self):
        assert LpNormSpec(p="inf").model_dump(mode="json") == {"kind": "lp", "p": "inf"}


class TestNormeDilatee:

    @pytest.mark.parametrize("spec", [
        LpNormSpec(p=2),
        LpNormSpec(p=1),
        LpNormSpec(p=math.inf),
        WeightedLpNormSpec(p=3, weights=[1.0, 2.0]),
        InnerProductNormSpec(gram=[[2.0, 0.5], [0.5, 1.0]]),
    ])
    def test_facteur_eta(self, spec, rng):
        X = rng.standard_normal((50, 2))
        scaled = scaled_spec(spec, 2.5, 2)
        assert np.allclose(norm_batch(scaled, X), 2.5 * norm_batch(spec, X), rtol=1e-12)

    def test_facteur_invalide(self, lp2):
        with pytest.raises(InvalidNormSpecError):
            scaled_spec(lp2, 0.0, 2)


class TestTolerance:

    def test_allowance(self):
        tol = Tolerance(abs_tol=1e-12, rel_tol=1e-10)
        assert tol.allowance(0.0) == 1e-12
        assert tol.allowance(100.0) == pytest.approx(1e-8)

    def test_tolerances_nulles_refusees(self):
        with pytest.raises(ValueError):
            Tolerance(abs_tol=0.0, rel_tol=0.0)


class TestIdentitesProduitScalaire:

    def test_loi_du_parallelogramme(self, lp2, ip_spec, rng):
        for spec in (lp2, ip_spec, WeightedLpNormSpec(p=2, weights=[1.0, 4.0])):
            X = rng.standard_normal((500, 2))
            Y = rng.standard_normal((500, 2))
            lhs = norm_batch(spec, X + Y) ** 2 + norm_batch(spec, X - Y) ** 2
            rhs = 2 * norm_batch(spec, X) ** 2 + 2 * norm_batch(spec, Y) ** 2
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_parallelogramme_faux_dans_l1(self, lp1):
        x, y = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        lhs = norm(lp1, x + y) ** 2 + norm(lp1, x - y) ** 2
        rhs = 2 * norm(lp1, x) ** 2 + 2 * norm(lp1, y) ** 2
        assert lhs == pytest.approx(8.0)
        assert rhs == pytest.approx(4.0)

    def test_cauchy_schwarz(self, ip_spec, rng):
        gram = gram_of(ip_spec, 2)
        X = rng.standard_normal((1000, 2))
        Y = rng.standard_normal((1000, 2)) * rng.uniform(0.01, 100, (1000, 1))
        lhs = np.abs(inner_batch(gram, X, Y))
        rhs = norm_batch(ip_spec, X) * norm_batch(ip_spec, Y)
        assert np.all(lhs <= rhs * (1 + 1e-12))
        # égalité pour des vecteurs colinéaires
        assert abs(inner(ip_spec, [1, 2], [-2, -4])) == pytest.approx(norm(ip_spec, [1, 2]) * norm(ip_spec, [-2, -4]))
