import math

import numpy as np
import pytest

from src.exceptions import NotInnerProductError, OrthogonalityError
from src.models.vector_model import InnerProductNormSpec, LpNormSpec
from src.services.hh_integral_service import (
    hh_closed_form_ip,
    hh_minus,
    hh_plus,
    hh_values,
    hh_values_batch,
)
from src.services.vector_space_service import norm, norm_batch


def test_forme_close_base_orthonormee(lp2):
    values = hh_values(lp2, [1, 0], [0, 1])
    assert values.method == "closed-form"
    assert values.i_plus == pytest.approx(2 / 3)
    assert values.i_minus == pytest.approx(2 / 3)
    assert values.gap == pytest.approx(0.0)


def test_forme_close_ecart_et_somme(lp2):
    # ‖x‖² + ‖y‖² = 15, ⟨x, y⟩ = 1
    values = hh_closed_form_ip([[1.0, 0.0], [0.0, 1.0]], [3, 1], [1, -2])
    assert values.i_plus == pytest.approx(16 / 3)
    assert values.i_minus == pytest.approx(14 / 3)
    assert values.gap == pytest.approx(2 / 3)
    assert values.total == pytest.approx(10.0)


def test_linf_par_morceaux(lpinf):
    values = hh_values(lpinf, [1, 0], [0, 1])
    assert values.method == "quadrature"
    assert values.i_plus == pytest.approx(7 / 12, rel=1e-12)
    assert values.i_minus == pytest.approx(7 / 12, rel=1e-12)


def test_l1_base_canonique(lp1):
    assert hh_plus(lp1, [1, 0], [0, 1]) == pytest.approx(1.0, rel=1e-12)
    assert hh_minus(lp1, [1, 0], [0, 1]) == pytest.approx(1.0, rel=1e-12)


def test_quadrature_egale_forme_close(rng):
    # 50 matrices de Gram × 20 couples = 1000 essais
    essais = 0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        A = rng.standard_normal((n, n))
        spec = InnerProductNormSpec(gram=(A @ A.T + n * np.eye(n)).tolist())
        X = rng.standard_normal((20, n))
        Y = rng.standard_normal((20, n))
        quad = hh_values_batch(spec, X, Y, method="quadrature")
        exact = hh_values_batch(spec, X, Y, method="closed-form")
        assert np.all(np.abs(quad.i_plus - exact.i_plus) <= 1e-9 * (1 + np.abs(exact.i_plus)))
        assert np.all(np.abs(quad.i_minus - exact.i_minus) <= 1e-9 * (1 + np.abs(exact.i_minus)))
        essais += len(X)
    assert essais == 1000


def test_symetrie_signe_et_echelle(all_specs, rng):
    for spec in all_specs:
        for _ in range(20):
            x, y = rng.standard_normal(2), rng.standard_normal(2)
            lam = float(rng.uniform(0.1, 10))
            plus = hh_plus(spec, x, y)
            assert hh_plus(spec, y, x) == pytest.approx(plus, rel=1e-9)
            assert hh_plus(spec, x, -y) == pytest.approx(hh_minus(spec, x, y), rel=1e-9)
            assert hh_plus(spec, lam * x, lam * y) == pytest.approx(lam ** 2 * plus, rel=1e-9)


def test_symetrie_signe_et_echelle_mille_couples(all_specs, rng):
    for spec in all_specs:
        X = rng.standard_normal((1000, 2))
        Y = rng.standard_normal((1000, 2))
        lam = rng.uniform(0.1, 10, 1000)
        base = hh_values_batch(spec, X, Y)
        assert np.allclose(hh_values_batch(spec, Y, X).i_plus, base.i_plus, rtol=1e-9, atol=0)
        assert np.allclose(hh_values_batch(spec, X, -Y).i_plus, base.i_minus, rtol=1e-9, atol=0)
        scaled = hh_values_batch(spec, lam[:, None] * X, lam[:, None] * Y)
        assert np.allclose(scaled.i_plus, lam ** 2 * base.i_plus, rtol=1e-9, atol=0)


def test_encadrement_hermite_hadamard(all_specs, rng):
    # ‖(x+y)/2‖² ≤ I₊ ≤ (‖x‖² + ‖y‖²)/2 par convexité
    for spec in all_specs:
        x, y = rng.standard_normal(2), rng.standard_normal(2)
        value = hh_plus(spec, x, y)
        assert norm(spec, (x + y) / 2) ** 2 <= value + 1e-12
        assert value <= (norm(spec, x) ** 2 + norm(spec, y) ** 2) / 2 + 1e-12


def test_couple_nul(lp2):
    values = hh_values(lp2, [0, 0], [0, 0])
    assert values.total == 0.0
    assert values.gap == 0.0


def test_forme_close_refusee_hors_produit_scalaire():
    with pytest.raises(NotInnerProductError):
        hh_values(LpNormSpec(p=3), [1, 0], [0, 1], method="closed-form")


def test_methode_inconnue(lp2):
    with pytest.raises(OrthogonalityError):
        hh_values(lp2, [1, 0], [0, 1], method="simpson")


def test_erreur_estimee_bornee(rng):
    spec = LpNormSpec(p=1.5)
    batch = hh_values_batch(spec, rng.standard_normal((100, 3)), rng.standard_normal((100, 3)))
    assert np.all(batch.est_abs_error <= 1e-9 * (1 + batch.total))
    assert math.isfinite(float(batch.total.sum()))


def test_borne_superieure_fine(all_specs, rng):
    # ‖(1−t)x + ty‖ ≤ (1−t)‖x‖ + t‖y‖, intégré : I₊ ≤ (‖x‖² + ‖y‖² + ‖x‖‖y‖)/3
    for spec in all_specs:
        X = rng.standard_normal((1000, 2))
        Y = rng.standard_normal((1000, 2)) * rng.uniform(0.01, 100, (1000, 1))
        batch = hh_values_batch(spec, X, Y)
        nx = norm_batch(spec, X)
        ny = norm_batch(spec, Y)
        bound = (nx ** 2 + ny ** 2 + nx * ny) / 3
        assert np.all(batch.i_plus <= bound + 1e-12 * (1 + bound) + batch.est_abs_error)
