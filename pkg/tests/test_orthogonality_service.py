import math

import numpy as np
import pytest

from src.exceptions import InvalidEpsilonError, NotInnerProductError, UnknownRelationError
from src.models.orthogonality_model import RelationId
from src.models.vector_model import InnerProductNormSpec, LpNormSpec
from src.services.orthogonality_service import (
    birkhoff,
    chmielinski_birkhoff,
    classic,
    dragomir_birkhoff,
    eps_inner,
    evaluate,
    hh_absolute,
    hh_exact,
    hh_relative,
    iso_additive,
    iso_multiplicative,
    isosceles,
    margins_batch,
)

Y_WITNESS = [0.45, math.sqrt(0.7975)]


class TestRelationsClassiques:

    def test_classique(self, lp2):
        assert classic(lp2, [1, 0], [0, 1]).holds
        assert not classic(lp2, [1, 0], [1, 1]).holds

    def test_classique_exige_produit_scalaire(self, lp1):
        with pytest.raises(NotInnerProductError):
            classic(lp1, [1, 0], [0, 1])

    def test_birkhoff_minimum_sur_la_droite(self, lp2):
        verdict = birkhoff(lp2, [1, 0], [1, 1])
        assert not verdict.holds
        assert verdict.details["t_star"] == pytest.approx(-0.5, abs=1e-6)
        assert verdict.details["min_value"] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
        assert verdict.margin == pytest.approx(1 / math.sqrt(2) - 1, abs=1e-9)

    def test_birkhoff_linf(self, lpinf):
        assert birkhoff(lpinf, [1, 1], [0, 1]).holds

    def test_isocele(self, lp2, lp1):
        assert isosceles(lp2, [1, 1], [1, -1]).holds
        assert isosceles(lp1, [1, 0], [0, 1]).holds
        assert not isosceles(lp2, [1, 0], [1, 1]).holds

    def test_eps_inner(self, lp2):
        verdict = eps_inner(lp2, [2, 0], Y_WITNESS, 0.4)
        assert not verdict.holds
        assert verdict.margin == pytest.approx(-0.1)
        assert eps_inner(lp2, [2, 0], Y_WITNESS, 0.5).holds

    def test_relations_approchees_a_eps_nul(self, lp2, rng):
        x, y = rng.standard_normal(2), rng.standard_normal(2)
        assert dragomir_birkhoff(lp2, x, y, 0.0).holds == birkhoff(lp2, x, y).holds
        assert iso_additive(lp2, [1, 1], [1, -1], 0.0).holds

    def test_birkhoff_approchees_a_eps_un(self, lp1, rng):
        x, y = rng.standard_normal(2), rng.standard_normal(2)
        assert dragomir_birkhoff(lp1, x, y, 1.0).holds
        assert chmielinski_birkhoff(lp1, x, y, 1.0).holds

    def test_iso_multiplicative_degeneree(self, lp2):
        verdict = iso_multiplicative(lp2, [1, 0], [1, 0], 0.5)
        assert verdict.details["degenerate"]


class TestRelationsHH:

    def test_hh_exact_l1(self, lp1):
        verdict = hh_exact(lp1, [1, 0], [0, 1])
        assert verdict.holds
        assert verdict.margin == pytest.approx(0.0, abs=1e-12)

    def test_hh_relative_temoin(self, lp2):
        # total = 10/3, écart = 0.6
        verdict = hh_relative(lp2, [2, 0], Y_WITNESS, 0.15)
        assert not verdict.holds
        assert verdict.margin == pytest.approx(-0.1)
        assert verdict.details["ratio"] == pytest.approx((10 / 3 + 0.6) / (10 / 3 - 0.6))
        assert verdict.details["lower_bound"] == pytest.approx(0.85 / 1.15)

    def test_hh_relative_sans_inner_double(self, lp2):
        # la relation relative à ε = 0.2 ne donne pas |⟨x, y⟩| ≤ 2ε‖x‖‖y‖
        assert hh_relative(lp2, [2, 0], Y_WITNESS, 0.2).margin >= 0.05
        assert eps_inner(lp2, [2, 0], Y_WITNESS, 0.4).margin <= -0.05

    def test_hh_absolute_equivaut_eps_inner(self, rng):
        spec = InnerProductNormSpec(gram=[[2.0, 0.3, 0.0], [0.3, 1.0, 0.1], [0.0, 0.1, 0.5]])
        X = rng.standard_normal((5000, 3))
        Y = rng.standard_normal((5000, 3))
        eps = rng.uniform(0, 1, 5000)
        hh = margins_batch(RelationId.HH_ABSOLUTE, spec, X, Y, eps)
        ref = margins_batch(RelationId.EPS_INNER, spec, X, Y, eps)
        band = np.abs(ref["margin"]) > 1e-8 * (1 + hh["scale"])
        assert np.array_equal(hh["holds"][band], ref["holds"][band])
        assert np.allclose(hh["margin"], (2 / 3) * ref["margin"], atol=1e-12)

    def test_hh_relative_forme_close(self, lp2, rng):
        X = rng.standard_normal((5000, 2))
        Y = rng.standard_normal((5000, 2)) * rng.uniform(0.01, 10, (5000, 1))
        eps = rng.uniform(0, 1, 5000)
        out = margins_batch(RelationId.HH_RELATIVE, lp2, X, Y, eps)
        expected = eps * (X ** 2 + Y ** 2).sum(axis=1) - np.abs((X * Y).sum(axis=1))
        band = np.abs(expected) > 1e-8 * (1 + (X ** 2 + Y ** 2).sum(axis=1))
        assert np.array_equal(out["holds"][band], expected[band] >= 0)

    def test_hh_absolute_symetrique(self, lpinf, rng):
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        assert hh_absolute(lpinf, x, y, 0.3).margin == pytest.approx(hh_absolute(lpinf, y, x, 0.3).margin)

    def test_vecteur_nul_orthogonal(self, lp1):
        verdict = hh_exact(lp1, [0, 0], [1, 2])
        assert verdict.holds
        assert verdict.details["degenerate"]


class TestValidation:

    def test_eps_hors_domaine(self, lp2):
        with pytest.raises(InvalidEpsilonError):
            hh_relative(lp2, [1, 0], [0, 1], 1.0)
        with pytest.raises(InvalidEpsilonError):
            hh_absolute(lp2, [1, 0], [0, 1], -0.1)

    def test_eps_manquant(self, lp2):
        with pytest.raises(InvalidEpsilonError):
            evaluate("hh_relative", lp2, [1, 0], [0, 1])

    def test_eps_inner_accepte_eps_superieur_a_un(self, lp2):
        assert eps_inner(lp2, [1, 0], [1, 1], 2.0).holds

    def test_relation_inconnue(self, lp2):
        with pytest.raises(UnknownRelationError):
            evaluate("roberts", lp2, [1, 0], [0, 1])

    def test_verdict_reparse(self, lp2):
        verdict = evaluate("hh_relative", lp2, [2, 0], Y_WITNESS, 0.15)
        assert type(verdict).model_validate_json(verdict.model_dump_json()) == verdict
        assert verdict.epsilon == 0.15
        assert verdict.relation is RelationId.HH_RELATIVE


@pytest.mark.parametrize("relation", [r for r in RelationId])
def test_toutes_les_relations_evaluees(relation, lp2):
    eps = 0.5 if relation.value not in ("classic", "birkhoff", "isosceles", "hh_exact") else None
    verdict = evaluate(relation, LpNormSpec(p=2), [1, 0], [0, 1], eps)
    assert verdict.holds
    assert verdict.allowance >= 0


APPROCHEES = [
    RelationId.HH_RELATIVE,
    RelationId.HH_ABSOLUTE,
    RelationId.DRAGOMIR_BIRKHOFF,
    RelationId.CHMIELINSKI_BIRKHOFF,
]


class TestMonotonieEnEpsilon:

    @pytest.mark.parametrize("relation", APPROCHEES)
    def test_marges_croissantes(self, relation, all_specs, rng):
        for spec in all_specs:
            X = rng.standard_normal((200, 2))
            Y = rng.standard_normal((200, 2))
            previous = None
            for eps in (0.0, 0.1, 0.3, 0.6, 0.9):
                out = margins_batch(relation, spec, X, Y, eps)
                if previous is not None:
                    assert np.all(out["margin"] >= previous["margin"] - 1e-9 * (1 + out["scale"]))
                    assert np.all(out["holds"][previous["holds"]])
                previous = out

    def test_eps_inner_croissante(self, ip_spec, rng):
        X = rng.standard_normal((500, 2))
        Y = rng.standard_normal((500, 2))
        low = margins_batch(RelationId.EPS_INNER, ip_spec, X, Y, 0.2)
        high = margins_batch(RelationId.EPS_INNER, ip_spec, X, Y, 0.7)
        assert np.all(high["margin"] >= low["margin"])
        assert np.all(high["holds"][low["holds"]])


class TestInvariancesHH:

    @pytest.mark.parametrize("relation, eps", [
        (RelationId.HH_EXACT, None),
        (RelationId.HH_RELATIVE, 0.3),
        (RelationId.HH_ABSOLUTE, 0.3),
    ])
    def test_changement_de_signe(self, relation, eps, all_specs, rng):
        for spec in all_specs:
            X = rng.standard_normal((100, 2))
            Y = rng.standard_normal((100, 2))
            base = margins_batch(relation, spec, X, Y, eps)
            for X2, Y2 in ((X, -Y), (-X, -Y)):
                other = margins_batch(relation, spec, X2, Y2, eps)
                assert np.allclose(other["margin"], base["margin"], rtol=1e-9, atol=1e-12)
                band = np.abs(base["margin"]) > 1e-8 * (1 + base["scale"])
                assert np.array_equal(other["holds"][band], base["holds"][band])

    def test_absolue_implique_relative(self, all_specs, rng):
        for spec in all_specs:
            X = rng.standard_normal((300, 2))
            Y = rng.standard_normal((300, 2)) * rng.uniform(0.05, 5, (300, 1))
            eps = rng.uniform(0, 1, 300)
            absolute = margins_batch(RelationId.HH_ABSOLUTE, spec, X, Y, eps)
            relative = margins_batch(RelationId.HH_RELATIVE, spec, X, Y, eps)
            assert absolute["holds"].any()
            assert np.all(relative["holds"][absolute["holds"]])

    @pytest.mark.parametrize("gram", [[[1.0, 0.0], [0.0, 1.0]], [[2.0, 0.5], [0.5, 1.0]]])
    def test_eps_inner_double_implique_relative(self, gram, rng):
        spec = InnerProductNormSpec(gram=gram)
        X = rng.standard_normal((2000, 2))
        Y = rng.standard_normal((2000, 2)) * rng.uniform(0.05, 5, (2000, 1))
        eps = rng.uniform(0, 0.5, 2000)
        inner_2eps = margins_batch(RelationId.EPS_INNER, spec, X, Y, 2 * eps)
        relative = margins_batch(RelationId.HH_RELATIVE, spec, X, Y, eps)
        assert inner_2eps["holds"].any()
        assert np.all(relative["holds"][inner_2eps["holds"]])

    def test_eps_nul_redonne_l_exacte(self, all_specs, rng):
        for spec in all_specs:
            X = rng.standard_normal((100, 2))
            Y = rng.standard_normal((100, 2))
            X[:10] = [1.0, 0.0]
            Y[:10] = [0.0, 1.0]
            exact = margins_batch(RelationId.HH_EXACT, spec, X, Y)
            for relation in (RelationId.HH_RELATIVE, RelationId.HH_ABSOLUTE):
                out = margins_batch(relation, spec, X, Y, 0.0)
                assert np.array_equal(out["margin"], exact["margin"])
                assert np.array_equal(out["holds"], exact["holds"])


class TestExemplesBirkhoffApprochees:

    def test_chmielinski_seuil_un_sur_racine_de_deux(self, lp2):
        # ‖x + ty‖² + 2ε|t| = 1 + (2ε − √2)|t| + t² pour t < 0 : seuil ε = 1/√2
        y = [1 / math.sqrt(2), 1 / math.sqrt(2)]
        assert not chmielinski_birkhoff(lp2, [1, 0], y, 0.70).holds
        assert chmielinski_birkhoff(lp2, [1, 0], y, 0.71).holds

    def test_chmielinski_eps_un_et_y_nul(self, all_specs, rng):
        for spec in all_specs:
            x, y = rng.standard_normal(2), rng.standard_normal(2)
            assert chmielinski_birkhoff(spec, x, y, 1.0).holds
            assert chmielinski_birkhoff(spec, x, [0.0, 0.0], 0.2).holds

    def test_chmielinski_marge_analytique(self, lp2):
        # min sur u > 0 de u² − (√2 − 2ε)u = −(√2 − 2ε)²/4
        y = [1 / math.sqrt(2), 1 / math.sqrt(2)]
        verdict = chmielinski_birkhoff(lp2, [1, 0], y, 0.5)
        assert verdict.margin == pytest.approx(-((math.sqrt(2) - 1.0) ** 2) / 4, abs=1e-9)

    def test_dragomir_seuil(self, lp2):
        # min ‖x + ty‖ = 1/√2, relation satisfaite ssi ε ≥ 1 − 1/√2 ≈ 0.293
        assert dragomir_birkhoff(lp2, [1, 0], [1, 1], 0.3).holds
        assert not dragomir_birkhoff(lp2, [1, 0], [1, 1], 0.2).holds
