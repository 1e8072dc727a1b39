from __future__ import annotations

from fractions import Fraction

import pytest

from unawaregames.corpus import fixtures
from unawaregames.corpus.oracles import behavior_to_mixed, strategy_family, transform_sweep
from unawaregames.kuhn import (
    NodeDependenceError,
    PerfectRecallError,
    check_equivalence,
    check_lemma1,
    check_lemma2,
    check_realization_equivalence,
    kuhn_transform,
    lemma2_converse_witnesses,
    partial_allowing,
)
from unawaregames.strategy import BehaviorStrategy, MixedStrategy, PureStrategy, opponent_profiles, rho


def doc(name):
    return fixtures.fixture(name).document


class TestTransform:
    def test_fig7_values(self):
        d = doc("FIG7")
        beta = kuhn_transform(d.game, "1", d.mixed["m13"], checked=False)
        assert beta.locals["h0"] == {"left": 1}
        assert beta.locals["h1"] == {"x": Fraction(1, 3), "y": Fraction(2, 3)}
        assert check_equivalence(d.game, "1", d.mixed["m13"], beta)

    def test_checked_requires_perfect_recall(self):
        d = doc("FIG7")
        with pytest.raises(PerfectRecallError):
            kuhn_transform(d.game, "1", d.mixed["m13"])

    def test_owner_mismatch(self):
        d = doc("STD")
        with pytest.raises(ValueError, match="belongs to"):
            kuhn_transform(d.game, "2", d.mixed["half"])

    def test_node_dependence(self):
        g = fixtures.fixture("I6_BAD_A").game
        with pytest.raises(NodeDependenceError):
            for sigma in strategy_family(g, "2"):
                kuhn_transform(g, "2", sigma, checked=False)

    def test_point_mass_keeps_its_choices(self):
        d = doc("FIG9")
        sigma = MixedStrategy.point_mass(d.profiles["red"]["1"])
        beta = kuhn_transform(d.game, "1", sigma)
        assert beta.locals["h1bar"] == {"left": 0, "right": 1}
        assert beta.locals["h1"] == {"left": 1}

    def test_uniform_where_nothing_is_allowed(self):
        g = fixtures.fixture("FIG4").game
        s = PureStrategy.of("2", {"H1": "b", "Hk'": "c", "Hk''": "d"})
        beta = kuhn_transform(g, "2", MixedStrategy.point_mass(s))
        # playing b at H1 rules out every node of Hk''
        assert beta.locals["Hk''"] == {"c": Fraction(1, 2), "d": Fraction(1, 2)}
        assert beta.locals["H1"] == {"a": 0, "b": 1}

    def test_nature_is_transformed_per_node(self):
        g = fixtures.fixture("STD").game
        for sigma in strategy_family(g, "0"):
            beta = kuhn_transform(g, "0", sigma)
            assert set(beta.locals) == {"c"}
            assert check_equivalence(g, "0", sigma, beta)


class TestEquivalence:
    def test_witness(self):
        d = doc("FIG7")
        wrong = BehaviorStrategy("1", {"h0": {"left": Fraction(1)}, "h1": {"x": Fraction(1)}})
        verdict = check_equivalence(d.game, "1", d.mixed["m13"], wrong)
        assert not verdict
        w = verdict.witness
        assert d.game.forest.nodes[w.node].is_terminal
        assert (w.lhs, w.rhs) in {(Fraction(1, 3), 1), (Fraction(2, 3), 0)}

    def test_different_owners(self):
        d = doc("STD")
        with pytest.raises(ValueError):
            check_equivalence(d.game, "1", d.mixed["half"], BehaviorStrategy("2", {}))

    def test_realization_on_fig9(self):
        g = fixtures.fixture("FIG9").game
        for sigma in strategy_family(g, "1"):
            beta = kuhn_transform(g, "1", sigma)
            assert check_realization_equivalence(g, "1", sigma, beta)

    def test_behavior_to_mixed_round_trip(self):
        g = fixtures.fixture("FIG8").game
        beta = BehaviorStrategy("1", {"h1bar": {"left": Fraction(1, 4), "right": Fraction(3, 4)},
                                      "h1": {"left": Fraction(1, 2), "right": Fraction(1, 2)}})
        sigma = behavior_to_mixed(g, beta)
        assert sum(sigma.weights.values()) == 1
        for s_minus in opponent_profiles(g, "1"):
            for n in g.forest.nodes:
                assert rho(g, n, sigma, s_minus) == rho(g, n, beta, s_minus)

    @pytest.mark.parametrize("name", fixtures.VALID)
    def test_sweep_helper(self, name):
        g = fixtures.fixture(name).game
        assert transform_sweep(g) is None
        assert transform_sweep(g, realization=True) is None


class TestLemmas:
    @pytest.mark.parametrize("name", fixtures.VALID)
    def test_lemma1_on_valid(self, name):
        g = fixtures.fixture(name).game
        for agent in g.players:
            assert check_lemma1(g, agent).ok

    def test_lemma1_fails_without_recall(self):
        g = fixtures.fixture("I6_BAD_A").game
        assert check_lemma1(g, "1").ok
        assert "L1" in check_lemma1(g, "2").classes()

    def test_partial_allowing_restricts(self):
        g = fixtures.fixture("FIG9").game
        full = partial_allowing(g, "1", "n''", "Tbar")
        sub = partial_allowing(g, "1", "n''", "T")
        assert sub == {(("h1", "left"),)}
        assert len(full) == 2

    def test_lemma2(self):
        g = fixtures.fixture("FIG8").game
        assert check_lemma2(g, "1").ok
        assert lemma2_converse_witnesses(g, "1")

    def test_lemma2_witness_is_real(self):
        g = fixtures.fixture("FIG8").game
        from unawaregames.strategy import occur_nodes, reach_nodes
        for a, b, s_minus in lemma2_converse_witnesses(g, "1"):
            pa, pb = dict(s_minus, **{"1": a}), dict(s_minus, **{"1": b})
            assert occur_nodes(g, pa) == occur_nodes(g, pb)
            assert reach_nodes(g, pa) != reach_nodes(g, pb)


def test_point_mass_transforms_to_pure_locals():
    g = fixtures.fixture("FIG4").game
    for agent in g.agents:
        for sigma in strategy_family(g, agent):
            if len(sigma.support()) != 1:
                continue
            beta = kuhn_transform(g, agent, sigma)
            assert isinstance(sigma, MixedStrategy)
            for dist in beta.locals.values():
                assert set(dist.values()) <= {0, 1} or len(set(dist.values())) == 1
