from __future__ import annotations

import json
from fractions import Fraction

import pytest
from conftest import generated
from hypothesis import given, settings
from hypothesis import strategies as st

from unawaregames.awareness import perfect_recall_players, validate_game
from unawaregames.corpus import fixtures
from unawaregames.corpus.generate import (
    GenerationError,
    GenParams,
    corpus_params,
    generate,
    generate_raw,
)
from unawaregames.corpus.oracles import (
    behavior_to_mixed,
    family_size,
    oracle_allowing,
    oracle_rho,
    strategy_family,
)
from unawaregames.forest import copy_in, join
from unawaregames.strategy import BehaviorStrategy, MixedStrategy, enumerate_pure


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True)


class TestFixtures:
    @pytest.mark.parametrize("name", fixtures.names())
    def test_shipped_file_matches_builder(self, name):
        assert fixtures.shipped_json(name) == fixtures.emit(name)

    @pytest.mark.parametrize("name", fixtures.names())
    def test_annotations_hold(self, name):
        fx = fixtures.fixture(name)
        assert canonical(fixtures.observe(fx)) == canonical(fx.annotations)

    def test_aliases(self):
        assert fixtures.fixture("fix_fig5").name == "I6_BAD_A"
        assert fixtures.fixture("I6_OK").name == "FIG4"
        assert fixtures.canonical_name("fig1") == "P0_BAD"
        with pytest.raises(KeyError, match="unknown fixture"):
            fixtures.fixture("NOPE")

    def test_groups_are_consistent(self):
        names = set(fixtures.names())
        assert set(fixtures.VALID) <= names and set(fixtures.NEGATIVE) <= names
        for name in fixtures.VALID:
            assert validate_game(fixtures.fixture(name).game).ok
        for name in fixtures.NEGATIVE:
            assert not validate_game(fixtures.fixture(name).game).ok

    def test_occur_mass_annotation(self):
        rows = fixtures.fixture("FIG9").annotations["occur_mass"]
        assert rows and all(Fraction(r["mass"]) == 0 for r in rows)


class TestGenerator:
    def test_deterministic(self):
        p = GenParams(num_trees=3, players=2, nature=True)
        assert generate_raw(11, p) == generate_raw(11, p)
        assert generate_raw(11, p) != generate_raw(12, p)

    def test_seed_and_params_recorded(self):
        r = generate_raw(5, GenParams(num_trees=2))
        assert r["generator"]["seed"] == 5
        assert r["generator"]["num_trees"] == 2

    def test_corpus_params(self):
        assert corpus_params(1) == GenParams(num_trees=1, players=1, nature=False)
        assert corpus_params(7).num_trees == 1 and corpus_params(8).num_trees == 2
        assert corpus_params(4).nature and corpus_params(4).players == 2

    def test_standard_corpus(self):
        corpus = generated()
        assert len(corpus) == 30
        tree_counts = {len(g.forest.trees) for _, g in corpus}
        assert tree_counts == {1, 2, 3}
        assert any(g.forest.has_nature for _, g in corpus)
        for name, g in corpus:
            assert validate_game(g).ok, name
            assert perfect_recall_players(g) == set(g.players), name

    def test_single_branch_single_tree(self):
        g = generate(3, GenParams(num_trees=1, max_branch=1, max_depth=2))
        assert all(len(n.actions.get(j, ())) <= 1 for n in g.forest.nodes.values() for j in n.active)

    @pytest.mark.parametrize("kwargs", [
        {"num_trees": 0}, {"num_trees": 4}, {"players": 4}, {"max_depth": 9},
        {"num_trees": 2, "max_branch": 1},
    ])
    def test_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            GenParams(**kwargs)

    def test_budget_exhaustion(self):
        with pytest.raises(GenerationError):
            generate_raw(1, GenParams(num_trees=3, max_depth=5, players=3, max_strategies=1,
                                      max_profiles=1), retries=5)

    def test_budget_respected(self):
        for name, g in generated():
            total = 1
            for agent in g.agents:
                k = len(enumerate_pure(g, agent))
                assert k <= 12, name
                total *= k
            assert total <= 300 and len(g.forest.nodes) <= 60, name


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), trees=st.integers(1, 3), players=st.integers(1, 3),
       nature=st.booleans())
def test_generated_games_are_valid_lattices(seed, trees, players, nature):
    g = generate(seed, GenParams(num_trees=trees, players=players, nature=nature, max_depth=3))
    assert validate_game(g).ok
    f = g.forest
    for a in f.tree_ids:
        assert f.leq(a, f.objective)
        for b in f.tree_ids:
            top = join(f, a, b)
            assert f.leq(a, top) and f.leq(b, top)
            assert join(f, b, a) == top
            if f.leq(a, b):
                assert top == b
                for n in f.trees[b].nodes:
                    assert copy_in(f, n, a) == copy_in(f, f.nodes[n].copy_of, a)


class TestOracles:
    def test_point_masses(self):
        g = fixtures.fixture("FIG9").game
        s2 = {"2": enumerate_pure(g, "2")[0]}
        for s in enumerate_pure(g, "1"):
            sigma = MixedStrategy.point_mass(s)
            values = {oracle_rho(g, n, sigma, s2) for n in g.forest.nodes}
            assert values == {0, 1}

    def test_unreachable_node_has_no_allowing_strategy(self):
        g = fixtures.fixture("FIG7").game
        assert oracle_allowing(g, "1", "n''") == []
        assert oracle_rho(g, "n''", fixtures.fixture("FIG7").document.mixed["m13"], {}) == 0

    def test_behavior_to_mixed(self):
        g = fixtures.fixture("STD").game
        beta = BehaviorStrategy("1", {"h1": {"L": Fraction(1, 3), "R": Fraction(2, 3)}})
        sigma = behavior_to_mixed(g, beta)
        assert sorted(sigma.weights.values()) == [Fraction(1, 3), Fraction(2, 3)]

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
    def test_family_size(self, k):
        from unawaregames.corpus.builder import GameBuilder
        from unawaregames.document import parse_document

        b = GameBuilder(["1"])
        actions = [f"a{x}" for x in range(k)]
        b.move("Tbar", "n", "1", actions, [f"z{x}" for x in range(k)])
        for x in range(k):
            b.leaf("Tbar", f"z{x}", [x])
        b.info("h", "1", "Tbar", ["n"], ["n"])
        g = parse_document(b.raw()).game
        family = list(strategy_family(g, "1"))
        assert len(family) == family_size(k)
        assert all(sum(s.weights.values()) == 1 for s in family)


def test_random_family_is_seeded():
    from unawaregames.corpus.oracles import random_family
    from unawaregames.kuhn import check_equivalence, kuhn_transform

    g = fixtures.fixture("FIG4").game
    first = [s.support() for s in random_family(g, "2", seed=3)]
    assert first == [s.support() for s in random_family(g, "2", seed=3)]
    assert first != [s.support() for s in random_family(g, "2", seed=4)]
    for sigma in random_family(g, "2", seed=3):
        assert sum(sigma.weights.values()) == 1
        assert check_equivalence(g, "2", sigma, kuhn_transform(g, "2", sigma))
