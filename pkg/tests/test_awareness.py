from __future__ import annotations

import copy

import pytest

from unawaregames.awareness import (
    Game,
    build_awareness,
    check_derived,
    check_perfect_recall_direct,
    check_perfect_recall_records,
    check_perfect_recall_selten,
    experience_record,
    partial_infosets,
    perfect_recall_players,
    precedes,
    t_partial_game,
    tree_relations,
    validate_awareness,
    validate_game,
)
from unawaregames.corpus import fixtures
from unawaregames.document import parse_document
from unawaregames.forest import GameFormatError, build_forest


def game(name):
    return fixtures.fixture(name).game


def with_infosets(name, edit):
    r = copy.deepcopy(fixtures.fixture(name).raw)
    edit({h["id"]: h for h in r["infosets"]})
    return parse_document(r).game


class TestAssignment:
    def test_h_lookup(self):
        g = game("FIG8")
        assert g.hid("n'''", "2") == "h"
        assert g.h("n'''", "2").home_tree == "T"
        assert g.hid("n'''", "1") is None
        assert g.assigned_at["h"] == ("n", "n'''")

    def test_build_errors(self):
        f = game("FIG9").forest
        base = {"id": "x", "owner": "2", "tree": "T", "members": ["n''"], "assigned": ["n''"]}
        with pytest.raises(GameFormatError, match="not a player"):
            build_awareness(f, [dict(base, owner="9")])
        with pytest.raises(GameFormatError, match="home tree"):
            build_awareness(f, [dict(base, tree="Q")])
        with pytest.raises(GameFormatError, match="empty"):
            build_awareness(f, [dict(base, members=[])])
        with pytest.raises(GameFormatError, match="unknown node"):
            build_awareness(f, [dict(base, assigned=["ghost"])])
        with pytest.raises(GameFormatError, match="not active"):
            build_awareness(f, [dict(base, assigned=["rbar"])])
        with pytest.raises(GameFormatError, match="two information sets"):
            build_awareness(f, [base, dict(base, id="y")])
        with pytest.raises(GameFormatError, match="duplicate"):
            build_awareness(f, [base, base])

    def test_unassigned_pair_is_reported(self):
        g = with_infosets("FIG9", lambda hs: hs["h"]["assigned"].remove("n'"))
        report = validate_awareness(g)
        assert ("n'", "2") in report.witnesses("ASSIGN")


class TestProperties:
    @pytest.mark.parametrize("name", fixtures.RECALL_FIXTURES + ("U1_BAD", "U4_BAD", "U5_BAD"))
    def test_fixture_classes(self, name):
        fx = fixtures.fixture(name)
        assert sorted(validate_game(fx.game).classes()) == fx.annotations["violation_classes"]

    def test_u0(self):
        # an information set in a tree that is not below the node's tree
        g = with_infosets("FIG9", lambda hs: hs["h1"].update(assigned=["r"], tree="Tbar", members=["rbar"]) or
                          hs["h1bar"].update(assigned=["rbar"]))
        report = validate_awareness(g)
        assert "U0" in report.tags()

    def test_u1_witnesses(self):
        report = validate_awareness(game("U1_BAD"))
        assert report.witnesses("U1") == [("n", "1", "h1"), ("n'", "1", "h1")]

    def test_i2(self):
        def edit(hs):
            hs["h1"]["members"] = ["n'", "p'"]
            hs["h1"]["assigned"] = ["n'", "p", "n"]
            hs["h1"]["tree"] = "T'"
        r = copy.deepcopy(fixtures.fixture("U1_BAD").raw)
        hs = {h["id"]: h for h in r["infosets"]}
        edit(hs)
        r["infosets"].append({"id": "h1p", "owner": "1", "tree": "T'", "members": ["p'"], "assigned": ["p'"]})
        report = validate_awareness(parse_document(r).game)
        assert "I2" in report.tags()

    def test_i4_imaginary_actions(self):
        # nT is sent to a set living above its own tree whose actions differ from nT's
        r = copy.deepcopy(fixtures.fixture("FIG6").raw)
        r["infosets"] = [
            {"id": "h", "owner": "1", "tree": "Tbar", "members": ["n"], "assigned": ["n", "nT"]},
        ]
        report = validate_awareness(parse_document(r).game)
        assert {"I4", "U0"} <= report.tags()

    def test_i5_same_actions_different_sets(self):
        def edit(hs):
            hs["H"]["members"] = ["p"]
            hs["H"]["assigned"] = ["p"]
        r = copy.deepcopy(fixtures.fixture("U5_BAD").raw)
        edit({h["id"]: h for h in r["infosets"]})
        r["infosets"].append({"id": "Hqbar", "owner": "1", "tree": "Tbar", "members": ["q"], "assigned": ["q"]})
        report = validate_awareness(parse_document(r).game)
        assert "I5" in report.tags()

    def test_u4_and_u5(self):
        assert validate_awareness(game("U4_BAD")).witnesses("U4") == [("n", "1", "T'")]
        assert validate_awareness(game("U5_BAD")).tags() == {"U5"}


class TestPerfectRecall:
    def test_fig7_witness(self):
        g = game("FIG7")
        assert check_perfect_recall_direct(g).witnesses("I6") == [("1", "n", "right", "n''", "n'''")]
        assert perfect_recall_players(g) == set()

    def test_records(self):
        g = game("FIG4")
        assert experience_record(g, "2", "nk") == [("H1", "a")]
        assert experience_record(g, "2", "mk''") == [("H1", "a")]
        assert experience_record(g, "2", "n1") == []
        with pytest.raises(ValueError):
            experience_record(g, "1", "nk")

    @pytest.mark.parametrize("name", fixtures.names())
    def test_characterizations_agree(self, name):
        g = game(name)
        verdicts = {check_perfect_recall_direct(g).ok, check_perfect_recall_records(g).ok,
                    check_perfect_recall_selten(g).ok}
        assert len(verdicts) == 1

    def test_bad_fixtures_keep_player_one(self):
        for name in ("I6_BAD_A", "I6_BAD_B"):
            g = game(name)
            assert perfect_recall_players(g) == {"1"}

    def test_derived_checks_clean_on_valid(self):
        for name in fixtures.VALID:
            assert check_derived(game(name)).ok

    def test_absent_mindedness_detected(self):
        r = copy.deepcopy(fixtures.fixture("FIG7").raw)
        # one set holding the root and a node below it
        r["infosets"] = [
            {"id": "hh", "owner": "1", "tree": "Tbar", "members": ["n", "m"], "assigned": ["n", "m"]},
            {"id": "h0", "owner": "1", "tree": "T", "members": ["nT"], "assigned": ["nT"]},
            {"id": "h1", "owner": "1", "tree": "T", "members": ["n'''"], "assigned": ["n''", "n'''"]},
        ]
        g = Game(build_forest(r), build_awareness(build_forest(r), r["infosets"]))
        assert "NAM" in check_derived(g).tags()

    def test_precedes(self):
        g = game("FIG4")
        assert precedes(g, g.infoset("H1"), g.infoset("Hk'"))
        assert not precedes(g, g.infoset("Hk'"), g.infoset("H1"))
        assert not precedes(g, g.infoset("H1"), g.infoset("Hk''"))  # different home trees


class TestTrees:
    def test_relations_fig4(self):
        direct, closure = tree_relations(game("FIG4"))
        assert ("Tbar", "T''") in direct and ("Tbar", "T'") in direct
        assert ("T''", "T'") in direct
        assert closure >= direct

    def test_t_partial_fig4(self):
        g = game("FIG4")
        sub = t_partial_game(g, "T''")
        assert sub.forest.objective == "T''"
        assert set(sub.forest.trees) == {"T''", "T'"}
        assert sub.forest.nodes["nk'"].copy_of == "nk''"
        assert validate_game(sub).ok
        assert set(partial_infosets(g, "2", "T''")) == {"H1", "Hk''", "Hk'"}

    def test_t_partial_of_objective_is_whole_game(self):
        g = game("DIAMOND")
        sub = t_partial_game(g, "Tbar")
        assert set(sub.forest.trees) == set(g.forest.trees)

    def test_t_partial_diamond_branch(self):
        sub = t_partial_game(game("DIAMOND"), "T1")
        assert set(sub.forest.trees) == {"T1", "T0"}
        assert validate_game(sub).ok

    def test_unknown_tree(self):
        with pytest.raises(ValueError):
            t_partial_game(game("STD"), "nope")
