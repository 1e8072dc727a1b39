"""Hand-built games with annotated facts.

Each fixture is a game document plus annotations: the violation classes
the validators must report, perfect-recall verdicts under the three
characterizations, and reach/occur facts for named profiles. Where the
situation a fixture illustrates does not pin down action labels or the
number of terminal nodes, those details were chosen here; such fixtures
carry ``concretized: true``.

The shipped JSON files under ``data/`` are generated from these builders
(``unaware fixtures emit <name>``) and a regression test keeps them in sync.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable

from ..document import GameDocument, document_to_raw, dumps, parse_document
from .builder import GameBuilder

TBAR = "Tbar"


@dataclass(frozen=True)
class Fixture:
    name: str
    raw: dict
    annotations: dict

    @property
    def document(self) -> GameDocument:
        # the game is shared (and immutable); the strategy tables are the caller's own
        doc = _parse(self.name)
        return GameDocument(doc.game, dict(doc.mixed), dict(doc.behavior),
                            {k: dict(v) for k, v in doc.profiles.items()})

    @property
    def game(self):
        return self.document.game

    def to_json(self) -> str:
        return dumps(document_to_raw(self.document))


def _leaves(b: GameBuilder, tree: str, names, base: int = 0) -> None:
    for k, name in enumerate(names):
        b.leaf(tree, name, [base + k + j for j in range(len(b.players))])


def _prime(suffix: str) -> Callable[[str], str]:
    return lambda n: n + suffix


# -- classical ---------------------------------------------------------------


def _std():
    b = GameBuilder(["1", "2"], nature=True)
    b.move(TBAR, "c", "0", ["H", "T"], ["rH", "rT"])
    for side in ("H", "T"):
        b.move(TBAR, f"r{side}", "1", ["L", "R"], [f"a{side}", f"zR{side}"])
        b.move(TBAR, f"a{side}", "2", ["l", "r"], [f"zl{side}", f"zr{side}"])
    _leaves(b, TBAR, ["zRH", "zlH", "zrH", "zRT", "zlT", "zrT"])
    b.info("h1", "1", TBAR, ["rH", "rT"], ["rH", "rT"])
    b.info("h2", "2", TBAR, ["aH", "aT"], ["aH", "aT"])
    strategies = {"mixed": {"half": _mixed("1", [({"h1": "L"}, "1/2"), ({"h1": "R"}, "1/2")])}}
    ann = {
        "illustrates": "single-tree game with a chance move and imperfect information",
        "concretized": True,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
    }
    return b.raw(), strategies, ann


# -- unawareness examples ------------------------------------------------------


def _fig4():
    """Three-tree chain in which player 2 learns late and recalls early moves."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n*", "1", ["L", "R"], ["n1", "m1"])
    b.move(TBAR, "n1", "2", ["a", "b"], ["nk", "zn"])
    b.move(TBAR, "m1", "2", ["a", "b"], ["mk", "zm"])
    b.move(TBAR, "nk", "2", ["c", "d", "e"], ["znc", "znd", "zne"])
    b.move(TBAR, "mk", "2", ["c", "d", "e"], ["zmc", "zmd", "zme"])
    _leaves(b, TBAR, ["zn", "zm", "znc", "znd", "zne", "zmc", "zmd", "zme"])
    b.prune(TBAR, "T''", [("nk", "e"), ("mk", "e")], _prime("''"))
    b.prune("T''", "T'", [("nk''", "d"), ("mk''", "d")], lambda n: n[:-2] + "'")
    for t, s in ((TBAR, ""), ("T''", "''"), ("T'", "'")):
        b.info(f"H*{s}", "1", t, [f"n*{s}"], [f"n*{s}"])
    b.info("H1", "2", "T'", ["n1'", "m1'"], [f"{x}{s}" for x in ("n1", "m1") for s in ("", "''", "'")])
    b.info("Hk''", "2", "T''", ["nk''", "mk''"], ["nk", "mk", "nk''", "mk''"])
    b.info("Hk'", "2", "T'", ["nk'", "mk'"], ["nk'", "mk'"])
    ann = {
        "illustrates": "perfect recall across a chain of three trees",
        "concretized": True,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
    }
    return b.raw(), {}, ann


def _i6_bad_a():
    """The R branch skips player 2's first move, which the player nevertheless 'remembers'."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n*", "1", ["L", "R"], ["n1", "mk"])
    b.move(TBAR, "n1", "2", ["a", "b"], ["nk", "zn"])
    b.move(TBAR, "nk", "2", ["c", "d", "e"], ["znc", "znd", "zne"])
    b.move(TBAR, "mk", "2", ["c", "d", "e"], ["zmc", "zmd", "zme"])
    _leaves(b, TBAR, ["zn", "znc", "znd", "zne", "zmc", "zmd", "zme"])
    b.prune(TBAR, "T''", [("nk", "e"), ("mk", "e")], _prime("''"))
    b.prune("T''", "T'", [("nk''", "d"), ("mk''", "d")], lambda n: n[:-2] + "'")
    for t, s in ((TBAR, ""), ("T''", "''"), ("T'", "'")):
        b.info(f"H*{s}", "1", t, [f"n*{s}"], [f"n*{s}"])
    b.info("H1", "2", "T'", ["n1'"], ["n1", "n1''", "n1'"])
    b.info("Hk''", "2", "T''", ["nk''", "mk''"], ["nk", "mk", "nk''", "mk''"])
    b.info("Hk'", "2", "T'", ["nk'", "mk'"], ["nk'", "mk'"])
    ann = {
        "illustrates": "perfect recall counterexample: an information set mixing nodes with and without an earlier own move",
        "concretized": True,
        "violation_classes": ["I6"],
        "recall_empty": {"direct": False, "records": False, "selten": False},
    }
    return b.raw(), {}, ann


def _i6_bad_b():
    """Player 2's first moves sit in different information sets but lead to one later set."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n*", "1", ["L", "R"], ["n1", "m1"])
    b.move(TBAR, "n1", "2", ["a", "b"], ["nk", "zn"])
    b.move(TBAR, "m1", "2", ["a2", "b2"], ["mk", "zm"])
    b.move(TBAR, "nk", "2", ["c", "d", "e"], ["znc", "znd", "zne"])
    b.move(TBAR, "mk", "2", ["c", "d", "e"], ["zmc", "zmd", "zme"])
    _leaves(b, TBAR, ["zn", "zm", "znc", "znd", "zne", "zmc", "zmd", "zme"])
    b.prune(TBAR, "T''", [("nk", "e"), ("mk", "e")], _prime("''"))
    b.prune("T''", "T'", [("nk''", "d"), ("mk''", "d")], lambda n: n[:-2] + "'")
    for t, s in ((TBAR, ""), ("T''", "''"), ("T'", "'")):
        b.info(f"H*{s}", "1", t, [f"n*{s}"], [f"n*{s}"])
    b.info("H1n", "2", "T'", ["n1'"], ["n1", "n1''", "n1'"])
    b.info("H1m", "2", "T'", ["m1'"], ["m1", "m1''", "m1'"])
    b.info("Hk''", "2", "T''", ["nk''", "mk''"], ["nk", "mk", "nk''", "mk''"])
    b.info("Hk'", "2", "T'", ["nk'", "mk'"], ["nk'", "mk'"])
    ann = {
        "illustrates": "perfect recall counterexample: different earlier information sets merge later",
        "concretized": True,
        "violation_classes": ["I6"],
        "recall_empty": {"direct": False, "records": False, "selten": False},
    }
    return b.raw(), {}, ann


def _fig6():
    """An action chosen in a poorer tree induces the same-named move in a richer one."""
    b = GameBuilder(["1"])
    b.move(TBAR, "n", "1", ["left", "middle", "right"], ["zl", "zm", "zr"])
    _leaves(b, TBAR, ["zl", "zm", "zr"])
    b.prune(TBAR, "T", [("n", "middle")], _prime("T"))
    b.info("h", "1", "T", ["nT"], ["n", "nT"])
    strategies = {"profiles": {"left": {"1": {"h": "left"}}}}
    ann = {
        "illustrates": "action induced by a strategy at a node whose information set lies in a lower tree",
        "concretized": True,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
        "profiles": {"left": {"reach_includes": ["zl", "zlT"], "reach_excludes": ["zm", "zr"]}},
    }
    return b.raw(), strategies, ann


def _fig7():
    """A player forgets having gone right, yet mixed and behavior strategies agree."""
    b = GameBuilder(["1"])
    b.move(TBAR, "n", "1", ["left", "right"], ["m", "n''"])
    b.move(TBAR, "m", "1", ["x", "y"], ["z1", "z2"])
    b.move(TBAR, "n''", "1", ["x", "y"], ["z3", "z4"])
    _leaves(b, TBAR, ["z1", "z2", "z3", "z4"])
    b.move("T", "nT", "1", ["left"], ["n'''"], copy_of="n")
    b.move("T", "n'''", "1", ["x", "y"], ["z1T", "z2T"], copy_of="m")
    b.leaf("T", "z1T", [1], copy_of="z1")
    b.leaf("T", "z2T", [2], copy_of="z2")
    b.info("h0", "1", "T", ["nT"], ["n", "nT"])
    b.info("h1", "1", "T", ["n'''"], ["m", "n''", "n'''"])
    strategies = {"mixed": {"m13": _mixed("1", [({"h0": "left", "h1": "x"}, "1/3"),
                                                ({"h0": "left", "h1": "y"}, "2/3")])}}
    ann = {
        "illustrates": "player without perfect recall for whom every mixed strategy has an equivalent behavior strategy",
        "concretized": True,
        "violation_classes": ["I6"],
        "recall_empty": {"direct": False, "records": False, "selten": False},
        "transform_sweep": True,
    }
    return b.raw(), strategies, ann


def _fig8():
    """Reached versus occurring information sets."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "rbar", "1", ["left", "right"], ["n'''", "q"])
    b.move(TBAR, "n'''", "2", ["a", "b"], ["z1", "z2"])
    b.move(TBAR, "q", "2", ["c", "middle", "d"], ["z3", "z4", "z5"])
    _leaves(b, TBAR, ["z1", "z2", "z3", "z4", "z5"])
    b.move("T", "r", "1", ["left", "right"], ["n", "n'"], copy_of="rbar")
    b.move("T", "n", "2", ["a", "b"], ["z1T", "z2T"], copy_of="n'''")
    b.move("T", "n'", "2", ["c", "d"], ["z3T", "z5T"], copy_of="q")
    for z, p in (("z1T", [0, 1]), ("z2T", [1, 2]), ("z3T", [2, 3]), ("z5T", [4, 5])):
        b.leaf("T", z, p, copy_of=z[:-1])
    b.info("h1bar", "1", TBAR, ["rbar"], ["rbar"])
    b.info("h1", "1", "T", ["r"], ["r"])
    b.info("h", "2", "T", ["n"], ["n'''", "n"])
    b.info("h'", "2", "T", ["n'"], ["n'"])
    b.info("h''", "2", TBAR, ["q"], ["q"])
    s2 = {"h": "a", "h'": "c", "h''": "c"}
    strategies = {"profiles": {
        "red": {"1": {"h1bar": "left", "h1": "right"}, "2": s2},
        "red_alt": {"1": {"h1bar": "left", "h1": "left"}, "2": s2},
    }}
    ann = {
        "illustrates": "a node can be reached without occurring and an information set can occur without being reached",
        "concretized": True,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
        "profiles": {"red": {
            "reach_includes": ["n'", "n'''"],
            "reach_excludes": ["n"],
            "occur_includes": ["n", "n'''"],
            "occur_excludes": ["n'"],
            "reached_infosets": {"2": ["h'"]},
            "occurring_infosets": {"2": ["h"]},
        }},
        "lemma2_converse": [{"player": "1", "profiles": ["red", "red_alt"]}],
    }
    return b.raw(), strategies, ann


def _fig9():
    """An information set occurs although its only member does not."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "rbar", "1", ["left", "right"], ["n", "n'"])
    b.move(TBAR, "n", "2", ["a", "b"], ["z1", "z2"])
    b.move(TBAR, "n'", "2", ["a", "b"], ["z3", "z4"])
    _leaves(b, TBAR, ["z1", "z2", "z3", "z4"])
    b.move("T", "r", "1", ["left"], ["n''"], copy_of="rbar")
    b.move("T", "n''", "2", ["a", "b"], ["z1T", "z2T"], copy_of="n")
    b.leaf("T", "z1T", [0, 1], copy_of="z1")
    b.leaf("T", "z2T", [1, 2], copy_of="z2")
    b.info("h1bar", "1", TBAR, ["rbar"], ["rbar"])
    b.info("h1", "1", "T", ["r"], ["r"])
    b.info("h", "2", "T", ["n''"], ["n", "n'", "n''"])
    strategies = {"profiles": {"red": {"1": {"h1bar": "right", "h1": "left"}, "2": {"h": "a"}}}}
    ann = {
        "illustrates": "an information set occurs while none of its members occurs",
        "concretized": True,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
        "profiles": {"red": {
            "occur_excludes": ["n''"],
            "occurring_infosets": {"2": ["h"]},
        }},
        "occur_mass": [{"profile": "red", "player": "1", "tree": "T", "mass": "0"}],
    }
    return b.raw(), strategies, ann


def _diamond():
    """Two incomparable trees whose join is the objective tree."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n", "1", ["a", "b", "c"], ["q", "r", "s"])
    b.move(TBAR, "q", "2", ["x", "y"], ["zqx", "zqy"])
    b.move(TBAR, "r", "2", ["u", "v"], ["zru", "zrv"])
    b.move(TBAR, "s", "2", ["w1", "w2"], ["zs1", "zs2"])
    _leaves(b, TBAR, ["zqx", "zqy", "zru", "zrv", "zs1", "zs2"])
    b.prune(TBAR, "T1", [("n", "c")], _prime("_1"))
    b.prune(TBAR, "T2", [("n", "b")], _prime("_2"))
    b.prune(TBAR, "T0", [("n", "b"), ("n", "c")], _prime("_0"))
    for t, s in ((TBAR, ""), ("T1", "_1"), ("T2", "_2"), ("T0", "_0")):
        b.info(f"hn{s}", "1", t, [f"n{s}"], [f"n{s}"])
    b.info("hq", "2", "T0", ["q_0"], ["q", "q_1", "q_2", "q_0"])
    b.info("hr", "2", "T1", ["r_1"], ["r", "r_1"])
    b.info("hs", "2", "T2", ["s_2"], ["s", "s_2"])
    ann = {
        "illustrates": "join-semilattice that is not a chain",
        "concretized": False,
        "violation_classes": [],
        "recall_empty": {"direct": True, "records": True, "selten": True},
    }
    return b.raw(), {}, ann


# -- structural and awareness counterexamples ---------------------------------------


def _p0_bad():
    """A subtree skips an intermediate node of the objective tree."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n", "1", ["a", "b"], ["n'", "z4"])
    b.move(TBAR, "n'", "2", ["c", "d"], ["n''", "z3"])
    _leaves(b, TBAR, ["n''", "z3", "z4"])
    b.move("T'", "nT", "1", ["a", "b"], ["n''T", "z4T"], copy_of="n")
    b.leaf("T'", "n''T", [0, 1], copy_of="n''")
    b.leaf("T'", "z4T", [2, 3], copy_of="z4")
    b.info("h", "1", TBAR, ["n"], ["n"])
    b.info("hT", "1", "T'", ["nT"], ["nT"])
    b.info("h2", "2", TBAR, ["n'"], ["n'"])
    ann = {
        "illustrates": "Property 0 counterexample",
        "concretized": True,
        "violation_classes": ["P0"],
        "violation_counts": {"P0": 1},
    }
    return b.raw(), {}, ann


def _p1_bad():
    """A subtree turns a decision node into a terminal node."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "n", "1", ["a", "b"], ["n'", "z3"])
    b.move(TBAR, "n'", "2", ["c", "d"], ["z1", "z2"])
    _leaves(b, TBAR, ["z1", "z2", "z3"])
    b.move("T''", "nT", "1", ["a"], ["n'T"], copy_of="n")
    b.leaf("T''", "n'T", [5, 5], copy_of="n'")
    b.info("h", "1", TBAR, ["n"], ["n"])
    b.info("hT", "1", "T''", ["nT"], ["nT"])
    b.info("h2", "2", TBAR, ["n'"], ["n'"])
    ann = {
        "illustrates": "Property 1 counterexample",
        "concretized": True,
        "violation_classes": ["P1"],
        "violation_counts": {"P1": 1},
    }
    return b.raw(), {}, ann


def _u1_bad():
    """A lower-tree information set that omits the node's own copy."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "x", "2", ["u", "w"], ["n", "p"])
    b.move(TBAR, "n", "1", ["l", "r"], ["z1", "z2"])
    b.move(TBAR, "p", "1", ["l", "r"], ["z3", "z4"])
    _leaves(b, TBAR, ["z1", "z2", "z3", "z4"])
    b.prune(TBAR, "T'", [("n", "r"), ("p", "r")], _prime("'"))
    b.info("hx", "2", TBAR, ["x"], ["x"])
    b.info("hx'", "2", "T'", ["x'"], ["x'"])
    b.info("h1", "1", "T'", ["p'"], ["n", "p", "n'", "p'"])
    ann = {
        "illustrates": "U1 counterexample",
        "concretized": True,
        "violation_classes": ["U1"],
        "violation_counts": {"U1": 2},
    }
    return b.raw(), {}, ann


def _u4_bad():
    """The middle copy of a node forgets the lower-tree view of the top node."""
    b = GameBuilder(["1"])
    b.move(TBAR, "n", "1", ["a", "b", "c"], ["z1", "z2", "z3"])
    _leaves(b, TBAR, ["z1", "z2", "z3"])
    b.prune(TBAR, "T'", [("n", "c")], _prime("'"))
    b.prune(TBAR, "T", [("n", "b"), ("n", "c")], _prime("_0"))
    b.info("h", "1", "T", ["n_0"], ["n", "n_0"])
    b.info("h'", "1", "T'", ["n'"], ["n'"])
    ann = {
        "illustrates": "U4 counterexample",
        "concretized": True,
        "violation_classes": ["U4"],
        "violation_counts": {"U4": 1},
    }
    return b.raw(), {}, ann


def _u5_bad():
    """Lower-tree copies split an information set that the objective tree keeps together."""
    b = GameBuilder(["1", "2"])
    b.move(TBAR, "x", "2", ["u", "w"], ["p", "q"])
    b.move(TBAR, "p", "1", ["a", "b"], ["zpa", "zpb"])
    b.move(TBAR, "q", "1", ["a", "b"], ["zqa", "zqb"])
    _leaves(b, TBAR, ["zpa", "zpb", "zqa", "zqb"])
    b.prune(TBAR, "T", [("p", "b"), ("q", "a")], _prime("_0"))
    b.info("hx", "2", TBAR, ["x"], ["x"])
    b.info("hx0", "2", "T", ["x_0"], ["x_0"])
    b.info("H", "1", TBAR, ["p", "q"], ["p", "q"])
    b.info("Hp", "1", "T", ["p_0"], ["p_0"])
    b.info("Hq", "1", "T", ["q_0"], ["q_0"])
    ann = {
        "illustrates": "U5 counterexample",
        "concretized": True,
        "violation_classes": ["U5"],
        "violation_counts": {"U5": 2},
    }
    return b.raw(), {}, ann


def _mixed(owner: str, entries) -> dict:
    return {"owner": owner, "weights": [{"choices": c, "weight": w} for c, w in entries]}


_BUILDERS: dict[str, Callable] = {
    "STD": _std,
    "FIG4": _fig4,
    "FIG6": _fig6,
    "FIG7": _fig7,
    "FIG8": _fig8,
    "FIG9": _fig9,
    "DIAMOND": _diamond,
    "I6_BAD_A": _i6_bad_a,
    "I6_BAD_B": _i6_bad_b,
    "P0_BAD": _p0_bad,
    "P1_BAD": _p1_bad,
    "U1_BAD": _u1_bad,
    "U4_BAD": _u4_bad,
    "U5_BAD": _u5_bad,
}

ALIASES = {
    "I6_OK": "FIG4",
    "FIG1": "P0_BAD",
    "FIG2": "P1_BAD",
    "FIG3": "U1_BAD",
    "FIG5": "I6_BAD_A",
}

# Fixtures whose validators report nothing at all.
VALID = ("STD", "FIG4", "FIG6", "FIG8", "FIG9", "DIAMOND")
# Games that pass every check except perfect recall.
RECALL_FIXTURES = ("STD", "FIG4", "FIG6", "FIG7", "FIG8", "FIG9", "DIAMOND", "I6_BAD_A", "I6_BAD_B")
NEGATIVE = ("P0_BAD", "P1_BAD", "U1_BAD", "U4_BAD", "U5_BAD", "I6_BAD_A", "I6_BAD_B")


def names() -> list[str]:
    return list(_BUILDERS)


def canonical_name(name: str) -> str:
    key = name.upper().removeprefix("FIX_")
    key = ALIASES.get(key, key)
    if key not in _BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(names())}")
    return key


@lru_cache(maxsize=None)
def _built(name: str) -> tuple[str, str]:
    raw, strategies, ann = _BUILDERS[name]()
    if strategies:
        raw["strategies"] = strategies
    return json.dumps(raw), json.dumps(ann)


@lru_cache(maxsize=None)
def _parse(name: str) -> GameDocument:
    return parse_document(json.loads(_built(name)[0]))


def fixture(name: str) -> Fixture:
    key = canonical_name(name)
    raw, ann = _built(key)
    return Fixture(key, json.loads(raw), json.loads(ann))


def shipped_json(name: str) -> str:
    """Contents of the JSON file shipped for a fixture."""
    key = canonical_name(name)
    return resources.files(__package__).joinpath("data", f"{key.lower()}.json").read_text(encoding="utf-8")


def emit(name: str) -> str:
    """Canonical game document of a fixture, annotations included."""
    fx = fixture(name)
    raw = document_to_raw(fx.document)
    raw["annotations"] = fx.annotations
    return dumps(raw)


def _observe_profile(game, profile, wanted: dict) -> dict:
    from ..strategy import occur_nodes, occurring_infosets, reach_nodes, reached_infosets

    reach, occur = reach_nodes(game, profile), occur_nodes(game, profile)
    out = {}
    for key, value in wanted.items():
        if key == "reach_includes":
            out[key] = sorted(n for n in value if n in reach)
        elif key == "reach_excludes":
            out[key] = sorted(n for n in value if n not in reach)
        elif key == "occur_includes":
            out[key] = sorted(n for n in value if n in occur)
        elif key == "occur_excludes":
            out[key] = sorted(n for n in value if n not in occur)
        elif key == "reached_infosets":
            out[key] = {i: sorted(reached_infosets(game, profile, i)) for i in value}
        elif key == "occurring_infosets":
            out[key] = {i: sorted(occurring_infosets(game, profile, i)) for i in value}
        else:
            raise KeyError(f"unknown profile annotation {key!r}")
    return out


def observe(fx: Fixture) -> dict:
    """Recompute every annotated fact of a fixture from the current code.

    The result has exactly the keys of ``fx.annotations``; a fixture is in
    order when the two serialize identically.
    """
    from ..awareness import (
        check_perfect_recall_direct,
        check_perfect_recall_records,
        check_perfect_recall_selten,
        validate_game,
    )
    from ..kuhn import check_lemma2
    from ..strategy import MixedStrategy, occ_prob, occur_nodes, reach_nodes
    from .oracles import transform_sweep

    doc = fx.document
    game = doc.game
    report = validate_game(game)
    out: dict = {}
    for key, value in fx.annotations.items():
        if key in ("illustrates", "concretized"):
            out[key] = value
        elif key == "violation_classes":
            out[key] = sorted(report.classes())
        elif key == "violation_counts":
            out[key] = {t: len(report.only(t)) for t in value}
        elif key == "recall_empty":
            out[key] = {
                "direct": check_perfect_recall_direct(game).ok,
                "records": check_perfect_recall_records(game).ok,
                "selten": check_perfect_recall_selten(game).ok,
            }
        elif key == "profiles":
            out[key] = {name: _observe_profile(game, doc.profiles[name], wanted)
                        for name, wanted in value.items()}
        elif key == "lemma2_converse":
            rows = []
            for entry in value:
                a, b = (doc.profiles[p] for p in entry["profiles"])
                i = entry["player"]
                same_others = all(a[j] == b[j] for j in a if j != i)
                witness = (same_others and occur_nodes(game, a) == occur_nodes(game, b)
                           and reach_nodes(game, a) != reach_nodes(game, b)
                           and check_lemma2(game, i).ok)
                rows.append({"player": i, "profiles": list(entry["profiles"])} if witness else {})
            out[key] = rows
        elif key == "occur_mass":
            rows = []
            for entry in value:
                prof = doc.profiles[entry["profile"]]
                i = entry["player"]
                sigma = MixedStrategy.point_mass(prof[i])
                s_minus = {j: s for j, s in prof.items() if j != i}
                mass = sum((occ_prob(game, n, sigma, s_minus)
                            for n in game.forest.trees[entry["tree"]].nodes
                            if game.forest.nodes[n].is_terminal), Fraction(0))
                rows.append({**entry, "mass": str(mass)})
            out[key] = rows
        elif key == "transform_sweep":
            out[key] = transform_sweep(game) is None
        else:
            raise KeyError(f"unknown annotation {key!r}")
    return out
