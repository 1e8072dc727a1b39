"""Information sets over a forest and the properties they must satisfy.

An information set lives in a home tree and may be assigned at nodes of
richer trees, so ``h_i(n)`` is stored as an explicit (node, player) map
rather than inferred from membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

from .forest import NATURE, GameForest, GameFormatError, copy_in, validate_structure
from .report import Violation, ViolationReport


@dataclass(frozen=True, eq=False)
class InformationSet:
    id: str
    owner: str
    home_tree: str
    members: tuple[str, ...]
    actions: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class AwarenessAssignment:
    infosets: Mapping[str, InformationSet]
    assign: Mapping[tuple[str, str], str]

    def of_player(self, i: str) -> list[InformationSet]:
        return [h for _, h in sorted(self.infosets.items()) if h.owner == i]


@dataclass(frozen=True, eq=False)
class Game:
    """A forest together with its information-set assignment."""

    forest: GameForest
    awareness: AwarenessAssignment

    @property
    def players(self) -> tuple[str, ...]:
        return self.forest.players

    @property
    def agents(self) -> tuple[str, ...]:
        return self.forest.agents

    def h(self, n: str, i: str) -> InformationSet:
        return self.awareness.infosets[self.awareness.assign[(n, i)]]

    def hid(self, n: str, i: str) -> str | None:
        return self.awareness.assign.get((n, i))

    def infoset(self, hid: str) -> InformationSet:
        return self.awareness.infosets[hid]

    def active_pairs(self) -> list[tuple[str, str]]:
        """(node, player) for every non-nature player active at a node."""
        g = self.forest
        return [(n, i) for n in g.node_ids() for i in g.nodes[n].active if i != NATURE]

    @cached_property
    def assigned_at(self) -> dict[str, tuple[str, ...]]:
        """Nodes at which each information set is the player's state of mind."""
        out: dict[str, list[str]] = {hid: [] for hid in self.awareness.infosets}
        for (n, _), hid in sorted(self.awareness.assign.items()):
            out[hid].append(n)
        return {k: tuple(v) for k, v in out.items()}

    def own_steps(self, i: str, n: str) -> list[tuple[str, str]]:
        """(ancestor, i's action there) for i-active strict ancestors of n."""
        g = self.forest
        return [(a, g.nodes[a].component(key, i)) for a, key in g.path_steps(n)
                if i in g.nodes[a].active]

    @cached_property
    def _own_history(self) -> dict[tuple[str, str], frozenset[tuple[str, str]]]:
        out = {}
        for i in self.players:
            for n in self.forest.nodes:
                out[(i, n)] = frozenset(
                    (self.hid(a, i), act) for a, act in self.own_steps(i, n)
                )
        return out

    def own_history(self, i: str, n: str) -> frozenset[tuple[str, str]]:
        """Set of (information set, action) pairs i took on the way to n."""
        return self._own_history[(i, n)]


def build_awareness(g: GameForest, raw_infosets: Iterable[Mapping]) -> AwarenessAssignment:
    infosets: dict[str, InformationSet] = {}
    assign: dict[tuple[str, str], str] = {}
    for rh in raw_infosets:
        hid = rh["id"]
        owner = str(rh["owner"])
        if hid in infosets:
            raise GameFormatError(f"duplicate information set {hid!r}")
        if owner not in g.players:
            raise GameFormatError(f"information set {hid}: owner {owner!r} is not a player")
        home = rh.get("tree")
        if home not in g.trees:
            raise GameFormatError(f"information set {hid}: unknown home tree {home!r}")
        members = tuple(sorted(rh.get("members", ())))
        if not members:
            raise GameFormatError(f"information set {hid} is empty")
        for m in itertools.chain(members, rh.get("assigned", ())):
            if m not in g.nodes:
                raise GameFormatError(f"information set {hid}: unknown node {m!r}")
        first = g.nodes[members[0]]
        actions = tuple(first.actions.get(owner, ()))
        infosets[hid] = InformationSet(hid, owner, home, members, actions)
        for n in rh.get("assigned", ()):
            if owner not in g.nodes[n].active:
                raise GameFormatError(f"information set {hid} assigned at {n} where {owner} is not active")
            if (n, owner) in assign:
                raise GameFormatError(f"two information sets assigned at ({n}, {owner})")
            assign[(n, owner)] = hid
    return AwarenessAssignment(infosets, assign)


# -- U0, U1, U3-U5, I2-I5 ------------------------------------------------------


def _check_assignment(game: Game) -> Iterable[Violation]:
    g = game.forest
    for n, i in game.active_pairs():
        if game.hid(n, i) is None:
            yield Violation("ASSIGN", (n, i), "no information set assigned")
    for hid, h in sorted(game.awareness.infosets.items()):
        if not game.assigned_at[hid]:
            yield Violation("ASSIGN", (hid,), "never assigned")
        for m in h.members:
            if g.tree_of(m) != h.home_tree:
                yield Violation("ASSIGN", (hid, m), f"member outside home tree {h.home_tree}")
            elif h.owner not in g.nodes[m].active:
                yield Violation("ASSIGN", (hid, m), f"{h.owner} not active at member")
        acts = {tuple(sorted(g.nodes[m].actions.get(h.owner, ()))) for m in h.members}
        if len(acts) > 1:
            yield Violation("ACT", (hid,), "members have different action sets")


def _pairs(game: Game):
    for n, i in game.active_pairs():
        hid = game.hid(n, i)
        if hid is not None:
            yield n, i, game.infoset(hid)


def _check_u0_u1(game: Game) -> Iterable[Violation]:
    g = game.forest
    for n, i, h in _pairs(game):
        tn = g.tree_of(n)
        if not g.leq(h.home_tree, tn):
            yield Violation("U0", (n, i, h.id), f"home tree {h.home_tree} not below {tn}")
            continue
        c = copy_in(g, n, h.home_tree)
        if c is not None and c not in h.members:
            yield Violation("U1", (n, i, h.id), f"omits the copy {c}")


def _check_i2_i4(game: Game) -> Iterable[Violation]:
    g = game.forest
    for n, i, h in _pairs(game):
        mine = set(g.nodes[n].actions[i])
        for m in h.members:
            other = game.hid(m, i)
            if other is not None and other != h.id:
                yield Violation("I2", (n, i, m), f"h({m}) = {other} but h({n}) = {h.id}")
            if not set(g.nodes[m].actions.get(i, ())) <= mine:
                yield Violation("I4", (n, i, m), "imaginary actions")


def _check_i3(game: Game) -> Iterable[Violation]:
    g = game.forest
    for hid, h in sorted(game.awareness.infosets.items()):
        home = h.home_tree
        members = set(h.members)
        for d in g.trees[home].nodes:
            if h.owner not in g.nodes[d].active:
                continue
            starts = [m for m in g.path(d) if m in members]
            if not starts:
                continue
            dh = game.hid(d, h.owner)
            if dh is not None and game.infoset(dh).home_tree != home:
                yield Violation("I3", (hid, starts[0], d),
                                f"h({d}) lies in {game.infoset(dh).home_tree}, not {home}")


def _check_i5(game: Game) -> Iterable[Violation]:
    g = game.forest
    for t in g.tree_ids:
        for i in game.players:
            nodes = [n for n in g.trees[t].nodes if i in g.nodes[n].active]
            for a, b in itertools.combinations(nodes, 2):
                if set(g.nodes[a].actions[i]) != set(g.nodes[b].actions[i]):
                    continue
                ha, hb = game.hid(a, i), game.hid(b, i)
                if ha is not None and hb is not None and ha != hb:
                    yield Violation("I5", (t, i, a, b), "same action names, different information sets")


def _active_copy(game: Game, n: str, t: str, i: str) -> str | None:
    g = game.forest
    c = copy_in(g, n, t)
    if c is None or i not in g.nodes[c].active:
        return None
    return c


def _check_u3_u4_u5(game: Game) -> Iterable[Violation]:
    g = game.forest
    for n, i, h in _pairs(game):
        tn = g.tree_of(n)
        lower = [t for t in g.tree_ids if g.leq(t, tn)]
        # U4: every tree between the home tree and T_n keeps the same set
        for t in lower:
            if not g.leq(h.home_tree, t):
                continue
            c = _active_copy(game, n, t, i)
            if c is not None and game.hid(c, i) != h.id:
                yield Violation("U4", (n, i, t), f"h({c}) = {game.hid(c, i)}, expected {h.id}")
        # U5: below the home tree, the set is the copies of the members
        if g.leq(h.home_tree, tn):
            for t in lower:
                if not g.leq(t, h.home_tree):
                    continue
                c = _active_copy(game, n, t, i)
                if c is None or game.hid(c, i) is None:
                    continue
                expected = {copy_in(g, m, t) for m in h.members} - {None}
                if set(game.h(c, i).members) != expected:
                    yield Violation("U5", (n, i, t), f"h({c}) is not the copies of h({n})")
        # U3: awareness of one's own node survives in lower trees
        if n in h.members:
            for t in lower:
                if t == tn:
                    continue
                c = _active_copy(game, n, t, i)
                if c is not None and game.hid(c, i) is not None and c not in game.h(c, i).members:
                    yield Violation("U3", (n, i, t), f"{c} not in its own information set")


AWARENESS_TAGS = ("ASSIGN", "ACT", "U0", "U1", "I2", "I3", "I4", "I5", "U3", "U4", "U5")


def validate_awareness(game: Game) -> ViolationReport:
    found: list[Violation] = []
    for check in (_check_assignment, _check_u0_u1, _check_i2_i4, _check_i3,
                  _check_i5, _check_u3_u4_u5):
        found.extend(check(game))
    return ViolationReport(found)


# -- perfect recall ------------------------------------------------------------


def _own_moves(game: Game, i: str):
    """(n1, action, nk) for i-active n1 strictly before i-active nk."""
    g = game.forest
    for nk in g.node_ids():
        if i not in g.nodes[nk].active:
            continue
        for n1, act in game.own_steps(i, nk):
            yield n1, act, nk


def check_perfect_recall_direct(game: Game) -> ViolationReport:
    found = []
    for i in game.players:
        for n1, act, nk in _own_moves(game, i):
            h1 = game.hid(n1, i)
            hk = game.hid(nk, i)
            if h1 is None or hk is None:
                continue
            for other in game.infoset(hk).members:
                if (h1, act) not in game.own_history(i, other):
                    found.append(Violation("I6", (i, n1, act, nk, other),
                                           f"no path to {other} playing {act} at {h1}"))
    return ViolationReport(found)


def experience_record(game: Game, i: str, n: str) -> list[tuple[str, str]]:
    if i not in game.forest.nodes[n].active:
        raise ValueError(f"player {i} is not active at {n}")
    return [(game.hid(a, i), act) for a, act in game.own_steps(i, n)]


def check_perfect_recall_records(game: Game) -> ViolationReport:
    g = game.forest
    found = []
    for n, i, h in _pairs(game):
        mine = experience_record(game, i, n)
        for other in h.members:
            if other == n or i not in g.nodes[other].active:
                continue
            theirs = experience_record(game, i, other)
            if theirs != mine:
                found.append(Violation("R1", (i, n, other), f"E({n}) = {mine} vs E({other}) = {theirs}"))
    return ViolationReport(found)


def check_perfect_recall_selten(game: Game) -> ViolationReport:
    found = []
    for i in game.players:
        same_set: dict[str, list[str]] = {}
        for n, j, h in _pairs(game):
            if j == i:
                same_set.setdefault(h.id, []).append(n)
        for n1, act, nk in _own_moves(game, i):
            h1, hk = game.hid(n1, i), game.hid(nk, i)
            if h1 is None or hk is None:
                continue
            for other in same_set.get(hk, ()):
                if (h1, act) not in game.own_history(i, other):
                    found.append(Violation("R2", (i, n1, act, nk, other),
                                           f"no {h1}-node playing {act} before {other}"))
    return ViolationReport(found)


def precedes(game: Game, h: InformationSet, h2: InformationSet) -> bool:
    """h precedes h2 when every member of h2 has a member of h strictly above it."""
    if h.home_tree != h2.home_tree or h.id == h2.id:
        return False
    g = game.forest
    return all(any(g.is_ancestor(m, m2) for m in h.members) for m2 in h2.members)


def check_derived(game: Game) -> ViolationReport:
    """No absent-mindedness, awareness never decreases, preceding sets form chains."""
    g = game.forest
    found = []
    for hid, h in sorted(game.awareness.infosets.items()):
        for a, b in itertools.combinations(h.members, 2):
            if g.is_ancestor(a, b) or g.is_ancestor(b, a):
                found.append(Violation("NAM", (hid, a, b), "two members on one path"))
    for i in game.players:
        for n1, _, nk in _own_moves(game, i):
            h1, hk = game.hid(n1, i), game.hid(nk, i)
            if h1 is None or hk is None:
                continue
            t1, tk = game.infoset(h1).home_tree, game.infoset(hk).home_tree
            if not g.leq(t1, tk):
                found.append(Violation("DA", (i, n1, nk), f"awareness drops from {t1} to {tk}"))
        sets = game.awareness.of_player(i)
        for h2 in sets:
            preds = [h for h in sets if precedes(game, h, h2)]
            for a, b in itertools.combinations(preds, 2):
                if not (precedes(game, a, b) or precedes(game, b, a)):
                    found.append(Violation("PREC", (i, h2.id, a.id, b.id), "predecessors not totally ordered"))
    return ViolationReport(found)


RECALL_TAGS = ("I6", "R1", "R2")
DERIVED_TAGS = ("NAM", "DA", "PREC")


def validate_game(game: Game, recall: bool = True) -> ViolationReport:
    """Every structural, awareness and (optionally) perfect-recall check."""
    report = validate_structure(game.forest) + validate_awareness(game)
    if recall:
        report = (report + check_perfect_recall_direct(game) + check_perfect_recall_records(game)
                  + check_perfect_recall_selten(game) + check_derived(game))
    return report


def perfect_recall_players(game: Game) -> set[str]:
    bad = {v.witness[0] for v in check_perfect_recall_direct(game)}
    return set(game.players) - bad


# -- tree relations and T-partial games -------------------------------------------


def tree_relations(game: Game) -> tuple[frozenset, frozenset]:
    """The direct relation T >-> T' and its transitive closure."""
    g = game.forest
    direct = {(g.tree_of(n), h.home_tree) for n, _, h in _pairs(game)}
    closure = set(direct)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            break
        closure |= extra
    return frozenset(direct), frozenset(closure)


def t_partial_game(game: Game, t: str) -> Game:
    """Restrict the game to ``t`` and the trees reachable from it by awareness."""
    g = game.forest
    if t not in g.trees:
        raise ValueError(f"unknown tree {t!r}")
    _, closure = tree_relations(game)
    keep = {t} | {b for a, b in closure if a == t}
    for k in keep:
        if not g.leq(k, t):
            raise ValueError(f"tree {k} is reachable from {t} but not below it")
    nodes = {}
    for k in keep:
        for n in g.trees[k].nodes:
            node = g.nodes[n]
            new_copy = n if k == t else g.objective_copy(t, node.copy_of)
            nodes[n] = replace(node, copy_of=new_copy)
    trees = {k: g.trees[k] for k in sorted(keep)}
    forest = GameForest(g.players, g.has_nature, t, trees, nodes)
    infosets = {hid: h for hid, h in game.awareness.infosets.items() if h.home_tree in keep}
    assign = {(n, i): hid for (n, i), hid in game.awareness.assign.items() if n in nodes}
    return Game(forest, AwarenessAssignment(infosets, assign))


def partial_infosets(game: Game, i: str, t: str) -> list[str]:
    """Ids of i's information sets in the T-partial game."""
    sub = t_partial_game(game, t)
    return [h.id for h in sub.awareness.of_player(i)]
