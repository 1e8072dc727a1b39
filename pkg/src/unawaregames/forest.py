"""Objective tree plus a join-semilattice of subtrees.

Every subtree node points at the objective node it copies (``copy_of``).
Copies between two subtrees are never stored; they are obtained by going
through the objective tree, which is what makes node commutation checkable.
The tree order is derived from the copy images, never declared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .report import Violation, ViolationReport

NATURE = "0"


class GameFormatError(ValueError):
    """Raised when a game description cannot be turned into a forest."""


class LatticeError(ValueError):
    """Raised when a pair of trees has no join."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise GameFormatError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise GameFormatError(f"not a rational: {value!r} (use an integer or 'p/q')")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True, eq=False)
class Node:
    id: str
    tree: str
    copy_of: str
    # agents in canonical order; empty for terminal nodes
    active: tuple[str, ...] = ()
    actions: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    # profile (one action per active agent, canonical order) -> child id
    successors: Mapping[tuple[str, ...], str] = field(default_factory=dict)
    payoffs: Mapping[str, Fraction] = field(default_factory=dict)

    @property
    def is_terminal(self) -> bool:
        return not self.active

    @property
    def kind(self) -> str:
        return "terminal" if self.is_terminal else "decision"

    def profiles(self) -> list[tuple[str, ...]]:
        return list(itertools.product(*(self.actions[j] for j in self.active)))

    def component(self, profile: tuple[str, ...], agent: str) -> str:
        return profile[self.active.index(agent)]


@dataclass(frozen=True, eq=False)
class Tree:
    id: str
    root: str
    nodes: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class GameForest:
    players: tuple[str, ...]
    has_nature: bool
    objective: str
    trees: Mapping[str, Tree]
    nodes: Mapping[str, Node]

    @property
    def agents(self) -> tuple[str, ...]:
        """Players in canonical order, nature first when present."""
        return ((NATURE,) if self.has_nature else ()) + self.players

    @property
    def tree_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.trees))

    def tree_of(self, n: str) -> str:
        return self.nodes[n].tree

    def node_ids(self) -> list[str]:
        """All nodes, grouped by tree (sorted), then by id."""
        return [n for t in self.tree_ids for n in self.trees[t].nodes]

    # -- derived structure ------------------------------------------------

    @cached_property
    def _parents(self) -> dict[str, list[tuple[str, tuple[str, ...]]]]:
        parents: dict[str, list[tuple[str, tuple[str, ...]]]] = {n: [] for n in self.nodes}
        for node in self.nodes.values():
            for key, child in node.successors.items():
                parents[child].append((node.id, key))
        return parents

    def parent(self, n: str) -> tuple[str, tuple[str, ...]] | None:
        """(parent, profile leading to n), or None at a root."""
        ps = self._parents[n]
        return ps[0] if ps else None

    @cached_property
    def _paths(self) -> dict[str, tuple[str, ...]]:
        paths: dict[str, tuple[str, ...]] = {}
        for tree in self.trees.values():
            stack = [(tree.root, (tree.root,))]
            while stack:
                n, path = stack.pop()
                if n in paths:
                    continue
                paths[n] = path
                for child in self.nodes[n].successors.values():
                    if child not in path:
                        stack.append((child, path + (child,)))
        return paths

    def path(self, n: str) -> tuple[str, ...]:
        """Root-to-n path in n's own tree (n included)."""
        return self._paths.get(n, (n,))

    def path_steps(self, n: str) -> list[tuple[str, tuple[str, ...]]]:
        """(ancestor, profile played there) for each strict ancestor of n."""
        path = self.path(n)
        steps = []
        for a, b in zip(path, path[1:]):
            node = self.nodes[a]
            key = next(k for k, c in node.successors.items() if c == b)
            steps.append((a, key))
        return steps

    def is_ancestor(self, a: str, b: str) -> bool:
        """True when a strictly precedes b in the same tree."""
        return a != b and a in self.path(b)

    @cached_property
    def _images(self) -> dict[str, frozenset[str]]:
        return {
            t: frozenset(self.nodes[n].copy_of for n in tree.nodes)
            for t, tree in self.trees.items()
        }

    @cached_property
    def _copy_index(self) -> dict[tuple[str, str], str]:
        index: dict[tuple[str, str], str] = {}
        for t in self.tree_ids:
            for n in self.trees[t].nodes:
                index.setdefault((t, self.nodes[n].copy_of), n)
        return index

    def leq(self, t1: str, t2: str) -> bool:
        """Tree order: every node of t1 has a copy in t2."""
        return self._images[t1] <= self._images[t2]

    @cached_property
    def order(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (a, b) for a in self.tree_ids for b in self.tree_ids if self.leq(a, b)
        )

    def objective_copy(self, t: str, objective_node: str) -> str | None:
        return self._copy_index.get((t, objective_node))


def copy_in(g: GameForest, n: str, t: str) -> str | None:
    """The copy of node ``n`` in tree ``t`` (which must lie below n's tree)."""
    tn = g.tree_of(n)
    if t == tn:
        return n
    if not g.leq(t, tn):
        raise ValueError(f"tree {t} is not below {tn}, the tree of {n}")
    return g.objective_copy(t, g.nodes[n].copy_of)


def join(g: GameForest, t1: str, t2: str) -> str:
    uppers = [t for t in g.tree_ids if g.leq(t1, t) and g.leq(t2, t)]
    least = [u for u in uppers if all(g.leq(u, v) for v in uppers)]
    if len(least) != 1:
        raise LatticeError(f"no join for {t1} and {t2}")
    return least[0]


# -- building ---------------------------------------------------------------


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GameFormatError(msg)


def build_forest(raw: Mapping) -> GameForest:
    """Link a parsed game description into an immutable forest.

    Only referential integrity is enforced here; Properties 0-3 and the
    lattice conditions are left to :func:`validate_structure`.
    """
    players = tuple(str(p) for p in raw.get("players", ()))
    _require(len(players) > 0, "at least one player is required")
    _require(len(set(players)) == len(players), "duplicate player identifiers")
    _require(NATURE not in players, f"player id {NATURE!r} is reserved for nature")
    has_nature = bool(raw.get("nature", False))
    agents = ((NATURE,) if has_nature else ()) + players
    objective = raw.get("objective")
    raw_trees = raw.get("trees", ())
    tree_ids = [t["id"] for t in raw_trees]
    _require(len(set(tree_ids)) == len(tree_ids), "duplicate tree identifiers")
    _require(objective in tree_ids, f"objective tree {objective!r} not declared")

    nodes: dict[str, Node] = {}
    trees: dict[str, Tree] = {}
    raw_nodes: dict[str, Mapping] = {}
    for rt in raw_trees:
        ids = []
        for rn in rt.get("nodes", ()):
            nid = rn["id"]
            _require(nid not in raw_nodes, f"duplicate node identifier {nid!r}")
            raw_nodes[nid] = rn
            ids.append(nid)
        _require(rt.get("root") in ids, f"tree {rt['id']}: root {rt.get('root')!r} is not one of its nodes")
        trees[rt["id"]] = Tree(rt["id"], rt["root"], tuple(sorted(ids)))

    owner = {n: t for t, tree in trees.items() for n in tree.nodes}
    for nid, rn in raw_nodes.items():
        t = owner[nid]
        if t == objective:
            copy = rn.get("copy_of", nid)
            _require(copy == nid, f"objective node {nid} must copy itself")
        else:
            copy = rn.get("copy_of")
            _require(copy is not None, f"node {nid} in subtree {t} lacks copy_of")
            _require(owner.get(copy) == objective,
                     f"node {nid}: copy_of target {copy!r} is not an objective node")

        raw_actions = rn.get("actions") or {}
        for j in raw_actions:
            _require(str(j) in agents, f"node {nid}: unknown agent {j!r}")
        active = tuple(j for j in agents if j in {str(k) for k in raw_actions})
        actions = {str(j): tuple(a) for j, a in raw_actions.items()}
        for j, acts in actions.items():
            _require(len(acts) > 0, f"node {nid}: empty action set for {j}")
            _require(len(set(acts)) == len(acts), f"node {nid}: repeated action label for {j}")

        successors: dict[tuple[str, ...], str] = {}
        for entry in rn.get("successors", ()):
            prof = {str(k): v for k, v in entry["profile"].items()}
            _require(set(prof) == set(active), f"node {nid}: profile {prof} must name exactly the active agents")
            key = tuple(prof[j] for j in active)
            for j, a in zip(active, key):
                _require(a in actions[j], f"node {nid}: action {a!r} not available to {j}")
            child = entry["child"]
            _require(child in raw_nodes, f"node {nid}: dangling successor {child!r}")
            _require(owner[child] == t, f"node {nid}: successor {child} lies in another tree")
            _require(key not in successors, "non-bijective successors: "
                     f"profile {key} listed twice at {nid}")
            successors[key] = child
        if active:
            expected = 1
            for j in active:
                expected *= len(actions[j])
            children = list(successors.values())
            _require(len(successors) == expected and len(set(children)) == len(children),
                     f"non-bijective successors at {nid}")
            payoffs = {}
        else:
            _require(not successors, f"terminal node {nid} has successors")
            raw_pay = {str(k): v for k, v in (rn.get("payoffs") or {}).items()}
            _require(set(players) <= set(raw_pay),
                     f"terminal node {nid} lacks a payoff for some player")
            payoffs = {p: parse_rational(raw_pay[p]) for p in players}
        nodes[nid] = Node(nid, t, copy, active, actions, successors, payoffs)

    seen: dict[frozenset, str] = {}
    for t, tree in trees.items():
        image = frozenset(nodes[n].copy_of for n in tree.nodes)
        _require(image not in seen, f"trees {seen.get(image)} and {t} have identical node sets")
        seen[image] = t

    return GameForest(players, has_nature, objective, trees, nodes)


# -- structural validation ----------------------------------------------------


def _check_arborescence(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        tree = g.trees[t]
        for n in tree.nodes:
            ps = g._parents[n]
            if n == tree.root and ps:
                yield Violation("ARB", (t, n), "root has a predecessor")
            elif n != tree.root and len(ps) != 1:
                yield Violation("ARB", (t, n), f"{len(ps)} predecessors")
        # reachability from the root also rules out cycles
        reached = {n for n in tree.nodes if n in g._paths}
        for n in tree.nodes:
            if n not in reached:
                yield Violation("ARB", (t, n), "not reachable from the root")


def _check_copies(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        by_copy: dict[str, list[str]] = {}
        for n in g.trees[t].nodes:
            by_copy.setdefault(g.nodes[n].copy_of, []).append(n)
        for obj, ns in sorted(by_copy.items()):
            if len(ns) > 1:
                yield Violation("COPY", (t, obj), "copy map not injective: " + ", ".join(ns))
    chains = [
        (a, b, c) for a in g.tree_ids for b in g.tree_ids for c in g.tree_ids
        if g.leq(a, b) and g.leq(b, c)
    ]
    for lo, mid, hi in chains:
        for n in g.trees[hi].nodes:
            via = copy_in(g, n, mid)
            if via is None:
                continue
            direct = copy_in(g, n, lo)
            if copy_in(g, via, lo) != direct:
                yield Violation("COPY", (lo, mid, hi, n), "nodes do not commute")


def _check_lattice(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        if not g.leq(t, g.objective):
            yield Violation("LAT", (t,), "not below the objective tree")
    for a, b in itertools.combinations(g.tree_ids, 2):
        try:
            join(g, a, b)
        except LatticeError:
            yield Violation("LAT", (a, b), "no join")


def _check_property0(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        if t == g.objective:
            continue
        image = g._images[t]
        for obj in sorted(image):
            anc = g.path(obj)[:-1]
            for k, top in enumerate(anc):
                if top not in image:
                    continue
                for mid in anc[k + 1:]:
                    if mid not in image:
                        yield Violation("P0", (t, top, mid, obj),
                                        f"{mid} dropped between {top} and {obj}")


def _check_property1(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        for n in g.trees[t].nodes:
            node = g.nodes[n]
            if node.is_terminal and not g.nodes[node.copy_of].is_terminal:
                yield Violation("P1", (t, n), f"new terminal node (copies decision node {node.copy_of})")


def _check_property2(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        if t == g.objective:
            continue
        for n in g.trees[t].nodes:
            node = g.nodes[n]
            obj = g.nodes[node.copy_of]
            if node.is_terminal:
                continue
            if node.active != obj.active:
                yield Violation("P2", (t, n), "active players differ from the objective node")
                continue
            bad = [j for j in node.active if not set(node.actions[j]) <= set(obj.actions[j])]
            if bad:
                yield Violation("P2", (t, n), "actions not a subset for " + ", ".join(bad))
                continue
            for key, child in node.successors.items():
                target = obj.successors[key]
                landed = g.nodes[child].copy_of
                if landed == target:
                    continue
                if g.is_ancestor(target, landed):
                    # a skipped intermediate node; reported as Property 0
                    continue
                yield Violation("P2", (t, n, "/".join(key)),
                                f"profile leads to {child} (copy of {landed}), objective leads to {target}")


def _check_property3(g: GameForest) -> Iterable[Violation]:
    for t in g.tree_ids:
        decision = [g.nodes[n] for n in g.trees[t].nodes if not g.nodes[n].is_terminal]
        for a, b in itertools.combinations(decision, 2):
            for i in set(a.active) & set(b.active):
                sa, sb = set(a.actions[i]), set(b.actions[i])
                if sa & sb and sa != sb:
                    yield Violation("P3", (t, i, a.id, b.id), "overlapping but unequal action sets")


STRUCTURE_TAGS = ("ARB", "COPY", "LAT", "P0", "P1", "P2", "P3")


def validate_structure(g: GameForest) -> ViolationReport:
    """Properties 0-3, arborescence, copy-map sanity and the lattice.

    All checks run; the report is empty iff everything holds.
    """
    found: list[Violation] = []
    for check in (_check_arborescence, _check_copies, _check_lattice,
                  _check_property0, _check_property1, _check_property2,
                  _check_property3):
        found.extend(check(g))
    return ViolationReport(found)
