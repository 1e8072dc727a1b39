"""Seeded random games that pass every validator, perfect recall included.

Construction, restricted to chains of trees T0 < T1 < ... < T{K-1}, where
T{K-1} is the objective tree:

1. Sample the objective tree. Most nodes have one mover; some have two
   simultaneous movers or a chance move.
2. Group each player's nodes into prospective information sets. Only nodes
   with the same experience record (earlier groups and actions taken there)
   and the same number of actions may share a group. Labels are unique per
   group, so different groups never share an action name.
3. Prune downward. Each tree keeps, per group (and per chance node), a
   subset of the actions kept one level up, so all members of a group keep
   the same actions in every tree.
4. Give every group an awareness level L, at least the lowest tree holding
   each member and at least the level of every group in its record. At a
   copy in tree m the information set lives in T_min(m, L) and consists of
   the copies of the group's members there.

Equal records give perfect recall, and monotone levels give the awareness
conditions. Games that exceed the strategy-count budget are resampled.
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import asdict, dataclass
from typing import Any

from ..awareness import Game, validate_game
from ..document import parse_document
from ..forest import NATURE

LIMITS = {"num_trees": 3, "max_depth": 5, "max_branch": 3, "players": 3}


class GenerationError(RuntimeError):
    """No valid game was found within the retry budget."""


class _TooBig(Exception):
    pass


@dataclass(frozen=True)
class GenParams:
    num_trees: int = 2
    max_depth: int = 4
    max_branch: int = 3
    players: int = 2
    nature: bool = False
    # resample when an agent has more pure strategies than this
    max_strategies: int = 12
    # ... or when the product over all agents exceeds this
    max_profiles: int = 300
    max_nodes: int = 60

    def __post_init__(self):
        for key, cap in LIMITS.items():
            value = getattr(self, key)
            if not 1 <= value <= cap:
                raise ValueError(f"{key} must be between 1 and {cap}, got {value}")
        if self.num_trees > 1 and self.max_branch == 1:
            raise ValueError("several trees need max_branch >= 2: with one action per node nothing can be pruned")


@dataclass
class _ONode:
    idx: int
    depth: int
    parent: int | None
    key: tuple[int, ...]
    active: tuple[str, ...] = ()
    counts: dict[str, int] | None = None
    children: dict[tuple[int, ...], int] | None = None
    payoffs: tuple[int, ...] = ()


class _Attempt:
    def __init__(self, rng: random.Random, p: GenParams):
        self.rng = rng
        self.p = p
        self.players = [str(k) for k in range(1, p.players + 1)]
        self.nodes: list[_ONode] = []

    # 1. objective tree -------------------------------------------------------

    def _movers(self) -> tuple[str, ...]:
        r = self.rng.random()
        if self.p.nature and r < 0.15:
            return (NATURE,)
        if len(self.players) >= 2 and r > 0.9:
            return tuple(sorted(self.rng.sample(self.players, 2), key=int))
        return (self.rng.choice(self.players),)

    def _count(self) -> int:
        if self.p.max_branch == 1:
            return 1
        return self.rng.randint(2, self.p.max_branch) if self.rng.random() < 0.85 else 1

    def sample_tree(self) -> bool:
        def build(depth: int, parent: int | None, key: tuple[int, ...]) -> int:
            node = _ONode(len(self.nodes), depth, parent, key)
            self.nodes.append(node)
            if len(self.nodes) > self.p.max_nodes:
                raise _TooBig
            stop = 0.2 + 0.18 * depth
            if depth >= self.p.max_depth or (depth > 0 and self.rng.random() < stop):
                node.payoffs = tuple(self.rng.randint(0, 9) for _ in self.players)
                return node.idx
            node.active = self._movers()
            node.counts = {j: self._count() for j in node.active}
            node.children = {}
            for k in itertools.product(*(range(node.counts[j]) for j in node.active)):
                node.children[k] = build(depth + 1, node.idx, k)
            return node.idx

        try:
            build(0, None, ())
        except _TooBig:
            return False
        return True

    # 2. groups ---------------------------------------------------------------

    def path(self, x: int) -> list[tuple[int, tuple[int, ...]]]:
        steps = []
        node = self.nodes[x]
        while node.parent is not None:
            steps.append((node.parent, node.key))
            parent = self.nodes[node.parent]
            node = parent
        return steps[::-1]

    def make_groups(self) -> None:
        self.group_of: dict[tuple[int, str], int] = {}
        self.groups: list[dict[str, Any]] = []
        for i in self.players:
            mine = [n for n in self.nodes if i in n.active]
            by_round: dict[int, list[_ONode]] = {}
            for n in mine:
                own = [(a, key) for a, key in self.path(n.idx) if i in self.nodes[a].active]
                by_round.setdefault(len(own), []).append(n)
            for r in sorted(by_round):
                pools: dict[tuple, list[int]] = {}
                for n in by_round[r]:
                    record = tuple(
                        (self.group_of[(a, i)], key[self.nodes[a].active.index(i)])
                        for a, key in self.path(n.idx) if i in self.nodes[a].active
                    )
                    pools.setdefault((record, n.counts[i]), []).append(n.idx)
                for (record, _), members in sorted(pools.items()):
                    self.rng.shuffle(members)
                    parts = self.rng.randint(1, len(members)) if self.rng.random() < 0.4 else 1
                    cuts = sorted(self.rng.sample(range(1, len(members)), parts - 1))
                    for chunk in (members[a:b] for a, b in zip([0] + cuts, cuts + [len(members)])):
                        g = len(self.groups)
                        self.groups.append({"player": i, "members": sorted(chunk),
                                            "record": record})
                        for x in chunk:
                            self.group_of[(x, i)] = g

    # 3. pruning --------------------------------------------------------------

    def unit(self, x: int, j: str):
        return ("c", x) if j == NATURE else ("g", self.group_of[(x, j)])

    def prune(self) -> bool:
        k = self.p.num_trees
        units = {self.unit(n.idx, j): n.counts[j] for n in self.nodes if n.active for j in n.active}
        self.kept = [None] * k
        self.kept[k - 1] = {u: tuple(range(c)) for u, c in units.items()}
        self.present = [None] * k
        self.present[k - 1] = self.reachable(self.kept[k - 1])
        for m in range(k - 2, -1, -1):
            for _ in range(30):
                kept = {}
                for u, acts in self.kept[m + 1].items():
                    if len(acts) > 1 and self.rng.random() < 0.35:
                        size = self.rng.randint(1, len(acts) - 1)
                        acts = tuple(sorted(self.rng.sample(acts, size)))
                    kept[u] = acts
                present = self.reachable(kept)
                if present < self.present[m + 1]:
                    self.kept[m], self.present[m] = kept, present
                    break
            else:
                return False
        return True

    def reachable(self, kept) -> frozenset[int]:
        out = set()
        stack = [0]
        while stack:
            x = stack.pop()
            out.add(x)
            node = self.nodes[x]
            for key, child in (node.children or {}).items():
                if all(key[a] in kept[self.unit(x, j)] for a, j in enumerate(node.active)):
                    stack.append(child)
        return frozenset(out)

    # 4. awareness levels and information sets -----------------------------------

    def exist(self, x: int) -> int:
        return min(m for m in range(self.p.num_trees) if x in self.present[m])

    def levels(self) -> None:
        top = self.p.num_trees - 1
        self.level: dict[int, int] = {}
        for g, grp in enumerate(self.groups):  # groups were created record-first
            low = max(self.exist(x) for x in grp["members"])
            for prev, _ in grp["record"]:
                low = max(low, self.level[prev])
            self.level[g] = self.rng.randint(low, top)

    # budgets and output -------------------------------------------------------

    def labels(self, x: int, j: str) -> list[str]:
        node = self.nodes[x]
        if j == NATURE:
            return [f"c{x}{string.ascii_lowercase[a]}" for a in range(node.counts[j])]
        g = self.group_of[(x, j)]
        return [f"g{g}{string.ascii_lowercase[a]}" for a in range(node.counts[j])]

    def nid(self, m: int, x: int) -> str:
        return f"T{m}/n{x}"

    def infosets(self):
        out = {}
        for g, grp in enumerate(self.groups):
            i, level = grp["player"], self.level[g]
            for m in range(self.p.num_trees):
                here = [x for x in grp["members"] if x in self.present[m]]
                if not here:
                    continue
                home = min(m, level)
                hid = f"h{i}.{g}@T{home}"
                entry = out.setdefault(hid, {
                    "id": hid, "owner": i, "tree": f"T{home}",
                    "members": [self.nid(home, x) for x in grp["members"] if x in self.present[home]],
                    "assigned": [], "actions": len(self.kept[home][("g", g)]),
                })
                entry["assigned"].extend(self.nid(m, x) for x in here)
        return list(out.values())

    def within_budget(self, infosets) -> bool:
        sizes = {j: 1 for j in self.players}
        for h in infosets:
            sizes[h["owner"]] *= h["actions"]
        if self.p.nature:
            sizes[NATURE] = 1
            for m in range(self.p.num_trees):
                for x in self.present[m]:
                    if NATURE in self.nodes[x].active:
                        sizes[NATURE] *= len(self.kept[m][("c", x)])
        total = 1
        for s in sizes.values():
            total *= s
        return max(sizes.values()) <= self.p.max_strategies and total <= self.p.max_profiles

    def raw(self, infosets) -> dict:
        top = self.p.num_trees - 1
        trees = []
        for m in range(self.p.num_trees):
            nodes = []
            for x in sorted(self.present[m]):
                node = self.nodes[x]
                entry: dict[str, Any] = {"id": self.nid(m, x)}
                if m != top:
                    entry["copy_of"] = self.nid(top, x)
                if not node.active:
                    entry["payoffs"] = {p: str(v) for p, v in zip(self.players, node.payoffs)}
                else:
                    names = {j: self.labels(x, j) for j in node.active}
                    kept = {j: self.kept[m][self.unit(x, j)] for j in node.active}
                    entry["actions"] = {j: [names[j][a] for a in kept[j]] for j in node.active}
                    entry["successors"] = [
                        {"profile": {j: names[j][a] for j, a in zip(node.active, key)},
                         "child": self.nid(m, child)}
                        for key, child in node.children.items()
                        if all(key[a] in kept[j] for a, j in enumerate(node.active))
                    ]
                nodes.append(entry)
            trees.append({"id": f"T{m}", "root": self.nid(m, 0), "nodes": nodes})
        return {
            "schema": "unaware-game/1",
            "players": list(self.players),
            "nature": self.p.nature,
            "objective": f"T{top}",
            "trees": trees,
            "infosets": [{k: v for k, v in h.items() if k != "actions"} for h in infosets],
            "generator": asdict(self.p),
        }


def generate_raw(seed: int, params: GenParams | None = None, retries: int = 500) -> dict:
    """Raw game document for a seed; deterministic."""
    p = params or GenParams()
    rng = random.Random(seed)
    for _ in range(retries):
        att = _Attempt(rng, p)
        if not att.sample_tree():
            continue
        att.make_groups()
        if not att.prune():
            continue
        att.levels()
        infosets = att.infosets()
        if not att.within_budget(infosets):
            continue
        raw = att.raw(infosets)
        raw["generator"]["seed"] = seed
        if validate_game(parse_document(raw).game).ok:
            return raw
    raise GenerationError(f"no game within budget after {retries} attempts (seed {seed}, {p})")


def generate(seed: int, params: GenParams | None = None, retries: int = 500) -> Game:
    return parse_document(generate_raw(seed, params, retries)).game


def corpus_params(seed: int) -> GenParams:
    """Parameters of the standard corpus: tree count, players and chance vary with the seed."""
    return GenParams(
        num_trees=(seed - 1) % 3 + 1,
        players=(seed - 1) // 3 % 3 + 1,
        nature=seed % 4 == 0,
    )


def standard_corpus(seeds=range(1, 31)) -> list[tuple[str, Game]]:
    return [(f"gen{seed}", generate(seed, corpus_params(seed))) for seed in seeds]
