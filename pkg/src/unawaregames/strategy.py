"""Pure, mixed and behavior strategies; reach and occur semantics.

Nature is handled like a player whose decision points are its own
decision nodes (one per node, in every tree). Players' decision points are
their information sets. All probabilities are exact ``Fraction`` values.
"""

from __future__ import annotations

import itertools
import os
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Union

from .awareness import Game, t_partial_game
from .forest import NATURE

DEFAULT_CAP = 10**6
CAP_ENV = "UNAWARE_ENUM_CAP"


class EnumerationCapError(RuntimeError):
    """A product of strategy sets exceeds the configured enumeration cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"combinatorial explosion: {what} has {size} elements (cap {cap}; set {CAP_ENV} to raise it)")
        self.size = size
        self.cap = cap


class ConsistencyError(RuntimeError):
    """An induced action is not available where it is played."""


def enumeration_cap() -> int:
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


@dataclass(frozen=True, order=True)
class PureStrategy:
    owner: str
    # (decision point, action) sorted by decision point
    choices: tuple[tuple[str, str], ...]

    @cached_property
    def _map(self) -> dict[str, str]:
        return dict(self.choices)

    def __getitem__(self, point: str) -> str:
        return self._map[point]

    def get(self, point: str, default=None):
        return self._map.get(point, default)

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.choices)

    def label(self) -> str:
        return "(" + ",".join(a for _, a in self.choices) + ")"

    @cached_property
    def choice_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.choices)

    def as_dict(self) -> dict[str, str]:
        return dict(self.choices)

    @classmethod
    def of(cls, owner: str, choices: Mapping[str, str]) -> "PureStrategy":
        return cls(owner, tuple(sorted(choices.items())))


# Nature's pure strategies pick an action at every nature decision node.
NatureStrategy = PureStrategy


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    owner: str
    weights: Mapping[PureStrategy, Fraction]

    def __post_init__(self):
        # frozen copy: reach probabilities are memoized per strategy object
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("mixed strategy has a negative weight")
        if sum(self.weights.values(), Fraction(0)) != 1:
            raise ValueError("mixed strategy weights do not sum to 1")
        if any(s.owner != self.owner for s in self.weights):
            raise ValueError("mixed strategy mixes strategies of different owners")

    def support(self) -> list[tuple[PureStrategy, Fraction]]:
        return sorted((s, w) for s, w in self.weights.items() if w)

    @classmethod
    def point_mass(cls, s: PureStrategy) -> "MixedStrategy":
        return cls(s.owner, {s: Fraction(1)})


@dataclass(frozen=True, eq=False)
class BehaviorStrategy:
    owner: str
    locals: Mapping[str, Mapping[str, Fraction]]

    def __post_init__(self):
        object.__setattr__(self, "locals", MappingProxyType(
            {p: MappingProxyType(dict(d)) for p, d in self.locals.items()}))
        for point, dist in self.locals.items():
            if any(p < 0 for p in dist.values()):
                raise ValueError(f"negative probability at {point}")
            if sum(dist.values(), Fraction(0)) != 1:
                raise ValueError(f"local distribution at {point} does not sum to 1")

    def prob(self, point: str, action: str) -> Fraction:
        return Fraction(self.locals[point].get(action, 0))


Strategy = Union[MixedStrategy, BehaviorStrategy]


# -- decision points -----------------------------------------------------------


def decision_points(game: Game, agent: str) -> list[tuple[str, tuple[str, ...]]]:
    """(point, actions) for an agent, in canonical order."""
    g = game.forest
    if agent == NATURE:
        return [(n, g.nodes[n].actions[NATURE]) for n in g.node_ids()
                if NATURE in g.nodes[n].active]
    return [(h.id, h.actions) for h in game.awareness.of_player(agent)]


def point_at(game: Game, agent: str, n: str) -> str:
    return n if agent == NATURE else game.hid(n, agent)


def check_behavior(game: Game, beta: BehaviorStrategy) -> None:
    """Raise ValueError unless beta covers every decision point within its actions."""
    for point, actions in decision_points(game, beta.owner):
        if point not in beta.locals:
            raise ValueError(f"behavior strategy gives no distribution at {point}")
        extra = set(beta.locals[point]) - set(actions)
        if extra and any(beta.locals[point][a] for a in extra):
            raise ValueError(f"behavior strategy uses unavailable actions {sorted(extra)} at {point}")


def _check_cap(what: str, size: int, cap: int | None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if size > cap:
        raise EnumerationCapError(what, size, cap)


def enumerate_pure(game: Game, agent: str, cap: int | None = None) -> list[PureStrategy]:
    """The full product of action sets over the agent's decision points."""
    points = decision_points(game, agent)
    size = 1
    for _, acts in points:
        size *= len(acts)
    _check_cap(f"S_{agent}", size, cap)
    names = [p for p, _ in points]
    return [PureStrategy(agent, tuple(zip(names, combo)))
            for combo in itertools.product(*(acts for _, acts in points))]


def t_partial_strategy(game: Game, s: PureStrategy, t: str) -> PureStrategy:
    sub = t_partial_game(game, t)
    keep = {p for p, _ in decision_points(sub, s.owner)}
    return PureStrategy(s.owner, tuple(c for c in s.choices if c[0] in keep))


def opponent_profiles(game: Game, agent: str, cap: int | None = None) -> list[dict[str, PureStrategy]]:
    others = [j for j in game.agents if j != agent]
    spaces = [enumerate_pure(game, j, cap) for j in others]
    size = 1
    for sp in spaces:
        size *= len(sp)
    _check_cap(f"S_-{agent}", size, cap)
    return [dict(zip(others, combo)) for combo in itertools.product(*spaces)]


def profile_key(profile: Mapping[str, PureStrategy]) -> tuple:
    return tuple((j, profile[j].choices) for j in sorted(profile))


# -- play --------------------------------------------------------------------


def action_at(game: Game, profile: Mapping[str, PureStrategy], agent: str, n: str) -> str:
    return profile[agent][point_at(game, agent, n)]


def play_path(game: Game, profile: Mapping[str, PureStrategy], t: str) -> tuple[str, ...]:
    """Path of play in tree t under the actions induced by the profile."""
    g = game.forest
    n = g.trees[t].root
    path = [n]
    while not g.nodes[n].is_terminal:
        node = g.nodes[n]
        key = tuple(action_at(game, profile, j, n) for j in node.active)
        child = node.successors.get(key)
        if child is None:
            raise ConsistencyError(f"induced profile {key} is not available at {n}")
        path.append(child)
        n = child
    return tuple(path)


def reach_nodes(game: Game, profile: Mapping[str, PureStrategy]) -> frozenset[str]:
    g = game.forest
    return frozenset(n for t in g.tree_ids for n in play_path(game, profile, t))


def occur_nodes(game: Game, profile: Mapping[str, PureStrategy]) -> frozenset[str]:
    g = game.forest
    objective_path = set(play_path(game, profile, g.objective))
    return frozenset(n for n in g.nodes if g.nodes[n].copy_of in objective_path)


def reached_infosets(game: Game, profile, i: str) -> set[str]:
    reached = reach_nodes(game, profile)
    return {h.id for h in game.awareness.of_player(i) if reached & set(h.members)}


def occurring_infosets(game: Game, profile, i: str) -> set[str]:
    occurring = occur_nodes(game, profile)
    return {hid for (n, j), hid in game.awareness.assign.items() if j == i and n in occurring}


# -- path requirements --------------------------------------------------------------


class _Index:
    """Per-game tables: what each agent must play to get to each node."""

    def __init__(self, game: Game):
        self.game = game
        g = game.forest
        self.points = {j: dict(decision_points(game, j)) for j in game.agents}
        self.requirements: dict[str, dict[str, tuple[tuple[str, str], ...]]] = {}
        self.feasible: dict[str, dict[str, bool]] = {}
        self.required: dict[str, dict[str, frozenset]] = {}
        self.allow_tables: dict[str, tuple] = {}
        self.own_reach: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
        for n in g.nodes:
            reqs: dict[str, list[tuple[str, str]]] = {j: [] for j in game.agents}
            for a, key in g.path_steps(n):
                node = g.nodes[a]
                for j, act in zip(node.active, key):
                    reqs[j].append((point_at(game, j, a), act))
            self.requirements[n] = {j: tuple(r) for j, r in reqs.items()}
            # conflicting or unknown requirements never fit inside a strategy's choices
            self.required[n] = {j: frozenset(r) for j, r in reqs.items()}
            self.feasible[n] = {j: self._feasible(j, r) for j, r in reqs.items()}

    def _feasible(self, agent: str, reqs) -> bool:
        chosen: dict[str, str] = {}
        for point, act in reqs:
            if point is None or act not in self.points[agent].get(point, ()):
                return False
            if chosen.setdefault(point, act) != act:
                return False
        return True

    def satisfies(self, s: PureStrategy, n: str) -> bool:
        return self.required[n][s.owner] <= s.choice_set

    def others_allow(self, agent: str, s_minus: Mapping[str, PureStrategy], n: str) -> bool:
        """Whether s_-agent allows n: it plays along, and agent can too."""
        if not self.feasible[n][agent]:
            return False
        required = self.required[n]
        return all(required[j] <= s.choice_set for j, s in s_minus.items() if j != agent)


_INDEX: "weakref.WeakKeyDictionary[Game, _Index]" = weakref.WeakKeyDictionary()


def index(game: Game) -> _Index:
    idx = _INDEX.get(game)
    if idx is None:
        idx = _INDEX[game] = _Index(game)
    return idx


def strategies_allowing(game: Game, agent: str, n: str, action: str | None = None,
                        cap: int | None = None) -> list[PureStrategy]:
    """S_i(n), or S_i(n, a) when an action is given.

    A strategy allows n when some opponent profile reaches n with it; since
    reaching is a conjunction of per-agent conditions along the path, this is
    "agent plays the path" provided every opponent can also play it.
    """
    idx = index(game)
    if not all(idx.feasible[n][j] for j in game.agents if j != agent):
        return []
    out = [s for s in enumerate_pure(game, agent, cap) if idx.satisfies(s, n)]
    if action is not None:
        point = point_at(game, agent, n)
        out = [s for s in out if s.get(point) == action]
    return out


def _rho_own(game: Game, n: str, who: Strategy) -> Fraction:
    """The strategy's own share of the reach probability of n (memoized)."""
    idx = index(game)
    table = idx.own_reach.get(who)
    if table is None:
        table = idx.own_reach[who] = {}
    value = table.get(n)
    if value is None:
        value = table[n] = _compute_own(idx, n, who)
    return value


def _compute_own(idx: _Index, n: str, who: Strategy) -> Fraction:
    if isinstance(who, MixedStrategy):
        return sum((w for s, w in who.weights.items() if w and idx.satisfies(s, n)), Fraction(0))
    if not idx.feasible[n][who.owner]:
        return Fraction(0)
    prob = Fraction(1)
    for point, act in idx.requirements[n][who.owner]:
        prob *= who.prob(point, act)
        if not prob:
            break
    return prob


def rho(game: Game, n: str, who: Strategy, s_minus: Mapping[str, PureStrategy]) -> Fraction:
    """Probability that (who, s_minus) reaches node n.

    Mixed: the weight of S_i(n). Behavior: the product of local
    probabilities of i's path actions in n's tree (1 with no own moves).
    Both are 0 when s_minus does not allow n.
    """
    if not index(game).others_allow(who.owner, s_minus, n):
        return Fraction(0)
    return _rho_own(game, n, who)


def occ_prob(game: Game, n: str, who: Strategy, s_minus: Mapping[str, PureStrategy]) -> Fraction:
    """Probability that n occurs: reach probability of its objective preimage."""
    return rho(game, game.forest.nodes[n].copy_of, who, s_minus)
