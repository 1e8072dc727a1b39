"""Mixed-to-behavior transformation and equivalence checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .awareness import Game, perfect_recall_players, t_partial_game
from .forest import NATURE
from .report import Violation, ViolationReport
from .strategy import (
    BehaviorStrategy,
    MixedStrategy,
    PureStrategy,
    Strategy,
    _rho_own,
    decision_points,
    enumerate_pure,
    index,
    occur_nodes,
    opponent_profiles,
    reach_nodes,
    strategies_allowing,
)


class NodeDependenceError(ValueError):
    """Two nodes sharing an information set give different local distributions."""


class PerfectRecallError(ValueError):
    """The transform was asked for a player without perfect recall."""


@dataclass(frozen=True)
class Witness:
    node: str
    s_minus: tuple[tuple[str, str], ...]  # (agent, strategy label)
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _allowed_mass(game: Game, n: str, sigma: MixedStrategy, point: str | None = None,
                  action: str | None = None) -> Fraction:
    """Weight of S_i(n), or of S_i(n, a) when point and action are given."""
    idx = index(game)
    i = sigma.owner
    if not all(idx.feasible[n][j] for j in game.agents if j != i):
        return Fraction(0)
    total = Fraction(0)
    for s, w in sigma.weights.items():
        if w and idx.satisfies(s, n) and (point is None or s.get(point) == action):
            total += w
    return total


def kuhn_transform(game: Game, agent: str, sigma: MixedStrategy, checked: bool = True) -> BehaviorStrategy:
    """Behavior strategy with the same reach probabilities as ``sigma``.

    At each decision point the local distribution is the conditional
    weight of strategies choosing each action among those allowing a node
    assigned to that point; uniform when no such strategy has weight. The
    ratio is computed at every assigned node with positive weight and must
    agree, otherwise NodeDependenceError.
    """
    if sigma.owner != agent:
        raise ValueError(f"mixed strategy belongs to {sigma.owner}, not {agent}")
    if checked and agent != NATURE and agent not in perfect_recall_players(game):
        raise PerfectRecallError(f"player {agent} does not have perfect recall")
    locals_: dict[str, dict[str, Fraction]] = {}
    for point, actions in decision_points(game, agent):
        nodes = [point] if agent == NATURE else list(game.assigned_at[point])
        chosen: dict[str, Fraction] | None = None
        chosen_at = None
        for n in nodes:
            denom = _allowed_mass(game, n, sigma)
            if not denom:
                continue
            dist = {a: _allowed_mass(game, n, sigma, point, a) / denom for a in actions}
            if chosen is None:
                chosen, chosen_at = dist, n
            elif dist != chosen:
                raise NodeDependenceError(
                    f"{point}: distribution at {n} differs from the one at {chosen_at}")
        if chosen is None:
            chosen = {a: Fraction(1, len(actions)) for a in actions}
        locals_[point] = chosen
    return BehaviorStrategy(agent, locals_)


def _node_order(game: Game) -> list[str]:
    # outcome nodes first, so a witness names a terminal node when one deviates
    g = game.forest
    return sorted(g.nodes, key=lambda n: (not g.nodes[n].is_terminal, g.tree_of(n), n))


def _allow_table(game: Game, agent: str, cap: int | None):
    idx = index(game)
    cache = idx.allow_tables
    if agent not in cache:
        opps = opponent_profiles(game, agent, cap)
        table = {n: [k for k, s_minus in enumerate(opps) if idx.others_allow(agent, s_minus, n)]
                 for n in game.forest.nodes}
        cache[agent] = (opps, table)
    return cache[agent]


def _sweep(game: Game, sigma: Strategy, beta: Strategy, realization: bool,
           cap: int | None) -> EquivalenceVerdict:
    if sigma.owner != beta.owner:
        raise ValueError("strategies belong to different agents")
    agent = sigma.owner
    g = game.forest
    opps, table = _allow_table(game, agent, cap)
    for n in _node_order(game):
        target = g.nodes[n].copy_of if realization else n
        lhs_own = _rho_own(game, target, sigma)
        rhs_own = _rho_own(game, target, beta)
        allowed = set(table[target])
        for k, s_minus in enumerate(opps):
            ind = k in allowed
            lhs = lhs_own if ind else Fraction(0)
            rhs = rhs_own if ind else Fraction(0)
            if lhs != rhs:
                label = tuple((j, s_minus[j].label()) for j in sorted(s_minus))
                return EquivalenceVerdict(False, Witness(n, label, lhs, rhs))
    return EquivalenceVerdict(True)


def check_equivalence(game: Game, agent: str, sigma: Strategy, beta: Strategy,
                      cap: int | None = None) -> EquivalenceVerdict:
    """Equal reach probabilities at every node against every opponent pure profile."""
    return _sweep(game, sigma, beta, False, cap)


def check_realization_equivalence(game: Game, agent: str, sigma: Strategy, beta: Strategy,
                                  cap: int | None = None) -> EquivalenceVerdict:
    """Equal occur probabilities at every node against every opponent pure profile."""
    return _sweep(game, sigma, beta, True, cap)


def _allowing_set(game: Game, agent: str, n: str) -> frozenset[tuple]:
    return frozenset(s.choices for s in strategies_allowing(game, agent, n))


def partial_allowing(game: Game, agent: str, n: str, t: str) -> frozenset[tuple]:
    """S_i^T(n) as a set of choice tuples over the T-partial decision points."""
    sub = t_partial_game(game, t)
    if n in sub.forest.nodes:
        return _allowing_set(sub, agent, n)
    keep = {p for p, _ in decision_points(sub, agent)}
    return frozenset(tuple(c for c in s if c[0] in keep) for s in _allowing_set(game, agent, n))


def check_lemma1(game: Game, agent: str, partial: bool = True) -> ViolationReport:
    """S_i(n) = S_i(n') for n' in h_i(n), and the T-partial version for T above T_n."""
    g = game.forest
    found = []
    for (n, i), hid in sorted(game.awareness.assign.items()):
        if i != agent:
            continue
        mine = _allowing_set(game, agent, n)
        for other in game.infoset(hid).members:
            if other == n:
                continue
            if _allowing_set(game, agent, other) != mine:
                found.append(Violation("L1", (agent, n, other), "S_i(n) differs from S_i(n')"))
            if not partial:
                continue
            for t in g.tree_ids:
                if not g.leq(g.tree_of(n), t):
                    continue
                if partial_allowing(game, agent, n, t) != partial_allowing(game, agent, other, t):
                    found.append(Violation("L1T", (agent, n, other, t), "S_i^T(n) differs from S_i^T(n')"))
    return ViolationReport(found)


def _outcomes(game: Game, agent: str, cap: int | None):
    own = enumerate_pure(game, agent, cap)
    opps = opponent_profiles(game, agent, cap)
    for s_minus in opps:
        rows = []
        for s in own:
            profile = dict(s_minus)
            profile[agent] = s
            rows.append((s, reach_nodes(game, profile), occur_nodes(game, profile)))
        yield s_minus, rows


def check_lemma2(game: Game, agent: str, cap: int | None = None) -> ViolationReport:
    """Equal reach sets must give equal occur sets, for every opponent profile."""
    found = []
    for s_minus, rows in _outcomes(game, agent, cap):
        by_reach: dict[frozenset, tuple[PureStrategy, frozenset]] = {}
        for s, reached, occurred in rows:
            first = by_reach.setdefault(reached, (s, occurred))
            if first[1] != occurred:
                opp = ",".join(f"{j}:{s_minus[j].label()}" for j in sorted(s_minus))
                found.append(Violation("L2", (agent, first[0].label(), s.label(), opp),
                                       "same nodes reached, different nodes occur"))
    return ViolationReport(found)


def lemma2_converse_witnesses(game: Game, agent: str, cap: int | None = None) -> list[tuple]:
    """(s_i, s_i', s_-i) with equal occur sets but different reach sets."""
    out = []
    for s_minus, rows in _outcomes(game, agent, cap):
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                if rows[a][2] == rows[b][2] and rows[a][1] != rows[b][1]:
                    out.append((rows[a][0], rows[b][0], s_minus))
    return out
