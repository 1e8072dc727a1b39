"""Brute-force reference computations and the fixed family of test strategies.

Nothing here uses the path-requirement tables of the strategy module: the
oracles only enumerate pure strategies and replay the game tree by tree.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Mapping

from ..awareness import Game
from ..strategy import (
    BehaviorStrategy,
    MixedStrategy,
    PureStrategy,
    Strategy,
    enumerate_pure,
    opponent_profiles,
    play_path,
)


def behavior_to_mixed(game: Game, beta: BehaviorStrategy, cap: int | None = None) -> MixedStrategy:
    """The product measure a behavior strategy induces on pure strategies."""
    weights = {}
    for s in enumerate_pure(game, beta.owner, cap):
        w = Fraction(1)
        for point, act in s.choices:
            w *= beta.prob(point, act)
            if not w:
                break
        if w:
            weights[s] = w
    return MixedStrategy(beta.owner, weights)


def _as_mixed(game: Game, who: Strategy, cap: int | None) -> MixedStrategy:
    return who if isinstance(who, MixedStrategy) else behavior_to_mixed(game, who, cap)


def oracle_rho(game: Game, n: str, who: Strategy, s_minus: Mapping[str, PureStrategy],
               cap: int | None = None) -> Fraction:
    """Weight of the pure strategies whose play in n's tree passes through n."""
    sigma = _as_mixed(game, who, cap)
    t = game.forest.tree_of(n)
    total = Fraction(0)
    for s, w in sigma.weights.items():
        if not w:
            continue
        profile = dict(s_minus)
        profile[sigma.owner] = s
        if n in play_path(game, profile, t):
            total += w
    return total


def oracle_occ(game: Game, n: str, who: Strategy, s_minus: Mapping[str, PureStrategy],
               cap: int | None = None) -> Fraction:
    return oracle_rho(game, game.forest.nodes[n].copy_of, who, s_minus, cap)


def oracle_rho_table(game: Game, who: Strategy, s_minus: Mapping[str, PureStrategy],
                     cap: int | None = None) -> dict[str, Fraction]:
    """oracle_rho for every node at once: one replay per tree and pure strategy."""
    sigma = _as_mixed(game, who, cap)
    g = game.forest
    table = {n: Fraction(0) for n in g.nodes}
    for s, w in sigma.weights.items():
        if not w:
            continue
        profile = dict(s_minus)
        profile[sigma.owner] = s
        for t in g.tree_ids:
            for n in play_path(game, profile, t):
                table[n] += w
    return table


def oracle_allowing(game: Game, agent: str, n: str, cap: int | None = None) -> list[PureStrategy]:
    """Pure strategies of ``agent`` that reach n against some opponent profile."""
    t = game.forest.tree_of(n)
    opps = opponent_profiles(game, agent, cap)
    out = []
    for s in enumerate_pure(game, agent, cap):
        for s_minus in opps:
            profile = dict(s_minus)
            profile[agent] = s
            if n in play_path(game, profile, t):
                out.append(s)
                break
    return out


# Compositions of six into three positive parts: the weights (in sixths) of the grid.
_GRID = [c for c in itertools.product(range(1, 5), repeat=3) if sum(c) == 6]


def strategy_family(game: Game, agent: str, cap: int | None = None) -> Iterator[MixedStrategy]:
    """Point masses, every half-half pair, and a 3-support grid in sixths.

    The grid slides a window over three cyclically consecutive pure
    strategies and puts each of the ten positive sixth-compositions on it.
    """
    pures = enumerate_pure(game, agent, cap)
    for s in pures:
        yield MixedStrategy.point_mass(s)
    half = Fraction(1, 2)
    for a, b in itertools.combinations(pures, 2):
        yield MixedStrategy(agent, {a: half, b: half})
    k = len(pures)
    if k < 3:
        return
    for start in range(k):
        window = [pures[(start + j) % k] for j in range(3)]
        for comp in _GRID:
            yield MixedStrategy(agent, {s: Fraction(c, 6) for s, c in zip(window, comp)})


def random_family(game: Game, agent: str, seed: int, count: int = 20,
                  denominator: int = 12, cap: int | None = None) -> Iterator[MixedStrategy]:
    """Seeded random mixed strategies with weights in multiples of 1/denominator.

    Each draw picks a support of up to three pure strategies and splits
    ``denominator`` into positive parts over it. Same seed, same sequence.
    """
    rng = random.Random(seed)
    pures = enumerate_pure(game, agent, cap)
    for _ in range(count):
        size = rng.randint(1, min(3, len(pures), denominator))
        support = rng.sample(pures, size)
        cuts = sorted(rng.sample(range(1, denominator), size - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
        yield MixedStrategy(agent, {s: Fraction(c, denominator) for s, c in zip(support, parts)})


def family_size(k: int) -> int:
    return k + k * (k - 1) // 2 + (10 * k if k >= 3 else 0)


def transform_sweep(game: Game, agents=None, cap: int | None = None,
                   realization: bool = False):
    """Transform every family member and check it against its image.

    Returns None when every check passes, otherwise (agent, sigma, verdict).
    """
    from ..kuhn import check_equivalence, check_realization_equivalence, kuhn_transform

    check = check_realization_equivalence if realization else check_equivalence
    for agent in (game.agents if agents is None else agents):
        for sigma in strategy_family(game, agent, cap):
            beta = kuhn_transform(game, agent, sigma, checked=False)
            verdict = check(game, agent, sigma, beta, cap)
            if not verdict:
                return agent, sigma, verdict
    return None
