"""Extensive-form games with unawareness.

A game is a forest of subtrees of an objective tree, ordered as a
join-semilattice, with information sets that may live in poorer trees than
the nodes they are assigned at. The package validates such games, computes
reach and occur probabilities exactly, and turns mixed strategies into
behavior strategies.
"""

from .awareness import (
    AwarenessAssignment,
    Game,
    InformationSet,
    check_derived,
    check_perfect_recall_direct,
    check_perfect_recall_records,
    check_perfect_recall_selten,
    experience_record,
    perfect_recall_players,
    t_partial_game,
    tree_relations,
    validate_awareness,
    validate_game,
)
from .document import GameDocument, dumps, load, parse_document
from .forest import (
    NATURE,
    GameForest,
    GameFormatError,
    LatticeError,
    copy_in,
    join,
    validate_structure,
)
from .kuhn import (
    EquivalenceVerdict,
    NodeDependenceError,
    PerfectRecallError,
    check_equivalence,
    check_lemma1,
    check_lemma2,
    check_realization_equivalence,
    kuhn_transform,
)
from .report import Violation, ViolationReport
from .strategy import (
    BehaviorStrategy,
    EnumerationCapError,
    MixedStrategy,
    PureStrategy,
    enumerate_pure,
    occ_prob,
    occur_nodes,
    play_path,
    reach_nodes,
    rho,
    strategies_allowing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
