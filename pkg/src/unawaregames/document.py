"""JSON game documents.

Rationals are written as strings ``"p/q"``. Output is canonical: keys
sorted, nodes sorted by id, successors in action-product order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .awareness import Game, build_awareness
from .forest import GameFormatError, build_forest, format_rational, parse_rational
from .strategy import BehaviorStrategy, MixedStrategy, PureStrategy, decision_points

SCHEMA = "unaware-game/1"


@dataclass
class GameDocument:
    game: Game
    mixed: dict[str, MixedStrategy] = field(default_factory=dict)
    behavior: dict[str, BehaviorStrategy] = field(default_factory=dict)
    profiles: dict[str, dict[str, PureStrategy]] = field(default_factory=dict)


def pure_from_choices(game: Game, agent: str, choices: Mapping[str, str]) -> PureStrategy:
    points = dict(decision_points(game, agent))
    if set(choices) != set(points):
        missing = sorted(set(points) - set(choices))
        extra = sorted(set(choices) - set(points))
        raise GameFormatError(f"strategy for {agent}: missing {missing}, unknown {extra}")
    for p, a in choices.items():
        if a not in points[p]:
            raise GameFormatError(f"strategy for {agent}: {a!r} not available at {p}")
    return PureStrategy.of(agent, choices)


def parse_document(raw: Mapping | str) -> GameDocument:
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise GameFormatError(f"invalid JSON: {exc}") from exc
    if raw.get("schema", SCHEMA) != SCHEMA:
        raise GameFormatError(f"unsupported schema {raw.get('schema')!r}")
    try:
        forest = build_forest(raw)
        game = Game(forest, build_awareness(forest, raw.get("infosets", ())))
    except KeyError as exc:
        raise GameFormatError(f"missing field {exc}") from exc
    doc = GameDocument(game)
    strategies = raw.get("strategies") or {}
    for name, m in (strategies.get("mixed") or {}).items():
        owner = str(m["owner"])
        weights: dict[PureStrategy, Fraction] = {}
        for entry in m["weights"]:
            s = pure_from_choices(game, owner, entry["choices"])
            weights[s] = weights.get(s, Fraction(0)) + parse_rational(entry["weight"])
        try:
            doc.mixed[name] = MixedStrategy(owner, weights)
        except ValueError as exc:
            raise GameFormatError(f"mixed strategy {name}: {exc}") from exc
    for name, b in (strategies.get("behavior") or {}).items():
        locals_ = {p: {a: parse_rational(q) for a, q in dist.items()} for p, dist in b["locals"].items()}
        try:
            doc.behavior[name] = BehaviorStrategy(str(b["owner"]), locals_)
        except ValueError as exc:
            raise GameFormatError(f"behavior strategy {name}: {exc}") from exc
    for name, prof in (strategies.get("profiles") or {}).items():
        if set(prof) != set(game.agents):
            raise GameFormatError(f"profile {name} must give a strategy for each of {list(game.agents)}")
        doc.profiles[name] = {str(j): pure_from_choices(game, str(j), c) for j, c in prof.items()}
    return doc


def load(path: str | Path) -> GameDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def game_to_raw(game: Game) -> dict:
    g = game.forest
    trees = []
    for t in g.tree_ids:
        nodes = []
        for n in g.trees[t].nodes:
            node = g.nodes[n]
            entry: dict = {"id": n, "copy_of": node.copy_of}
            if node.is_terminal:
                entry["payoffs"] = {p: format_rational(u) for p, u in node.payoffs.items()}
            else:
                entry["actions"] = {j: list(node.actions[j]) for j in node.active}
                entry["successors"] = [
                    {"profile": dict(zip(node.active, key)), "child": node.successors[key]}
                    for key in node.profiles()
                ]
            nodes.append(entry)
        trees.append({"id": t, "root": g.trees[t].root, "nodes": nodes})
    infosets = []
    for hid, h in sorted(game.awareness.infosets.items()):
        infosets.append({
            "id": hid,
            "owner": h.owner,
            "tree": h.home_tree,
            "members": list(h.members),
            "assigned": list(game.assigned_at[hid]),
        })
    return {
        "schema": SCHEMA,
        "players": list(g.players),
        "nature": g.has_nature,
        "objective": g.objective,
        "trees": trees,
        "infosets": infosets,
    }


def mixed_to_raw(sigma: MixedStrategy) -> dict:
    return {"owner": sigma.owner, "weights": [
        {"choices": s.as_dict(), "weight": format_rational(w)} for s, w in sigma.support()
    ]}


def behavior_to_raw(beta: BehaviorStrategy) -> dict:
    return {"owner": beta.owner, "locals": {
        p: {a: format_rational(q) for a, q in dist.items()} for p, dist in sorted(beta.locals.items())
    }}


def document_to_raw(doc: GameDocument) -> dict:
    raw = game_to_raw(doc.game)
    strategies = {}
    if doc.mixed:
        strategies["mixed"] = {k: mixed_to_raw(v) for k, v in doc.mixed.items()}
    if doc.behavior:
        strategies["behavior"] = {k: behavior_to_raw(v) for k, v in doc.behavior.items()}
    if doc.profiles:
        strategies["profiles"] = {k: {j: s.as_dict() for j, s in prof.items()}
                                  for k, prof in doc.profiles.items()}
    if strategies:
        raw["strategies"] = strategies
    return raw


def dumps(raw: Mapping) -> str:
    return json.dumps(raw, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
