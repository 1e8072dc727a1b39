"""Small helper for writing game documents by hand."""

from __future__ import annotations

import copy
from typing import Iterable, Mapping, Sequence


class GameBuilder:
    """Accumulates trees and information sets into a raw game document.

    The first node added to a tree becomes its root. Objective-tree nodes
    copy themselves; subtree nodes name the objective node they copy.
    """

    def __init__(self, players: Sequence[str], objective: str = "Tbar", nature: bool = False):
        self.players = [str(p) for p in players]
        self.objective = objective
        self.nature = nature
        self.trees: dict[str, dict] = {}
        self.entries: dict[str, dict] = {}
        self.infosets: list[dict] = []

    def _add(self, tree: str, entry: dict, copy_of: str | None) -> None:
        if copy_of is not None:
            entry["copy_of"] = copy_of
        t = self.trees.setdefault(tree, {"id": tree, "root": entry["id"], "nodes": []})
        t["nodes"].append(entry)
        self.entries[entry["id"]] = entry

    def move(self, tree: str, nid: str, agent: str, actions: Sequence[str],
             children: Sequence[str], copy_of: str | None = None) -> None:
        """A node where a single agent moves; children align with actions."""
        if len(actions) != len(children):
            raise ValueError(f"{nid}: {len(actions)} actions but {len(children)} children")
        entry = {
            "id": nid,
            "actions": {agent: list(actions)},
            "successors": [{"profile": {agent: a}, "child": c} for a, c in zip(actions, children)],
        }
        self._add(tree, entry, copy_of)

    def simultaneous(self, tree: str, nid: str, actions: Mapping[str, Sequence[str]],
                     successors: Mapping[tuple[str, ...], str], copy_of: str | None = None) -> None:
        """A node with several active agents; successor keys follow ``actions`` order."""
        agents = list(actions)
        entry = {
            "id": nid,
            "actions": {j: list(a) for j, a in actions.items()},
            "successors": [{"profile": dict(zip(agents, key)), "child": c} for key, c in successors.items()],
        }
        self._add(tree, entry, copy_of)

    def leaf(self, tree: str, nid: str, payoffs: Sequence | Mapping, copy_of: str | None = None) -> None:
        if not isinstance(payoffs, Mapping):
            payoffs = dict(zip(self.players, payoffs))
        self._add(tree, {"id": nid, "payoffs": {k: str(v) for k, v in payoffs.items()}}, copy_of)

    def prune(self, source: str, target: str, drop: Iterable[tuple[str, str]],
              rename) -> None:
        """Copy tree ``source`` into ``target`` without the dropped (node, action) branches.

        ``rename`` maps a source node id to the id of its copy.
        """
        dropped = set(drop)
        root = self.trees[source]["root"]

        def walk(nid: str) -> None:
            entry = self.entries[nid]
            origin = entry.get("copy_of", nid)
            new = copy.deepcopy(entry)
            new["id"] = rename(nid)
            new.pop("copy_of", None)
            if "actions" in entry:
                new["actions"] = {j: [a for a in acts if (nid, a) not in dropped]
                                  for j, acts in entry["actions"].items()}
                kept = [s for s in entry["successors"]
                        if not any((nid, a) in dropped for a in s["profile"].values())]
                new["successors"] = [{"profile": s["profile"], "child": rename(s["child"])} for s in kept]
            self._add(target, new, origin)
            for s in (entry.get("successors") or ()):
                if not any((nid, a) in dropped for a in s["profile"].values()):
                    walk(s["child"])

        walk(root)

    def info(self, hid: str, owner: str, tree: str, members: Sequence[str],
             assigned: Sequence[str]) -> None:
        self.infosets.append({"id": hid, "owner": owner, "tree": tree,
                              "members": list(members), "assigned": list(assigned)})

    def raw(self) -> dict:
        return {
            "schema": "unaware-game/1",
            "players": list(self.players),
            "nature": self.nature,
            "objective": self.objective,
            "trees": list(self.trees.values()),
            "infosets": list(self.infosets),
        }
