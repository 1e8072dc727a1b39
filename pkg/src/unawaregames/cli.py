"""Command-line interface: ``unaware <command> ...``.

Exit codes: 0 success or empty report, 1 negative verdict (violations,
non-equivalence, invalid game), 2 usage, parse or enumeration-cap error.
Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __doc__ as package_doc
from .awareness import (
    Game,
    perfect_recall_players,
    t_partial_game,
    validate_awareness,
    validate_game,
)
from .document import GameDocument, behavior_to_raw, document_to_raw, dumps, game_to_raw, parse_document
from .forest import GameFormatError, format_rational, validate_structure
from .kuhn import NodeDependenceError, check_equivalence, check_realization_equivalence, kuhn_transform
from .strategy import (
    EnumerationCapError,
    check_behavior,
    decision_points,
    enumerate_pure,
    occur_nodes,
    occurring_infosets,
    reach_nodes,
    reached_infosets,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.kind = kind
        self.code = code


# -- input and output -----------------------------------------------------------


def _load(ref: str) -> GameDocument:
    """A game document from a path, or a fixture as ``fixture:NAME`` / ``fixtures/NAME``."""
    from .corpus import fixtures

    path = Path(ref)
    if not path.exists():
        name = None
        if ref.startswith("fixture:"):
            name = ref.split(":", 1)[1]
        elif path.parent.name == "fixtures" and path.suffix in ("", ".json"):
            name = path.stem
        if name is not None:
            try:
                return fixtures.fixture(name).document
            except KeyError as exc:
                raise CliError("usage", str(exc.args[0])) from exc
        raise CliError("usage", f"no such file: {ref}")
    try:
        return parse_document(path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, OSError) as exc:
        raise CliError("parse", f"{ref}: {exc}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _require_valid(game: Game) -> None:
    report = validate_structure(game.forest) + validate_awareness(game)
    if report:
        raise CliError("invalid-game", "game fails validation:\n" + report.format(limit=20), EXIT_NEGATIVE)


def _player(game: Game, who: str) -> str:
    if who not in game.agents:
        raise CliError("usage", f"unknown player {who!r}; agents are {', '.join(game.agents)}")
    return who


def _named(table: dict, name: str, what: str):
    if name not in table:
        known = ", ".join(sorted(table)) or "none"
        raise CliError("usage", f"no {what} named {name!r} (known: {known})")
    return table[name]


# -- commands -------------------------------------------------------------------------


def cmd_validate(args) -> int:
    game = _load(args.file).game
    report = validate_game(game)
    if args.property:
        report = report.only(*args.property)
    if args.json:
        shown = report.to_json()
        if args.limit is not None:
            shown = shown[:args.limit]
        _emit_json({"ok": report.ok, "count": len(report), "violations": shown})
    else:
        sys.stdout.write((report.format(args.limit) or "no violations") + "\n")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_strategies(args) -> int:
    game = _load(args.file).game
    i = _player(game, args.player)
    if args.tree is not None:
        if args.tree not in game.forest.trees:
            raise CliError("usage", f"unknown tree {args.tree!r}")
        game = t_partial_game(game, args.tree)
    points = [p for p, _ in decision_points(game, i)]
    strategies = enumerate_pure(game, i, args.cap)
    if args.json:
        _emit_json({"player": i, "points": points, "strategies": [s.as_dict() for s in strategies]})
    else:
        sys.stdout.write(f"player {i}: {len(strategies)} pure strategies over ({', '.join(points)})\n")
        for s in strategies:
            sys.stdout.write(s.label() + "\n")
    return EXIT_OK


def _play(args, occur: bool) -> int:
    doc = _load(args.file)
    game = doc.game
    _require_valid(game)
    profile = _named(doc.profiles, args.profile, "profile")
    nodes = occur_nodes(game, profile) if occur else reach_nodes(game, profile)
    sets = {i: sorted((occurring_infosets if occur else reached_infosets)(game, profile, i))
            for i in game.players}
    g = game.forest
    by_tree = {t: sorted(n for n in g.trees[t].nodes if n in nodes) for t in g.tree_ids}
    key = "occurring" if occur else "reached"
    if args.json:
        _emit_json({"profile": args.profile, "nodes": by_tree, f"{key}_infosets": sets})
    else:
        for t, ns in by_tree.items():
            sys.stdout.write(f"{t}: {' '.join(ns) if ns else '-'}\n")
        for i, hs in sets.items():
            sys.stdout.write(f"{key} information sets of {i}: {' '.join(hs) if hs else '-'}\n")
    return EXIT_OK


def cmd_reach(args) -> int:
    return _play(args, occur=False)


def cmd_occur(args) -> int:
    return _play(args, occur=True)


def cmd_transform(args) -> int:
    doc = _load(args.file)
    game = doc.game
    _require_valid(game)
    i = _player(game, args.player)
    sigma = _named(doc.mixed, args.mixed, "mixed strategy")
    if sigma.owner != i:
        raise CliError("usage", f"mixed strategy {args.mixed} belongs to player {sigma.owner}")
    if i in game.players and i not in perfect_recall_players(game):
        sys.stderr.write(f"warning: player {i} does not have perfect recall; "
                         "the transform may fail or need not be equivalent\n")
    try:
        beta = kuhn_transform(game, i, sigma, checked=False)
    except NodeDependenceError as exc:
        raise CliError("node-dependence", str(exc), EXIT_NEGATIVE) from exc
    name = args.name or f"{args.mixed}_behavior"
    doc.behavior[name] = beta
    if args.only:
        _write(dumps(behavior_to_raw(beta)), args.output)
    else:
        _write(dumps(document_to_raw(doc)), args.output)
    return EXIT_OK


def cmd_equiv(args) -> int:
    doc = _load(args.file)
    game = doc.game
    _require_valid(game)
    i = _player(game, args.player)
    sigma = _named(doc.mixed, args.mixed, "mixed strategy")
    beta = _named(doc.behavior, args.behavior, "behavior strategy")
    for strat, name in ((sigma, args.mixed), (beta, args.behavior)):
        if strat.owner != i:
            raise CliError("usage", f"{name} belongs to player {strat.owner}, not {i}")
    try:
        check_behavior(game, beta)
    except ValueError as exc:
        raise CliError("parse", f"behavior strategy {args.behavior}: {exc}") from exc
    check = check_realization_equivalence if args.realization else check_equivalence
    verdict = check(game, i, sigma, beta, args.cap)
    kind = "realization-equivalent" if args.realization else "equivalent"
    w = verdict.witness
    if args.json:
        out = {"equivalent": verdict.equivalent, "kind": kind, "witness": None}
        if w is not None:
            out["witness"] = {"node": w.node, "opponents": dict(w.s_minus),
                              "mixed": format_rational(w.lhs), "behavior": format_rational(w.rhs)}
        _emit_json(out)
    elif verdict:
        sys.stdout.write(f"{kind}\n")
    else:
        opp = ", ".join(f"{j}={lab}" for j, lab in w.s_minus) or "-"
        sys.stdout.write(f"not {kind}: at {w.node} against {opp}: "
                         f"mixed {format_rational(w.lhs)} vs behavior {format_rational(w.rhs)}\n")
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_tpartial(args) -> int:
    game = _load(args.file).game
    if args.tree not in game.forest.trees:
        raise CliError("usage", f"unknown tree {args.tree!r}")
    try:
        sub = t_partial_game(game, args.tree)
    except ValueError as exc:
        raise CliError("invalid-game", str(exc), EXIT_NEGATIVE) from exc
    _write(dumps(game_to_raw(sub)), args.output)
    return EXIT_OK


def _dot_id(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def export_dot(game: Game, tree: str | None = None) -> str:
    """Graph description: one cluster per tree, dashed arrows to information sets in other trees."""
    g = game.forest
    trees = [tree] if tree is not None else list(g.tree_ids)
    shown = {n for t in trees for n in g.trees[t].nodes}
    lines = ["digraph unawaregame {", "  compound=true;", "  node [shape=circle, fontsize=10];"]
    for k, t in enumerate(trees):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f"    label={_dot_id(t + (' (objective)' if t == g.objective else ''))};")
        for n in g.trees[t].nodes:
            node = g.nodes[n]
            text = n if node.copy_of == n else f"{n}\\ncopy of {node.copy_of}"
            if node.is_terminal:
                pay = ",".join(format_rational(node.payoffs[p]) for p in g.players)
                lines.append(f"    {_dot_id(n)} [shape=box, label={_dot_id(text + chr(92) + 'n(' + pay + ')')}];")
            else:
                movers = ",".join(node.active)
                lines.append(f"    {_dot_id(n)} [label={_dot_id(text + chr(92) + 'n[' + movers + ']')}];")
        for n in g.trees[t].nodes:
            node = g.nodes[n]
            if node.is_terminal:
                continue
            for key in node.profiles():
                lines.append(f"    {_dot_id(n)} -> {_dot_id(node.successors[key])} "
                             f"[label={_dot_id('/'.join(key))}];")
        lines.append("  }")
    for (n, i), hid in sorted(game.awareness.assign.items()):
        if n not in shown:
            continue
        h = game.infoset(hid)
        for m in h.members:
            if m == n or m not in shown:
                continue
            style = "dashed" if h.home_tree != g.tree_of(n) else "dotted"
            lines.append(f"  {_dot_id(n)} -> {_dot_id(m)} [style={style}, color=blue, "
                         f"constraint=false, label={_dot_id(f'{hid} ({i})')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    game = _load(args.file).game
    if args.tree is not None and args.tree not in game.forest.trees:
        raise CliError("usage", f"unknown tree {args.tree!r}")
    _write(export_dot(game, args.tree), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    from .corpus.generate import GenerationError, GenParams, generate_raw

    try:
        params = GenParams(num_trees=args.trees, max_depth=args.depth, max_branch=args.branch,
                           players=args.players, nature=args.nature)
    except ValueError as exc:
        raise CliError("usage", str(exc)) from exc
    try:
        raw = generate_raw(args.seed, params)
    except GenerationError as exc:
        raise CliError("generation", str(exc), EXIT_NEGATIVE) from exc
    _write(dumps(raw), args.output)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    from .corpus import fixtures

    if args.action == "list":
        for name in fixtures.names():
            ann = fixtures.fixture(name).annotations
            sys.stdout.write(f"{name}\t{ann['illustrates']}\n")
        return EXIT_OK
    if not args.name:
        raise CliError("usage", "fixtures emit needs a fixture name")
    try:
        text = fixtures.emit(args.name)
    except KeyError as exc:
        raise CliError("usage", str(exc.args[0])) from exc
    _write(text, args.output)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unaware", description=(package_doc or "").strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    def with_file(sp):
        sp.add_argument("file", help="game document (path, or fixture:NAME)")
        return sp

    def with_cap(sp):
        sp.add_argument("--cap", type=int, default=None,
                        help="enumeration cap (default: $UNAWARE_ENUM_CAP or 10^6)")

    sp = with_file(cmd("validate", cmd_validate, "run all validators"))
    sp.add_argument("--property", action="append", metavar="TAG",
                    help="only report this violation tag (repeatable), e.g. I6, R1, U1, P0")
    sp.add_argument("--limit", type=int, default=None, metavar="N",
                    help="print at most N witnesses (the verdict still counts all of them)")
    sp.add_argument("--json", action="store_true")

    sp = with_file(cmd("strategies", cmd_strategies, "enumerate a player's pure strategies"))
    sp.add_argument("--player", required=True)
    sp.add_argument("--tree", help="restrict to the T-partial game of this tree")
    sp.add_argument("--json", action="store_true")
    with_cap(sp)

    for name, func, what in (("reach", cmd_reach, "nodes reached"), ("occur", cmd_occur, "nodes occurring")):
        sp = with_file(cmd(name, func, f"{what} under a named profile"))
        sp.add_argument("--profile", required=True)
        sp.add_argument("--json", action="store_true")

    sp = with_file(cmd("transform", cmd_transform, "behavior strategy equivalent to a mixed strategy"))
    sp.add_argument("--player", required=True)
    sp.add_argument("--mixed", required=True)
    sp.add_argument("--name", help="name of the behavior strategy (default: <mixed>_behavior)")
    sp.add_argument("--only", action="store_true", help="print only the behavior strategy")
    sp.add_argument("-o", "--output")

    sp = with_file(cmd("equiv", cmd_equiv, "check (realization-)equivalence of two strategies"))
    sp.add_argument("--player", required=True)
    sp.add_argument("--mixed", required=True)
    sp.add_argument("--behavior", required=True)
    sp.add_argument("--realization", action="store_true")
    sp.add_argument("--json", action="store_true")
    with_cap(sp)

    sp = with_file(cmd("tpartial", cmd_tpartial, "extract the T-partial game"))
    sp.add_argument("--tree", required=True)
    sp.add_argument("-o", "--output")

    sp = with_file(cmd("export-dot", cmd_export_dot, "graph description of the forest"))
    sp.add_argument("--tree")
    sp.add_argument("-o", "--output")

    sp = cmd("generate", cmd_generate, "random valid game with perfect recall")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trees", type=int, default=2)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--branch", type=int, default=3)
    sp.add_argument("--players", type=int, default=2)
    sp.add_argument("--nature", action="store_true")
    sp.add_argument("-o", "--output")

    sp = cmd("fixtures", cmd_fixtures, "list or emit the built-in fixtures")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("-o", "--output")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        err, code = {"error": exc.kind, "message": str(exc)}, exc.code
    except GameFormatError as exc:
        err, code = {"error": "parse", "message": str(exc)}, EXIT_USAGE
    except EnumerationCapError as exc:
        err, code = {"error": "cap", "message": str(exc)}, EXIT_USAGE
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
