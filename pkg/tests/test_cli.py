from __future__ import annotations

import json

import pytest

from unawaregames.cli import export_dot, main
from unawaregames.corpus import fixtures
from unawaregames.strategy import CAP_ENV


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fig7_file(tmp_path):
    path = tmp_path / "fig7.json"
    path.write_text(fixtures.emit("FIG7"), encoding="utf-8")
    return path


class TestValidate:
    def test_valid_fixture(self, capsys):
        code, out, _ = run(capsys, "validate", "fixture:FIG4")
        assert code == 0 and out == "no violations\n"

    def test_property_filter(self, capsys, fig7_file):
        code, out, _ = run(capsys, "validate", str(fig7_file), "--property", "I6", "--json")
        body = json.loads(out)
        assert code == 1
        assert [v["tag"] for v in body["violations"]] == ["I6"]

    def test_filter_can_pass(self, capsys):
        code, _, _ = run(capsys, "validate", "fixtures/fig7", "--property", "U1")
        assert code == 0

    def test_negative_fixture(self, capsys):
        code, out, _ = run(capsys, "validate", "fixture:P0_BAD")
        assert code == 1 and out.startswith("[P0]")


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", str(tmp_path / "none.json"))
        assert code == 2
        assert json.loads(err)["error"] in {"usage", "parse", "io"}

    def test_bad_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        code, _, err = run(capsys, "validate", str(path))
        assert code == 2 and json.loads(err)["error"] == "parse"

    def test_unknown_command(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 2 and json.loads(err)["error"] == "usage"

    def test_unknown_profile(self, capsys):
        code, _, _ = run(capsys, "reach", "fixture:FIG9", "--profile", "blue")
        assert code == 2

    def test_cap_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(CAP_ENV, "1")
        code, _, err = run(capsys, "strategies", "fixture:FIG9", "--player", "1")
        assert code == 2 and json.loads(err)["error"] == "cap"

    def test_invalid_game_refused(self, capsys):
        code, _, _ = run(capsys, "reach", "fixture:P0_BAD", "--profile", "x")
        assert code == 1


class TestPlay:
    def test_strategies(self, capsys):
        code, out, _ = run(capsys, "strategies", "fixture:FIG9", "--player", "1", "--json")
        body = json.loads(out)
        assert code == 0 and len(body["strategies"]) == 2
        code, out, _ = run(capsys, "strategies", "fixture:FIG9", "--player", "1", "--tree", "T")
        assert code == 0 and "1 pure strategies" in out

    def test_reach_and_occur(self, capsys):
        code, out, _ = run(capsys, "reach", "fixture:FIG9", "--profile", "red", "--json")
        reach = json.loads(out)
        assert code == 0 and "n''" in reach["nodes"]["T"]
        code, out, _ = run(capsys, "occur", "fixture:FIG9", "--profile", "red", "--json")
        occur = json.loads(out)
        assert "n''" not in occur["nodes"]["T"]
        assert occur["occurring_infosets"]["2"] == ["h"]


class TestTransform:
    def test_transform_then_equiv(self, capsys, tmp_path, fig7_file):
        out_path = tmp_path / "with_beta.json"
        code, _, err = run(capsys, "transform", str(fig7_file), "--player", "1", "--mixed", "m13",
                           "-o", str(out_path))
        assert code == 0 and "perfect recall" in err
        doc = json.loads(out_path.read_text(encoding="utf-8"))
        assert doc["strategies"]["behavior"]["m13_behavior"]["locals"]["h1"] == {"x": "1/3", "y": "2/3"}
        code, out, _ = run(capsys, "equiv", str(out_path), "--player", "1", "--mixed", "m13",
                           "--behavior", "m13_behavior")
        assert code == 0 and out == "equivalent\n"
        code, out, _ = run(capsys, "equiv", str(out_path), "--player", "1", "--mixed", "m13",
                           "--behavior", "m13_behavior", "--realization", "--json")
        assert code == 0 and json.loads(out)["equivalent"]

    def test_not_equivalent(self, capsys, tmp_path, fig7_file):
        raw = json.loads(fig7_file.read_text(encoding="utf-8"))
        raw["strategies"]["behavior"] = {"bad": {"owner": "1", "locals": {"h0": {"left": "1"},
                                                                          "h1": {"x": "1", "y": "0"}}}}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        code, out, _ = run(capsys, "equiv", str(path), "--player", "1", "--mixed", "m13",
                           "--behavior", "bad", "--json")
        body = json.loads(out)
        assert code == 1 and not body["equivalent"]
        assert body["witness"]["node"]

    def test_only_behavior(self, capsys):
        code, out, _ = run(capsys, "transform", "fixture:STD", "--player", "1", "--mixed", "half", "--only")
        assert code == 0
        assert json.loads(out) == {"owner": "1", "locals": {"h1": {"L": "1/2", "R": "1/2"}}}

    def test_wrong_owner(self, capsys):
        code, _, _ = run(capsys, "transform", "fixture:STD", "--player", "2", "--mixed", "half")
        assert code == 2

    def test_node_dependence_is_negative(self, capsys, tmp_path):
        from unawaregames.corpus.oracles import strategy_family
        from unawaregames.document import document_to_raw, dumps
        from unawaregames.kuhn import NodeDependenceError, kuhn_transform

        doc = fixtures.fixture("I6_BAD_A").document
        for sigma in strategy_family(doc.game, "2"):
            try:
                kuhn_transform(doc.game, "2", sigma, checked=False)
            except NodeDependenceError:
                break
        doc.mixed["dep"] = sigma
        path = tmp_path / "dep.json"
        path.write_text(dumps(document_to_raw(doc)), encoding="utf-8")
        code, _, err = run(capsys, "transform", str(path), "--player", "2", "--mixed", "dep")
        assert code == 1 and json.loads(err.splitlines()[-1])["error"] == "node-dependence"


class TestOutputs:
    def test_tpartial(self, capsys):
        code, out, _ = run(capsys, "tpartial", "fixture:FIG4", "--tree", "T''")
        body = json.loads(out)
        assert code == 0 and body["objective"] == "T''"
        assert {t["id"] for t in body["trees"]} == {"T''", "T'"}

    def test_tpartial_unknown_tree(self, capsys):
        assert run(capsys, "tpartial", "fixture:FIG4", "--tree", "nope")[0] == 2

    def test_export_dot(self, capsys):
        code, out, _ = run(capsys, "export-dot", "fixture:FIG9")
        assert code == 0 and out.startswith("digraph")
        assert "style=dashed" in out and "cluster_1" in out
        single = export_dot(fixtures.fixture("FIG9").game, "T")
        assert "cluster_1" not in single and "\"rbar\" ->" not in single

    def test_generate(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        code, _, _ = run(capsys, "generate", "--seed", "4", "--trees", "2", "--players", "2", "-o", str(path))
        assert code == 0
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 0, out

    def test_generate_bad_params(self, capsys):
        assert run(capsys, "generate", "--seed", "1", "--trees", "9")[0] == 2

    def test_fixtures_list_and_emit(self, capsys):
        code, out, _ = run(capsys, "fixtures", "list")
        assert code == 0 and len(out.splitlines()) == len(fixtures.names())
        code, out, _ = run(capsys, "fixtures", "emit", "FIG8")
        assert code == 0 and out == fixtures.emit("FIG8")
        assert run(capsys, "fixtures", "emit")[0] == 2
        assert run(capsys, "fixtures", "emit", "NOPE")[0] == 2


def test_validate_limit(capsys):
    code, out, _ = run(capsys, "validate", "fixture:U1_BAD", "--limit", "1")
    assert code == 1 and out.splitlines() == ["[U1] n, 1, h1: omits the copy n'", "... 1 more"]
    code, out, _ = run(capsys, "validate", "fixture:U1_BAD", "--limit", "1", "--json")
    body = json.loads(out)
    assert body["count"] == 2 and len(body["violations"]) == 1
