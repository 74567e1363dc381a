import csv
import io
import json
import subprocess
import sys

import pytest

from privcache.cli import run
from privcache.pda import EXAMPLE_PDA, format_pda
from privcache.scheme import deserialize_scheme, serialize_scheme
from privcache.constructions import build_table1


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def schemes(tmp_path, capsys):
    """Scheme files built through the CLI itself."""
    paths = {}

    def build(name, *argv):
        path = tmp_path / f"{name}.json"
        assert run(["build", *argv, "--out", str(path)]) == 0
        paths[name] = str(path)

    pda_file = tmp_path / "example.pda"
    pda_file.write_text(format_pda(EXAMPLE_PDA))
    build("table1", "table1")
    build("mn221", "mn", "--users", "2", "--files", "2", "--t", "1")
    build("mn422", "mn", "--users", "4", "--files", "2", "--t", "2")
    build("mn442", "mn", "--users", "4", "--files", "4", "--t", "2")
    build("pda", "pda", "--file", str(pda_file), "--files", "2")
    build("empty", "trivial", "--mode", "empty", "--files", "2", "--users", "2")
    build("full", "trivial", "--mode", "full", "--files", "2", "--users", "2")
    build("private", "private", "--from", paths["mn422"])
    build("pda-private", "private", "--from", paths["pda"])
    build("dual", "dual", "--from", paths["table1"])
    build("partial", "partial", "--from", paths["mn442"], "--level", "2")
    build("mixed", "timeshare", "--a", paths["table1"], "--b", paths["dual"], "--alpha", "1/2")
    capsys.readouterr()
    return paths


def test_build_table1_stdout_matches_library(capsys):
    code, out, _ = call(capsys, "build", "table1")
    assert code == 0
    assert out == serialize_scheme(build_table1())


def test_private_builds_verify(capsys, schemes):
    for name in ("table1", "private", "pda-private", "dual", "mixed", "empty", "full"):
        code, out, _ = call(capsys, "verify", "--scheme", schemes[name])
        doc = json.loads(out)
        assert code == 0, name
        assert doc["correct"] and doc["private"] and doc["privacy"]["exactPrivate"]


def test_nonprivate_build_fails_exact_check(capsys, schemes):
    code, out, _ = call(capsys, "verify", "--scheme", schemes["mn221"])
    doc = json.loads(out)
    assert code == 1
    assert doc["correct"] and not doc["private"]
    assert doc["privacy"]["minAmbiguity"] == 1
    assert doc["privacy"]["maxMutualInfoBits"] == "1"


def test_every_build_is_correct(capsys, schemes):
    for name, path in schemes.items():
        code, out, _ = call(capsys, "verify", "--scheme", path, "--privacy", "weak")
        assert json.loads(out)["correct"], name


def test_partial_ambiguity_mode(capsys, schemes):
    code, out, _ = call(capsys, "verify", "--scheme", schemes["partial"], "--privacy", "ambiguity")
    assert code == 0
    assert json.loads(out)["privacy"]["minAmbiguity"] >= 2
    code, _, _ = call(capsys, "verify", "--scheme", schemes["partial"], "--privacy", "ambiguity", "--min-ambiguity", "3")
    assert code == 1
    code, _, _ = call(capsys, "verify", "--scheme", schemes["partial"])
    assert code == 1


def test_table_format(capsys, schemes):
    code, out, _ = call(capsys, "verify", "--scheme", schemes["table1"], "--format", "table")
    assert code == 0
    assert "2/3" in out and "min ambiguity" in out


def test_piped_and_file_outputs_agree(tmp_path):
    exe = [sys.executable, "-m", "privcache"]
    piped = subprocess.run(
        f"{sys.executable} -m privcache build table1 | {sys.executable} -m privcache verify --scheme -",
        shell=True, capture_output=True, text=True,
    )
    path = tmp_path / "t1.json"
    subprocess.run(exe + ["build", "table1", "--out", str(path)], check=True)
    direct = subprocess.run(exe + ["verify", "--scheme", str(path)], capture_output=True, text=True)
    assert piped.returncode == direct.returncode == 0
    assert piped.stdout == direct.stdout


def test_missing_cell_exits_one(capsys, tmp_path):
    doc = json.loads(serialize_scheme(build_table1()))
    del doc["transmissions"]["00;00"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "verify", "--scheme", str(path))
    assert code == 1
    assert json.loads(out)["violations"][0]["kind"] == "shape-error"


def test_decode_failure_exits_one(capsys, tmp_path):
    s = build_table1()
    text = serialize_scheme(s)
    doc = json.loads(text)
    cell = next(iter(doc["transmissions"]))
    doc["transmissions"][cell][0] = "000000"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "verify", "--scheme", str(path))
    assert code == 1
    assert any(v["kind"] == "decode-failure" for v in json.loads(out)["violations"])


def test_search_sub2(capsys):
    code, out, _ = call(capsys, "search", "sub2")
    doc = json.loads(out)
    assert code == 0 and doc["feasibleFound"] == 0
    assert "elapsedSeconds" not in doc
    code, again, _ = call(capsys, "search", "sub2")
    assert again == out
    code, out, _ = call(capsys, "search", "sub2", "--no-privacy-condition", "--timing")
    doc = json.loads(out)
    assert doc["feasibleFound"] >= 1 and "elapsedSeconds" in doc


def test_search_sub3_table(capsys):
    code, out, _ = call(capsys, "search", "sub3-uncoded", "--restricted", "--format", "table")
    assert code == 0
    assert "feasibleFound" in out
    assert [l.split()[-1] for l in out.splitlines() if l.startswith("check A2-forced")] == ["True"]


def test_tradeoff_csv(capsys):
    code, out, _ = call(capsys, "tradeoff")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["M", "R", "label"]
    assert {(r[0], r[1]) for r in rows[1:]} == {("0", "2"), ("2/3", "1"), ("1", "2/3"), ("2", "0")}


def test_compare_subpack(capsys):
    code, out, _ = call(capsys, "compare-subpack", "--files", "10", "--users", "2", "--memory", "5", "--level", "2")
    assert code == 0 and "184756" in out and "6" in out.split()
    code, out, _ = call(capsys, "compare-subpack", "--files", "10", "--users", "2", "--memory", "5", "--level", "2", "--format", "json")
    assert json.loads(out) == {"fullPrivacy": 184756, "partialPrivacy": 6}


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["build"],
        ["build", "mn", "--users", "2"],
        ["build", "mn", "--users", "0", "--files", "2", "--t", "1"],
        ["verify", "--scheme", "/nonexistent/scheme.json"],
        ["tradeoff", "--files", "3"],
        ["compare-subpack", "--files", "2", "--users", "2", "--memory", "x", "--level", "2"],
        ["compare-subpack", "--files", "10", "--users", "2", "--memory", "1/3", "--level", "2"],
        ["build", "timeshare", "--a", "-", "--b", "-", "--alpha", "1/2"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert run(argv) == 2


def test_malformed_scheme_exits_two(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text('{"users": 2,')
    code, _, err = call(capsys, "verify", "--scheme", str(path))
    assert code == 2 and "line" in err


def test_cap_exceeded_exits_two(capsys, schemes):
    code, _, err = call(capsys, "verify", "--scheme", schemes["table1"], "--cap", "10")
    assert code == 2 and err


def test_deserialized_cli_output_roundtrips(capsys, schemes):
    for path in schemes.values():
        text = open(path).read()
        assert serialize_scheme(deserialize_scheme(text)) == text
