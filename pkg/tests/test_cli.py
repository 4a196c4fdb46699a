import json
import subprocess
import sys

import pytest

from flowlog.cli import main
from flowlog.programs import REACH_EVEN, TC


@pytest.fixture
def reach(tmp_path):
    (tmp_path / "prog.dl").write_text(REACH_EVEN)
    facts = tmp_path / "facts"
    facts.mkdir()
    (facts / "edge.facts").write_text("1\t2\n2\t3\n3\t1\n")
    (facts / "target.facts").write_text("3\n")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_run_writes_outputs(reach):
    assert run("run", reach / "prog.dl", "--facts", reach / "facts", "--out", reach / "out") == 0
    assert (reach / "out" / "reach.csv").read_text() == "1\n2\n3\n"


def test_toggles_do_not_change_results(reach):
    run("run", reach / "prog.dl", "--facts", reach / "facts", "--out", reach / "a")
    flags = ["--no-sip", "--no-plan-opt", "--no-fusion", "--no-sharing", "--count-diffs", "--workers", "2"]
    assert run("run", reach / "prog.dl", "--facts", reach / "facts", "--out", reach / "b", *flags) == 0
    assert (reach / "a" / "reach.csv").read_text() == (reach / "b" / "reach.csv").read_text()


def test_oracle_matches_run(reach):
    run("run", reach / "prog.dl", "--facts", reach / "facts", "--out", reach / "a")
    assert run("oracle", reach / "prog.dl", "--facts", reach / "facts", "--out", reach / "o") == 0
    assert (reach / "a" / "reach.csv").read_text() == (reach / "o" / "reach.csv").read_text()


def test_stats_file_and_stderr(reach, capsys):
    stats = reach / "stats.json"
    assert run("run", reach / "prog.dl", "--facts", reach / "facts", "--stats", stats) == 0
    records = json.loads(stats.read_text())
    kinds = {r["kind"] for r in records}
    assert {"subplan", "rule", "total"} <= kinds
    total = next(r for r in records if r["kind"] == "total")
    assert total["join_output"] >= 0 and total["iterations"] >= 1
    err = capsys.readouterr().err.splitlines()
    assert len(err) == len(records)
    assert err[-1] == f"kind=total join_output={total['join_output']} iterations={total['iterations']}"


def test_explain_stops_without_run(reach, capsys):
    assert run("run", reach / "prog.dl", "--explain", "--out", reach / "out") == 0
    text = capsys.readouterr().out
    assert "== strata" in text and "chosen roots=" in text and "== plan dag" in text
    assert not (reach / "out").exists()
    assert run("run", reach / "prog.dl", "--explain", "--run", "--facts", reach / "facts", "--out", reach / "out") == 0
    assert (reach / "out" / "reach.csv").exists()


@pytest.mark.parametrize(
    "source, code",
    [
        (".decl a(x:number)\na(x) :- .", 3),
        (".decl a(x:number)\na(x) :- b(x).", 4),
        (".decl e(x:number)\n.input e\n.decl a(x:number)\n.decl b(x:number)\n"
         "a(x) :- e(x), !b(x).\nb(x) :- e(x), !a(x).", 5),
    ],
)  # fmt: skip
def test_error_exit_codes(tmp_path, source, code, capsys):
    (tmp_path / "p.dl").write_text(source)
    (tmp_path / "e.facts").write_text("1\n")
    assert run("run", tmp_path / "p.dl", "--facts", tmp_path) == code
    assert capsys.readouterr().err.startswith("flowlog: ")


def test_malformed_row_and_missing_files(reach):
    assert run("run", reach / "missing.dl") == 8
    assert run("run", reach / "prog.dl", "--facts", reach / "nowhere") == 8
    (reach / "facts" / "edge.facts").write_text("1\t2\n3\n")
    assert run("run", reach / "prog.dl", "--facts", reach / "facts") == 6


def test_iteration_cap(reach):
    (reach / "tc.dl").write_text(TC)
    assert run("run", reach / "tc.dl", "--facts", reach / "facts", "--max-iterations", "1") == 7


def test_usage_errors(reach):
    with pytest.raises(SystemExit) as err:
        run("run", reach / "prog.dl", "--workers", "0")
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run("gen", "--nodes", "5")
    assert err.value.code == 2


def test_gen_is_seeded(tmp_path, capsys):
    assert run("gen", "--nodes", "20", "--prob", "0.2", "--seed", "3", "--out", tmp_path / "g.facts") == 0
    assert run("gen", "--nodes", "20", "--prob", "0.2", "--seed", "3") == 0
    assert capsys.readouterr().out == (tmp_path / "g.facts").read_text()
    assert run("gen", "--nodes", "4", "--edges", "3", "--weighted", "--out", "-") == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 3 and all(len(r) == 3 for r in rows)


def test_console_entry_point(reach):
    proc = subprocess.run(
        [sys.executable, "-m", "flowlog.cli", "run", str(reach / "prog.dl"), "--facts", str(reach / "facts")],
        capture_output=True, text=True,
    )  # fmt: skip
    assert proc.returncode == 0
