import csv
import io

import numpy as np
import pytest

from sinrq import cli
from sinrq.errors import Malformed, ModeMismatch
from sinrq.model import SinrParams
from sinrq.scenario import (Mode, format_scenario, parse_mode, parse_ops_text, parse_scenario,
                            parse_scenario_text, random_scenario)

HEAD = "sinr v1\nalpha 2 beta 1.5 noise 0 eps 0.5 mode {mode}\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_minimal_scenario(tmp_path):
    sc = parse_scenario(write(tmp_path, "s.txt", HEAD.format(mode="uniform") + "tx 1 0 0 1\ntx 2 3 0 1\n"))
    assert sc.mode == Mode("uniform") and [t.id for t in sc.transmitters] == [1, 2]
    assert sc.params == SinrParams(2.0, 1.5, 0.0, 0.5)


@pytest.mark.parametrize("body, err, where", [
    ("tx 1 0 0 1\ntx 2 3 0 0\n", Malformed, "line 4"),
    ("tx 1 0 0 1\ntx 2 3 0 -1\n", Malformed, "line 4"),
    ("tx 1 0 0 1\ntx 1 3 0 1\n", Malformed, "line 4"),
    ("tx 1 0 0 1\ntx 2 3 zero 1\n", Malformed, "line 4"),
    ("tx 1 0 0 1\ntx 2 3 0 2\n", ModeMismatch, "unequal"),
])
def test_scenario_errors(body, err, where):
    with pytest.raises(err, match=where):
        parse_scenario_text(HEAD.format(mode="uniform") + body)


def test_mode_parsing():
    assert parse_mode("bounded:2") == Mode("bounded", 2.0)
    for bad in ["bounded", "bounded:x", "bounded:0.5", "uniform:2", "fancy"]:
        with pytest.raises(Malformed):
            parse_mode(bad)
    with pytest.raises(ModeMismatch):
        parse_scenario_text(HEAD.format(mode="bounded:2") + "tx 1 0 0 1\ntx 2 3 0 3\n")


def test_scenario_round_trip():
    sc = random_scenario(np.random.default_rng(0), 50, Mode("nonuniform"), SinrParams(2.0, 1.5, 0.1, 0.2))
    again = parse_scenario_text(format_scenario(sc))
    assert again == sc


def test_ops_parsing_keeps_bad_lines():
    ops = parse_ops_text("QUERY 1 2\n# note\n\nDELETE x\nSIC 1 2 3\n")
    assert [o.kind for o in ops] == ["QUERY", "DELETE", "SIC"]
    assert ops[1].error is not None and ops[1].lineno == 4


def test_run_rows(tmp_path):
    sc = parse_scenario_text(HEAD.format(mode="uniform") + "tx 1 0 0 1\ntx 2 10 0 1\ntx 3 0 10 1\n")
    out = rows(cli.run_ops(sc, "QUERY 0.5 0.1\nDELETE 9\nINSERT 4 3 3 1\nSIC 0.5 0.1 1\nBOGUS\n"))
    assert [r["op"] for r in out] == ["QUERY", "DELETE", "SIC", "BOGUS"]
    q, d, s, b = out
    assert q["candidate"] == "1" and q["class"] == "RECEIVES" and q["status"] == "OK"
    assert float(q["stilde"]) > 0
    assert d["status"] == "UNKNOWN_ID"
    assert s["class"] == "SUCCESS" and s["rounds"] == "1"
    assert b["status"] == "MALFORMED"


def test_run_empty_ops():
    sc = parse_scenario_text(HEAD.format(mode="uniform") + "tx 1 0 0 1\n")
    assert cli.run_ops(sc, "") == ",".join(cli.COLUMNS) + "\n"


def test_run_small_set_is_reported():
    sc = parse_scenario_text(HEAD.format(mode="uniform") + "tx 1 0 0 1\ntx 2 5 0 1\n")
    (r,) = rows(cli.run_ops(sc, "QUERY 1 1\n"))
    assert r["status"] == "ASSUMPTION_VIOLATED"


def test_verify_uniform_500():
    sc = random_scenario(np.random.default_rng(1), 500, Mode("uniform"), SinrParams(2.0, 1.5, 0.0, 0.2))
    text, bad = cli.verify(sc, 200, 0, seed=1)
    assert bad == 0 and "result PASS" in text
    assert "checked 200" in text


def test_verify_nonuniform_certificates():
    sc = random_scenario(np.random.default_rng(2), 400, Mode("nonuniform"), SinrParams(2.0, 1.5, 0.0, 0.2))
    text, bad = cli.verify(sc, 150, 50, seed=2)
    report = dict(line.split(" ", 1) for line in text.splitlines())
    assert bad == 0 and int(report["certificates"]) > 0 and report["certificate_violations"] == "0"


def test_main_is_deterministic(tmp_path):
    sc = random_scenario(np.random.default_rng(3), 300, Mode("nonuniform"), SinrParams(2.0, 1.5, 0.0, 0.2))
    s = write(tmp_path, "s.txt", format_scenario(sc))
    ops = write(tmp_path, "o.txt", "QUERY 3 4\nDELETE 0\nQUERY 5 5\nSIC 2 2 7\n")
    outs = []
    for i in range(2):
        assert cli.main(["verify", "--scenario", s, "--queries", "40", "--updates", "20", "--seed", "4",
                         "--out", str(tmp_path / f"v{i}")]) == 0
        assert cli.main(["run", "--scenario", s, "--ops", ops, "--seed", "4", "--out", str(tmp_path / f"r{i}")]) == 0
        outs.append(((tmp_path / f"v{i}").read_bytes(), (tmp_path / f"r{i}").read_bytes()))
    assert outs[0] == outs[1]


def test_exit_codes(tmp_path, monkeypatch, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 1
    assert cli.main(["build", "--scenario", str(tmp_path / "missing.txt")]) == 2
    bad = write(tmp_path, "bad.txt", "sinr v2\n")
    assert cli.main(["build", "--scenario", bad]) == 2
    good = write(tmp_path, "good.txt", HEAD.format(mode="uniform") + "tx 1 0 0 1\ntx 2 3 0 1\ntx 3 0 3 1\n")
    assert cli.main(["build", "--scenario", good]) == 0
    assert "transmitters 3" in capsys.readouterr().out
    monkeypatch.setattr(cli, "verify", lambda *a: ("result FAIL\n", 1))
    assert cli.main(["verify", "--scenario", good]) == 3


def test_bench_rows():
    rows_ = cli.bench(Mode("uniform"), [256, 1024], 0.2, 5, 0)
    assert [(r["mode"], r["n"], r["eps"]) for r in rows_] == [("uniform", 256, 0.2), ("uniform", 1024, 0.2)]
    assert rows_[1]["visits"] > rows_[0]["visits"]
    assert rows_[1]["visit_ratio"] == rows_[1]["visits"] / rows_[0]["visits"]
    text = cli.format_bench(rows_)
    assert text.splitlines()[0] == ",".join(cli.BENCH_COLUMNS)
