import json

import pytest

from quadtourn import cli
from quadtourn.reports import RunReport
from quadtourn.tournament import parse_trn, qr_tournament, three_cycle


@pytest.fixture
def qr11(tmp_path):
    path = tmp_path / "qr11.trn"
    path.write_text(qr_tournament(11).to_trn())
    return str(path)


def test_check_quad(qr11):
    code, report, _ = cli.run(["check", "quad", "--in", qr11])
    assert code == 0
    assert report.outcome["quadrangular"] is True
    assert report.inputs["files"][qr11]


def test_false_predicate_still_exit_zero(tmp_path):
    path = tmp_path / "qr7.trn"
    path.write_text(qr_tournament(7).to_trn())
    code, report, _ = cli.run(["check", "quad", "--in", str(path)])
    assert code == 0 and report.outcome["quadrangular"] is False


def test_strongquad_cap(tmp_path):
    path = tmp_path / "qr23.trn"
    path.write_text(qr_tournament(23).to_trn())
    code, report, _ = cli.run(["check", "strongquad", "--in", str(path), "--cap", "20"])
    assert code == 3 and report is None


def test_bad_input(tmp_path):
    path = tmp_path / "bad.trn"
    path.write_text("3\n1x1\n")
    assert cli.run(["check", "quad", "--in", str(path)])[0] == 2
    assert cli.run(["check", "quad", "--in", str(tmp_path / "missing.trn")])[0] == 2
    assert cli.run(["gen", "qr", "--p", "13"])[0] == 2
    assert cli.run(["check", "rotsym", "--symbol", "1,2,4"])[0] == 2


def test_parser_rejects():
    assert cli.run(["check", "nonsense"])[0] == 2
    assert cli.run(["enum", "census", "--n", "seven"])[0] == 2
    assert cli.run([])[0] == 2


def test_long_guard():
    assert cli.run(["enum", "census", "--n", "10"])[0] == 3
    assert cli.run(["enum", "final10", "--n-max", "10"])[0] == 3


def test_gen_pipeline(tmp_path, capsys):
    out = tmp_path / "r13.trn"
    assert cli.main(["gen", "rotational", "--n", "13", "--symbol", "1,2,3,5,6,9", "--out", str(out)]) == 0
    code, report, _ = cli.run(["check", "rotsym", "--in", str(out)])
    assert code == 0 and report.outcome["holds"] is True
    assert cli.main(["gen", "transmitter", "--in", str(out)]) == 0
    t = parse_trn(capsys.readouterr().out)
    assert t.n == 14 and t.transmitters() == [13]


def test_gen_report(tmp_path):
    rep = tmp_path / "r.json"
    assert cli.main(["gen", "qr", "--p", "7", "--out", str(tmp_path / "q.trn"), "--report", str(rep)]) == 0
    d = json.loads(rep.read_text())
    assert d["command"] == "gen qr" and d["outcome"]["n"] == 7


def test_report_roundtrip(qr11, tmp_path):
    out = tmp_path / "rep.json"
    assert cli.main(["check", "domination", "--in", qr11, "--out", str(out)]) == 0
    rep = RunReport.from_json(out.read_text())
    assert rep.to_dict() == json.loads(out.read_text())
    assert rep.outcome["gamma"] == 3
    assert set(json.loads(out.read_text())) == {"command", "inputs", "outcome", "version", "elapsed"}


@pytest.mark.parametrize("argv", [
    ["check", "rotsym", "--n", "13", "--symbol", "1,2,3,5,6,9"],
    ["check", "pattern", "--builtin", "m15"],
    ["sample", "estimate", "--n", "20", "--trials", "2000", "--seed", "7"],
    ["sample", "bound", "--n-min", "4", "--n-max", "12"],
    ["ortho", "certificate", "--builtin", "m15"],
    ["ortho", "search", "--builtin", "m15", "--restarts", "2", "--max-iter", "400"],
    ["enum", "census", "--n", "7"],
    ["enum", "quadcount", "--n", "9"],
    ["enum", "order2"],
    ["gen", "random", "--n", "12", "--seed", "5"],
])
def test_rerun_reproduces_payload(argv):
    code, report, _ = cli.run(argv)
    assert code == 0
    again = RunReport.from_json(report.to_json())
    code2, report2, _ = cli.run(again.inputs["argv"])
    assert code2 == 0 and report2.outcome == report.outcome


def test_quadcount_and_census(tmp_path):
    census = tmp_path / "q9.trn"
    code, report, _ = cli.run(["enum", "quadcount", "--n", "9", "--census", str(census)])
    assert code == 0
    assert report.outcome["class_count"] == 191536
    assert report.outcome["filter_count"] == 2
    assert report.outcome["labeled_check_ok"] is True
    assert census.read_text().count("\n") == 4


def test_final_small():
    code, report, _ = cli.run(["enum", "final10", "--n-max", "9"])
    assert code == 0 and report.outcome["holds"] is True
    reasons = {(r["n"], r["reason"]) for r in report.outcome["candidates"]}
    assert (3, "survivor") in reasons and (9, "zero-line") in reasons and (9, "strong-quad") in reasons


def test_sample_csv(tmp_path):
    csv = tmp_path / "b.csv"
    assert cli.run(["sample", "bound", "--n-min", "4", "--n-max", "6", "--csv", str(csv)])[0] == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "n,bound" and lines[1] == "4,4.5"


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(three_cycle().to_trn()))
    assert cli.main(["check", "strongquad"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["outcome"]["strongly_quadrangular"] is True
