import io
import math

import pytest

from nmroute.cli import OUT_ENV, main
from nmroute.exceptions import GraphFormatError
from nmroute.graph import AT_MOST, ConstraintSpec, LinkBound
from nmroute.io import ci95, dump_requests, load_requests, read_csv, write_csv, write_dat


def test_csv_round_trip():
    buf = io.StringIO()
    write_csv(buf, ("a", "b", "c"), [{"a": 1, "b": 0.1, "c": True}, (2, math.inf, "x,y")],
              footer={"a": "total", "b": 1.5})
    text = buf.getvalue()
    assert text.startswith("# format-version 1\n")
    fields, rows = read_csv(io.StringIO(text))
    assert fields == ["a", "b", "c"]
    assert rows[0] == {"a": "1", "b": "0.1", "c": "1"}
    assert rows[1]["c"] == "x,y" and rows[2]["c"] == ""
    again = io.StringIO()
    write_csv(again, fields, rows)
    assert again.getvalue() == text


def test_csv_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="line 1"):
        read_csv(io.StringIO("a,b\n"))
    with pytest.raises(GraphFormatError, match="line 4"):
        read_csv(io.StringIO("# format-version 1\na,b\n1,2\n3\n"))


def test_dat_lines():
    buf = io.StringIO()
    write_dat(buf, {20: [1.0, 3.0], 10: [5.0]}, "demo")
    lines = buf.getvalue().splitlines()
    assert lines[:3] == ["# format-version 1", "# demo", "# x mean ci95"]
    assert lines[3] == "10 5 0"
    x, mean, half = lines[4].split()
    assert (x, mean) == ("20", "2")
    assert float(half) == pytest.approx(1.96 * math.sqrt(2) / math.sqrt(2))


def test_ci95_edge_cases():
    assert math.isnan(ci95([])[0])
    assert ci95([4]) == (4.0, 0.0)


def test_requests_reject_garbage():
    with pytest.raises(GraphFormatError, match="line 2"):
        load_requests("# format-version 1\nreq 1 2\n")
    with pytest.raises(GraphFormatError):
        dump_requests([(0, 1, ConstraintSpec(1, (LinkBound(0, AT_MOST, 1.0),), ()))])


# -- CLI -----------------------------------------------------------------------------
def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_route_worked_example(capsys):
    code, out, _ = run(capsys, "route", "figure3", "--src", "X", "--dst", "Y",
                       "--bw", "5", "--delay", "5", "--cost", "5")
    assert code == 0
    assert "path 1: X B A Y" in out
    assert out.strip().splitlines()[-1].startswith("RESULT found X,B,A,Y hops=3")


def test_route_l1_fixture(capsys):
    code, out, _ = run(capsys, "route", "figure5", "--src", "X", "--dst", "Y", "--algo", "nm-l1",
                       "--bw", "5", "--delay", "5")
    assert code == 0 and "RESULT found X,B,A,Y" in out


def test_route_same_endpoint(capsys):
    code, out, _ = run(capsys, "route", "figure3", "--src", "X", "--dst", "X")
    assert code == 0 and "hops=0" in out


def test_route_exit_codes(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("# format-version 1\ngraph undirected 3 0 1\nedge 0 1 5 1 1\n")
    assert run(capsys, "route", str(g), "--src", "0", "--dst", "2")[0] == 3
    assert run(capsys, "route", str(g), "--src", "0", "--dst", "1", "--delay", "0.5")[0] == 2
    with pytest.raises(SystemExit, match="64"):
        main(["route", str(g), "--src", "0", "--dst", "1", "--algo", "dfs"])
    assert run(capsys, "route", str(g), "--src", "0", "--dst", "9")[0] == 64
    bad = tmp_path / "bad.txt"
    bad.write_text("# format-version 1\nedge 0 1\n")
    code, _, err = run(capsys, "route", str(bad), "--src", "0", "--dst", "1")
    assert code == 65 and "line 2" in err


def test_usage_errors(capsys):
    assert run(capsys, "gen", "--n", "1")[0] == 64
    for argv in ([], ["bench", "--sizes", "x"], ["route", "figure3"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64


def test_gen_and_check(capsys, tmp_path):
    out = tmp_path / "g.txt"
    reqs = tmp_path / "r.txt"
    code, stdout, _ = run(capsys, "gen", "--n", "30", "--seed", "2", "-o", str(out),
                          "--requests", "5", "--requests-out", str(reqs))
    assert code == 0 and stdout.startswith("n=30 ")
    assert len(load_requests(reqs.read_text())) == 5
    code, stdout, _ = run(capsys, "check", str(out), str(reqs))
    assert code == 0 and stdout.count(": ok") == 2


def test_check_flags_non_canonical(capsys, tmp_path):
    f = tmp_path / "r.txt"
    f.write_text("# format-version 1\nreq 0 1 1.0 2\n")
    assert run(capsys, "check", str(f))[0] == 1
    f.write_text("hello\n")
    assert run(capsys, "check", str(f))[0] == 65


def test_te_then_energy(capsys, tmp_path):
    code, _, _ = run(capsys, "te", "--n", "30", "--flows", "8", "--out", str(tmp_path))
    assert code == 0
    _, rows = read_csv(tmp_path / "te.csv")
    assert rows[-1]["flow"] == "total"
    assert float(rows[-1]["allocated"]) == sum(float(r["allocated"]) for r in rows[:-1])
    code, out, _ = run(capsys, "energy", "--util", str(tmp_path / "te-util.csv"))
    assert code == 0 and out.startswith("energy ")
    assert run(capsys, "check", str(tmp_path / "te.csv"))[0] == 0


def test_out_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "env"))
    assert run(capsys, "vne", "--n", "15", "--requests", "5")[0] == 0
    assert (tmp_path / "env" / "vne.csv").exists()
    assert (tmp_path / "env" / "vne-acceptance.dat").exists()


def _snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


@pytest.mark.parametrize("argv", [
    ["bench", "--sizes", "10,20", "--seeds", "2"],
    ["te", "--n", "25", "--flows", "6", "--seeds", "2"],
    ["vne", "--n", "15", "--requests", "6"],
])
def test_outputs_are_byte_identical(capsys, tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert _snapshot(a) == _snapshot(b) and _snapshot(a)


def test_bench_timing_opt_in(capsys, tmp_path):
    assert main(["bench", "--sizes", "10", "--out", str(tmp_path)]) == 0
    assert not (tmp_path / "bench-timing.csv").exists()
    assert main(["bench", "--sizes", "10", "--timing", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "bench-timing.csv").exists()
    capsys.readouterr()
    assert main(["bench", "--sizes", "10", "--algos", "nm,dfs", "--out", str(tmp_path)]) == 64
