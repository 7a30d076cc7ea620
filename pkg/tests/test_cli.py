import json

import pytest

from rumorlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--protocol", "gp", "--n", "8", "--fail-set", "1,2,3")
    assert code == 0 and out.startswith("rounds=6 requests=7")
    code, out, _ = run(capsys, "simulate", "--protocol", "gp", "--n", "1")
    assert code == 0 and out.startswith("rounds=0 requests=0")
    path = tmp_path / "t.json"
    code, out, _ = run(capsys, "simulate", "--protocol", "tablegp", "--n", "1024", "--t", "4096", "--seed", "7", "--out", str(path))
    assert code == 0 and "max_appendix_bits=46" in out
    assert json.loads(path.read_text())["totals"]["max_appendix_bits"] == 46


def test_simulate_failure_file(capsys, tmp_path):
    f = tmp_path / "F.txt"
    f.write_text("1\n2\n3\n")
    code, out, _ = run(capsys, "simulate", "--n", "8", "--fail-file", str(f))
    assert code == 0 and out.startswith("rounds=6")


@pytest.mark.parametrize("bad", ["0,2", "8", "2,2", "x"])
def test_simulate_bad_failure_set(capsys, bad):
    code, _, err = run(capsys, "simulate", "--n", "8", "--fail-set", bad)
    assert code == 2 and "error" in err


def test_simulate_wu_and_rgp(capsys):
    code, out, _ = run(capsys, "simulate", "--protocol", "wu", "--n", "5", "--p", "1")
    assert code == 0 and out.startswith("rounds=3 requests=4")
    code, out, _ = run(capsys, "simulate", "--protocol", "rgp", "--n", "64", "--fail-set", "5,6", "--seed", "2")
    assert code == 0 and "requests=63" in out


def test_tree_examples(capsys, tmp_path):
    assert run(capsys, "tree", "--kind", "gp", "--k", "4", "--pattern", "1001", "--tail", "ones")[1] == "height=3\n"
    assert run(capsys, "tree", "--kind", "wu", "--k", "3", "--pattern", "000", "--tail", "zeros")[1] == "NONTERMINATING\n"
    assert run(capsys, "tree", "--kind", "gp", "--k", "0", "--pattern", "")[1] == "height=0\n"
    dot = tmp_path / "t.dot"
    code, _, _ = run(capsys, "tree", "--k", "4", "--pattern", "1001", "--out", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph")
    code, _, _ = run(capsys, "tree", "--kind", "wu", "--k", "3", "--tail", "zeros", "--out", str(tmp_path / "x.dot"))
    assert code == 2 and not (tmp_path / "x.dot").exists()


def test_montecarlo_examples(capsys, tmp_path):
    js, csv = tmp_path / "r.json", tmp_path / "h.csv"
    code, out, _ = run(capsys, "montecarlo", "--protocol", "wu", "--n", "257", "--p", "1", "--trials", "20", "--out", str(js), "--csv", str(csv))
    assert code == 0 and out.startswith("empirical=0 ") and "verdict=PASS" in out
    assert csv.read_text() == "rounds,count\n9,20\n"
    assert json.loads(js.read_text())["empirical_violation_rate"] == 0
    assert run(capsys, "montecarlo", "--n", "65", "--trials", "0")[0] == 2


def test_montecarlo_check_failure_exit(capsys):
    # T = (1.05/0.3) * 7 = 24.5 is far too short for p = 0.3 on 65 processors
    code, out, _ = run(capsys, "montecarlo", "--protocol", "gp_random", "--n", "65", "--p", "0.3", "--c", "1.05", "--trials", "200")
    assert "verdict=" in out
    assert code == (0 if "PASS" in out else 1)


def test_oracle_cli(capsys):
    code, out, _ = run(capsys, "oracle", "--n-max", "6")
    assert code == 0 and out.strip().endswith("verdict=PASS")
    assert out.count(": PASS") == 9
    assert run(capsys, "oracle", "--n-max", "0")[0] == 2
    assert run(capsys, "oracle", "--n-max", "20")[0] == 2


def test_safety_cli_small(capsys, tmp_path):
    out_path = tmp_path / "s.json"
    code, out, _ = run(capsys, "safety", "--n", "64", "--t", "512", "--f", "16", "--samples", "9", "--seed", "1", "--out", str(out_path))
    d = json.loads(out_path.read_text())
    assert out.startswith("worst_fraction=") and d["evidence"] == "sampled"
    assert code == (0 if d["verdict"] == "PASS" else 1)


def test_bounds_cli(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "1025", "--p", "0.5", "--c", "3.5", "--f", "512", "--t", "16384")
    d = json.loads(out)
    assert code == 0
    assert d["wu_runtime_bound"]["T"] == 77
    assert abs(d["rgp_runtime_bound"]["T"] - 92.17) < 0.01


def test_format_mismatch(capsys):
    assert run(capsys, "tree", "--k", "1", "--format", "json")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_montecarlo_csv_format(capsys, tmp_path):
    path = tmp_path / "h.csv"
    code, _, _ = run(capsys, "montecarlo", "--n", "9", "--p", "1", "--trials", "5", "--format", "csv", "--out", str(path))
    assert code == 0 and path.read_text() == "rounds,count\n4,5\n"


DETERMINISM_CASES = [
    ["simulate", "--protocol", "gp", "--n", "50", "--p", "0.6", "--seed", "4"],
    ["simulate", "--protocol", "wu", "--n", "50", "--p", "0.6", "--seed", "4"],
    ["simulate", "--protocol", "rgp", "--n", "50", "--fail-set", "1,2,9", "--seed", "4"],
    ["simulate", "--protocol", "tablegp", "--n", "50", "--t", "64", "--fail-set", "3", "--seed", "4"],
    ["tree", "--kind", "wu", "--k", "9", "--pattern", "0110", "--tail", "bernoulli", "--p", "0.5", "--seed", "4"],
    ["montecarlo", "--protocol", "rgp", "--n", "65", "--f", "16", "--trials", "100", "--seed", "4"],
    ["oracle", "--n-max", "5"],
    ["safety", "--n", "33", "--t", "128", "--f", "8", "--samples", "5", "--seed", "4"],
    ["bounds", "--n", "300", "--f", "10", "--t", "5000"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: a[0] + "-" + (a[2] if len(a) > 2 else ""))
def test_byte_identical_artifacts(capsys, tmp_path, argv):
    blobs = []
    for i in range(2):
        path = tmp_path / f"out{i}"
        code = main(argv + ["--out", str(path)])
        capsys.readouterr()
        assert code in (0, 1)
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1] and blobs[0]
