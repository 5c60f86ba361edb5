import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import point_sets
from minsat import harness, partition
from minsat.cli import main
from minsat.geometry import PointSet
from minsat.instances import brs
from minsat.io import (
    dumps,
    guess_format,
    loads,
    read_pointset,
    trace_to_json,
    tree_from_json,
    tree_to_json,
    write_pointset,
)
from minsat.partition import balanced_tree, random_tree
from minsat.solvers import RecursionTrace, recursive_bst


class TestIO:
    @given(point_sets())
    def test_json_round_trip(self, P):
        assert loads(dumps(P)) == P

    @given(point_sets())
    def test_tsv_round_trip(self, P):
        assert loads(dumps(P, "tsv")) == P
        assert loads(dumps(P, "tsv", header=True)) == P

    def test_header_meta(self):
        P = loads(dumps(brs(4)))
        assert P.meta["gen"]["family"] == "brs"
        assert dumps(brs(4), "tsv", header=True).startswith("#")

    def test_files(self, tmp_path):
        X = brs(8)
        for name in ("x.json", "x.tsv", "x.txt"):
            write_pointset(X, tmp_path / name)
            assert read_pointset(tmp_path / name) == X
        assert guess_format("a.tsv") == "tsv" and guess_format("a.json") == "json"

    def test_bad_tsv(self):
        with pytest.raises(ValueError):
            loads("1\t2\t3\n")

    def test_tree_round_trip(self):
        import random

        for T in (balanced_tree(13), random_tree(20, random.Random(1))):
            U = tree_from_json(tree_to_json(T))
            assert U.strips() == T.strips() and U.c == T.c

    def test_trace_json(self):
        tr = RecursionTrace()
        recursive_bst(PointSet([(2 * x, y) for y, x in enumerate([1, 5, 3, 7, 2, 6, 4, 8], 1)]), trace=tr)
        rows = json.loads(trace_to_json(tr))
        assert rows[0]["level"] == 0 and rows[0]["points"] == 8


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestCLI:
    def test_gen_monotone_tsv(self, capsys):
        rc, out, _ = run(["gen", "monotone", "--m", "3", "--format", "tsv"], capsys)
        assert rc == 0 and out.splitlines() == ["1\t1", "2\t2", "3\t3"]

    def test_gen_is_raw_unless_asked(self, capsys):
        _, out, _ = run(["gen", "brs", "--n", "4", "--format", "tsv"], capsys)
        assert out.splitlines()[1] == "3\t2"
        _, out, _ = run(["gen", "brs", "--n", "4", "--format", "tsv", "--normalize"], capsys)
        assert out.splitlines()[1] == "6\t2"

    def test_bound_brs4(self, tmp_path, capsys):
        f = tmp_path / "b.json"
        assert main(["gen", "brs", "--n", "4", "-o", str(f)]) == 0
        rc, out, _ = run(["bound", str(f), "--which", "all"], capsys)
        rep = json.loads(out)
        assert rc == 0
        assert rep["wb_strong"] == 5 and rep["opt"] == 4 and rep["method"]["wb_strong"]

    def test_solve_and_verify(self, tmp_path, capsys):
        f, inst, y = tmp_path / "x.json", tmp_path / "xn.json", tmp_path / "y.json"
        main(["gen", "random", "--c", "9", "--m", "30", "--seed", "4", "-o", str(f)])
        for algo in ("static", "recursive", "online"):
            rc = main(["solve", str(f), "--normalize", "--algo", algo, "--instance-out", str(inst), "-o", str(y)])
            assert rc == 0
            assert main(["verify", str(inst), str(y)]) == 0
        capsys.readouterr()

    def test_verify_infeasible(self, tmp_path, capsys):
        x, y = tmp_path / "x.tsv", tmp_path / "y.tsv"
        x.write_text("2\t1\n4\t2\n")
        y.write_text("")
        rc, out, _ = run(["verify", str(x), str(y)], capsys)
        assert rc == 1 and "infeasible" in out

    def test_usage_errors(self, tmp_path, capsys):
        f = tmp_path / "raw.json"
        main(["gen", "brs", "--n", "4", "-o", str(f)])
        assert run(["solve", str(f)], capsys)[0] == 2
        assert run(["gen", "brs"], capsys)[0] == 2
        assert run(["bogus"], capsys)[0] == 2
        assert run(["bound", str(tmp_path / "missing.json")], capsys)[0] == 2
        assert run(["bound", str(f), "--which", "nope"], capsys)[0] == 2

    def test_size_guard(self, capsys):
        rc, _, err = run(["gen", "hard1d", "--ell", "4"], capsys)
        assert rc == 3 and "size guard" in err

    def test_gap(self, capsys):
        rc, out, err = run(["gap", "--ell", "2"], capsys)
        assert rc == 0
        lines = out.splitlines()
        assert lines[0].split(",") == list(harness.CSV_COLUMNS)
        assert len(lines) == 2 and "gap interval" in err

    def test_module_entry(self):
        r = subprocess.run([sys.executable, "-m", "minsat", "gen", "monotone", "--m", "2", "--format", "tsv"],
                           capture_output=True, text=True)
        assert r.returncode == 0 and r.stdout.split() == ["1", "1", "2", "2"]


class TestSelftest:
    def test_quick_passes(self, capsys):
        assert harness.run_selftest(quick=True) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == len(harness.selftest_checks(True))

    def test_mutation_is_caught(self, monkeypatch, capsys):
        real = partition.node_cost

        def off_by_one(*args, **kw):
            v = real(*args, **kw)
            return v + 1 if isinstance(v, int) else v

        monkeypatch.setattr(partition, "node_cost", off_by_one)
        assert harness.run_selftest(quick=True) > 0
        assert "FAIL node_cost-consistency" in capsys.readouterr().out
