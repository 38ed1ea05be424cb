"""Tests for the command-line interface and its serialization contract."""

import json
import math

import pytest

from chebextremal import (
    CanonicalMomentSeq,
    ExtremalSolution,
    Polynomial,
    ProblemSpec,
    verify_solution,
)
from chebextremal.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolveCommand:
    def test_chebyshev_instance(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--kind", "first",
                               "--indices", "3", "--b", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["version"] == "1"
        assert doc["spec"] == {"kind": "first", "indices": [3], "b": 1}
        assert doc["solution"]["objective"] == pytest.approx(16.0, rel=1e-12)
        assert doc["verification"]["pass"] is True

    def test_full_set_wide(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--kind", "first",
                               "--indices", "1,2,3", "--b", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["solution"]["objective"] == pytest.approx(0.375, rel=1e-12)
        assert doc["solution"]["active_set"] == [1, 2, 3]
        assert doc["solution"]["phase_index"] == 1

    def test_second_kind(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--kind", "second",
                               "--indices", "0,1,2", "--b", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["solution"]["objective"] == pytest.approx(0.375, rel=1e-12)

    def test_malformed_indices(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--kind", "first",
                               "--indices", "1,x", "--b", "1")
        assert code == 1
        assert "error" in err

    def test_out_of_range_half_width(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--kind", "first",
                               "--indices", "1,2", "--b", "12")
        assert code == 1
        assert "error" in err

    def test_unsupported_second_kind_set(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--kind", "second",
                               "--indices", "0,2", "--b", "1.5")
        assert code == 1
        assert "error" in err

    def test_serialization_round_trips_bit_exactly(self, capsys):
        _, out, _ = run_cli(capsys, "solve", "--kind", "first",
                            "--indices", "1,2,3", "--b", "1.7")
        doc = json.loads(out)
        spec = ProblemSpec(
            kind=doc["spec"]["kind"],
            indices=tuple(doc["spec"]["indices"]),
            b=float(doc["spec"]["b"]),
        )
        dm = doc["solution"]["dual_moments"]
        sol = ExtremalSolution(
            polys={
                entry["index"]: Polynomial(tuple(float(c) for c in entry["coeffs"]))
                for entry in doc["solution"]["polys"]
            },
            alphas={int(j): float(a) for j, a in doc["solution"]["alphas"].items()},
            objective=float(doc["solution"]["objective"]),
            dual_moments=CanonicalMomentSeq(
                b=float(dm["b"]), p=tuple(float(v) for v in dm["p"])
            ),
            active_set=tuple(doc["solution"]["active_set"]),
            phase_index=doc["solution"].get("phase_index"),
        )
        report = verify_solution(sol, spec)
        ver = doc["verification"]
        assert report.constraint_sup.sup == pytest.approx(ver["constraint_sup"], abs=1e-12)
        assert report.equimax_spread == pytest.approx(ver["equimax_spread"], abs=1e-12)
        assert report.support_attainment == pytest.approx(ver["support_attainment"], abs=1e-12)
        assert report.duality_residual == pytest.approx(ver["duality_residual"], abs=1e-12)
        assert report.passed is ver["pass"]

    def test_identical_runs_identical_bytes(self, capsys):
        _, out1, _ = run_cli(capsys, "solve", "--kind", "first",
                             "--indices", "2,4", "--b", "1.5")
        _, out2, _ = run_cli(capsys, "solve", "--kind", "first",
                             "--indices", "2,4", "--b", "1.5")
        assert out1 == out2


class TestSweepCommand:
    def test_phase_descent(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--kind", "first",
                               "--indices", "1,2,3",
                               "--b-min", "1", "--b-max", "2", "--steps", "101")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "b,k,objective,active_set"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 101
        ks = [int(r[1]) for r in rows]
        assert sorted(set(ks), reverse=True) == [3, 2, 1]
        objectives = [float(r[2]) for r in rows]
        assert all(u >= v - 1e-12 for u, v in zip(objectives, objectives[1:]))
        # change points bracket sqrt(2) and sqrt(3)
        bs = [float(r[0]) for r in rows]
        drop_32 = next(bs[i] for i in range(1, 101) if ks[i] == 2 and ks[i - 1] == 3)
        drop_21 = next(bs[i] for i in range(1, 101) if ks[i] == 1 and ks[i - 1] == 2)
        assert abs(drop_32 - math.sqrt(2.0)) <= 0.011
        assert abs(drop_21 - math.sqrt(3.0)) <= 0.011

    def test_singleton_constant_phase(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--kind", "first", "--indices", "4",
                               "--b-min", "0.5", "--b-max", "3", "--steps", "26")
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        assert all(int(r[1]) == 4 for r in rows)
        for r in rows:
            b = float(r[0])
            assert float(r[2]) == pytest.approx(2.0**6 * b**-8, rel=1e-12)

    def test_second_kind_descends_to_one(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--kind", "second",
                               "--indices", "0,1,2",
                               "--b-min", "1", "--b-max", "2.5", "--steps", "61")
        assert code == 0
        ks = [int(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
        assert ks[0] == 3
        assert ks[-1] == 1
        assert sorted(set(ks), reverse=True) == [3, 2, 1]

    def test_bad_range(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--kind", "first", "--indices", "1,2",
                               "--b-min", "2", "--b-max", "1", "--steps", "5")
        assert code == 1
        assert "error" in err


class TestOracleCommand:
    def test_linear_gap(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "--kind", "first", "--indices", "1",
                               "--b", "2", "--budget", "20000", "--seed", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["gap"] <= 1e-6
        assert doc["pass"] is True

    def test_determinism(self, capsys):
        args = ["oracle", "--kind", "first", "--indices", "2,3", "--b", "1.3",
                "--budget", "15000", "--seed", "1"]
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_oversized_index_rejected(self, capsys):
        code, _, err = run_cli(capsys, "oracle", "--kind", "first", "--indices", "6",
                               "--b", "1", "--budget", "5000", "--seed", "0")
        assert code == 1
        assert "error" in err

    def test_gapped_set_cross_check(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "--kind", "first", "--indices", "2,4",
                               "--b", "1.5", "--budget", "120000", "--seed", "7")
        doc = json.loads(out)
        assert code == 0
        assert doc["gap"] <= 1e-3 * max(1.0, doc["solver_objective"])


class TestArgumentErrors:
    def test_unknown_command_exit_code(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 1

    def test_missing_required_flag(self, capsys):
        code, _, _ = run_cli(capsys, "solve", "--kind", "first", "--b", "1")
        assert code == 1
