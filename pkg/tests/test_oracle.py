"""Tests for the brute-force oracle and the duality certificate."""

import math

import numpy as np
import pytest

from chebextremal import (
    CanonicalMomentSeq,
    ExtremalSolution,
    InvalidInputError,
    Polynomial,
    ProblemSpec,
    brute_force_max,
    duality_certificate,
    moment_matrices,
    solve,
    solve_first_kind,
    sup_sum_squares,
    support_measure,
)


class TestBruteForce:
    def test_linear_singleton(self):
        spec = ProblemSpec("first", (1,), 2.0)
        result = brute_force_max(spec, budget=20000, seed=0)
        assert result.best_value == pytest.approx(0.25, abs=1e-6)

    def test_full_set_wide(self):
        spec = ProblemSpec("first", (1, 2, 3), 2.0)
        result = brute_force_max(spec, budget=200000, seed=0)
        assert result.best_value == pytest.approx(0.375, abs=1e-3)

    def test_pair_narrow(self):
        spec = ProblemSpec("first", (2, 3), 1.0)
        result = brute_force_max(spec, budget=120000, seed=0)
        assert result.best_value == pytest.approx(16.0, abs=1e-2)

    def test_seed_determinism(self):
        spec = ProblemSpec("first", (1, 2), 1.3)
        a = brute_force_max(spec, budget=20000, seed=11)
        b = brute_force_max(spec, budget=20000, seed=11)
        assert a == b

    def test_different_seeds_still_close(self):
        spec = ProblemSpec("first", (1, 2), 1.3)
        sol = solve_first_kind(spec)
        for seed in (1, 2):
            result = brute_force_max(spec, budget=60000, seed=seed)
            assert abs(result.best_value - sol.objective) <= 1e-3 * max(1.0, sol.objective)

    def test_never_exceeds_solver(self):
        for idx, b in [((1, 2), 1.0), ((2, 3), 2.0), ((1, 3), 1.5)]:
            spec = ProblemSpec("first", idx, b)
            sol = solve_first_kind(spec)
            result = brute_force_max(spec, budget=30000, seed=5)
            assert result.best_value <= sol.objective + 1e-6

    def test_reported_family_is_feasible_and_consistent(self):
        spec = ProblemSpec("first", (1, 2), 1.8)
        result = brute_force_max(spec, budget=30000, seed=9)
        family = list(result.best_coeffs.values())
        sup = sup_sum_squares(family, spec.b).sup
        assert sup <= 1.0 + 1e-9
        total = sum(p.coeff(j) ** 2 for j, p in result.best_coeffs.items())
        assert total == pytest.approx(result.best_value, abs=1e-9)

    def test_weighted_kind(self):
        spec = ProblemSpec("second", (0, 1), 2.0)
        sol = solve(spec)
        result = brute_force_max(spec, budget=60000, seed=0)
        assert abs(result.best_value - sol.objective) <= 1e-3

    def test_scale_limits(self):
        with pytest.raises(InvalidInputError):
            brute_force_max(ProblemSpec("first", (6,), 1.0), budget=10000, seed=0)
        with pytest.raises(InvalidInputError):
            brute_force_max(ProblemSpec("first", (1,), 1.0), budget=10, seed=0)


class TestMomentMatrices:
    def test_entries_are_raw_moments(self):
        spec = ProblemSpec("first", (1, 2, 3), 2.0)
        measure = support_measure(solve_first_kind(spec).dual_moments)
        mats = moment_matrices(measure, spec.indices)
        pts = np.asarray(measure.points)
        wts = np.asarray(measure.weights)
        for j, M in mats.matrices.items():
            assert M.shape == (j + 1, j + 1)
            np.testing.assert_allclose(M, M.T, atol=1e-15)
            assert np.all(np.linalg.eigvalsh(M) > -1e-12)
            for r in range(j + 1):
                for s in range(j + 1):
                    assert M[r, s] == pytest.approx(
                        float(np.sum(wts * pts ** (r + s))), rel=1e-13, abs=1e-14
                    )


class TestDualityCertificate:
    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0, 3.0])
    def test_singleton_norm_identity(self, n, b):
        """The moment-matrix route reproduces the Chebyshev optimum."""
        spec = ProblemSpec("first", (n,), b)
        sol = solve_first_kind(spec)
        cert = duality_certificate(sol, spec)
        assert cert.ok
        assert max(cert.residuals()) <= 1e-9
        target = 2.0 ** (2 * n - 2) * b ** (-2 * n)
        assert sol.objective == pytest.approx(target, rel=1e-9)

    def test_full_set_residuals(self):
        for idx, b in [((1, 2, 3), 2.0), ((2, 3), 1.5), ((1, 3), 1.5), ((1, 2, 3, 4), 2.8)]:
            spec = ProblemSpec("first", idx, b)
            cert = duality_certificate(solve_first_kind(spec), spec)
            assert cert.ok
            assert cert.trace_residual <= 1e-9
            assert max(cert.structure_residuals.values()) <= 1e-9
            assert max(cert.min_equality_residuals) <= 1e-9
            assert max(cert.norm_identity_residuals.values()) <= 1e-9

    def test_second_kind_residuals(self):
        for n, b in [(2, 1.0), (2, 2.0), (3, 1.6)]:
            spec = ProblemSpec("second", tuple(range(0, n + 1)), b)
            cert = duality_certificate(solve(spec), spec)
            assert cert.ok
            assert max(cert.residuals()) <= 1e-9

    def test_singular_moment_matrix_flags_index(self):
        # a two-point measure cannot support a degree-2 moment matrix
        doctored = ExtremalSolution(
            polys={2: Polynomial((0.0, 0.0, 1.0))},
            alphas={2: 1.0},
            objective=1.0,
            dual_moments=CanonicalMomentSeq(b=1.0, p=(0.5, 1.0)),
            active_set=(2,),
        )
        spec = ProblemSpec("first", (2,), 1.0)
        cert = duality_certificate(doctored, spec)
        assert not cert.ok
        assert cert.failed_index == 2

    def test_non_terminating_rejected(self):
        sol = solve_first_kind(ProblemSpec("first", (2,), 1.0))
        bad = ExtremalSolution(
            polys=sol.polys,
            alphas=sol.alphas,
            objective=sol.objective,
            dual_moments=CanonicalMomentSeq(b=1.0, p=(0.5, 0.5, 0.5, 0.5)),
            active_set=sol.active_set,
        )
        with pytest.raises(InvalidInputError):
            duality_certificate(bad, ProblemSpec("first", (2,), 1.0))
