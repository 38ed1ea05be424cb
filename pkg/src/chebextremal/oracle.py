"""Independent verification: brute-force search and duality certificates.

The brute-force maximizer never touches the canonical-moment machinery.
It optimizes the scale-invariant ratio

    R(c) = sum_j m_j(c)^2 / sup_x W(x) sum_j P_j(x, c)^2

over raw coefficient vectors (W = 1, or b^2 - x^2 for the weighted kind).
Because numerator and constraint are both homogeneous of degree two, the
maximum of R over all coefficient vectors equals the optimum of the
constrained problem, so no penalty tuning is needed.

The certificate checker rebuilds the discrete dual measure, forms the
Hankel moment matrices M_j, the rank-one dual variables
N_j = alpha_j a_j a_j' with a_j = sqrt(k_j) M_j^{-1} e_j, and evaluates the
optimality equalities: sum_j trace(M_j N_j) = 1, the rank-one structure
equation per index, and the min-equality tying the weights to the indices
of minimal norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .canonical import DiscreteMeasure, l2_norms, reflected, support_measure
from .errors import InvalidInputError
from .polynomials import Polynomial, sup_sum_squares
from .solver import KIND_SECOND, ExtremalSolution, ProblemSpec

ORACLE_MAX_N = 5
DEFAULT_RESTARTS = 50


@dataclass(frozen=True)
class OracleResult:
    """Best feasible family found by the derivative-free search."""

    best_value: float
    best_coeffs: dict[int, Polynomial]
    evaluations: int
    seed: int


@dataclass(frozen=True)
class MomentMatrixSet:
    """Hankel moment matrices of a discrete measure, one per index."""

    matrices: dict[int, np.ndarray]


@dataclass
class CertificateReport:
    """Residuals of the duality equality conditions.

    ``trace_residual`` is |sum_j trace(M_j N_j) - 1|; ``structure_residuals``
    the per-index relative Frobenius defect of the rank-one equation;
    ``min_equality_residuals`` the two min-equality defects; and
    ``norm_identity_residuals`` the defect of e_j' M_j^{-1} e_j * k_j = 1.
    A singular moment matrix marks ``failed_index`` instead of raising.
    """

    trace_residual: float
    structure_residuals: dict[int, float] = field(default_factory=dict)
    min_equality_residuals: tuple[float, float] = (math.inf, math.inf)
    norm_identity_residuals: dict[int, float] = field(default_factory=dict)
    failed_index: int | None = None

    @property
    def ok(self) -> bool:
        return self.failed_index is None

    def residuals(self) -> list[float]:
        out = [self.trace_residual]
        out.extend(self.structure_residuals.values())
        out.extend(self.min_equality_residuals)
        out.extend(self.norm_identity_residuals.values())
        return out


def brute_force_max(
    spec: ProblemSpec,
    budget: int,
    seed: int,
    restarts: int = DEFAULT_RESTARTS,
) -> OracleResult:
    """Derivative-free multistart maximization of the coefficient ratio.

    Runs ``restarts`` Nelder-Mead descents on -R from points drawn
    deterministically from ``seed``, then polishes the best one with the
    remaining budget.  During the search the constraint sup is taken on a
    fixed dense Chebyshev grid; the returned family is rescaled by the
    rigorous sup so it is feasible and ``best_value`` is honest.  Runs are
    merged by (value, restart index), so the output is reproducible.
    """
    n = spec.n
    if n > ORACLE_MAX_N:
        raise InvalidInputError(f"oracle is desk-scale only (n <= {ORACLE_MAX_N})")
    if budget < 1000:
        raise InvalidInputError(f"budget must be at least 1000, got {budget}")
    if restarts < 1:
        raise InvalidInputError(f"need at least one restart, got {restarts}")
    b = spec.b
    weighted = spec.kind == KIND_SECOND
    sizes = [j + 1 for j in spec.indices]
    dim = sum(sizes)

    total_deg = 2 * n + (2 if weighted else 0)
    npts = 128 * (total_deg + 1)
    x = b * np.cos(np.linspace(math.pi, 0.0, npts))
    powers = np.vstack([x**i for i in range(n + 1)])
    wgrid = (b * b - x * x) if weighted else None

    evals = 0

    def neg_ratio(c):
        nonlocal evals
        evals += 1
        num = 0.0
        squares = np.zeros(npts)
        off = 0
        for size in sizes:
            cj = c[off : off + size]
            off += size
            num += cj[-1] ** 2
            vals = cj @ powers[:size]
            squares += vals * vals
        if weighted:
            squares = squares * wgrid
        den = squares.max()
        if den <= 0.0 or not np.isfinite(den):
            return 0.0
        return -num / den

    # deterministic start points, one block per prescribed degree, scaled
    # to the coefficient magnitudes typical of feasible families
    rng = np.random.default_rng(seed)
    starts = rng.standard_normal((restarts, dim))
    off = 0
    for j, size in zip(spec.indices, sizes):
        starts[:, off : off + size] *= b ** (-j)
        off += size

    best_fun = 0.0
    best_c = starts[0].copy()
    per_run = max(200, int(0.5 * budget) // restarts)
    for idx in range(restarts):
        remaining = budget - evals
        if remaining < dim + 2:
            break
        res = scipy.optimize.minimize(
            neg_ratio,
            starts[idx],
            method="Nelder-Mead",
            options={
                "maxfev": min(per_run, remaining),
                "xatol": 1e-10,
                "fatol": 1e-12,
                "adaptive": True,
            },
        )
        if res.fun < best_fun:
            best_fun, best_c = res.fun, np.asarray(res.x, dtype=float)

    # polish in rounds: a fresh simplex around the (normalized) incumbent
    # breaks the stagnation Nelder-Mead is prone to at higher dimensions
    for _ in range(5):
        remaining = budget - evals
        if remaining < dim + 2:
            break
        norm = np.linalg.norm(best_c)
        c0 = best_c / norm if norm > 0 else best_c
        res = scipy.optimize.minimize(
            neg_ratio,
            c0,
            method="Nelder-Mead",
            options={
                "maxfev": min(remaining, int(0.1 * budget) + 1),
                "xatol": 1e-12,
                "fatol": 1e-14,
                "adaptive": True,
            },
        )
        if res.fun < best_fun:
            best_fun, best_c = res.fun, np.asarray(res.x, dtype=float)

    # rescale the winner by the rigorous sup so the family is feasible
    family: dict[int, Polynomial] = {}
    off = 0
    num = 0.0
    for j, size in zip(spec.indices, sizes):
        cj = best_c[off : off + size]
        off += size
        num += cj[-1] ** 2
        family[j] = Polynomial(tuple(cj))
    sup = sup_sum_squares(list(family.values()), b, weighted=weighted).sup
    if sup <= 0.0:
        return OracleResult(0.0, {j: Polynomial.zero() for j in spec.indices}, evals, seed)
    scale = 1.0 / math.sqrt(sup)
    rescaled = {j: scale * p for j, p in family.items()}
    return OracleResult(
        best_value=float(num / sup),
        best_coeffs=rescaled,
        evaluations=evals,
        seed=seed,
    )


def moment_matrices(measure: DiscreteMeasure, indices) -> MomentMatrixSet:
    """Hankel moment matrices M_j (entry (r, s) = moment of order r + s)."""
    pts = np.asarray(measure.points)
    wts = np.asarray(measure.weights)
    nmax = max(indices)
    moments = np.array([np.sum(wts * pts**m) for m in range(2 * nmax + 1)])
    mats = {}
    for j in indices:
        mats[j] = np.array([[moments[r + s] for s in range(j + 1)] for r in range(j + 1)])
    return MomentMatrixSet(matrices=mats)


def _spd_solve_extended(M: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Cholesky solve in extended precision (matrices here are at most 31x31).

    Hankel moment matrices reach condition numbers around 1e7 at the
    supported sizes, which costs ~9 digits in double; the extra mantissa
    bits of longdouble keep the certificate residuals near 1e-12.
    Raises numpy.linalg.LinAlgError when M is not positive definite.
    """
    A = np.array(M, dtype=np.longdouble)
    m = A.shape[0]
    L = np.zeros_like(A)
    for i in range(m):
        for j in range(i + 1):
            s = A[i, j] - np.dot(L[i, :j], L[j, :j])
            if i == j:
                if s <= 0.0:
                    raise np.linalg.LinAlgError("matrix is not positive definite")
                L[i, i] = np.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    y = np.zeros(m, dtype=np.longdouble)
    for i in range(m):
        y[i] = (rhs[i] - np.dot(L[i, :i], y[:i])) / L[i, i]
    x = np.zeros(m, dtype=np.longdouble)
    for i in range(m - 1, -1, -1):
        x[i] = (y[i] - np.dot(L[i + 1 :, i], x[i + 1 :])) / L[i, i]
    return x


def duality_certificate(sol: ExtremalSolution, spec: ProblemSpec) -> CertificateReport:
    """Evaluate the duality equality conditions for a solved instance.

    For the weighted kind the moment matrices absorb the weight
    (b^2 - x^2), under which the same equalities characterize optimality.
    The per-index linear algebra runs in the scaled variable u = x/b; the
    congruence by diag(b^i) leaves those residuals' meaning unchanged while
    keeping the Hankel systems better conditioned, and the cross-index
    min-equality is evaluated back in the original variable.
    """
    if not sol.dual_moments.terminating:
        raise InvalidInputError("certificate needs a terminating dual sequence")
    b = spec.b
    weighted = spec.kind == KIND_SECOND
    measure = support_measure(sol.dual_moments)
    u = np.asarray(measure.points, dtype=np.longdouble) / np.longdouble(b)
    w = np.asarray(measure.weights, dtype=np.longdouble).copy()
    if weighted:
        w *= np.longdouble(b) * np.longdouble(b) * (1.0 - u * u)

    # reference squared norms in the scaled variable (k_j * b^{-2j}); for the
    # weighted kind the norm of degree j equals the unweighted one of degree
    # j+1 under the reflected sequence
    if weighted:
        ks_raw = l2_norms(reflected(sol.dual_moments), spec.n + 1)
        k_scaled = {j: ks_raw[j] * b ** (-2 * j) for j in spec.indices}
    else:
        ks_raw = l2_norms(sol.dual_moments, spec.n)
        k_scaled = {j: ks_raw[j - 1] * b ** (-2 * j) for j in spec.indices}

    report = CertificateReport(trace_residual=math.inf)
    inv_entries: dict[int, np.longdouble] = {}
    a_vecs: dict[int, np.ndarray] = {}
    mats: dict[int, np.ndarray] = {}
    moments = np.array([np.sum(w * u**m) for m in range(2 * spec.n + 1)])
    for j in spec.indices:
        M = np.array([[moments[r + s] for s in range(j + 1)] for r in range(j + 1)])
        mats[j] = M
        e = np.zeros(j + 1, dtype=np.longdouble)
        e[j] = 1.0
        try:
            minv_e = _spd_solve_extended(M, e)
        except np.linalg.LinAlgError:
            report.failed_index = j
            return report
        inv_entries[j] = minv_e[j]
        a_vecs[j] = np.sqrt(np.longdouble(k_scaled[j])) * minv_e
        report.norm_identity_residuals[j] = float(abs(inv_entries[j] * k_scaled[j] - 1.0))

    trace_total = np.longdouble(0.0)
    weight_total = np.longdouble(0.0)
    weighted_sum = np.longdouble(0.0)
    for j in spec.indices:
        alpha = np.longdouble(sol.alphas[j])
        a = a_vecs[j]
        M = mats[j]
        N = alpha * np.outer(a, a)
        trace_total += np.trace(M @ N)
        lhs = M @ N
        e = np.zeros(j + 1, dtype=np.longdouble)
        e[j] = 1.0
        rhs = np.outer(e, e) @ N / inv_entries[j]
        scale = max(np.linalg.norm(lhs.astype(float)),
                    np.linalg.norm(rhs.astype(float)), 1e-300)
        report.structure_residuals[j] = float(
            np.linalg.norm((lhs - rhs).astype(float)) / scale
        )
        # the min-equality compares across indices, so restore the original
        # variable there: e_j' N_j e_j and e_j' M_j^{-1} e_j pick up b^{-2j}
        weight_total += N[j, j] * np.longdouble(b) ** (-2 * j)
        weighted_sum += N[j, j] / inv_entries[j]
    report.trace_residual = float(abs(trace_total - 1.0))
    kmin = min(np.longdouble(b) ** (2 * j) / inv_entries[j] for j in spec.indices)
    report.min_equality_residuals = (
        float(abs(kmin * weight_total - 1.0)),
        float(abs(weighted_sum - 1.0)),
    )
    return report
