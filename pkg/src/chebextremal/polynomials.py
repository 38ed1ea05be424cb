"""Dense real polynomials, Chebyshev families, and sup-norm estimation.

Polynomials are stored as ascending monomial coefficients at double
precision.  Degrees are capped at 30 so that squared sums (degree up to 60,
62 with the endpoint weight) stay acceptably conditioned in the monomial
basis for |x| <= 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeLimitError, InvalidInputError

MAX_DEGREE = 30

#: half-width of the refinement bracket at which golden-section search stops
REFINE_XTOL = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending monomial coefficients.

    ``coeffs[i]`` multiplies ``x**i``; trailing zeros are trimmed on
    construction so the leading coefficient of a nonzero polynomial is
    nonzero.  The zero polynomial is the empty tuple and has ``degree``
    ``None``; it is a first-class value because optimal families routinely
    contain vanishing members.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        while c and c[-1] == 0.0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> float:
        """Leading coefficient; 0 for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else 0.0

    def coeff(self, i: int) -> float:
        """Coefficient of ``x**i`` (0 beyond the degree)."""
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0.0

    def __call__(self, x):
        """Evaluate by Horner's scheme; accepts scalars or numpy arrays."""
        result = x * 0.0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        summed = list(a)
        for i, v in enumerate(b):
            summed[i] += v
        return Polynomial(tuple(summed))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            prod = np.convolve(np.asarray(self.coeffs), np.asarray(other.coeffs))
            return Polynomial(tuple(prod))
        return Polynomial(tuple(float(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def stretch(self, s: float) -> "Polynomial":
        """Compose with ``x -> x/s``: the result evaluates self(x/s)."""
        if s == 0:
            raise InvalidInputError("stretch factor must be nonzero")
        return Polynomial(tuple(c / s**i for i, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class SupNormReport:
    """Result of maximizing a (weighted) sum of squares over [-b, b]."""

    sup: float
    argmax: float
    attained_tol: float


def chebyshev_t(n: int) -> Polynomial:
    """Chebyshev polynomial of the first kind T_n on [-1, 1].

    Built from T_0 = 1, T_1 = x, T_{k+1} = 2x T_k - T_{k-1}.  For an
    interval [-b, b] compose with x/b via ``chebyshev_t(n).stretch(b)``.
    """
    _check_degree(n)
    if n == 0:
        return Polynomial((1.0,))
    prev, cur = Polynomial((1.0,)), Polynomial((0.0, 1.0))
    two_x = Polynomial((0.0, 2.0))
    for _ in range(n - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


def chebyshev_u(n: int) -> Polynomial:
    """Chebyshev polynomial of the second kind U_n on [-1, 1]."""
    _check_degree(n)
    if n == 0:
        return Polynomial((1.0,))
    prev, cur = Polynomial((1.0,)), Polynomial((0.0, 2.0))
    two_x = Polynomial((0.0, 2.0))
    for _ in range(n - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


def chebyshev_u_value(n: int, t: float) -> float:
    """U_n(t) by forward recurrence, with U_{-1} = 0 and U_{-2} = -1."""
    if n == -1:
        return 0.0
    if n == -2:
        return -1.0
    if n < -2:
        raise InvalidInputError(f"U_n undefined for n={n}")
    prev, cur = 1.0, 2.0 * t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def _check_degree(n: int) -> None:
    if n < 0:
        raise InvalidInputError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise DegreeLimitError(f"degree {n} exceeds the cap {MAX_DEGREE}")


def sup_sum_squares(polys, b: float, weighted: bool = False) -> SupNormReport:
    """Maximize sum(P_j(x)^2), optionally times (b^2 - x^2), over [-b, b].

    The objective is sampled on a Chebyshev-spaced grid of 64*(D+1) points
    (D = degree of the squared sum, weight included) and every bracketed
    local maximum is refined by golden-section search to ``REFINE_XTOL``
    in x.  The refined value never falls below the raw grid maximum.

    Parameters
    ----------
    polys : iterable of Polynomial
        The family whose squared sum is bounded.  Must be nonempty; zero
        polynomials are allowed.
    b : float
        Interval half-width, in (0, 10].
    weighted : bool
        When set, maximize (b^2 - x^2) * sum(P_j^2) instead.
    """
    polys = list(polys)
    if not polys:
        raise InvalidInputError("polynomial list must be nonempty")
    if not 0.0 < b <= 10.0:
        raise InvalidInputError(f"half-width must lie in (0, 10], got {b}")
    degrees = [p.degree for p in polys if not p.is_zero]
    maxdeg = max(degrees, default=0)
    if maxdeg > MAX_DEGREE:
        raise DegreeLimitError(
            f"polynomial degree {maxdeg} exceeds the cap {MAX_DEGREE}"
        )
    total_deg = 2 * maxdeg + (2 if weighted else 0)

    coeff_arrays = [np.asarray(p.coeffs) for p in polys if not p.is_zero]

    def objective(x):
        total = x * 0.0
        for c in coeff_arrays:
            vals = x * 0.0
            for ck in c[::-1]:
                vals = vals * x + ck
            total = total + vals * vals
        if weighted:
            total = total * (b * b - x * x)
        return total

    npts = 64 * (total_deg + 1)
    # cosine-spaced nodes, endpoints included, ascending in x
    grid = b * np.cos(np.linspace(math.pi, 0.0, npts))
    values = objective(grid)

    i_best = int(np.argmax(values))
    best_sup = float(values[i_best])
    best_arg = float(grid[i_best])

    # refine every bracketed local maximum (endpoints handled one-sided)
    left = np.empty(npts)
    right = np.empty(npts)
    left[0], left[1:] = -np.inf, values[:-1]
    right[-1], right[:-1] = -np.inf, values[1:]
    for i in np.nonzero((values >= left) & (values >= right))[0]:
        lo = grid[i - 1] if i > 0 else grid[0]
        hi = grid[i + 1] if i < npts - 1 else grid[-1]
        xm, fm = _golden_section_max(objective, float(lo), float(hi))
        if fm > best_sup:
            best_sup, best_arg = fm, xm

    return SupNormReport(sup=best_sup, argmax=best_arg, attained_tol=REFINE_XTOL)


def _golden_section_max(f, lo: float, hi: float, xtol: float = REFINE_XTOL):
    """Golden-section maximization of a unimodal bracket, to xtol in x."""
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, c = lo, hi
    x1 = c - ratio * (c - a)
    x2 = a + ratio * (c - a)
    f1, f2 = float(f(x1)), float(f(x2))
    while c - a > xtol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + ratio * (c - a)
            f2 = float(f(x2))
        else:
            c, x2, f2 = x2, x1, f1
            x1 = c - ratio * (c - a)
            f1 = float(f(x1))
    xm = 0.5 * (a + c)
    fm = float(f(xm))
    if f1 > fm:
        xm, fm = x1, f1
    if f2 > fm:
        xm, fm = x2, f2
    return xm, fm
