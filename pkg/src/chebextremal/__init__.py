"""Extremal polynomial families with maximal squared leading coefficients.

Solves, in closed form and by a dual canonical-moment construction, the
problem of maximizing the sum of squared leading coefficients of a family
of polynomials with prescribed degrees, subject to a sup-norm bound on the
(optionally endpoint-weighted) sum of their squares over [-b, b].  Ships
an independent brute-force oracle and duality-certificate checks.
"""

from .canonical import (
    CanonicalMomentSeq,
    DiscreteMeasure,
    jacobi_coefficients,
    l2_norms,
    monic_orthopolys,
    reflected,
    support_measure,
    zetas,
)
from .errors import DegreeLimitError, InsufficientDataError, InvalidInputError
from .oracle import (
    CertificateReport,
    MomentMatrixSet,
    OracleResult,
    brute_force_max,
    duality_certificate,
    moment_matrices,
)
from .polynomials import (
    Polynomial,
    SupNormReport,
    chebyshev_t,
    chebyshev_u,
    chebyshev_u_value,
    sup_sum_squares,
)
from .solver import (
    ExtremalSolution,
    ProblemSpec,
    VerificationReport,
    active_set,
    alpha_weights,
    closed_form_first_full,
    closed_form_first_pair,
    closed_form_second_full,
    closed_form_second_pair,
    dual_moments,
    solve,
    solve_first_kind,
    threshold_index,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalMomentSeq",
    "CertificateReport",
    "DegreeLimitError",
    "DiscreteMeasure",
    "ExtremalSolution",
    "InsufficientDataError",
    "InvalidInputError",
    "MomentMatrixSet",
    "OracleResult",
    "Polynomial",
    "ProblemSpec",
    "SupNormReport",
    "VerificationReport",
    "active_set",
    "alpha_weights",
    "brute_force_max",
    "chebyshev_t",
    "chebyshev_u",
    "chebyshev_u_value",
    "closed_form_first_full",
    "closed_form_first_pair",
    "closed_form_second_full",
    "closed_form_second_pair",
    "dual_moments",
    "duality_certificate",
    "jacobi_coefficients",
    "l2_norms",
    "moment_matrices",
    "monic_orthopolys",
    "reflected",
    "solve",
    "solve_first_kind",
    "sup_sum_squares",
    "support_measure",
    "threshold_index",
    "verify_solution",
    "zetas",
]
