"""Command-line front end: solve, sweep, oracle.

Single solutions are emitted as one JSON document on stdout, sweeps as
CSV.  Every real number is serialized with 17 significant digits so the
output round-trips to the exact double.  Exit codes: 0 on success, 1 on
invalid input, 2 when verification (or the oracle gap check) fails.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import InvalidInputError
from .oracle import ORACLE_MAX_N, brute_force_max
from .solver import ProblemSpec, solve, verify_solution

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return "null"
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(value)!r}")


def _to_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{inner}"{k}": {_to_json(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_to_json(v, indent + 1) for v in value]
        return "[" + ", ".join(items) + "]"
    return _format_value(value)


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        parts = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InvalidInputError(f"malformed index list {text!r}") from exc
    if not parts:
        raise InvalidInputError("index list must be nonempty")
    return tuple(parts)


def _solution_record(spec, sol, report) -> dict:
    solution: dict = {}
    if sol.phase_index is not None:
        solution["phase_index"] = sol.phase_index
    solution["dual_moments"] = {
        "b": sol.dual_moments.b,
        "p": list(sol.dual_moments.p),
        "terminating": sol.dual_moments.terminating,
    }
    solution["alphas"] = {str(j): sol.alphas[j] for j in spec.indices}
    solution["polys"] = [
        {"index": j, "coeffs": list(sol.polys[j].coeffs)} for j in spec.indices
    ]
    solution["objective"] = sol.objective
    solution["active_set"] = list(sol.active_set)
    return {
        "version": SCHEMA_VERSION,
        "spec": {"kind": spec.kind, "indices": list(spec.indices), "b": spec.b},
        "solution": solution,
        "verification": {
            "constraint_sup": report.constraint_sup.sup,
            "argmax": report.constraint_sup.argmax,
            "equimax_spread": report.equimax_spread,
            "support_attainment": report.support_attainment,
            "duality_residual": report.duality_residual,
            "pass": report.passed,
        },
    }


def cmd_solve(args) -> int:
    spec = ProblemSpec(kind=args.kind, indices=_parse_indices(args.indices), b=args.b)
    sol = solve(spec)
    report = verify_solution(sol, spec)
    print(_to_json(_solution_record(spec, sol, report)))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_sweep(args) -> int:
    if args.b_min >= args.b_max:
        raise InvalidInputError("--b-min must be smaller than --b-max")
    if args.steps < 2:
        raise InvalidInputError("--steps must be at least 2")
    indices = _parse_indices(args.indices)
    lines = ["b,k,objective,active_set"]
    for b in np.linspace(args.b_min, args.b_max, args.steps):
        spec = ProblemSpec(kind=args.kind, indices=indices, b=float(b))
        sol = solve(spec)
        k = sol.phase_index if sol.phase_index is not None else min(sol.active_set)
        active = ";".join(str(j) for j in sol.active_set)
        lines.append(
            f"{format(spec.b, '.17g')},{k},{format(sol.objective, '.17g')},{active}"
        )
    print("\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = ProblemSpec(kind=args.kind, indices=_parse_indices(args.indices), b=args.b)
    if spec.n > ORACLE_MAX_N:
        raise InvalidInputError(f"oracle supports max index {ORACLE_MAX_N}")
    sol = solve(spec)
    result = brute_force_max(spec, budget=args.budget, seed=args.seed)
    gap = abs(sol.objective - result.best_value)
    tolerance = 1e-3 * max(1.0, sol.objective)
    record = {
        "version": SCHEMA_VERSION,
        "spec": {"kind": spec.kind, "indices": list(spec.indices), "b": spec.b},
        "solver_objective": sol.objective,
        "oracle_value": result.best_value,
        "gap": gap,
        "evaluations": result.evaluations,
        "seed": result.seed,
        "pass": gap <= tolerance,
    }
    print(_to_json(record))
    return EXIT_OK if gap <= tolerance else EXIT_FAILED


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chebextremal",
        description=(
            "Maximize the sum of squared leading coefficients of a polynomial "
            "family under a sup-norm bound on its sum of squares over [-b, b]."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=["first", "second"], default="first")
    common.add_argument(
        "--indices", required=True, help="comma-separated prescribed degrees, e.g. 1,2,3"
    )

    p_solve = sub.add_parser("solve", parents=[common], help="solve one instance")
    p_solve.add_argument("--b", type=float, required=True, help="interval half-width")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser(
        "sweep", parents=[common], help="sweep b and emit a CSV phase diagram"
    )
    p_sweep.add_argument("--b-min", type=float, required=True)
    p_sweep.add_argument("--b-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser(
        "oracle", parents=[common], help="cross-check the solver with brute force"
    )
    p_oracle.add_argument("--b", type=float, required=True)
    p_oracle.add_argument("--budget", type=int, default=200000)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
