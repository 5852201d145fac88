"""Command-line front end: iteration runs, curve/basin data, solvers, verify.

Exit codes: 0 ok, 1 verification failure, 2 usage/validation error,
3 solver non-convergence.  All emitted numbers use 17 significant decimal
digits, which round-trip doubles exactly; JSON carries them as strings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter

from .core import QuadrangleError, validate_angles
from .dynamics import c_map, iterate, step
from .sampling import DEFAULT_MARGIN, sample_angle_tuple, substream
from .solvers import (
    ChartPoint,
    SolverError,
    solve_cycle_system,
    solve_trapezoid_fixed_point,
    stability_report,
)
from .verify import run_all

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_angles(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise QuadrangleError("--angles expects four comma-separated radians")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise QuadrangleError(f"bad angle value in {text!r}") from exc
    return validate_angles(*vals)


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _angles_json(q):
    return {name: fmt(v) for name, v in
            zip("alpha beta gamma delta".split(), q.as_tuple())}


def cmd_step(args) -> int:
    q = _parse_angles(args.angles)
    out = step(q)
    if args.json:
        _emit(json.dumps(_angles_json(out), indent=2) + "\n", args.out)
    else:
        _emit("alpha,beta,gamma,delta\n"
              + ",".join(fmt(v) for v in out.as_tuple()) + "\n", args.out)
    return EXIT_OK


def cmd_iterate(args) -> int:
    q = _parse_angles(args.angles)
    traj = iterate(q, max_iter=args.max_iter, tol=args.tol)
    lines = ["iter,alpha,beta,gamma,delta"]
    for i, state in enumerate(traj.states):
        lines.append(f"{i}," + ",".join(fmt(v) for v in state.as_tuple()))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_cycle(args) -> int:
    q = _parse_angles(args.angles)
    traj = iterate(q, max_iter=args.max_iter, tol=args.tol)
    payload = {
        "classification": traj.classification,
        "iterations": len(traj.states) - 1,
    }
    if traj.cycle:
        payload.update(
            period=traj.cycle.period,
            residual=fmt(traj.cycle.residual),
            match_distance=fmt(traj.cycle.match_distance),
            representatives=[_angles_json(s)
                             for s in traj.cycle.representative_states],
        )
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if traj.cycle else EXIT_NO_CONVERGENCE


def cmd_curve(args) -> int:
    lo, hi, n = args.from_, args.to, args.samples
    if not (0.0 < lo < hi <= math.pi / 2) or n < 2:
        raise QuadrangleError("curve needs 0 < from < to <= pi/2 and samples >= 2")
    lines = ["a,c"]
    for i in range(n):
        a = lo + (hi - lo) * i / (n - 1)
        lines.append(f"{fmt(a)},{fmt(c_map(a))}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_basin(args) -> int:
    if args.samples < 1:
        raise QuadrangleError("basin needs samples >= 1")
    lines = ["sample_id,alpha0,beta0,gamma0,delta0,class,iters,residual,match_distance"]
    counts = Counter()
    for i in range(args.samples):
        q0 = sample_angle_tuple(substream(args.seed, i), margin=args.margin)
        traj = iterate(q0, max_iter=args.max_iter, tol=args.tol)
        cls = traj.classification
        counts[cls] += 1
        residual = traj.cycle.residual if traj.cycle else (
            traj.residuals[-1] if traj.residuals else math.inf)
        match = traj.cycle.match_distance if traj.cycle else math.inf
        lines.append(",".join([
            str(i),
            *(fmt(v) for v in q0.as_tuple()),
            cls,
            str(len(traj.states) - 1),
            fmt(residual),
            fmt(match),
        ]))
    summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    lines.append(f"# summary: {summary}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.target == "trapezoid":
        fp = solve_trapezoid_fixed_point(
            tol=args.tol, bracket=(args.bracket_lo, args.bracket_hi))
        a = fp.attracting.solution
        h = 1e-6
        payload = {
            "a_star": fmt(a),
            "residual": fmt(fp.attracting.residual_norm),
            "iterations": fp.attracting.iterations,
            "provenance": fp.attracting.provenance,
            "derivative_at_a_star": fmt((c_map(a + h) - c_map(a - h)) / (2 * h)),
            "repelling_fixed_point": fmt(fp.repelling),
        }
    else:
        initial = None
        if args.initial:
            parts = [float(p) for p in args.initial.split(",")]
            if len(parts) != 3:
                raise QuadrangleError("--initial expects alpha,gamma,delta")
            initial = ChartPoint(*parts)
        result = solve_cycle_system(initial=initial, tol=args.tol)
        sol = result.solution
        payload = {
            "alpha": fmt(sol.alpha),
            "beta": fmt(sol.beta),
            "gamma": fmt(sol.gamma),
            "delta": fmt(sol.delta),
            "residual": fmt(result.residual_norm),
            "iterations": result.iterations,
            "provenance": result.provenance,
        }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_stability(args) -> int:
    q = _parse_angles(args.angles)
    report = stability_report(q, map_order=args.order, h=args.h)
    payload = {
        "map_order": report.map_order,
        "fd_step": fmt(report.fd_step),
        "point": {
            "alpha": fmt(report.point.alpha),
            "beta": fmt(report.point.beta),
            "gamma": fmt(report.point.gamma),
            "delta": fmt(report.point.delta),
        },
        "jacobian": [[fmt(v) for v in row] for row in report.jacobian],
        "eigenvalue_moduli": [fmt(v) for v in report.eigenvalue_moduli],
        "spectral_radius": fmt(report.spectral_radius),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_all()
    if args.json:
        payload = [
            {"name": r.name, "passed": bool(r.passed), "detail": r.detail}
            for r in results
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.name}: {r.detail}")
        n_pass = sum(r.passed for r in results)
        lines.append(f"{n_pass}/{len(results)} checks passed")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmap",
        description="Balanced-quadrangle dynamics: iteration, solvers, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, angles=True, tol=True):
        if angles:
            p.add_argument("--angles", required=True,
                           help="four comma-separated angles in radians")
        if tol:
            p.add_argument("--tol", type=float, default=1e-12)
            p.add_argument("--max-iter", type=int, default=10000)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("step", help="apply the map once")
    common(p, tol=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("iterate", help="full trajectory as CSV")
    common(p)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("cycle", help="cycle classification as JSON")
    common(p)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("curve", help="CSV samples of the trapezoid submap")
    p.add_argument("--from", dest="from_", type=float, default=1.4)
    p.add_argument("--to", type=float, default=math.pi / 2)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("basin", help="random-seed convergence experiment as CSV")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_basin)

    p = sub.add_parser("solve", help="fixed-point / cycle-system solvers")
    p.add_argument("target", choices=("trapezoid", "cycle"))
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--bracket-lo", type=float, default=1.4)
    p.add_argument("--bracket-hi", type=float, default=1.5)
    p.add_argument("--initial", default=None,
                   help="alpha,gamma,delta starting point for the cycle system")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("stability", help="Jacobian spectrum at a state")
    common(p, tol=False)
    p.add_argument("--order", type=int, choices=(1, 2), default=1)
    p.add_argument("--h", type=float, default=1e-6)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("verify", help="reproduce every published constant")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuadrangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
