"""Command-line front end (``sphere-crs`` / ``python -m sphere_crs``).

Exit codes: 0 success, 2 invalid input, 3 unsupported regime (U_max < 1),
4 no solution found.
"""

import argparse
import json
import math
import re
import sys

import numpy as np

from .adjoint import PORTRAIT_COLUMNS, emit_portrait, lookahead_controls
from .catalog import angle_domain, expand_concrete, sufficient_list
from .errors import InvalidConfiguration, NoSolutionFound, UnsupportedRegime
from .kinematics import PathInstance, parse_path, sample_path, write_samples_csv
from .oracle import OracleBudget, random_search
from .planner import PlanQuery, physical_time, plan, satellite_to_query
from .so3 import euler_zyx_to_rotation, nearest_rotation, quaternion_to_rotation

EXIT_INVALID, EXIT_REGIME, EXIT_NOSOL = 2, 3, 4
SCHEMA = 1


class InputError(Exception):
    pass


def parse_rotation(text, tol=1e-6):
    """Parse a rotation given as 9 row-major numbers, a quaternion w,x,y,z,
    a ZYX Euler triple, or the word 'identity'. A 'mat:', 'quat:' or 'zyx:'
    prefix forces the interpretation; '@file' reads the text from a file."""
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read().strip()
    if text.lower() in ("identity", "i", "eye"):
        return np.eye(3)
    kind = None
    m = re.match(r"^(mat|quat|zyx):(.*)$", text, re.S)
    if m:
        kind, text = m.group(1), m.group(2)
    try:
        nums = [float(x) for x in re.split(r"[\s,;]+", text.strip("[]() \n")) if x]
    except ValueError:
        raise InputError(f"cannot parse rotation {text!r}") from None
    if not all(math.isfinite(x) for x in nums):
        raise InputError("rotation contains non-finite numbers")
    expected = {"mat": 9, "quat": 4, "zyx": 3}
    if kind is None:
        kind = {9: "mat", 4: "quat", 3: "zyx"}.get(len(nums))
        if kind is None:
            raise InputError(f"expected 9, 4 or 3 numbers for a rotation, got {len(nums)}")
    elif len(nums) != expected[kind]:
        raise InputError(f"{kind}: expects {expected[kind]} numbers, got {len(nums)}")
    if kind == "mat":
        raw = np.array(nums).reshape(3, 3)
    elif kind == "quat":
        raw = quaternion_to_rotation(*nums)
    else:
        raw = euler_zyx_to_rotation(*nums)
    try:
        return nearest_rotation(raw, tol)
    except InvalidConfiguration as e:
        raise InputError(str(e)) from None


def _fmt(x):
    return f"{x:.4f}"


def _row_dict(fp):
    return {"word": fp.word, "type": fp.candidate.abstract.form, "label": fp.candidate.label,
            "angles": [float(a) for a in fp.angles], "time": fp.time,
            "residual": fp.solution.residual}


def _result_json(res):
    return {
        "schema": SCHEMA,
        "u_max": res.u_max,
        "r_net": res.r_net.tolist(),
        "feasible": [_row_dict(fp) for fp in res.feasible],
        "optimal_index": res.optimal,
        "ties": list(res.ties),
    }


def _print_table(res, out):
    out.write(f"U_max = {res.u_max:g}\n")
    out.write(f"{'':2}{'path':<22}{'angles':<44}{'time':>8}  residual\n")
    for i, fp in enumerate(res.feasible):
        mark = "*" if i == res.optimal else ("=" if i in res.ties else " ")
        word = fp.word or "(empty)"
        angles = "(" + ", ".join(_fmt(a) for a in fp.angles) + ")"
        out.write(f"{mark} {word:<22}{angles:<44}{_fmt(fp.time):>8}  {fp.solution.residual:.1e}\n")
    out.write(f"optimal: {res.best.word or '(empty)'} in {_fmt(res.optimal_time)} s\n")


def cmd_solve(args, out):
    rf = parse_rotation(args.rf)
    r0 = parse_rotation(args.r0) if args.r0 else None
    res = plan(PlanQuery(rf, args.umax, r0, args.tol))
    if args.json:
        json.dump(_result_json(res), out, indent=2)
        out.write("\n")
    else:
        _print_table(res, out)
    return 0


def cmd_sample(args, out):
    try:
        segs = parse_path(args.path)
    except ValueError as e:
        raise InputError(f"--path: {e}") from None
    if args.n < 1:
        raise InputError("--n must be >= 1")
    r0 = parse_rotation(args.r0) if args.r0 else np.eye(3)
    path = PathInstance(tuple(segs), args.umax)
    samples = sample_path(r0, path, args.n)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            write_samples_csv(samples, fh)
    else:
        write_samples_csv(samples, out)
    return 0


def cmd_portrait(args, out):
    if args.dt <= 0 or args.t < 0:
        raise InputError("--dt must be positive and --t non-negative")
    s0 = (args.a0, args.b0, args.c0)
    v, u = lookahead_controls(s0, args.umax)
    ham = -1.0 - v * args.c0 - u * args.a0
    if abs(ham) > 1e-6:
        msg = f"initial costate violates the zero-Hamiltonian condition (H = {ham:.3e})"
        if not args.force:
            raise InputError(msg + "; use --force to integrate anyway")
        sys.stderr.write("warning: " + msg + "\n")
    table, tr = emit_portrait(s0, args.umax, args.t, args.dt, check_consistency=False)
    fh = open(args.out, "w") if args.out and args.out != "-" else out
    try:
        fh.write(",".join(PORTRAIT_COLUMNS) + "\n")
        for row in table:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    finally:
        if fh is not out:
            fh.close()
    segs = " ".join(f"{k.value}:{a:.6f}" for k, a, _, _ in tr.segments)
    sys.stderr.write(f"g = {table[0, -1]:.12g}; segments: {segs}"
                     + (f"; flags: {','.join(sorted(tr.flags))}" if tr.flags else "") + "\n")
    return 0


def cmd_enumerate(args, out):
    types = sufficient_list(args.umax)
    rows = []
    for t in types:
        cands = expand_concrete(t)
        rows.append({
            "type": t.form, "label": t.label, "segments": len(t),
            "domains": [str(angle_domain(t, i)) for i in range(len(t))],
            "candidates": [c.label for c in cands],
        })
    if args.json:
        json.dump({"schema": SCHEMA, "u_max": args.umax, "types": rows,
                   "n_types": len(rows), "n_candidates": sum(len(r["candidates"]) for r in rows)},
                  out, indent=2)
        out.write("\n")
        return 0
    for r in rows:
        out.write(f"{r['label']:<18}{len(r['candidates']):>3}  {' '.join(r['domains'])}\n")
        if args.concrete:
            out.write("    " + " ".join(r["candidates"]) + "\n")
    out.write(f"{len(rows)} types, {sum(len(r['candidates']) for r in rows)} concrete candidates\n")
    return 0


def cmd_oracle(args, out):
    rf = parse_rotation(args.rf)
    if args.umax < 1.0:
        raise UnsupportedRegime(f"U_max = {args.umax} < 1", u_max=args.umax)
    budget = OracleBudget(args.samples, args.max_segments, args.seed)
    res = random_search(rf, args.umax, budget, tol=args.tol)
    report = {"schema": SCHEMA, "u_max": args.umax, "samples": args.samples, "seed": args.seed,
              "tol": args.tol, **res.to_dict()}
    if args.compare:
        report["planner_time"] = plan(PlanQuery(rf, args.umax)).optimal_time
    json.dump(report, out, indent=2)
    out.write("\n")
    return 0


def cmd_satellite(args, out):
    rf = parse_rotation(args.rf)
    r0 = parse_rotation(args.r0) if args.r0 else None
    try:
        q, scale = satellite_to_query(args.j1, args.j3, args.v1max, args.v2max, rf, r0)
    except ValueError as e:
        if isinstance(e, UnsupportedRegime):
            raise
        raise InputError(str(e)) from None
    res = plan(q)
    best = res.best
    report = {"schema": SCHEMA, "u_max": q.u_max, "time_scale": scale,
              "word": best.word, "angles": list(best.angles),
              "planner_time": best.time, "physical_time": physical_time(best.time, scale)}
    if args.json:
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        out.write(f"U_max = {q.u_max:.6g}, time scale = {scale:.6g}\n")
        out.write(f"optimal: {best.word or '(empty)'} "
                  f"({', '.join(_fmt(a) for a in best.angles)})\n")
        out.write(f"planner time {_fmt(best.time)}, physical time {_fmt(report['physical_time'])} s\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="sphere-crs",
                                description="Time-optimal convexified Reeds-Shepp paths on the sphere.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="plan the time-optimal path to a target rotation")
    s.add_argument("--umax", type=float, required=True)
    s.add_argument("--rf", required=True, help="target rotation (9 numbers, quaternion, ZYX or 'identity')")
    s.add_argument("--r0", default=None, help="initial rotation (default identity)")
    s.add_argument("--tol", type=float, default=1e-6)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--table", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sample", help="sample a path to CSV")
    s.add_argument("--umax", type=float, required=True)
    s.add_argument("--path", required=True, help="e.g. 'L-:0.1122,R-:1.4896,R+:1.6238'")
    s.add_argument("--n", type=int, default=50, help="samples per segment")
    s.add_argument("--r0", default=None)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("portrait", help="integrate the costate flow and write portrait data")
    s.add_argument("--umax", type=float, required=True)
    s.add_argument("--a0", type=float, required=True)
    s.add_argument("--b0", type=float, required=True)
    s.add_argument("--c0", type=float, required=True)
    s.add_argument("--t", type=float, default=10.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--out", default="-")
    s.add_argument("--force", action="store_true", help="integrate even if H != 0 at the start")
    s.set_defaults(func=cmd_portrait)

    s = sub.add_parser("enumerate", help="list the candidate path types")
    s.add_argument("--umax", type=float, required=True)
    s.add_argument("--json", action="store_true")
    s.add_argument("--concrete", action="store_true", help="also list sign-resolved candidates")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("oracle", help="randomized bang-bang search against a target")
    s.add_argument("--umax", type=float, required=True)
    s.add_argument("--rf", required=True)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-segments", type=int, default=6)
    s.add_argument("--tol", type=float, default=5e-2)
    s.add_argument("--compare", action="store_true", help="include the planner optimum")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("satellite", help="plan for a reaction-wheel satellite")
    s.add_argument("--j1", type=float, required=True)
    s.add_argument("--j3", type=float, required=True)
    s.add_argument("--v1max", type=float, required=True)
    s.add_argument("--v2max", type=float, required=True)
    s.add_argument("--rf", required=True)
    s.add_argument("--r0", default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_satellite)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UnsupportedRegime as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_REGIME
    except NoSolutionFound as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_NOSOL
    except (InputError, InvalidConfiguration, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
