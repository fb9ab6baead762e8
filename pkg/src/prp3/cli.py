"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure
(singular pose, Newton failure).
"""
import argparse
import logging
import math
import os
import sys

import numpy as np

from . import mat3
from .errors import KinematicsError
from .fk import FkOptions, forward_kinematics
from .geometry import LEGS, PlatformPose, default_geometry, load_geometry
from .ik import jacobians, position_residual, singularity_scan, solve_position
from .output import LEG_NAMES, fmt, render_svg, simulation_table
from .trajectory import Scenario, paper_spec, simulate_table

log = logging.getLogger("prp3")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _geometry(args):
    if args.geometry is None:
        return default_geometry()
    try:
        return load_geometry(args.geometry)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load geometry {args.geometry}: {exc}") from exc


def _pose_args(p):
    p.add_argument("--x", type=float, default=0.0, help="platform centre x [m]")
    p.add_argument("--y", type=float, default=0.0, help="platform centre y [m]")
    p.add_argument("--phi", type=float, default=0.0, help="platform angle [rad]")


def cmd_ik(args, out):
    geom = _geometry(args)
    pose = PlatformPose(args.x, args.y, args.phi)
    sol = solve_position(geom, pose)
    res = float(np.max(np.abs(position_residual(geom, pose, sol))))
    print("leg,lambda10,lambda32", file=out)
    for leg in LEGS:
        print(f"{LEG_NAMES[leg]},{fmt(sol[leg].lambda10)},{fmt(sol[leg].lambda32)}", file=out)
    print(f"residual,{fmt(res)}", file=out)


def cmd_fk(args, out):
    geom = _geometry(args)
    guess = PlatformPose(args.guess_x, args.guess_y, args.guess_phi)
    opts = FkOptions(tol=args.tol, max_iter=args.max_iter)
    res = forward_kinematics(geom, [args.lambda_a, args.lambda_b, args.lambda_c], guess, opts)
    print(f"x,{fmt(res.pose.x)}", file=out)
    print(f"y,{fmt(res.pose.y)}", file=out)
    print(f"phi,{fmt(res.pose.phi)}", file=out)
    for leg in LEGS:
        print(f"lambda32_{LEG_NAMES[leg]},{fmt(res.lambda32[leg])}", file=out)
    print(f"iterations,{res.iterations}", file=out)
    print(f"residual,{fmt(res.final_residual)}", file=out)


def cmd_jacobian(args, out):
    geom = _geometry(args)
    pose = PlatformPose(args.x, args.y, args.phi)
    sol = solve_position(geom, pose)
    jac = jacobians(geom, pose, sol)
    for name, m in (("j1", jac.j1), ("j2", jac.j2)):
        for row in m:
            print(name + "," + ",".join(fmt(v) for v in row), file=out)
    print(f"det_j1,{fmt(mat3.det3(jac.j1))}", file=out)
    print(f"det_j2,{fmt(mat3.det3(jac.j2))}", file=out)


def cmd_scan(args, out):
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.min < args.max:
        raise UsageError("--min must be below --max")
    geom = _geometry(args)
    res = singularity_scan(geom, args.x, args.y, args.min, args.max, args.steps)
    lines = ["phi,det_j1,det_j2"] + [",".join(fmt(v) for v in s) for s in res.samples]
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)
    for r in res.j1_roots:
        print(f"det_j1 root at phi = {r:.10f}", file=out if args.out else sys.stderr)
    for r in res.j2_roots:
        print(f"det_j2 root at phi = {r:.10f}", file=out if args.out else sys.stderr)
    if not res.j1_roots:
        print("no det_j1 roots", file=out if args.out else sys.stderr)


def _write(path, text):
    tmp = f"{path}.tmp{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_simulate(args, out):
    geom = _geometry(args)
    try:
        base = paper_spec(args.samples)
        spec = type(base)(
            x_star=base.x_star if args.x_star is None else args.x_star,
            y_star=base.y_star if args.y_star is None else args.y_star,
            phi_star=base.phi_star if args.phi_star is None else args.phi_star,
            duration=base.duration if args.duration is None else args.duration,
            samples=args.samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    table = simulate_table(geom, Scenario(args.scenario), spec)
    csv_text = simulation_table(table, passive=args.passive).to_csv()
    if args.out:
        _write(args.out, csv_text)
    else:
        out.write(csv_text)
    if args.plot:
        _write(args.plot, render_svg(table, title=f"3-PRP actuators: {args.scenario}"))


def build_parser():
    parser = _Parser(prog="prp3", description="3-PRP planar parallel robot kinematics")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--geometry", metavar="FILE", help="geometry config (key = value)")
        p.set_defaults(func=fn)
        return p

    p = add("ik", cmd_ik, "inverse kinematics of a pose")
    _pose_args(p)

    p = add("fk", cmd_fk, "forward kinematics from actuator displacements (Newton)")
    p.add_argument("--lambda-a", type=float, required=True)
    p.add_argument("--lambda-b", type=float, required=True)
    p.add_argument("--lambda-c", type=float, required=True)
    p.add_argument("--guess-x", type=float, default=0.0)
    p.add_argument("--guess-y", type=float, default=0.0)
    p.add_argument("--guess-phi", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=FkOptions.tol)
    p.add_argument("--max-iter", type=int, default=FkOptions.max_iter)

    p = add("jacobian", cmd_jacobian, "print J1, J2 and their determinants")
    _pose_args(p)

    p = add("scan", cmd_scan, "tabulate det J1 / det J2 over phi and locate roots")
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=math.pi)
    p.add_argument("--steps", type=int, default=181)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--out", metavar="CSV")

    p = add("simulate", cmd_simulate, "sample a demonstration trajectory")
    p.add_argument("--scenario", choices=[s.value for s in Scenario], default="combined")
    p.add_argument("--samples", type=int, default=301)
    p.add_argument("--duration", type=float)
    p.add_argument("--x-star", type=float)
    p.add_argument("--y-star", type=float)
    p.add_argument("--phi-star", type=float)
    p.add_argument("--passive", action="store_true", help="add lambda32/v32/gamma32 columns")
    p.add_argument("--out", metavar="CSV", help="output CSV (stdout if omitted)")
    p.add_argument("--plot", metavar="SVG", help="write a three-panel SVG plot")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except KinematicsError as exc:
        print(f"prp3: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
