"""Command-line front end.

Subcommands:

    eval     print C for one (case, q, d_omega)
    check    analytic vs quadrature-oracle values over a grid
    synth    write a synthetic correlation surface CSV
    fit      invert a surface CSV into a fit report
    figure1  plot data: log10(C - 1) vs (d_omega)^2 for cases A, D, E
             at q in {0.5, 1.0, 1.5} 1/um (tau = 1 ps, R = 1 um,
             Rdot = 2e-4 c by default)
    figure2  plot data: the four rescaled form factors Phi(X), X in [0, 3]

All quantities use fixed units: q in 1/um, d_omega in 1/ps, R in um, tau in
ps; --rdot is a fraction of c.  CSV outputs start with '#'-prefixed
key = value metadata lines sufficient to regenerate them.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import math
import sys
from typing import List, Optional, Tuple

import numpy as np

from .correlators import correlation, phi_of_X
from .inference import InsufficientDataError, fit_surface, report_to_text
from .kinematics import C_UM_PER_PS
from .oracle import OracleConvergenceError, numeric_correlation
from .sources import Emission, SourceCase, SourceSpec
from .synth import (CannotRenormalizeError, GridSpec, NoiseSpec, generate,
                    read_surface_csv, write_surface_csv)

__all__ = ["main"]

FIGURE1_Q_VALUES = (0.5, 1.0, 1.5)
FIGURE1_DW_MAX = 2.5
FIGURE1_DW_POINTS = 51
FIGURE2_X_MAX = 3.0
FIGURE2_X_POINTS = 301
DEFAULT_RDOT_FRACTION = 2e-4


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _add_source_args(p: argparse.ArgumentParser, default_case: Optional[str] = "A"):
    p.add_argument("--case", choices=["A", "B", "C", "D", "E"],
                   default=default_case, help="source case (Table of shapes)")
    p.add_argument("--R", type=float, default=1.0,
                   help="spatial extension in um (cases A-D)")
    p.add_argument("--tau", type=float, default=1.0, help="time span in ps")
    p.add_argument("--rdot", type=float, default=DEFAULT_RDOT_FRACTION,
                   help="shock-front speed as a fraction of c (case E)")
    p.add_argument("--coherent", action="store_true",
                   help="coherent emission (C identically 1)")


def _spec_from_args(args) -> SourceSpec:
    case = SourceCase(args.case)
    emission = Emission.COHERENT if args.coherent else Emission.CHAOTIC
    if case is SourceCase.E_EXPANDING_SHOCK:
        return SourceSpec(case=case, tau=args.tau,
                          r_dot=args.rdot * C_UM_PER_PS, emission=emission)
    return SourceSpec(case=case, tau=args.tau, R=args.R, emission=emission)


def _parse_grid(text: str) -> Tuple[float, ...]:
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise _UsageError(f"bad grid '{text}', expected min:max:n") from exc
    if n < 1 or hi < lo:
        raise _UsageError(f"bad grid '{text}'")
    return tuple(np.linspace(lo, hi, n))


def _spec_meta(spec: SourceSpec) -> List[str]:
    lines = [f"# case = {spec.case.value}",
             f"# emission = {spec.emission.value}",
             f"# tau_ps = {_fmt(spec.tau)}"]
    if spec.R is not None:
        lines.append(f"# R_um = {_fmt(spec.R)}")
    if spec.r_dot is not None:
        lines.append(f"# rdot_um_per_ps = {_fmt(spec.r_dot)}")
    return lines


def _cmd_eval(args) -> int:
    spec = _spec_from_args(args)
    val = correlation(spec, args.q, args.dw)
    print(f"C = {_fmt(val.c)}")
    return 0


def _cmd_check(args) -> int:
    spec = _spec_from_args(args)
    if spec.emission is Emission.COHERENT:
        raise _UsageError("check compares chaotic closed forms to the oracle")
    q_values = _parse_grid(args.q_grid)
    dw_values = _parse_grid(args.dw_grid)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for line in _spec_meta(spec):
            out.write(line + "\n")
        out.write("# units = q in 1/um, d_omega in 1/ps\n")
        out.write("q,d_omega,c_analytic,c_oracle,rel_deviation\n")
        worst = 0.0
        for q in q_values:
            for dw in dw_values:
                ca = correlation(spec, q, dw).c
                co = numeric_correlation(spec, q, dw).c
                rel = abs(ca - co) / abs(co)
                worst = max(worst, rel)
                out.write(f"{_fmt(q)},{_fmt(dw)},{_fmt(ca)},{_fmt(co)},"
                          f"{rel:.3e}\n")
        out.write(f"# max_relative_deviation = {worst:.6e}\n")
        print(f"max relative deviation = {worst:.6e}",
              file=sys.stderr if args.out else sys.stdout)
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_synth(args) -> int:
    if not args.out:
        raise _UsageError("synth requires --out")
    spec = _spec_from_args(args)
    grid = GridSpec(q_values=_parse_grid(args.q_grid),
                    d_omega_values=_parse_grid(args.dw_grid))
    noise = None
    if args.pairs_per_bin is not None:
        noise = NoiseSpec(pairs_per_bin=args.pairs_per_bin, seed=args.seed)
    surface = generate(spec, grid, noise=noise, smear_dw=args.smear_dw)
    write_surface_csv(surface, args.out)
    return 0


def _cmd_fit(args) -> int:
    surface = read_surface_csv(args.surface)
    report = fit_surface(surface)
    text = report_to_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return 0


def _cmd_figure1(args) -> int:
    if not args.out:
        raise _UsageError("figure1 requires --out")
    dw = np.linspace(0.0, FIGURE1_DW_MAX, FIGURE1_DW_POINTS)
    specs = {
        "A": SourceSpec(case=SourceCase.A_GAUSSIAN, tau=args.tau, R=args.R),
        "D": SourceSpec(case=SourceCase.D_EXPONENTIAL, tau=args.tau, R=args.R),
        "E": SourceSpec(case=SourceCase.E_EXPANDING_SHOCK, tau=args.tau,
                        r_dot=args.rdot * C_UM_PER_PS),
    }
    with open(args.out, "w") as fh:
        fh.write("# artifact = figure1\n")
        fh.write(f"# tau_ps = {_fmt(args.tau)}\n")
        fh.write(f"# R_um = {_fmt(args.R)}\n")
        fh.write(f"# rdot_um_per_ps = {_fmt(args.rdot * C_UM_PER_PS)}\n")
        fh.write(f"# q_values_per_um = "
                 f"{' '.join(_fmt(q) for q in FIGURE1_Q_VALUES)}\n")
        fh.write("# units = q in 1/um, d_omega in 1/ps\n")
        fh.write("case,q,dw_squared,log10_excess\n")
        for label, spec in specs.items():
            for q in FIGURE1_Q_VALUES:
                for w in dw:
                    excess = correlation(spec, q, w).excess
                    fh.write(f"{label},{_fmt(q)},{_fmt(w * w)},"
                             f"{_fmt(math.log10(excess))}\n")
    return 0


def _cmd_figure2(args) -> int:
    if not args.out:
        raise _UsageError("figure2 requires --out")
    xs = np.linspace(0.0, FIGURE2_X_MAX, FIGURE2_X_POINTS)
    with open(args.out, "w") as fh:
        fh.write("# artifact = figure2\n")
        fh.write("# X = sqrt(kappa/2) q, dimensionless\n")
        fh.write("case,X,phi\n")
        for case in (SourceCase.A_GAUSSIAN, SourceCase.B_SHELL,
                     SourceCase.C_SPHERE, SourceCase.D_EXPONENTIAL):
            for x in xs:
                fh.write(f"{case.value},{_fmt(x)},"
                         f"{_fmt(phi_of_X(case, x))}\n")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="bubblehbt",
                     description="Two-photon HBT correlations for micron-"
                                 "scale chaotic sources. Units: q in 1/um, "
                                 "d_omega in 1/ps, R in um, tau in ps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate C at one point")
    _add_source_args(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--dw", type=float, default=0.0)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("check", help="analytic vs oracle over a grid")
    _add_source_args(p)
    p.add_argument("--q-grid", default="0:6:10")
    p.add_argument("--dw-grid", default="0:6:10")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("synth", help="write a synthetic surface CSV")
    _add_source_args(p)
    p.add_argument("--q-grid", default="0:3:61")
    p.add_argument("--dw-grid", default="0:2:9")
    p.add_argument("--pairs-per-bin", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--smear-dw", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("fit", help="invert a surface CSV")
    p.add_argument("surface", help="path to a synth output CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("figure1", help="log10(C-1) vs (d_omega)^2 plot data")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--rdot", type=float, default=DEFAULT_RDOT_FRACTION)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_figure1)

    p = sub.add_parser("figure2", help="Phi(X) plot data for the four shapes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_figure2)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OracleConvergenceError, CannotRenormalizeError,
            InsufficientDataError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
