"""Command-line front end.

All flags are SI: kg, m, K, and angular frequency in rad/s. Every dataset carries
a provenance header (config echo, constants, engine, precision, version) that
is sufficient to rerun it.

Exit status: 0 on success, 1 on a domain error (a JSON error record is written
to stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Dict, Optional, Sequence

import numpy as np

from . import __version__
from .analytics import (
    casimir_crossover_distance,
    casimir_polder_potential,
    nu_squeezed_first_order,
    sphere_radius,
    t_max_squeezed,
    t_max_thermal,
)
from .boundcheck import verify_bound
from .datasets import emit_dataset
from .errors import DomainError
from .params import CODATA, PhysicalConstants, SystemParams, derive_params
from .precision import as_precision
from .sweeps import (
    SweepSpec,
    evaluate_point,
    find_omega_min,
    find_omega_opt,
    fit_omega_opt_powerlaw,
    run_sweep,
    t_max_numeric,
)


def _system(args, omega: Optional[float] = None, T: Any = "args") -> SystemParams:
    return SystemParams(
        m=args.m,
        omega=args.omega if omega is None else omega,
        d=args.d,
        T=getattr(args, "T", None) if T == "args" else T,
        r=getattr(args, "r", None),
    )


def _constants(args) -> PhysicalConstants:
    return PhysicalConstants(G=args.G) if args.G is not None else CODATA


def _cmd_params(args) -> Dict[str, Any]:
    k = _constants(args)
    p = _system(args)
    dp = derive_params(p, k, as_precision(args.precision))
    row = {
        "omega_prime": dp.omega_prime,
        "delta": dp.delta,
        "epsilon": dp.epsilon,
        "eps_hat": dp.eps_hat,
        "theta": dp.theta,
        "theta_minus_one": dp.theta_minus_one,
    }
    return {"data": [row], "engine": "closed_form"}


def _cmd_evolve(args) -> Dict[str, Any]:
    k = _constants(args)
    p = _system(args)
    prec = as_precision(args.precision)
    dp = derive_params(p, k, prec)
    rows = []
    for phase in np.linspace(0.0, args.periods * 2 * math.pi, args.steps):
        res = evaluate_point(p, k, phase=float(phase), engine="exact", precision=prec)
        with prec.workspace():
            t = prec.scalar(phase) / dp.omega_prime
        rows.append(
            {
                "t": t,
                "phase": float(phase),
                "nu": res.nu,
                "one_minus_nu": res.one_minus_nu,
                "log_negativity": res.log_negativity,
            }
        )
    return {"data": rows, "engine": "exact"}


def _cmd_sweep(args) -> Dict[str, Any]:
    k = _constants(args)
    fixed = _system(args, omega=args.omega or 1.0)
    spec = SweepSpec(
        variable=args.var,
        lo=args.lo,
        hi=args.hi,
        points=args.points,
        fixed=fixed,
        spacing=args.spacing,
        phase=args.phase,
        engine=args.engine,
        digits=args.precision,
        constants=k,
    )
    return {"data": run_sweep(spec, workers=args.workers), "engine": args.engine}


def _cmd_omega_opt(args) -> Dict[str, Any]:
    k = _constants(args)
    fixed = _system(args, omega=1.0)
    opt = find_omega_opt(fixed, (args.lo, args.hi), k)
    omega_min = find_omega_min(fixed, (args.lo, opt.omega_opt), k)
    row = {
        "omega_opt": opt.omega_opt,
        "log_negativity_max": opt.en_max,
        "one_minus_nu_max": opt.one_minus_nu,
        "omega_min": omega_min,
    }
    return {"data": [row], "engine": "first_order"}


def _cmd_tmax(args) -> Dict[str, Any]:
    k = _constants(args)
    p = _system(args, T=None)
    closed = t_max_thermal(p, k)
    numeric = t_max_numeric(p, (closed / 10, closed * 10), k)
    row = {"t_max_closed_form": closed, "t_max_numeric": numeric, "relative_difference": (numeric - closed) / closed}
    return {"data": [row], "engine": "first_order"}


def _cmd_squeezed(args) -> Dict[str, Any]:
    k = _constants(args)
    p = _system(args, T=None)
    dp = derive_params(p, k)
    eps = float(dp.eps_hat)
    t_thermal = t_max_thermal(p, k)
    rows = []
    for r in args.r_values:
        fo = nu_squeezed_first_order(r, eps, args.phase)
        if r > 0:
            t_sq = t_max_squeezed(r, eps, p.omega, k)
        elif r == 0:
            t_sq = t_thermal
        else:
            t_sq = None  # negative squeezing has no finite-temperature threshold formula
        rows.append(
            {
                "r": r,
                "eps_hat": eps,
                "nu_initial": math.exp(-abs(r)),
                "nu_first_order": fo.nu,
                "relative_change": -math.copysign(1.0, r) * eps * math.sin(args.phase) ** 2
                if r != 0
                else -eps * abs(math.sin(args.phase)),
                "t_max_squeezed": t_sq,
                "t_max_thermal": t_thermal,
            }
        )
    return {"data": rows, "engine": "first_order"}


def _cmd_bound_check(args) -> Dict[str, Any]:
    report = verify_bound(
        args.seed,
        args.n,
        args.eps,
        phases=args.phases,
        precision=as_precision(args.precision),
        a_max=args.a_max,
    )
    return {"data": report, "engine": "exact"}


def _cmd_casimir(args) -> Dict[str, Any]:
    k = _constants(args)
    D = casimir_crossover_distance(args.m, args.rho, args.eps_r, args.ratio, k)
    R = sphere_radius(args.m, args.rho)
    row = {
        "radius": R,
        "crossover_distance": D,
        "casimir_energy": casimir_polder_potential(R, D, args.eps_r, k),
        "gravity_energy": k.G * args.m**2 / D,
    }
    return {"data": [row], "engine": "closed_form"}


def _cmd_fit(args) -> Dict[str, Any]:
    k = _constants(args)
    fixed = SystemParams(m=args.m, omega=1.0, d=args.d, T=1.0)
    temps = np.logspace(math.log10(args.t_lo), math.log10(args.t_hi), args.points)
    return {"data": fit_omega_opt_powerlaw(temps, fixed, k, workers=args.workers), "engine": "first_order"}


def _add_common(p: argparse.ArgumentParser, precision_default: Optional[int] = None) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument(
        "--precision",
        type=int,
        default=precision_default,
        help="decimal digits for extended precision (omit for binary64)",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--G", type=float, default=None, help="override the gravitational constant")


def _add_system(p: argparse.ArgumentParser, omega: bool = True, T: bool = True, r: bool = True) -> None:
    p.add_argument("--m", type=float, default=1e-15, help="particle mass [kg]")
    p.add_argument("--d", type=float, default=1e-4, help="trap separation [m]")
    if omega:
        p.add_argument("--omega", type=float, default=1e3, help="angular trap frequency [rad/s]")
    if T:
        p.add_argument("--T", type=float, default=None, help="temperature [K]")
    if r:
        p.add_argument("--r", type=float, default=None, help="two-mode squeezing parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gravent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derived couplings and thermal factor")
    _add_system(p)
    _add_common(p)
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("evolve", help="exact nu(t) over a number of trap periods")
    _add_system(p)
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=65)
    _add_common(p, precision_default=50)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("sweep", help="entanglement along one parameter")
    _add_system(p)
    p.set_defaults(omega=None)
    p.add_argument("--var", choices=("omega", "T", "m", "d", "r"), default="omega")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("--engine", choices=("first_order", "exact"), default="first_order")
    p.add_argument("--phase", type=float, default=None, help="fixed omega' t [rad]; default maximises over time")
    _add_common(p, precision_default=50)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("omega-opt", help="optimal and minimal trap frequency")
    _add_system(p, omega=False, r=False)
    p.add_argument("--lo", type=float, default=5e2)
    p.add_argument("--hi", type=float, default=3e3)
    _add_common(p)
    p.set_defaults(func=_cmd_omega_opt)

    p = sub.add_parser("tmax", help="threshold temperature, closed form and numeric root")
    _add_system(p, T=False, r=False)
    _add_common(p)
    p.set_defaults(func=_cmd_tmax)

    p = sub.add_parser("squeezed", help="two-mode squeezed initial states")
    _add_system(p, T=False, r=False)
    p.add_argument("--r-values", type=float, nargs="+", default=[1.0])
    p.add_argument("--phase", type=float, default=math.pi / 2)
    _add_common(p)
    p.set_defaults(func=_cmd_squeezed)

    p = sub.add_parser("bound-check", help="Monte-Carlo check of the entanglement enhancement bound")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--phases", type=float, nargs="+", default=[math.pi / 4, math.pi / 2, 1.0])
    p.add_argument("--a-max", type=float, default=3.0)
    _add_common(p)
    p.set_defaults(func=_cmd_bound_check)

    p = sub.add_parser("casimir", help="Casimir-Polder / gravity crossover distance")
    p.add_argument("--m", type=float, default=1e-15)
    p.add_argument("--rho", type=float, default=2200.0)
    p.add_argument("--eps-r", type=float, default=math.inf)
    p.add_argument("--ratio", type=float, default=0.1)
    _add_common(p)
    p.set_defaults(func=_cmd_casimir)

    p = sub.add_parser("fit", help="power-law fit of omega_opt against temperature")
    p.add_argument("--m", type=float, default=1e-15)
    p.add_argument("--d", type=float, default=1e-4)
    p.add_argument("--t-lo", type=float, default=1e-15)
    p.add_argument("--t-hi", type=float, default=1.0)
    p.add_argument("--points", type=int, default=16)
    _add_common(p)
    p.set_defaults(func=_cmd_fit)
    return parser


def _config_echo(args) -> Dict[str, Any]:
    """Every option that can change the numbers; the worker count and output path cannot."""
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "out", "workers"):
            continue
        if isinstance(value, float) and math.isinf(value):
            value = "inf"
        out[key] = value
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        k = _constants(args)
        meta = {
            "command": args.command,
            "config": _config_echo(args),
            "constants": k.as_dict(),
            "engine": result["engine"],
            "precision": str(as_precision(args.precision)),
            "digits": args.precision,
            "version": __version__,
            "frequency_unit": "rad/s",
        }
        blob = emit_dataset(result["data"], args.format, meta)
    except DomainError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 1
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)
        sys.stdout.flush()
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
