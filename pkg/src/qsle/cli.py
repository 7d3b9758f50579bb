"""
Command line interface.

    qsle entanglement --input state.json [--m all]
    qsle tau --input state.json --omega 1e9 [--m 2]
    qsle verify --input state.json [--m all] [--omega 1]
    qsle figure --omega 0.5 1 2 [--e-grid 0:0.01:1]

Exit codes: 0 success, 1 failed verification, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .enttime import energy_gap, figure_data, format_csv, tau_m, verify_separabilization
from .errors import QSLEError, StateFileError
from .separable import OptConfig, geometric_entanglement
from .states import load_state

RESIDUAL_TOL = 1e-6

_PREFIXES = {12: "T", 9: "G", 6: "M", 3: "k", 0: "", -3: "m", -6: "u", -9: "n",
             -12: "p", -15: "f", -18: "a"}


def engineering(value: float, unit: str, decimals: int = 2) -> str:
    """Fixed-point mantissa in [0.5, 500) with an SI prefix.

    ``1.107e-9, "s"`` -> ``"1.11 ns"``, ``8.86e-10`` -> ``"0.89 ns"``;
    zero prints as ``"0 s"``.
    """
    if value == 0:
        return f"0 {unit}"
    exp3 = 3 * math.floor(math.log10(abs(value) / 0.5) / 3)
    exp3 = max(min(exp3, 12), -18)
    scaled = value / 10.0**exp3
    if round(abs(scaled), decimals) >= 500 and exp3 < 12:
        exp3 += 3
        scaled /= 1000
    return f"{scaled:.{decimals}f} {_PREFIXES[exp3]}{unit}"


def _parse_m(text: str):
    if text == "all":
        return "all"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'all', got {text!r}") from None
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text!r}")
    return value


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, step, stop = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:step:stop, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    n = int(round((stop - start) / step)) + 1
    grid = start + step * np.arange(n)
    return np.clip(np.round(grid, 12), 0.0, 1.0)


def _common(p: argparse.ArgumentParser, state=True):
    if state:
        p.add_argument("--input", required=True, metavar="PATH", help="state file (JSON)")
        p.add_argument("--m", type=_parse_m, default="all", help="integer in 2..K or 'all'")
        p.add_argument("--restarts", type=int, default=OptConfig.restarts)
        p.add_argument("--max-iters", type=int, default=OptConfig.max_iters)
        p.add_argument("--tol", type=float, default=OptConfig.tol)
        p.add_argument("--seed", type=int, default=OptConfig.seed)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--output", metavar="PATH", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsle", description="Geometric entanglement and minimal separabilization times.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entanglement", help="E_m for the requested m")
    _common(p)

    p = sub.add_parser("tau", help="minimal time to reach an m-separable state")
    _common(p)
    p.add_argument("--omega", type=_positive_float, metavar="RAD_PER_S")

    p = sub.add_parser("verify", help="evolve for tau_m and re-measure E_m")
    _common(p)
    p.add_argument("--omega", type=_positive_float, default=1.0, metavar="RAD_PER_S")

    p = sub.add_parser("figure", help="tau versus E table")
    _common(p, state=False)
    p.add_argument("--omega", type=_positive_float, nargs="+", default=[1.0], metavar="RAD_PER_S")
    p.add_argument("--e-grid", type=_parse_grid, default="0:0.01:1", metavar="START:STEP:STOP")
    return parser


class _UsageError(Exception):
    pass


def _config(args) -> OptConfig:
    try:
        return OptConfig(restarts=args.restarts, max_iters=args.max_iters,
                         tol=args.tol, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _ms(args, psi):
    K = psi.num_subsystems
    if args.m == "all":
        return list(range(2, K + 1))
    if not 2 <= args.m <= K:
        raise _UsageError(f"--m must lie in 2..{K} for this state, got {args.m}")
    return [args.m]


def _emit(rows, header, args, table_lines):
    if args.format == "json":
        return json.dumps(rows, indent=2) + "\n"
    if args.format == "csv":
        lines = [",".join(header)]
        for r in rows:
            lines.append(",".join(
                f"{r[h]:.12e}" if isinstance(r[h], float) else str(r[h]).lower()
                if isinstance(r[h], bool) else str(r[h]) for h in header))
        return "\n".join(lines) + "\n"
    return "\n".join(table_lines) + "\n"


def cmd_entanglement(args, psi):
    cfg = _config(args)
    rows, lines = [], []
    for m in _ms(args, psi):
        e, best = geometric_entanglement(psi, m, cfg)
        rows.append({"m": m, "E": e, "partition": str(best.partition),
                     "converged": best.converged})
        lines.append(f"m={m} E={e:.9f} partition={best.partition}")
        if not best.converged:
            lines.append(f"WARN m={m} optimizer did not converge in {cfg.max_iters} sweeps")
    return _emit(rows, ["m", "E", "partition", "converged"], args, lines), 0


def cmd_tau(args, psi):
    if args.omega is None:
        raise _UsageError("tau requires --omega RAD_PER_S")
    cfg = _config(args)
    rows, lines = [], []
    gap = energy_gap(args.omega)
    for m in _ms(args, psi):
        rep = tau_m(psi, m, args.omega, cfg, si=True)
        rows.append({"m": m, "E": rep.E_m, "omega_tau": rep.rotation_angle,
                     "tau_s": rep.tau_seconds, "gap_over_hbar": gap,
                     "partition": str(rep.partition), "converged": rep.converged})
        lines.append(f"m={m} E={rep.E_m:.9f} partition={rep.partition}")
        lines.append(f"  omega*tau = {rep.rotation_angle:.9f}")
        lines.append(f"  tau = {engineering(rep.tau_seconds, 's')}")
        lines.append(f"  dE/hbar = {engineering(gap, 'Hz')}")
        if not rep.converged:
            lines.append(f"WARN m={m} optimizer did not converge; time is not certified")
    header = ["m", "E", "omega_tau", "tau_s", "gap_over_hbar", "partition", "converged"]
    return _emit(rows, header, args, lines), 0


def cmd_verify(args, psi):
    cfg = _config(args)
    rows, lines = [], []
    ok = True
    for m in _ms(args, psi):
        rec = verify_separabilization(psi, m, args.omega, cfg)
        passed = rec.passed(RESIDUAL_TOL)
        ok = ok and passed
        rows.append({"m": m, "E": rec.E_m, "omega_tau": rec.tau_internal * rec.omega,
                     "fidelity_deficit": rec.fidelity_deficit, "residual": rec.residual_E_m,
                     "skipped": rec.skipped, "certified": rec.certified, "passed": passed})
        status = "PASS" if passed else "FAIL"
        rel = "<" if passed else ">="
        lines.append(f"m={m} {status} residual={rec.residual_E_m:.3e}{rel}{RESIDUAL_TOL:.0e} "
                     f"fidelity_deficit={rec.fidelity_deficit:.3e}"
                     + (" (already separable, no evolution)" if rec.skipped else ""))
        if not rec.certified:
            lines.append(f"WARN m={m} non-certified: optimizer did not converge")
    header = ["m", "E", "omega_tau", "fidelity_deficit", "residual", "skipped",
              "certified", "passed"]
    return _emit(rows, header, args, lines), (0 if ok else 1)


def cmd_figure(args):
    data = figure_data(args.omega, args.e_grid)
    if args.format == "json":
        rows = [{"E": float(e), "omega": float(w), "tau": float(t)} for e, w, t in data]
        return json.dumps(rows, indent=2) + "\n", 0
    return format_csv(data), 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            text, code = cmd_figure(args)
        else:
            psi = load_state(args.input)
            handler = {"entanglement": cmd_entanglement, "tau": cmd_tau,
                       "verify": cmd_verify}[args.command]
            text, code = handler(args, psi)
    except StateFileError as exc:
        print(f"qsle: invalid state file {args.input}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qsle: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2
    except (_UsageError, QSLEError) as exc:
        print(f"qsle: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
