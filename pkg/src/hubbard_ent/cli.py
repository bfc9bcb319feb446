"""Command line entry point: ``python -m hubbard_ent <command> [options]``.

Exit codes: 0 success, 2 config error, 3 non-convergence, 4 only degenerate rows.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from hubbard_ent.eigensolver import DEFAULT_DEGENERACY_THRESHOLD, degeneracy_check
from hubbard_ent.experiments import (
    FIGURES,
    MEASURES,
    ConfigError,
    NonConvergence,
    SweepConfig,
    confinement_report,
    reproduce_figure,
    run_sweep,
    solve,
)
from hubbard_ent.rdm import CONVENTIONS, JORDAN_WIGNER

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_DEGENERATE = 0, 2, 3, 4

log = logging.getLogger("hubbard_ent")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def _pairs(text: str):
    text = text.strip()
    if text == "all":
        return "all"
    pairs = []
    for tok in text.replace(" ", "").split(","):
        sep = "-" if "-" in tok else ":"
        try:
            i, j = (int(x) for x in tok.split(sep))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair {tok!r}; use i-j")
        pairs.append((i, j))
    return pairs


def _measures(text: str) -> tuple[str, ...]:
    if text.strip() == "all":
        return MEASURES
    out = tuple(x for x in text.replace(" ", "").split(",") if x)
    bad = set(out) - set(MEASURES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown measures {sorted(bad)}; choose from {', '.join(MEASURES)}")
    return out


def read_config_file(path: Path) -> dict[str, str]:
    """``key = value`` per line; ``#`` starts a comment. Keys match the long flags."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value file; flags override it")
    p.add_argument("--sizes", type=_int_list, default=None, help="even chain lengths, e.g. 4,6,8")
    p.add_argument("--u-min", type=float, default=0.01)
    p.add_argument("--u-max", type=float, default=100.0)
    p.add_argument("--u-count", type=int, default=60)
    p.add_argument("--u-scale", choices=("log", "linear"), default="log")
    p.add_argument("--u-values", type=_float_list, default=None, help="explicit U list (overrides the grid)")
    p.add_argument("--pairs", type=_pairs, default="all", help="'all' or list like 1-2,2-3")
    p.add_argument("--measures", type=_measures, default=MEASURES)
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frozen-ref-u", type=float, default=0.0)
    p.add_argument("--rdm-convention", choices=CONVENTIONS, default=JORDAN_WIGNER)
    p.add_argument("--max-size", type=int, default=12, help="size cap (at most 16)")
    p.add_argument("--degeneracy-threshold", type=float, default=DEFAULT_DEGENERACY_THRESHOLD)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hubbard_ent", description="Pairwise entanglement in open Hubbard chains")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="U sweep over sizes and pairs, writes sweep.csv")
    _add_common(p)

    p = sub.add_parser("figure", help="CSV datasets behind one figure")
    p.add_argument("name", choices=FIGURES)
    _add_common(p)

    p = sub.add_parser("confinement", help="spin-chain analysis of the large-U ground state")
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--U", type=float, default=1e4)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-leakage", type=float, default=1e-3)

    p = sub.add_parser("ground-state", help="ground energy, gap and residual at one point")
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--U", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    return parser


_CONVERTERS = {
    "sizes": _int_list,
    "u_values": _float_list,
    "pairs": _pairs,
    "measures": _measures,
    "u_min": float,
    "u_max": float,
    "u_count": int,
    "u_scale": str,
    "out": Path,
    "threads": int,
    "tol": float,
    "max_iter": int,
    "seed": int,
    "frozen_ref_u": float,
    "rdm_convention": str,
    "max_size": int,
    "degeneracy_threshold": float,
}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    try:
        raw = read_config_file(args.config)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    defaults = {}
    for key, value in raw.items():
        if key not in _CONVERTERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            defaults[key] = _CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"config key {key!r}: {exc}")
    # re-parse so explicit flags win over file values
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def sweep_config(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(
        sizes=args.sizes or [4],
        u_values=args.u_values,
        u_min=args.u_min,
        u_max=args.u_max,
        u_count=args.u_count,
        u_scale=args.u_scale,
        pairs=args.pairs,
        measures=args.measures,
        tol=args.tol,
        max_iter=args.max_iter,
        seed=args.seed,
        out=args.out,
        threads=args.threads,
        frozen_ref_u=args.frozen_ref_u,
        convention=args.rdm_convention,
        max_size=min(args.max_size, 16),
        degeneracy_threshold=args.degeneracy_threshold,
    )


def _run(args: argparse.Namespace) -> int:
    if args.command == "sweep":
        reports = run_sweep(sweep_config(args))
        print(f"wrote {len(reports)} rows to {args.out / 'sweep.csv'}")
        if reports and all(r.degenerate for r in reports):
            return EXIT_DEGENERATE
        return EXIT_OK
    if args.command == "figure":
        cfg = sweep_config(args)
        paths = reproduce_figure(args.name, args.out, replace(cfg, out=None), sizes=args.sizes)
        for path in paths:
            print(path)
        return EXIT_OK
    if args.command == "confinement":
        rep = confinement_report(args.L, args.U, args.tol, args.max_leakage)
        summary = {
            "L": rep.L,
            "U": rep.U,
            "leakage": rep.leakage,
            "wootters": {f"{i}-{j}": c for (i, j), c in rep.wootters.items()},
        }
        if rep.coefficients is not None:
            summary.update(
                alpha=rep.coefficients[0],
                beta=rep.coefficients[1],
                gamma=rep.coefficients[2],
                generic_z=[float(z) for z in rep.generic_z],
                generic_residual=rep.generic_residual,
                four_tangle=rep.four_tangle,
            )
        print(json.dumps(summary, indent=2))
        return EXIT_OK
    if args.command == "ground-state":
        if args.L < 2 or args.L % 2 or args.L > 16:
            raise ConfigError("L must be even, between 2 and 16")
        if args.U < 0:
            raise ConfigError("U must be non-negative")
        _, gs = solve(args.L, args.U, args.tol, args.max_iter, args.seed)
        print(json.dumps({
            "L": args.L, "U": args.U, "energy": gs.energy, "gap": gs.gap, "residual": gs.residual,
            "converged": gs.converged, "iterations": gs.iterations, "method": gs.method,
        }, indent=2))
        if not gs.converged:
            return EXIT_NONCONVERGED
        return EXIT_DEGENERATE if degeneracy_check(gs) else EXIT_OK
    raise ConfigError(f"unknown command {args.command}")


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
