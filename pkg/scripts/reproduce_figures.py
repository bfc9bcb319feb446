"""Write the CSV datasets behind every figure into one directory.

    python scripts/reproduce_figures.py --out results/figures
    python scripts/reproduce_figures.py --quick       # L <= 8, coarse grid

The full run includes L=12 sweeps and takes tens of minutes on one core;
``--threads`` spreads the (L, U) points over worker processes.
"""
import argparse
import time
from pathlib import Path

from hubbard_ent.experiments import FIGURES, SweepConfig, reproduce_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("results/figures"))
    ap.add_argument("--only", nargs="*", choices=FIGURES, default=list(FIGURES))
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="sizes up to 8 and a 20-point grid")
    args = ap.parse_args()

    base = SweepConfig(threads=args.threads)
    sizes_multi = None
    if args.quick:
        base = SweepConfig(threads=args.threads, u_count=20)
        sizes_multi = [4, 6, 8]
    for name in args.only:
        t0 = time.perf_counter()
        sizes = sizes_multi if name.startswith(("fig1", "fig5")) else ([8] if args.quick and name == "fig3b" else None)
        paths = reproduce_figure(name, args.out, base, sizes=sizes)
        print(f"{name}: {len(paths)} files in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
