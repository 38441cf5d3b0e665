"""Run the randomised property battery and print per-invariant pass counts.

    python scripts/run_suite.py --seed 42 --dims 2-8 --trials 100
"""
import argparse
import time

from qpp import battery, io
from qpp.cli import parse_dims


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--dims", default="2-8")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--out", help="write the JSON report here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = battery.run_suite(args.seed, parse_dims(args.dims), args.trials)
    elapsed = time.perf_counter() - t0
    width = max(len(k) for k in rep["invariants"])
    for name, s in rep["invariants"].items():
        print(f"{name:<{width}}  {s['pass']:>4}/{s['trials']:<4}  worst {s['worst']:.2e}")
    print(f"\nall pass: {rep['all_pass']}  worst residual {rep['worst_residual']:.2e}  ({elapsed:.1f} s)")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(io.dumps(rep))


if __name__ == "__main__":
    main()
