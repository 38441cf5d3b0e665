"""How tight are the distance bounds ‖m(Q) - Q‖ <= ‖P - Q‖ <= ‖I - m(Q) - Q‖?

Samples random projections against random idempotents and reports the
smallest slack seen at each end, by dimension.
"""
import argparse

import numpy as np

from qpp import qppcore as qc
from qpp import sampling as sp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--idempotents", type=int, default=20)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 6])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'min lower slack':>16} {'min upper slack':>16} {'violations':>11}")
    for n in args.dims:
        lo_slack, hi_slack, bad = np.inf, np.inf, 0
        for _ in range(args.idempotents):
            Q = sp.random_idempotent(n, rng, k=int(rng.integers(1, n)))
            rep = qc.distance_extremality_probe(Q, args.samples, rng)
            lo_slack = min(lo_slack, rep.min_dist - rep.lower_bound)
            hi_slack = min(hi_slack, rep.upper_bound - rep.max_dist)
            bad += rep.violations
        print(f"{n:>3} {lo_slack:>16.3e} {hi_slack:>16.3e} {bad:>11}")


if __name__ == "__main__":
    main()
