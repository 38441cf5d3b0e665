"""Zero-set verdicts for the lifted function examples at several grid resolutions,
plus the max-split norms and the t = 0 counterexample."""
import numpy as np

from qpp import cgrid as cg

EXAMPLES = {
    "sec^2 t on [0,1]": cg.sec2_element,
    "t on [-1,0]u[1,2]": cg.interval_union_element,
    "2 on [0,1]": lambda n: cg.constant_element(2.0, n),
    "1 on [0,1]": lambda n: cg.constant_element(1.0, n),
}


def main():
    print(f"{'a':<20} {'points':>6} {'semi':>6} {'harm':>6} {'restr':>6}")
    for name, make in EXAMPLES.items():
        for points in (501, 1001, 2001):
            a = make(points)
            v = [cg.semiharmony_criterion(a).verdict, cg.harmony_criterion(a).verdict,
                 cg.restricted_harmony(a).verdict]
            print(f"{name:<20} {points:>6} " + " ".join(f"{str(x):>6}" for x in v))

    a = cg.sec2_element(2001)
    P, Q = cg.lift_A(a)
    rep = cg.max_split_check(P, Q, cg.GridElement.constant(a.domain, np.zeros((2, 2))))
    print(f"\nmax split, sec^2 data: ‖PQ‖ = {rep.lhs:.10f}, alpha = {rep.alpha:.10f}, ‖P_M‖ = {rep.meet_gap:.1f}")
    print(f"            P_R(Q) variant: {rep.lhs_beta:.10f} vs max(beta, ‖P_M‖) = {max(rep.beta, rep.meet_gap):.10f}")

    ce = cg.counterexample_check()
    print(f"\nt = 0 system: constrained solutions dim {ce.constrained_dim}, unconstrained dim {ce.unconstrained_dim}; "
          f"invertible solution at t = {ce.generic_t}: {ce.generic_invertible}")


if __name__ == "__main__":
    main()
