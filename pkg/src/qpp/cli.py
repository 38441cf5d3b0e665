"""Command-line front end.  Every verb writes a JSON report; exit 0 = all checks pass,
1 = a mathematical check failed, 2 = bad input."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import battery
from . import cgrid as cg
from . import decomp as dc
from . import friedrichs as fr
from . import io
from . import numlin as nl
from . import qppcore as qc
from . import simequiv as se
from .numlin import InputError, NumericalError, Tolerances

VERBS = ("verify", "matched", "anatomize", "certify", "similarity", "unitary", "friedrichs", "grid", "suite")
MATRIX_EXAMPLES = ("two-by-two:a=<complex>", "lines60")
GRID_EXAMPLES = ("sec2", "interval-union", "const2")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"not a complex number: {text!r}") from exc


def parse_dims(text: str) -> list[int]:
    try:
        out = []
        for part in text.split(","):
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-"))
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise InputError(f"bad --dims {text!r}; use e.g. 2-8 or 2,3,5") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qpp", description=__doc__)
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--P", help="projection, matrix JSON")
    ap.add_argument("--Q", help="idempotent, matrix JSON")
    ap.add_argument("--A", help="Hermitian A (matrix JSON); the pair is built from the A-family")
    ap.add_argument("--grid", help="scalar grid element JSON for the grid verb")
    ap.add_argument("--example", help="built-in input: two-by-two:a=1, lines60, sec2, interval-union, const2")
    ap.add_argument("--points", type=int, default=1001, help="grid points per component")
    ap.add_argument("--tol-rank", type=float, help="relative singular-value cutoff")
    ap.add_argument("--tol-residual", type=float, help="pass threshold for residuals")
    for i in (1, 2, 3):
        ap.add_argument(f"--lambda{i}", default="1", help=f"lambda_{i}, complex")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dims", default="2-8", help="suite dimensions, e.g. 2-8 or 2,4,6")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--samples", type=int, default=0, help="matched: projections sampled for the distance probe")
    ap.add_argument("--out", help="report path (default: stdout)")
    return ap


def _two_by_two(name: str):
    if not name.startswith("two-by-two:a="):
        return None
    fam = qc.two_by_two_family(_parse_complex(name.split("=", 1)[1]))
    return fam.projections[0], fam.Q


def _matrix_inputs(args, need_P: bool = True):
    """(P, Q) from --example, --A, or --P/--Q."""
    if args.example:
        tt = _two_by_two(args.example)
        if tt is not None:
            return tt
        if args.example == "lines60":
            M, N = fr.lines_at_angle(np.pi / 3)
            return nl.projector(M), nl.projector(N)
        raise InputError(f"unknown matrix example {args.example!r}; choose from {MATRIX_EXAMPLES}")
    if args.A:
        pair = qc.build_from_A(io.load_matrix(args.A))
        return pair.P, pair.Q
    if args.Q is None or (need_P and args.P is None):
        raise InputError("need --P and --Q (or --A, or --example)")
    Q = io.load_matrix(args.Q)
    return (io.load_matrix(args.P) if args.P else None), Q


def _lambdas(args):
    return tuple(_parse_complex(getattr(args, f"lambda{i}")) for i in (1, 2, 3))


def _checks(report: dict, residuals: dict, tol: Tolerances) -> bool:
    ok = all(v < tol.residual_tol for v in residuals.values())
    report["checks"] = {k: {"residual": float(v), "pass": bool(v < tol.residual_tol)} for k, v in residuals.items()}
    return ok


def cmd_verify(args, tol):
    P, Q = _matrix_inputs(args)
    d = qc.diagnose_pair(P, Q, tol)
    report = {"accepted": d.accepted, "failed": d.failed, "residuals": d.residuals,
              "verdicts": d.verdicts, "characterizations_agree": qc.characterization_verdicts_agree(d)}
    return report, d.accepted


def cmd_matched(args, tol):
    _, Q = _matrix_inputs(args, need_P=False)
    mr = qc.matched_projection(Q, tol)
    d = qc.diagnose_pair(mr.mQ, Q, tol)
    report = {"mQ": mr.mQ, "range_projection": mr.range_proj, "pinv_route_gap": mr.pinv_route_gap,
              "pair_accepted": d.accepted}
    ok = d.accepted
    if args.example and args.example.startswith("two-by-two:"):
        closed = qc.two_by_two_family(_parse_complex(args.example.split("=", 1)[1])).projections[0]
        err = float(np.max(np.abs(mr.mQ - closed)))
        report["closed_form_error"] = err
        ok = ok and err < tol.residual_tol
    if args.samples:
        probe = qc.distance_extremality_probe(Q, args.samples, args.seed, tol)
        report["probe"] = probe.to_json()
        ok = ok and probe.violations == 0
    return report, ok


def _pair(args, tol):
    P, Q = _matrix_inputs(args)
    pair = qc.verify_pair(P, Q, tol)
    return pair, dc.anatomize(pair, tol)


def cmd_anatomize(args, tol):
    pair, anat = _pair(args, tol)
    report = {"dims": {f"H{i}": anat.H(i).dim for i in range(1, 7)} | {"M": anat.M.dim},
              "T1": anat.T1, "T2": anat.T2, "T3": anat.T3, "T4": anat.T4,
              "V1": anat.V1, "V2": anat.V2}
    ok = _checks(report, dc.invariant_residuals(anat, tol), tol)
    return report, ok


def cmd_certify(args, tol):
    pair, anat = _pair(args, tol)
    semi = dc.certify_semiharmony(anat, pair, tol)
    harm = dc.certify_harmony(anat, pair, tol)
    inv = dc.CertReport(dc.invariant_residuals(anat, tol), tol.residual_tol)
    report = {"semiharmony": semi.to_json(), "harmony": harm.to_json(), "invariants": inv.to_json()}
    return report, semi.passed and harm.passed and inv.passed


def cmd_similarity(args, tol):
    pair, anat = _pair(args, tol)
    sol = se.build_W(anat, _lambdas(args), tol)
    cert = se.verify_similarity(sol, pair, anat, tol)
    ep = se.ep_check(anat, tol)
    report = sol.to_json() | {"checks": cert.to_json(), "ep": ep.to_json()}
    return report, cert.passed and ep.passed


def cmd_unitary(args, tol):
    pair, anat = _pair(args, tol)
    sol = se.build_U(anat, _lambdas(args), tol)
    cert = se.verify_unitary(sol, anat, tol)
    gap = se.norm_gap(anat, tol)
    report = sol.to_json() | {"checks": cert.to_json(),
                              "norm_gap": {"I-Q-P4": gap.complement_norm, "P-P1": gap.compressed_norm,
                                           "Q_is_projection": gap.q_is_projection, "holds": gap.holds}}
    return report, cert.passed and gap.holds


def cmd_friedrichs(args, tol):
    P, Q = _matrix_inputs(args)
    d = qc.diagnose_pair(P, Q, tol)
    if d.accepted:
        pair = qc.verify_pair(P, Q, tol)
        rep = fr.norm_equation_check(pair, dc.anatomize(pair, tol), tol)
        kind = "quasi-projection pair"
    else:
        rep = fr.projection_norm_equation(P, Q, tol)
        kind = "two projections"
    report = {"input": kind} | rep.to_json()
    residuals = {"norm_equation": rep.gap, "adjoint_side": abs(rep.adjoint_side - rep.rhs)}
    if rep.cosine is not None:
        residuals["cosine"] = abs(rep.cosine - rep.lhs)
    return report, _checks(report, residuals, tol)


def _grid_input(args) -> cg.GridElement:
    if args.points < 2:
        raise InputError("--points must be at least 2")
    if args.grid:
        return cg.GridElement.from_json(io.load_json(args.grid))
    makers = {"sec2": cg.sec2_element, "interval-union": cg.interval_union_element,
              "const2": lambda n: cg.constant_element(2.0, n)}
    if args.example not in makers:
        raise InputError(f"grid needs --grid or --example in {GRID_EXAMPLES}")
    return makers[args.example](args.points)


def cmd_grid(args, tol):
    a = _grid_input(args)
    P, Q = cg.lift_A(a, tol)
    semi = cg.semiharmony_criterion(a, tol)
    harm = cg.harmony_criterion(a, tol)
    rest = cg.restricted_harmony(a, tol)
    zero = cg.GridElement.constant(a.domain, np.zeros((2, 2)))
    meet = cg.pointwise_meet(P, Q, tol)
    H1 = meet if not cg.module_meet_is_trivial(meet, tol) else zero
    split = cg.max_split_check(P, Q, H1, tol)
    report = {
        "points": a.domain.size,
        "semiharmony": semi.verdict,
        "harmony": harm.verdict,
        "restricted_harmony": rest.verdict,
        "criteria": {"semiharmony": semi.to_json(), "harmony": harm.to_json(),
                     "restricted_harmony": rest.to_json()},
        "max_split": split.to_json(),
        "H1_trivial": H1 is zero,
    }
    residuals = {"pointwise_pair": cg.pointwise_pair_residual(P, Q),
                 "max_split": split.residual, "max_split_beta": split.residual_beta}
    ok = _checks(report, residuals, tol)
    if args.example == "sec2":
        ce = cg.counterexample_check(tol)
        report["counterexample"] = ce.to_json()
        ok = ok and ce.passed
    return report, ok


def cmd_suite(args, tol):
    report = battery.run_suite(args.seed, parse_dims(args.dims), args.trials, tol)
    return report, report["all_pass"]


COMMANDS = {v: globals()[f"cmd_{v}"] for v in VERBS}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = Tolerances.from_env(rank_rel_tol=args.tol_rank, residual_tol=args.tol_residual)
        report, ok = COMMANDS[args.verb](args, tol)
    except qc.PairRejected as exc:
        print(f"qpp: {exc}", file=sys.stderr)
        report, ok = {"accepted": False, "failed": exc.invariant, "residuals": exc.residuals}, False
    except (InputError, NumericalError, OSError) as exc:
        print(f"qpp: error: {exc}", file=sys.stderr)
        return 2
    report = {"verb": args.verb, "pass": bool(ok), "report": report}
    text = io.dumps(report)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qpp: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
