"""Randomised property battery over every pair-level invariant, with deterministic aggregation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import decomp as dc
from . import friedrichs as fr
from . import numlin as nl
from . import qppcore as qc
from . import sampling as sp
from . import simequiv as se
from .numlin import DEFAULT_TOL, InputError, Tolerances

SOURCES = ("rotated_blocks", "matched", "A_family", "krein")


def random_pair(kind: str, n: int, rng, tol: Tolerances = DEFAULT_TOL) -> qc.QuasiPair:
    """A quasi-projection pair of total dimension n (the A-family uses n // 2 per block)."""
    if kind == "rotated_blocks":
        P, Q = sp.random_quasi_pair(n, rng)
        return qc.verify_pair(P, Q, tol)
    if kind == "matched":
        Q = sp.random_idempotent(n, rng)
        return qc.verify_pair(qc.matched_projection(Q, tol).mQ, Q, tol)
    if kind == "A_family":
        return qc.build_from_A(sp.random_A(max(n // 2, 1), rng), tol)
    if kind == "krein":
        J = sp.random_symmetry(n, rng)
        return qc.build_krein(J, sp.random_weighted_projection(J, rng), tol)
    raise InputError(f"unknown pair source {kind!r}")


def pair_residuals(pair: qc.QuasiPair, rng, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Every invariant residual for one pair, keyed ``module/name``."""
    out = {}
    diag = qc.diagnose_pair(pair.P, pair.Q, tol)
    for k in qc.CHARACTERIZATIONS:
        out[f"qppcore/{k}"] = diag.residuals[k]
    anat = dc.anatomize(pair, tol)
    for name, rep in (
        ("semiharmony", dc.certify_semiharmony(anat, pair, tol)),
        ("harmony", dc.certify_harmony(anat, pair, tol)),
    ):
        for k, v in rep.residuals.items():
            out[f"decomp/{name}/{k}"] = v
    for k, v in dc.invariant_residuals(anat, tol).items():
        out[f"decomp/invariant/{k}"] = v
    for k, v in dc.restrict_to_M(pair, tol).checks.items():
        out[f"decomp/restriction/{k}"] = float(v)
    lambdas = np.exp(2j * np.pi * rng.random(3))
    W = se.build_W(anat, lambdas, tol)
    for k, v in se.verify_similarity(W, pair, anat, tol).residuals.items():
        out[f"simequiv/W/{k}"] = v
    for k, v in se.verify_unitary(se.build_U(anat, lambdas, tol), anat, tol).residuals.items():
        out[f"simequiv/U/{k}"] = v
    for k, v in se.ep_check(anat, tol).residuals.items():
        out[f"simequiv/ep/{k}"] = v
    for k, v in se.structure_residuals(anat, tol).items():
        out[f"simequiv/structure/{k}"] = v
    out["simequiv/norm_gap"] = 0.0 if se.norm_gap(anat, tol).holds else 1.0
    rep = fr.norm_equation_check(pair, anat, tol)
    out["friedrichs/norm_equation"] = rep.gap
    out["friedrichs/adjoint_side"] = abs(rep.adjoint_side - rep.rhs)
    return out


def subspace_residuals(n: int, rng, tol: Tolerances = DEFAULT_TOL) -> dict:
    P1, P2 = sp.random_projection(n, rng), sp.random_projection(n, rng)
    M, N = nl.range_space(P1, tol), nl.range_space(P2, tol)
    rep = fr.projection_norm_equation(P1, P2, tol)
    return {
        "friedrichs/complement_invariance": fr.complement_invariance_check(M, N, tol),
        "friedrichs/projection_norm_equation": rep.gap,
        "friedrichs/projection_cosine": abs(rep.lhs - rep.cosine),
    }


@dataclass
class Aggregate:
    threshold: float
    stats: dict = field(default_factory=dict)  # name -> [passes, count, worst]

    def add(self, residuals: dict) -> None:
        for k, v in residuals.items():
            s = self.stats.setdefault(k, [0, 0, 0.0])
            s[0] += int(v < self.threshold)
            s[1] += 1
            s[2] = max(s[2], float(v))

    @property
    def all_pass(self) -> bool:
        return all(p == c for p, c, _ in self.stats.values())

    @property
    def worst(self) -> float:
        return max((w for _, _, w in self.stats.values()), default=0.0)

    def to_json(self) -> dict:
        return {k: {"pass": p, "trials": c, "worst": w} for k, (p, c, w) in sorted(self.stats.items())}


def run_suite(seed: int, dims, trials: int, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Deterministic battery: trial i uses pair source i mod 4 and a dimension drawn from ``dims``."""
    if trials < 1:
        raise InputError("trials must be at least 1")
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 1:
        raise InputError("dims must be a nonempty list of positive integers")
    rng = np.random.default_rng(seed)
    agg = Aggregate(tol.residual_tol)
    for i in range(trials):
        n = int(rng.choice(dims))
        kind = SOURCES[i % len(SOURCES)]
        pair = random_pair(kind, n, rng, tol)
        agg.add(pair_residuals(pair, rng, tol))
        agg.add(subspace_residuals(n, rng, tol))
    return {
        "seed": seed,
        "dims": dims,
        "trials": trials,
        "threshold": tol.residual_tol,
        "invariants": agg.to_json(),
        "all_pass": agg.all_pass,
        "worst_residual": agg.worst,
    }
