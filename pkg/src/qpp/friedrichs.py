"""Friedrichs-angle cosines and the norm equation ‖PQ - P1‖ = ‖(I-P)(I-Q) - P4‖."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numlin as nl
from .decomp import PairAnatomy
from .numlin import DEFAULT_TOL, InputError, Subspace, Tolerances
from .qppcore import QuasiPair


def friedrichs_cos(M: Subspace, N: Subspace, tol: Tolerances = DEFAULT_TOL) -> float:
    """c(M, N) = ‖P_M P_N - P_{M∩N}‖, clamped to [0, 1]."""
    meet = nl.subspace_meet(M, N, tol)
    c = nl.op_norm(nl.projector(M) @ nl.projector(N) - nl.projector(meet))
    return float(min(max(c, 0.0), 1.0))


def complement_invariance_check(M: Subspace, N: Subspace, tol: Tolerances = DEFAULT_TOL) -> float:
    """|c(M, N) - c(M⊥, N⊥)|."""
    c = friedrichs_cos(M, N, tol)
    cp = friedrichs_cos(nl.complement(M, tol), nl.complement(N, tol), tol)
    return abs(c - cp)


@dataclass(frozen=True)
class AngleReport:
    cosine: float | None  # c(R(P), R(Q)) when Q is a projection
    lhs: float
    rhs: float
    adjoint_side: float  # ‖(I-Q)(I-P) - P4‖
    max_split: tuple  # (alpha, beta, meet_norm) with the identity representation

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_json(self) -> dict:
        alpha, beta, meet = self.max_split
        return {
            "cosine": self.cosine,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "adjoint_side": self.adjoint_side,
            "max_split": {"alpha": alpha, "beta": beta, "meet_norm": meet},
        }


def _report(P, Q, Pi1, Pi4, tol: Tolerances) -> AngleReport:
    I = nl.eye_like(P)
    lhs = nl.op_norm(P @ Q - Pi1)
    rhs = nl.op_norm((I - P) @ (I - Q) - Pi4)
    adjoint_side = nl.op_norm((I - Q) @ (I - P) - Pi4)
    cosine = None
    if nl.hermitian_residual(Q) < tol.residual_tol:
        cosine = friedrichs_cos(nl.range_space(P, tol), nl.range_space(Q, tol), tol)
    # identity representation: P_M = P1, so the second max argument vanishes
    alpha = lhs
    beta = nl.op_norm(Q @ P - Pi1)
    meet_norm = 0.0
    return AngleReport(cosine, lhs, rhs, adjoint_side, (alpha, beta, meet_norm))


def norm_equation_check(
    pair: QuasiPair, anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL
) -> AngleReport:
    return _report(pair.P, pair.Q, anat.Pi(1), anat.Pi(4), tol)


def projection_norm_equation(P, Q, tol: Tolerances = DEFAULT_TOL) -> AngleReport:
    """The same equation for two orthogonal projections, which need not form a quasi-projection pair."""
    P = nl.as_square(P, "P")
    Q = nl.as_square(Q, "Q")
    if P.shape != Q.shape:
        raise InputError(f"P and Q shapes differ: {P.shape} vs {Q.shape}")
    for name, X in (("P", P), ("Q", Q)):
        if nl.is_projection_residual(X) >= tol.residual_tol:
            raise InputError(f"{name} is not a projection")
    I = nl.eye_like(P)
    RP, RQ = nl.range_space(P, tol), nl.range_space(Q, tol)
    NP, NQ = nl.range_space(I - P, tol), nl.range_space(I - Q, tol)
    Pi1 = nl.projector(nl.subspace_meet(RP, RQ, tol))
    Pi4 = nl.projector(nl.subspace_meet(NP, NQ, tol))
    return _report(P, Q, Pi1, Pi4, tol)


def lines_at_angle(theta: float) -> tuple[Subspace, Subspace]:
    """Two real lines in C^2 at angle theta."""
    u = np.array([[1.0], [0.0]], dtype=complex)
    v = np.array([[np.cos(theta)], [np.sin(theta)]], dtype=complex)
    return Subspace(u), Subspace(v)
