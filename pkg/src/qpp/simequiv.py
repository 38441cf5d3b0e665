"""The similarity W and the unitary U intertwining a pair with its complementary pair.

With P1, P4 the projectors onto H1, H4 and V1, V2 the polar parts of T1, T2::

    W  = l1 (V1 - V2) + l2 P1 + l3 P4
    W~ = (1/l1)(V1 - V2)^+ + (1/l2) P1 + (1/l3) P4      (= W^-1)
    U  = l1 [V1(2P - I) - V2] + l2 P1 + l3 P4            (|li| = 1)

W conjugates Q - P1 to I - P - P4 and P - P1 to I - Q - P4.  U only
conjugates the product (P - P1)(Q - P1) to (I - Q - P4)(I - P - P4).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numlin as nl
from .decomp import CertReport, PairAnatomy
from .numlin import DEFAULT_TOL, InputError, Tolerances, adj
from .qppcore import QuasiPair

DEFAULT_LAMBDAS = (1.0, 1.0, 1.0)
UNIT_CIRCLE_TOL = 1e-12


@dataclass(frozen=True)
class SimilaritySolution:
    W: np.ndarray
    Winv: np.ndarray
    lambdas: tuple
    Ptilde: np.ndarray

    def inverse_residuals(self) -> dict:
        I = nl.eye_like(self.W)
        return {
            "W W~ = I": nl.op_norm(self.W @ self.Winv - I),
            "W~ W = I": nl.op_norm(self.Winv @ self.W - I),
        }

    def to_json(self) -> dict:
        return {"lambda": [complex(l) for l in self.lambdas], "W": self.W, "Winv": self.Winv}


@dataclass(frozen=True)
class UnitarySolution:
    U: np.ndarray
    lambdas: tuple

    def unitarity_residuals(self) -> dict:
        I = nl.eye_like(self.U)
        return {
            "U*U = I": nl.op_norm(adj(self.U) @ self.U - I),
            "UU* = I": nl.op_norm(self.U @ adj(self.U) - I),
        }

    def to_json(self) -> dict:
        return {"lambda": [complex(l) for l in self.lambdas], "U": self.U}


def _lambdas(lambdas) -> tuple:
    ls = tuple(complex(l) for l in lambdas)
    if len(ls) != 3:
        raise InputError(f"need three lambdas, got {len(ls)}")
    if any(not np.isfinite(l) for l in ls):
        raise InputError("lambdas must be finite")
    if any(l == 0 for l in ls):
        raise InputError("lambdas must be nonzero")
    return ls


def build_W(
    anat: PairAnatomy, lambdas=DEFAULT_LAMBDAS, tol: Tolerances = DEFAULT_TOL
) -> SimilaritySolution:
    l1, l2, l3 = _lambdas(lambdas)
    Pi1, Pi4 = anat.Pi(1), anat.Pi(4)
    D = anat.V1 - anat.V2
    W = l1 * D + l2 * Pi1 + l3 * Pi4
    Winv = nl.pinv(D, tol) / l1 + Pi1 / l2 + Pi4 / l3
    Ptilde = nl.eye_like(W) - Pi1 - Pi4
    return SimilaritySolution(W, Winv, (l1, l2, l3), Ptilde)


def _conjugation_residuals(X, Xinv, anat: PairAnatomy) -> dict:
    P, Q = anat.P, anat.Q
    I = nl.eye_like(P)
    Pi1, Pi4 = anat.Pi(1), anat.Pi(4)
    A, B = P - Pi1, Q - Pi1
    C, D = I - Q - Pi4, I - P - Pi4
    return {
        "W(Q-P1)W^-1 = I-P-P4": nl.op_norm(X @ B @ Xinv - D),
        "W(P-P1)W^-1 = I-Q-P4": nl.op_norm(X @ A @ Xinv - C),
        "W(P-P1)(Q-P1)W^-1 = (I-Q-P4)(I-P-P4)": nl.op_norm(X @ A @ B @ Xinv - C @ D),
    }


def verify_similarity(
    sol: SimilaritySolution, pair: QuasiPair, anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL
) -> CertReport:
    if not (np.array_equal(pair.P, anat.P) and np.array_equal(pair.Q, anat.Q)):
        raise InputError("anatomy was not computed from this pair")
    res = sol.inverse_residuals()
    res.update(_conjugation_residuals(sol.W, sol.Winv, anat))
    return CertReport(res, tol.residual_tol)


def build_U(
    anat: PairAnatomy, lambdas=DEFAULT_LAMBDAS, tol: Tolerances = DEFAULT_TOL
) -> UnitarySolution:
    l1, l2, l3 = _lambdas(lambdas)
    if any(abs(abs(l) - 1) > UNIT_CIRCLE_TOL for l in (l1, l2, l3)):
        raise InputError("lambdas for U must lie on the unit circle")
    S = 2 * anat.P - nl.eye_like(anat.P)
    U = l1 * (anat.V1 @ S - anat.V2) + l2 * anat.Pi(1) + l3 * anat.Pi(4)
    return UnitarySolution(U, (l1, l2, l3))


def verify_unitary(
    sol: UnitarySolution, anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL
) -> CertReport:
    """Unitarity, the product conjugation, and U = W + 2 l1 V1 (P - I) for the W with the same lambdas."""
    P, Q = anat.P, anat.Q
    I = nl.eye_like(P)
    Pi1, Pi4 = anat.Pi(1), anat.Pi(4)
    U = sol.U
    res = sol.unitarity_residuals()
    lhs = U @ (P - Pi1) @ (Q - Pi1) @ adj(U)
    res["U(P-P1)(Q-P1)U* = (I-Q-P4)(I-P-P4)"] = nl.op_norm(lhs - (I - Q - Pi4) @ (I - P - Pi4))
    W = build_W(anat, sol.lambdas, tol).W
    res["U = W + 2 l1 V1 (P-I)"] = nl.op_norm(U - W - 2 * sol.lambdas[0] * anat.V1 @ (P - I))
    return CertReport(res, tol.residual_tol)


def ep_check(anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL) -> CertReport:
    """V1 - V2 is EP with range projector I - P1 - P4; V1 + V2 is Hermitian; Vi Tj = Ti Vj."""
    V1, V2 = anat.V1, anat.V2
    T = {1: anat.T1, 2: anat.T2}
    V = {1: V1, 2: V2}
    D = V1 - V2
    Dp = nl.pinv(D, tol)
    Pt = nl.eye_like(D) - anat.Pi(1) - anat.Pi(4)
    res = {
        "(V1-V2)(V1-V2)^+ = P~": nl.op_norm(D @ Dp - Pt),
        "(V1-V2)^+(V1-V2) = P~": nl.op_norm(Dp @ D - Pt),
        "V1+V2 Hermitian": nl.hermitian_residual(V1 + V2),
    }
    for i in (1, 2):
        for j in (1, 2):
            res[f"V{i}T{j} = T{i}V{j}"] = nl.op_norm(V[i] @ T[j] - T[i] @ V[j])
    return CertReport(res, tol.residual_tol)


def structure_residuals(anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Null-space coincidences for V1 +- V2 and the orthogonality V2*V1 = V1*V2 = 0."""
    V1, V2 = anat.V1, anat.V2
    N12 = nl.subspace_meet(nl.null_space(V1, tol), nl.null_space(V2, tol), tol)
    return {
        "N(V1-V2)=N(V1)∩N(V2)": nl.subspace_gap(nl.null_space(V1 - V2, tol), N12),
        "N(V1+V2)=N(V1)∩N(V2)": nl.subspace_gap(nl.null_space(V1 + V2, tol), N12),
        "N((V1-V2)*)=N(V1)∩N(V2)": nl.subspace_gap(nl.null_space(adj(V1 - V2), tol), N12),
        "V2*V1=0": nl.op_norm(adj(V2) @ V1),
        "V1*V2=0": nl.op_norm(adj(V1) @ V2),
    }


@dataclass(frozen=True)
class NormGap:
    """‖I - Q - P4‖ against ‖P - P1‖; when Q is not a projection the first exceeds 1."""

    complement_norm: float
    compressed_norm: float
    q_is_projection: bool

    @property
    def holds(self) -> bool:
        if self.q_is_projection:
            return True
        return self.complement_norm > 1.0 >= self.compressed_norm - 1e-12


def norm_gap(anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL) -> NormGap:
    P, Q = anat.P, anat.Q
    I = nl.eye_like(P)
    return NormGap(
        nl.op_norm(I - Q - anat.Pi(4)),
        nl.op_norm(P - anat.Pi(1)),
        nl.hermitian_residual(Q) < tol.residual_tol,
    )
