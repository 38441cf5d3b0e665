"""T/H anatomy of a quasi-projection pair and the decomposition identities it satisfies.

For a pair (P, Q)::

    T1 = P(I-Q)      T2 = (I-P)Q      T3 = PQ(I-P)      T4 = (I-P)QP
    T1~ = T1(2P-I)   T2~ = -T2(2P-I)
    H1 = R(P)∩R(Q)   H2 = R(P)∩N(Q)   H3 = N(P)∩R(Q)   H4 = N(P)∩N(Q)
    H5 = R(T3)       H6 = R(T4)       M = R(P-Q)

In finite dimension every closed subspace is complemented, so the
semi-harmony and harmony hypotheses hold automatically; what remains
checkable is that the projector identities they imply hold numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numlin as nl
from .numlin import DEFAULT_TOL, InputError, Subspace, Tolerances, adj
from .qppcore import QuasiPair, matched_projection, range_projection_of_idempotent, verify_pair

SEMIHARMONY_LAMBDAS = (1, -1, 2, 1j)


@dataclass(frozen=True)
class PairAnatomy:
    P: np.ndarray
    Q: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    T3: np.ndarray
    T4: np.ndarray
    T1tilde: np.ndarray
    T2tilde: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    H1: Subspace
    H2: Subspace
    H3: Subspace
    H4: Subspace
    H5: Subspace
    H6: Subspace
    M: Subspace
    cross_checks: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def H(self, i: int) -> Subspace:
        return getattr(self, f"H{i}")

    def Pi(self, i: int) -> np.ndarray:
        """Projector onto H_i."""
        return nl.projector(self.H(i))


@dataclass
class CertReport:
    """Named residuals checked against a single threshold."""

    residuals: dict
    threshold: float

    @property
    def verdicts(self) -> dict:
        return {k: bool(v < self.threshold) for k, v in self.residuals.items()}

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def failures(self) -> list[str]:
        return [k for k, ok in self.verdicts.items() if not ok]

    def merged(self, other: "CertReport", prefix: str = "") -> "CertReport":
        res = dict(self.residuals)
        res.update({prefix + k: v for k, v in other.residuals.items()})
        return CertReport(res, min(self.threshold, other.threshold))

    def to_json(self) -> dict:
        v = self.verdicts
        return {k: {"residual": float(r), "pass": v[k]} for k, r in self.residuals.items()}


def anatomize(pair: QuasiPair, tol: Tolerances = DEFAULT_TOL) -> PairAnatomy:
    P, Q = pair.P, pair.Q
    I = nl.eye_like(P)
    S = 2 * P - I
    T1 = P @ (I - Q)
    T2 = (I - P) @ Q
    T3 = P @ Q @ (I - P)
    T4 = (I - P) @ Q @ P
    RP, NP = nl.range_space(P, tol), nl.null_space(P, tol)
    RQ, NQ = nl.range_space(Q, tol), nl.null_space(Q, tol)
    RQs, NQs = nl.range_space(adj(Q), tol), nl.null_space(adj(Q), tol)
    meet = lambda A, B: nl.subspace_meet(A, B, tol)  # noqa: E731
    H1, H2, H3, H4 = meet(RP, RQ), meet(RP, NQ), meet(NP, RQ), meet(NP, NQ)
    cross = {
        "H1=R(P)∩R(Q*)": nl.subspace_gap(H1, meet(RP, RQs)),
        "H4=N(P)∩N(Q*)": nl.subspace_gap(H4, meet(NP, NQs)),
        "H2=R(P)∩N(Q*)": nl.subspace_gap(H2, meet(RP, NQs)),
        "H3=N(P)∩R(Q*)": nl.subspace_gap(H3, meet(NP, RQs)),
    }
    return PairAnatomy(
        P=P, Q=Q, T1=T1, T2=T2, T3=T3, T4=T4,
        T1tilde=T1 @ S, T2tilde=-T2 @ S,
        V1=nl.polar(T1, tol).V, V2=nl.polar(T2, tol).V,
        H1=H1, H2=H2, H3=H3, H4=H4,
        H5=nl.range_space(T3, tol), H6=nl.range_space(T4, tol),
        M=nl.range_space(P - Q, tol),
        cross_checks=cross,
    )


def _check_same(anat: PairAnatomy, pair: QuasiPair) -> None:
    if anat.P.shape != pair.P.shape or not (
        np.array_equal(anat.P, pair.P) and np.array_equal(anat.Q, pair.Q)
    ):
        raise InputError("anatomy was not computed from this pair")


def _Pr(T, tol) -> np.ndarray:
    return nl.projector(nl.range_space(T, tol))


def certify_semiharmony(
    anat: PairAnatomy, pair: QuasiPair, tol: Tolerances = DEFAULT_TOL
) -> CertReport:
    """Projector identities that hold for every semi-harmonious pair."""
    _check_same(anat, pair)
    P, Q = pair.P, pair.Q
    I = nl.eye_like(P)
    Pi1, Pi4 = anat.Pi(1), anat.Pi(4)
    RQ = range_projection_of_idempotent(Q, tol)
    NQ = nl.projector(nl.null_space(Q, tol))
    res = {
        "P=Pr(T1)+P_H1": nl.op_norm(P - _Pr(anat.T1, tol) - Pi1),
        "P_R(Q)=Pr(T2~*)+P_H1": nl.op_norm(RQ - _Pr(adj(anat.T2tilde), tol) - Pi1),
        "I-P=Pr(T2)+P_H4": nl.op_norm(I - P - _Pr(anat.T2, tol) - Pi4),
        "P_N(Q)=Pr(T1~*)+P_H4": nl.op_norm(NQ - _Pr(adj(anat.T1tilde), tol) - Pi4),
    }
    R_sum = nl.subspace_sum(nl.range_space(anat.T1, tol), nl.range_space(anat.T2, tol), tol=tol)
    worst = 0.0
    for l1 in SEMIHARMONY_LAMBDAS:
        for l2 in SEMIHARMONY_LAMBDAS:
            R_mix = nl.range_space(l1 * anat.T1 + l2 * anat.T2, tol)
            worst = max(worst, nl.subspace_gap(R_mix, R_sum))
    res["R(l1T1+l2T2)=R(T1)+R(T2)"] = worst
    NP = nl.null_space(P, tol)
    RP = nl.range_space(P, tol)
    res["N(T4)=N(P)+H1+H2"] = nl.subspace_gap(
        nl.null_space(anat.T4, tol), nl.subspace_sum(NP, anat.H1, anat.H2, tol=tol)
    )
    res["N((I-Q)(I-P))=R(P)+H3"] = nl.subspace_gap(
        nl.null_space((I - Q) @ (I - P), tol), nl.subspace_sum(RP, anat.H3, tol=tol)
    )
    return CertReport(res, tol.residual_tol)


def certify_harmony(anat: PairAnatomy, pair: QuasiPair, tol: Tolerances = DEFAULT_TOL) -> CertReport:
    """Projector identities that hold for every harmonious pair."""
    _check_same(anat, pair)
    P, Q = pair.P, pair.Q
    I = nl.eye_like(P)
    Pi = {i: anat.Pi(i) for i in range(1, 7)}
    PrPQ = _Pr(P @ Q, tol)
    PrT1, PrT2 = _Pr(anat.T1, tol), _Pr(anat.T2, tol)
    res = {
        "Pr(PQ)=P_H1+P_H5": nl.op_norm(PrPQ - Pi[1] - Pi[5]),
        "P=Pr(PQ)+P_H2": nl.op_norm(P - PrPQ - Pi[2]),
        "Pr(T1)=P_H2+P_H5": nl.op_norm(PrT1 - Pi[2] - Pi[5]),
        "Pr(T2)=P_H3+P_H6": nl.op_norm(PrT2 - Pi[3] - Pi[6]),
        "I-P=Pr(T2)+P_H4": nl.op_norm(I - P - PrT2 - Pi[4]),
        "Pr((I-P)(I-Q))=P_H4+P_H6": nl.op_norm(_Pr((I - P) @ (I - Q), tol) - Pi[4] - Pi[6]),
        "P=P_H1+P_H2+P_H5": nl.op_norm(P - Pi[1] - Pi[2] - Pi[5]),
        "I-P=P_H3+P_H4+P_H6": nl.op_norm(I - P - Pi[3] - Pi[4] - Pi[6]),
    }
    return CertReport(res, tol.residual_tol)


def invariant_residuals(anat: PairAnatomy, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Identities valid for every quasi-projection pair (adjoint formulas, commutation, ...)."""
    P, Q = anat.P, anat.Q
    I = nl.eye_like(P)
    S = 2 * P - I
    T1, T2 = anat.T1, anat.T2
    res = {
        "T1+T2 Hermitian": nl.hermitian_residual(T1 + T2),
        "T1*=(2P-I)(I-Q)P": nl.op_norm(adj(T1) - S @ (I - Q) @ P),
        "T1~*=(I-Q)P": nl.op_norm(adj(anat.T1tilde) - (I - Q) @ P),
        "T2*=-(2P-I)Q(I-P)": nl.op_norm(adj(T2) + S @ Q @ (I - P)),
        "T2~*=Q(I-P)": nl.op_norm(adj(anat.T2tilde) - Q @ (I - P)),
        "T3*=-T4": nl.op_norm(adj(anat.T3) + anat.T4),
    }
    absT = {1: nl.abs_op(T1), 2: nl.abs_op(T2)}
    absTs = {1: nl.abs_op(adj(T1)), 2: nl.abs_op(adj(T2))}
    worst = 0.0
    for i in (1, 2):
        for j in (1, 2):
            lhs = absT[i] @ absTs[j] @ absTs[j]
            rhs = absT[i] @ absT[i] @ absTs[j]
            worst = max(worst, nl.op_norm(lhs - rhs))
    res["|Ti||Tj*|^2=|Ti|^2|Tj*|"] = worst
    res.update(anat.cross_checks)
    RT1, RT2 = nl.range_space(T1 + T2, tol), nl.range_space(T1 - T2, tol)
    res["M=R(T1+T2)"] = nl.subspace_gap(anat.M, RT1)
    res["M=R(T1-T2)"] = nl.subspace_gap(anat.M, RT2)
    return res


def semiharmony_sigma_stability(pair: QuasiPair, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Worst semi-harmony certificate residual for (P,Q), (I-P,I-Q), (P,Q*), (I-P,I-Q*)."""
    I = nl.eye_like(pair.P)
    out = {}
    for name, (A, B) in {
        "(P,Q)": (pair.P, pair.Q),
        "(I-P,I-Q)": (I - pair.P, I - pair.Q),
        "(P,Q*)": (pair.P, adj(pair.Q)),
        "(I-P,I-Q*)": (I - pair.P, I - adj(pair.Q)),
    }.items():
        p = verify_pair(A, B, tol)
        out[name] = certify_semiharmony(anatomize(p, tol), p, tol).worst
    return out


@dataclass(frozen=True)
class Restriction:
    """Compression of a pair to M = R(P - Q), with B an orthonormal basis of M."""

    pair: QuasiPair | None
    B: np.ndarray
    empty: bool
    checks: dict


def restrict_to_M(pair: QuasiPair, tol: Tolerances = DEFAULT_TOL) -> Restriction:
    """(P|_M, Q|_M) as B*PB, B*QB.  Empty M yields ``pair=None`` and ``empty=True``."""
    anat = anatomize(pair, tol)
    B = anat.M.basis
    if anat.M.dim == 0:
        return Restriction(None, B, True, {})
    PiM = nl.projector(anat.M)
    I = nl.eye_like(pair.P)
    PM, QM = adj(B) @ pair.P @ B, adj(B) @ pair.Q @ B
    sub = verify_pair(PM, QM, tol)
    IM = np.eye(anat.M.dim, dtype=complex)
    T3M = PM @ QM @ (IM - PM)
    T4M = (IM - PM) @ QM @ PM
    checks = {
        "P-invariance": nl.op_norm((I - PiM) @ pair.P @ B),
        "Q-invariance": nl.op_norm((I - PiM) @ pair.Q @ B),
        "Q*-invariance": nl.op_norm((I - PiM) @ adj(pair.Q) @ B),
        "rank(T3|M)=rank(T3)": abs(nl.rank(anat.T3 @ B, tol) - nl.rank(anat.T3, tol)),
        "rank(T4|M)=rank(T4)": abs(nl.rank(anat.T4 @ B, tol) - nl.rank(anat.T4, tol)),
        "rank(T3 on M)=rank(T3)": abs(nl.rank(T3M, tol) - nl.rank(anat.T3, tol)),
        "rank(T4 on M)=rank(T4)": abs(nl.rank(T4M, tol) - nl.rank(anat.T4, tol)),
    }
    return Restriction(sub, B, False, checks)


@dataclass(frozen=True)
class MatchedWitness:
    polar: nl.PolarParts
    D: np.ndarray  # P_R(Q) - Q
    R_T1_star: Subspace
    R_T2tilde_star: Subspace
    gaps: dict


def matched_pair_witness(Q, tol: Tolerances = DEFAULT_TOL) -> MatchedWitness:
    """Polar parts of P_R(Q) − Q and the range identifications for the matched pair.

    With P = m(Q): R(T1*) = R(P_R(Q) − Q*) and R(T2~*) = R(P_R(Q) − Q).
    """
    Q = nl.as_square(Q, "Q")
    mr = matched_projection(Q, tol)
    pair = verify_pair(mr.mQ, Q, tol)
    anat = anatomize(pair, tol)
    D = mr.range_proj - Q
    pol = nl.polar(D, tol)
    RT1s = nl.range_space(adj(anat.T1), tol)
    RT2ts = nl.range_space(adj(anat.T2tilde), tol)
    # V*V and VV* project onto R(D*) and R(D)
    VsV = nl.range_space(adj(pol.V) @ pol.V, tol)
    VVs = nl.range_space(pol.V @ adj(pol.V), tol)
    gaps = {
        "R(T1*)=R(P_R(Q)-Q*)": nl.subspace_gap(RT1s, nl.range_space(adj(D), tol)),
        "R(T2~*)=R(P_R(Q)-Q)": nl.subspace_gap(RT2ts, nl.range_space(D, tol)),
        "V*V=P_R(D*)": nl.subspace_gap(VsV, RT1s),
        "VV*=P_R(D)": nl.subspace_gap(VVs, RT2ts),
        "D=V|D|": nl.op_norm(D - pol.V @ pol.absT),
    }
    return MatchedWitness(pol, D, RT1s, RT2ts, gaps)
