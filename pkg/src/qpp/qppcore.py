"""Quasi-projection pairs, matched projections and the standard constructor families.

A quasi-projection pair is a projection P and an idempotent Q with
Q* = (2P - I) Q (2P - I).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numlin as nl
from .numlin import DEFAULT_TOL, InputError, NotPSDError, NumericalError, Tolerances, adj
from .sampling import random_projections_batch, rng_from

CHARACTERIZATIONS = ("definition", "symmetry", "modulus")


class PairRejected(InputError):
    """(P, Q) failed validation; ``invariant`` names the first failed condition."""

    def __init__(self, invariant: str, residuals: dict | None = None):
        self.invariant = invariant
        self.residuals = dict(residuals or {})
        super().__init__(f"not a quasi-projection pair: {invariant} fails")


@dataclass(frozen=True)
class QuasiPair:
    P: np.ndarray
    Q: np.ndarray
    char_residual: float
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def symmetry(self) -> np.ndarray:
        """The self-adjoint unitary 2P - I."""
        return 2 * self.P - nl.eye_like(self.P)


@dataclass(frozen=True)
class PairDiagnosis:
    residuals: dict
    verdicts: dict
    accepted: bool
    failed: str | None


def pair_residuals(P, Q) -> dict:
    """Residuals of the projection/idempotent invariants and the three characterizations.

    ``definition``: the block conditions PQ*P = PQP, PQ*(I-P) = -PQ(I-P),
    (I-P)Q*(I-P) = (I-P)Q(I-P); ``symmetry``: Q* = (2P-I)Q(2P-I);
    ``modulus``: |Q*| = (2P-I)|Q|(2P-I).
    """
    P = nl.as_square(P, "P")
    Q = nl.as_square(Q, "Q")
    if P.shape != Q.shape:
        raise InputError(f"P and Q shapes differ: {P.shape} vs {Q.shape}")
    I = nl.eye_like(P)
    Pc = I - P
    S = 2 * P - I
    Qs = adj(Q)
    definition = max(
        nl.op_norm(P @ Qs @ P - P @ Q @ P),
        nl.op_norm(P @ Qs @ Pc + P @ Q @ Pc),
        nl.op_norm(Pc @ Qs @ Pc - Pc @ Q @ Pc),
    )
    return {
        "P_projection": nl.is_projection_residual(P),
        "Q_idempotent": nl.idempotency_residual(Q),
        "definition": definition,
        "symmetry": nl.op_norm(Qs - S @ Q @ S),
        "modulus": nl.op_norm(nl.abs_op(Qs) - S @ nl.abs_op(Q) @ S),
    }


def diagnose_pair(P, Q, tol: Tolerances = DEFAULT_TOL) -> PairDiagnosis:
    """Non-raising form of :func:`verify_pair`."""
    res = pair_residuals(P, Q)
    verdicts = {k: bool(v < tol.residual_tol) for k, v in res.items()}
    failed = None
    if not verdicts["P_projection"]:
        failed = "P projection"
    elif not verdicts["Q_idempotent"]:
        failed = "Q idempotent"
    else:
        chars = [verdicts[k] for k in CHARACTERIZATIONS]
        if not all(chars):
            failed = next(k for k in CHARACTERIZATIONS if not verdicts[k])
    return PairDiagnosis(res, verdicts, failed is None, failed)


def verify_pair(P, Q, tol: Tolerances = DEFAULT_TOL) -> QuasiPair:
    """Validate (P, Q) as a quasi-projection pair or raise :class:`PairRejected`."""
    d = diagnose_pair(P, Q, tol)
    if not d.accepted:
        raise PairRejected(d.failed, d.residuals)
    return QuasiPair(
        nl.as_square(P), nl.as_square(Q), d.residuals["symmetry"], d.residuals
    )


def characterization_verdicts_agree(diag: PairDiagnosis) -> bool:
    return len({diag.verdicts[k] for k in CHARACTERIZATIONS}) == 1


def sigma_closure(pair: QuasiPair, tol: Tolerances = DEFAULT_TOL) -> list[QuasiPair]:
    """The eight pairs (A, B), A in {P, I-P}, B in {Q, Q*, I-Q, I-Q*}, each re-validated."""
    I = nl.eye_like(pair.P)
    out = []
    for A in (pair.P, I - pair.P):
        for B in (pair.Q, adj(pair.Q), I - pair.Q, I - adj(pair.Q)):
            out.append(verify_pair(A, B, tol))
    return out


def range_projection_of_idempotent(Q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """P_R(Q) = Q (Q + Q* - I)^{-1}."""
    Q = nl.as_square(Q, "Q")
    if Q.size == 0:
        return Q.copy()
    K = Q + adj(Q) - nl.eye_like(Q)
    s = np.linalg.svd(K, compute_uv=False)
    # for an idempotent, K is invertible with smallest singular value >= 1
    if s[-1] < tol.rank_rel_tol * s[0]:
        raise NumericalError("Q + Q* - I is singular: Q is not idempotent")
    R = Q @ np.linalg.inv(K)
    return 0.5 * (R + adj(R))


@dataclass(frozen=True)
class MatchedResult:
    mQ: np.ndarray
    abs_Qstar: np.ndarray
    abs_Qstar_pinv: np.ndarray
    range_proj: np.ndarray
    pinv_route_gap: float


def matched_projection(Q, tol: Tolerances = DEFAULT_TOL) -> MatchedResult:
    """m(Q) = ½(|Q*| + Q*) |Q*|^† (|Q*| + I)^{-1} (|Q*| + Q).

    |Q*|^† is computed twice, by direct pseudo-inversion and as
    (P_R(Q) P_R(Q*) P_R(Q))^{1/2}; the two must agree.
    """
    Q = nl.as_square(Q, "Q")
    if nl.idempotency_residual(Q) >= tol.residual_tol:
        raise InputError("matched_projection needs an idempotent Q")
    I = nl.eye_like(Q)
    Qs = adj(Q)
    A = nl.abs_op(Qs)
    A_pinv = nl.pinv(A, tol)
    R_Q = range_projection_of_idempotent(Q, tol)
    R_Qs = range_projection_of_idempotent(Qs, tol)
    A_pinv_alt = nl.psd_sqrt(R_Q @ R_Qs @ R_Q, tol)
    gap = nl.op_norm(A_pinv - A_pinv_alt)
    if gap >= tol.residual_tol:
        raise NumericalError(f"|Q*|^† routes disagree by {gap:.3e}")
    m = 0.5 * (A + Qs) @ A_pinv @ np.linalg.inv(A + I) @ (A + Q)
    m = 0.5 * (m + adj(m))
    return MatchedResult(m, A, A_pinv, R_Q, gap)


def ell(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """(A^2 - A)^{1/2} for Hermitian A with A^2 - A >= 0."""
    A = nl.as_square(A, "A")
    try:
        return nl.psd_sqrt(A @ A - A, tol, scale=max(1.0, nl.op_norm(A) ** 2))
    except NotPSDError as exc:
        raise InputError(f"A-family precondition violated: {exc}") from exc


def build_from_A(A, tol: Tolerances = DEFAULT_TOL) -> QuasiPair:
    """P = diag(I, 0), Q = [[A, -ℓ(A)], [ℓ(A), I - A]] on the doubled space."""
    A = nl.as_square(A, "A")
    if nl.hermitian_residual(A) >= tol.residual_tol:
        raise InputError("A must be Hermitian")
    L = ell(A, tol)
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    Z = np.zeros((n, n), dtype=complex)
    P = np.block([[I, Z], [Z, Z]])
    Q = np.block([[A, -L], [L, I - A]])
    return verify_pair(P, Q, tol)


def build_krein(J, Q, tol: Tolerances = DEFAULT_TOL) -> QuasiPair:
    """(J₊, Q) with J₊ = ½(I + J); accepted iff Q is a J-weighted projection."""
    J = nl.as_square(J, "J")
    Q = nl.as_square(Q, "Q")
    I = nl.eye_like(J)
    if nl.hermitian_residual(J) >= tol.residual_tol or nl.op_norm(J @ J - I) >= tol.residual_tol:
        raise InputError("J is not a symmetry (J = J*, J^2 = I)")
    if nl.idempotency_residual(Q) >= tol.residual_tol:
        raise InputError("Q is not idempotent")
    Jp = 0.5 * (I + J)
    weighted = nl.hermitian_residual(J @ Q) < tol.residual_tol
    diag = diagnose_pair(Jp, Q, tol)
    if weighted != diag.accepted:
        raise NumericalError("weighted-projection test and pair validation disagree")
    if not weighted:
        raise PairRejected("(JQ)* = JQ", diag.residuals)
    return verify_pair(Jp, Q, tol)


@dataclass(frozen=True)
class TwoByTwoFamily:
    Q: np.ndarray
    projections: tuple  # P0 = m(Q), P1, P2 = I - P0, P3 = I - P1

    @property
    def pairing(self) -> tuple:
        """The projections among P0..P3 that pair with Q."""
        return self.projections[0], self.projections[2]


def two_by_two_family(a: complex) -> TwoByTwoFamily:
    """Q = [[1, a], [0, 0]] with the closed forms P0 = m(Q), P1, P2 = I - P0, P3 = I - P1.

    Of these only P0 and P2 form quasi-projection pairs with Q; a search over
    all rank-one projections finds no others.  P1 and P3 fail the symmetry
    condition by a residual of order |a|.
    """
    a = complex(a)
    if a == 0:
        raise InputError("a must be nonzero (Q would be a projection)")
    b = np.sqrt(1 + abs(a) ** 2)
    Q = np.array([[1, a], [0, 0]], dtype=complex)
    P0 = np.array([[b + 1, a], [np.conj(a), b - 1]], dtype=complex) / (2 * b)
    P1 = np.array([[b - 1, a], [np.conj(a), b + 1]], dtype=complex) / (2 * b)
    I = np.eye(2, dtype=complex)
    return TwoByTwoFamily(Q, (P0, P1, I - P0, I - P1))


@dataclass(frozen=True)
class ProbeReport:
    min_dist: float
    max_dist: float
    lower_bound: float
    upper_bound: float
    violations: int
    samples: int

    def to_json(self) -> dict:
        return {
            "min_dist": self.min_dist,
            "max_dist": self.max_dist,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "violations": self.violations,
        }


def distance_extremality_probe(
    Q, samples: int, seed, tol: Tolerances = DEFAULT_TOL, slack: float = 1e-9, chunk: int = 4096
) -> ProbeReport:
    """Sample Haar-random projections P of every rank and compare ‖P − Q‖ with
    the bounds ‖m(Q) − Q‖ and ‖I − m(Q) − Q‖."""
    Q = nl.as_square(Q, "Q")
    n = Q.shape[0]
    m = matched_projection(Q, tol).mQ
    I = nl.eye_like(Q)
    lower = nl.op_norm(m - Q)
    upper = nl.op_norm(I - m - Q)
    rng = rng_from(seed)
    lo, hi, violations = np.inf, -np.inf, 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        Ps = random_projections_batch(n, k, rng)
        d = np.linalg.svd(Ps - Q[None], compute_uv=False)[:, 0]
        violations += int(np.count_nonzero(d < lower - slack))
        violations += int(np.count_nonzero(d > upper + slack))
        lo, hi = min(lo, float(d.min())), max(hi, float(d.max()))
        done += k
    return ProbeReport(lo, hi, lower, upper, violations, samples)
