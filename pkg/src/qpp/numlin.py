"""Dense complex linear algebra with an explicit tolerance policy.

Every operator is a 2-D complex ``numpy`` array.  Ranks are decided by a
relative singular-value cutoff so that all identities are scale invariant.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np


class InputError(ValueError):
    """Malformed operator: wrong shape, non-finite entries, broken precondition."""


class NotPSDError(InputError):
    pass


class NumericalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Thresholds shared by every check in the package.

    ``psd_clamp_tol`` is relative to the spectral radius of the matrix being
    square-rooted.  Singular values below ``max(rank_rel_tol * sigma_max,
    rank_abs_tol)`` count as zero; the absolute floor keeps rounding-level
    matrices such as a computed T3 = 0 at rank 0.
    """

    rank_rel_tol: float = 1e-10
    psd_clamp_tol: float = 1e-10
    residual_tol: float = 1e-8
    cluster_tol: float = 1e-8
    rank_abs_tol: float = 1e-11

    def __post_init__(self):
        for name in ("rank_rel_tol", "psd_clamp_tol", "residual_tol", "cluster_tol", "rank_abs_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InputError(f"{name} must be strictly positive, got {value!r}")

    @classmethod
    def from_env(cls, **overrides) -> "Tolerances":
        """Defaults, with ``QPP_TOL_RESIDUAL`` applied, then explicit overrides."""
        tol = cls()
        env = os.environ.get("QPP_TOL_RESIDUAL")
        if env:
            try:
                tol = replace(tol, residual_tol=float(env))
            except ValueError as exc:
                raise InputError(f"bad QPP_TOL_RESIDUAL={env!r}") from exc
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(tol, **overrides) if overrides else tol


DEFAULT_TOL = Tolerances()


def as_cmatrix(T, name: str = "T") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    A = np.asarray(T, dtype=complex)
    if A.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def as_square(T, name: str = "T") -> np.ndarray:
    A = as_cmatrix(T, name)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    return A


def adj(T: np.ndarray) -> np.ndarray:
    return T.conj().T


def eye_like(T: np.ndarray) -> np.ndarray:
    return np.eye(T.shape[0], dtype=complex)


def op_norm(T) -> float:
    """Operator 2-norm (largest singular value)."""
    A = as_cmatrix(T)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def _rank_from_singular(s: np.ndarray, tol: Tolerances) -> int:
    if s.size == 0:
        return 0
    cutoff = max(tol.rank_rel_tol * s[0], tol.rank_abs_tol)
    return int(np.count_nonzero(s >= cutoff))


def hermitian_residual(A: np.ndarray) -> float:
    return op_norm(A - adj(A))


def psd_sqrt(A, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues within ``psd_clamp_tol * max(spectral_radius, scale)`` of zero
    are set to zero; anything more negative raises :class:`NotPSDError`.
    ``scale`` lets callers forming A from larger operators (A = B^2 - B, say)
    size the window by the inputs rather than by a possibly tiny result.
    """
    A = as_square(A, "A")
    if A.size == 0:
        return A.copy()
    scale = max(op_norm(A), 1.0)
    if hermitian_residual(A) > tol.residual_tol * scale:
        raise InputError("psd_sqrt needs a Hermitian matrix")
    H = 0.5 * (A + adj(A))
    w, U = np.linalg.eigh(H)
    radius = float(np.max(np.abs(w)))
    window = tol.psd_clamp_tol * max(radius, scale)
    if w[0] < -window:
        raise NotPSDError(f"not PSD: eigenvalue {w[0]:.3e} below -{window:.3e}")
    w = np.where(w <= window, 0.0, w)
    B = (U * np.sqrt(w)) @ adj(U)
    return 0.5 * (B + adj(B))


def abs_op(T) -> np.ndarray:
    """|T| = (T*T)^(1/2), computed from the SVD of T (no squaring of small values)."""
    A = as_cmatrix(T)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    n = A.shape[1]
    full = np.zeros(n)
    full[: s.size] = s
    B = (adj(Vh) * full) @ Vh
    return 0.5 * (B + adj(B))


def pinv(T, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse with a relative singular-value cutoff."""
    A = as_cmatrix(T)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m), dtype=complex)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = _rank_from_singular(s, tol)
    return (adj(Vh[:r]) / s[:r]) @ adj(U[:, :r])


def penrose_residuals(T: np.ndarray, X: np.ndarray) -> tuple[float, float, float, float]:
    """Residuals of TXT=T, XTX=X, (TX)*=TX, (XT)*=XT."""
    TX, XT = T @ X, X @ T
    return (
        op_norm(TX @ T - T),
        op_norm(XT @ X - X),
        op_norm(adj(TX) - TX),
        op_norm(adj(XT) - XT),
    )


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^ambient held as an orthonormal column basis."""

    basis: np.ndarray

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(np.zeros((ambient, 0), dtype=complex))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(np.eye(ambient, dtype=complex))

    def orthonormality_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        return op_norm(adj(self.basis) @ self.basis - np.eye(self.dim))


@dataclass(frozen=True)
class PolarParts:
    """T = V |T| with V*V the projection onto the closure of R(T*)."""

    V: np.ndarray
    absT: np.ndarray


def _normalize_phases(U: np.ndarray, Vh: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # first entry above 1e-12 of each right-singular vector made real positive;
    # compensating phase on the left vector keeps U diag(s) Vh unchanged
    V = adj(Vh)
    U = U.copy()
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            c = col[idx[0]]
            phase = np.conj(c) / abs(c)
            V[:, j] *= phase
            U[:, j] *= phase
    return U, adj(V)


def polar(T, tol: Tolerances = DEFAULT_TOL) -> PolarParts:
    """Polar decomposition T = V|T| with V a partial isometry (not a full unitary)."""
    A = as_cmatrix(T)
    m, n = A.shape
    if A.size == 0:
        return PolarParts(np.zeros((m, n), dtype=complex), np.zeros((n, n), dtype=complex))
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = _rank_from_singular(s, tol)
    Ur, Vhr = _normalize_phases(U[:, :r], Vh[:r])
    return PolarParts(Ur @ Vhr, abs_op(A))


def range_space(T, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the column space at the relative rank cutoff."""
    A = as_cmatrix(T)
    if A.size == 0:
        return Subspace.zero(A.shape[0])
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    return Subspace(U[:, : _rank_from_singular(s, tol)])


def null_space(T, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Right-singular vectors belonging to discarded singular values."""
    A = as_cmatrix(T)
    n = A.shape[1]
    if A.size == 0:
        return Subspace.full(n)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = _rank_from_singular(s, tol)
    return Subspace(adj(Vh[r:]))


def rank(T, tol: Tolerances = DEFAULT_TOL) -> int:
    A = as_cmatrix(T)
    if A.size == 0:
        return 0
    return _rank_from_singular(np.linalg.svd(A, compute_uv=False), tol)


def projector(S: Subspace) -> np.ndarray:
    """Orthogonal projection onto S."""
    B = S.basis
    Pi = B @ adj(B)
    return 0.5 * (Pi + adj(Pi))


def complement(S: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    return null_space(adj(S.basis), tol) if S.dim else Subspace.full(S.ambient)


def _check_ambient(*spaces: Subspace) -> int:
    ambients = {S.ambient for S in spaces}
    if len(ambients) != 1:
        raise InputError(f"ambient dimension mismatch: {sorted(ambients)}")
    return ambients.pop()


def subspace_meet(A: Subspace, B: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """A ∩ B as the eigenvalue-1 cluster of P_A P_B P_A."""
    n = _check_ambient(A, B)
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(n)
    # work in A's coordinates: P_A P_B P_A restricted to A is C C* with C = A*B
    C = adj(A.basis) @ B.basis
    w, X = np.linalg.eigh(C @ adj(C))
    keep = w >= 1.0 - tol.cluster_tol
    return Subspace(A.basis @ X[:, keep])


def subspace_sum(*spaces: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Sum of subspaces via the range of the concatenated bases."""
    n = _check_ambient(*spaces)
    stacked = np.hstack([S.basis for S in spaces]) if spaces else np.zeros((n, 0))
    if stacked.shape[1] == 0:
        return Subspace.zero(n)
    U, s, _ = np.linalg.svd(stacked, full_matrices=False)
    return Subspace(U[:, : _rank_from_singular(s, tol)])


def subspace_gap(A: Subspace, B: Subspace) -> float:
    """‖P_A − P_B‖: sine of the largest principal angle, 1 when dimensions differ."""
    _check_ambient(A, B)
    if A.dim != B.dim:
        return 1.0
    return op_norm(projector(A) - projector(B))


def is_projection_residual(P: np.ndarray) -> float:
    return max(op_norm(P @ P - P), op_norm(adj(P) - P))


def idempotency_residual(Q: np.ndarray) -> float:
    return op_norm(Q @ Q - Q)
