"""Seeded random generators for projections, idempotents and quasi-projection pairs."""
from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import unitary_group

from .numlin import adj


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def gaussian(rng, m, n=None) -> np.ndarray:
    n = m if n is None else n
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def haar_unitary(n: int, rng) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if n == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def random_projection(n: int, rng, k=None) -> np.ndarray:
    """Projection onto a Haar-random k-dimensional subspace (k uniform in 0..n if omitted)."""
    k = int(rng.integers(0, n + 1)) if k is None else k
    B = haar_unitary(n, rng)[:, :k]
    return B @ adj(B)


def random_projections_batch(n: int, count: int, rng) -> np.ndarray:
    """``count`` Haar-random projections of uniformly drawn rank, shape (count, n, n)."""
    G = gaussian(rng, count * n, n).reshape(count, n, n)
    Qf, R = np.linalg.qr(G)
    # fix the QR phase ambiguity so columns are Haar distributed
    d = np.diagonal(R, axis1=1, axis2=2)
    Qf = Qf * (d / np.abs(d))[:, None, :]
    ranks = rng.integers(0, n + 1, size=count)
    mask = (np.arange(n)[None, :] < ranks[:, None]).astype(float)
    B = Qf * mask[:, None, :]
    return B @ np.conj(np.swapaxes(B, 1, 2))


def random_invertible(n: int, rng, cond_max: float = 50.0) -> np.ndarray:
    """U diag(s) V* with singular values in [1, cond_max) so cond < cond_max."""
    s = np.exp(rng.uniform(0.0, np.log(cond_max) * 0.999, size=n))
    s[0] = 1.0
    return (haar_unitary(n, rng) * s) @ adj(haar_unitary(n, rng))


def random_idempotent(n: int, rng, k=None, cond_max: float = 50.0) -> np.ndarray:
    """S diag(I_k, 0) S^{-1} with cond(S) < cond_max."""
    k = int(rng.integers(0, n + 1)) if k is None else k
    S = random_invertible(n, rng, cond_max)
    D = np.diag(np.r_[np.ones(k), np.zeros(n - k)]).astype(complex)
    return S @ D @ np.linalg.inv(S)


def random_symmetry(n: int, rng, k=None) -> np.ndarray:
    """Self-adjoint unitary J = U diag(I_k, -I_{n-k}) U*."""
    k = int(rng.integers(0, n + 1)) if k is None else k
    U = haar_unitary(n, rng)
    return (U * np.r_[np.ones(k), -np.ones(n - k)]) @ adj(U)


def random_weighted_projection(J: np.ndarray, rng, k=None, attempts: int = 50) -> np.ndarray:
    """J-orthogonal projection Q = B (B*JB)^{-1} B*J onto a random J-nondegenerate range.

    The range is spanned by vectors from the positive and negative eigenspaces
    of J, each tilted into the opposite eigenspace by a contraction of norm
    1/2, so B*JB stays well conditioned.  JQ is Hermitian by construction.
    """
    n = J.shape[0]
    w, U = np.linalg.eigh(0.5 * (J + adj(J)))
    Up, Um = U[:, w > 0], U[:, w <= 0]
    p, m = Up.shape[1], Um.shape[1]
    k = int(rng.integers(0, n + 1)) if k is None else k
    if k == 0:
        return np.zeros((n, n), dtype=complex)
    for _ in range(attempts):
        kp = int(rng.integers(max(0, k - m), min(k, p) + 1))
        cols = []
        for E, F, kk in ((Up, Um, kp), (Um, Up, k - kp)):
            if kk == 0:
                continue
            X = haar_unitary(E.shape[1], rng)[:, :kk]
            K = gaussian(rng, F.shape[1], kk)
            if K.size:
                K *= 0.5 / max(np.linalg.norm(K, 2), 1e-300)
            cols.append(E @ X + F @ K)
        B = np.hstack(cols)
        G = adj(B) @ J @ B
        if np.linalg.cond(G) < 100.0:
            return B @ np.linalg.solve(G, adj(B) @ J)
    raise RuntimeError("could not find a J-nondegenerate subspace")


def _ell_scalar(a: float) -> float:
    return float(np.sqrt(max(a * a - a, 0.0)))


def sample_a_values(m: int, rng) -> np.ndarray:
    """Values with a^2 - a >= 0, kept away from the degenerate points 0 and 1."""
    hi = rng.uniform(1.05, 4.0, size=m)
    lo = rng.uniform(-3.0, -0.05, size=m)
    return np.where(rng.random(m) < 0.5, hi, lo)


def block_quasi_pair(a_values, n1=0, n2=0, n3=0, n4=0) -> tuple[np.ndarray, np.ndarray]:
    """Direct sum of generic 2x2 A-family blocks with trivial blocks.

    n1..n4 are the dimensions of R(P)∩R(Q), R(P)∩N(Q), N(P)∩R(Q), N(P)∩N(Q).
    """
    a_values = np.asarray(a_values, dtype=float)
    blocks_P, blocks_Q = [], []
    for a in a_values:
        l = _ell_scalar(a)
        blocks_P.append(np.diag([1.0, 0.0]))
        blocks_Q.append(np.array([[a, -l], [l, 1.0 - a]]))
    for count, p, q in ((n1, 1, 1), (n2, 1, 0), (n3, 0, 1), (n4, 0, 0)):
        for _ in range(count):
            blocks_P.append(np.array([[p]], dtype=float))
            blocks_Q.append(np.array([[q]], dtype=float))
    if not blocks_P:
        return np.zeros((0, 0), dtype=complex), np.zeros((0, 0), dtype=complex)
    return block_diag(*blocks_P).astype(complex), block_diag(*blocks_Q).astype(complex)


def random_quasi_pair(n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Unitarily rotated direct sum of A-family blocks and trivial blocks.

    Block counts are random, so H1..H4 are nonzero in a good share of draws.
    """
    m = int(rng.integers(0, n // 2 + 1))
    rest = n - 2 * m
    cuts = np.sort(rng.integers(0, rest + 1, size=3))
    n1, n2, n3, n4 = np.diff(np.r_[0, cuts, rest])
    P, Q = block_quasi_pair(sample_a_values(m, rng), n1, n2, n3, n4)
    U = haar_unitary(n, rng)
    return U @ P @ adj(U), U @ Q @ adj(U)


def random_A(n: int, rng) -> np.ndarray:
    """Hermitian A with A^2 - A >= 0: spectrum drawn from sample_a_values plus exact 0s and 1s."""
    w = sample_a_values(n, rng)
    special = rng.random(n) < 0.25
    w[special] = rng.integers(0, 2, size=int(special.sum()))
    U = haar_unitary(n, rng)
    A = (U * w) @ adj(U)
    return 0.5 * (A + adj(A))
