import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, strategies as st

from qpp import numlin as nl
from qpp.numlin import InputError, NotPSDError, Subspace, Tolerances
from qpp.sampling import gaussian

from conftest import seeds


def test_as_cmatrix_rejects_bad_input():
    with pytest.raises(InputError):
        nl.as_cmatrix([1.0, 2.0])
    with pytest.raises(InputError):
        nl.as_cmatrix([[np.nan]])
    with pytest.raises(InputError):
        nl.as_square(np.zeros((2, 3)))


@pytest.mark.parametrize("field", ["rank_rel_tol", "psd_clamp_tol", "residual_tol", "cluster_tol", "rank_abs_tol"])
def test_tolerances_must_be_positive(field):
    with pytest.raises(InputError):
        Tolerances(**{field: 0.0})


def test_tolerances_env_override(monkeypatch):
    monkeypatch.setenv("QPP_TOL_RESIDUAL", "1e-6")
    assert Tolerances.from_env().residual_tol == 1e-6
    assert Tolerances.from_env(residual_tol=1e-4).residual_tol == 1e-4
    monkeypatch.setenv("QPP_TOL_RESIDUAL", "abc")
    with pytest.raises(InputError):
        Tolerances.from_env()


def test_psd_sqrt_diagonal():
    np.testing.assert_allclose(nl.psd_sqrt(np.diag([4.0, 9.0, 0.0])), np.diag([2.0, 3.0, 0.0]), atol=1e-15)


def test_psd_sqrt_clamps_rounding_and_rejects_negative():
    B = nl.psd_sqrt(np.diag([1.0, -1e-14]))
    np.testing.assert_allclose(B, np.diag([1.0, 0.0]), atol=1e-15)
    with pytest.raises(NotPSDError):
        nl.psd_sqrt(np.diag([1.0, -1e-3]))
    with pytest.raises(InputError):
        nl.psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_abs_op_against_sqrtm(rng):
    T = gaussian(rng, 5)
    np.testing.assert_allclose(nl.abs_op(T), sla.sqrtm(T.conj().T @ T), atol=1e-12)


def test_pinv_matches_numpy_and_penrose(rng):
    T = gaussian(rng, 6, 3) @ gaussian(rng, 3, 5)
    X = nl.pinv(T)
    np.testing.assert_allclose(X, np.linalg.pinv(T, rcond=1e-10), atol=1e-10)
    assert max(nl.penrose_residuals(T, X)) < 1e-12


def test_rank_floor_ignores_rounding_level_matrices(rng):
    assert nl.rank(1e-16 * gaussian(rng, 6)) == 0
    assert nl.range_space(1e-16 * gaussian(rng, 6)).dim == 0
    assert nl.null_space(1e-16 * gaussian(rng, 6)).dim == 6
    assert nl.rank(gaussian(rng, 6, 2) @ gaussian(rng, 2, 6)) == 2


def test_polar_invertible_matches_scipy(rng):
    T = gaussian(rng, 4)
    parts = nl.polar(T)
    U, H = sla.polar(T)
    np.testing.assert_allclose(parts.V, U, atol=1e-12)
    np.testing.assert_allclose(parts.absT, H, atol=1e-12)


def test_polar_singular_is_partial_isometry(rng):
    T = gaussian(rng, 5, 2) @ gaussian(rng, 2, 5)
    parts = nl.polar(T)
    V = parts.V
    assert nl.op_norm(V @ parts.absT - T) < 1e-12
    proj = nl.projector(nl.range_space(T.conj().T))
    assert nl.op_norm(V.conj().T @ V - proj) < 1e-12


def test_polar_is_deterministic(rng):
    T = gaussian(rng, 4, 2) @ gaussian(rng, 2, 4)
    np.testing.assert_array_equal(nl.polar(T).V, nl.polar(T.copy()).V)


def test_meet_and_sum_of_coordinate_planes():
    e = np.eye(3, dtype=complex)
    A, B = Subspace(e[:, [0, 1]]), Subspace(e[:, [1, 2]])
    meet = nl.subspace_meet(A, B)
    assert meet.dim == 1
    assert nl.subspace_gap(meet, Subspace(e[:, [1]])) < 1e-15
    assert nl.subspace_sum(A, B).dim == 3
    assert nl.subspace_gap(A, B) == pytest.approx(1.0)


def test_ambient_mismatch():
    with pytest.raises(InputError):
        nl.subspace_meet(Subspace.full(2), Subspace.full(3))


def test_complement_of_zero_and_full():
    assert nl.complement(Subspace.zero(3)).dim == 3
    assert nl.complement(Subspace.full(3)).dim == 0


@given(seeds, st.integers(1, 8), st.integers(1, 8), st.integers(0, 8))
def test_rank_nullity_and_orthonormal_bases(seed, m, n, k):
    rng = np.random.default_rng(seed)
    k = min(k, m, n)
    T = gaussian(rng, m, k) @ gaussian(rng, k, n) if k else np.zeros((m, n), dtype=complex)
    R, N = nl.range_space(T), nl.null_space(T)
    assert R.dim == k
    assert R.dim + N.dim == n
    assert R.orthonormality_residual() < 1e-12
    assert nl.op_norm(T @ N.basis) < 1e-10 * max(1.0, nl.op_norm(T))


@given(seeds, st.integers(1, 8))
def test_meet_is_contained_in_both(seed, n):
    rng = np.random.default_rng(seed)
    common = gaussian(rng, n, rng.integers(0, n + 1))
    A = nl.range_space(np.hstack([common, gaussian(rng, n, 1)]))
    B = nl.range_space(np.hstack([common, gaussian(rng, n, 1)]))
    M = nl.subspace_meet(A, B)
    PA, PB, PM = nl.projector(A), nl.projector(B), nl.projector(M)
    assert nl.op_norm(PA @ PM - PM) < 1e-9
    assert nl.op_norm(PB @ PM - PM) < 1e-9
    assert M.dim >= nl.rank(common)
