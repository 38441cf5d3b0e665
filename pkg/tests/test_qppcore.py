import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize

from qpp import numlin as nl
from qpp import qppcore as qc
from qpp import sampling as sp
from qpp.numlin import InputError

from conftest import quasi_pairs, seeds

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])


def closed_form(a):
    b = np.sqrt(1 + abs(a) ** 2)
    return np.array([[b + 1, a], [np.conj(a), b - 1]]) / (2 * b)


@pytest.mark.parametrize("a", [1, 2j, -0.3 + 0.7j])
def test_matched_projection_closed_form(a):
    Q = np.array([[1, a], [0, 0]], dtype=complex)
    assert np.max(np.abs(qc.matched_projection(Q).mQ - closed_form(a))) < 1e-10


@pytest.mark.parametrize("a", [1, 2j, 0.5 - 1j])
def test_two_by_two_family_pairing(a):
    fam = qc.two_by_two_family(a)
    for P in fam.projections:
        assert nl.rank(P) == 1
        assert nl.is_projection_residual(P) < 1e-15
    P0, P1, P2, P3 = fam.projections
    qc.verify_pair(P0, fam.Q)
    qc.verify_pair(P2, fam.Q)
    for P in (P1, P3):
        with pytest.raises(qc.PairRejected):
            qc.verify_pair(P, fam.Q)


def _bloch_pair_solutions(Q, starts=30):
    """Rank-one projections P with (P, Q) a quasi-projection pair, found by minimising the symmetry residual."""
    rng = np.random.default_rng(0)

    def f(v):
        S = 2 * _bloch_projection(v) - np.eye(2)
        return np.linalg.norm(Q.conj().T - S @ Q @ S)

    found = []
    for _ in range(starts):
        r = minimize(f, rng.standard_normal(3), method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
        if r.fun < 1e-6:
            P = _bloch_projection(r.x)
            if not any(np.allclose(P, S, atol=1e-5) for S in found):
                found.append(P)
    return found


@pytest.mark.parametrize("a", [1, 2j])
def test_only_two_rank_one_projections_pair_with_Q(a):
    fam = qc.two_by_two_family(a)
    found = _bloch_pair_solutions(fam.Q)
    assert len(found) == 2
    for P in fam.pairing:
        assert any(np.allclose(P, S, atol=1e-5) for S in found)


def test_two_by_two_rejects_zero():
    with pytest.raises(InputError):
        qc.two_by_two_family(0)


def _bloch_projection(v):
    n = v / np.linalg.norm(v)
    return 0.5 * (np.eye(2) + np.tensordot(n, PAULI, axes=1))


def _sphere_extremes(Q):
    """Brute-force min/max of ‖P - Q‖ over rank-one projections: 10^4-point sphere grid plus local refinement."""
    k = np.arange(10_000) + 0.5
    phi = np.arccos(1 - 2 * k / 10_000)
    theta = np.pi * (1 + 5**0.5) * k
    pts = np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)
    Ps = 0.5 * (np.eye(2) + np.einsum("ki,ijl->kjl", pts, PAULI))
    d = np.linalg.norm(Ps - Q, ord=2, axis=(1, 2))
    f = lambda v: nl.op_norm(_bloch_projection(v) - Q)  # noqa: E731
    lo = minimize(f, pts[np.argmin(d)], method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14}).fun
    hi = -minimize(lambda v: -f(v), pts[np.argmax(d)], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14}).fun
    # ranks 0 and 2
    others = [nl.op_norm(Q), nl.op_norm(np.eye(2) - Q)]
    return min(lo, *others), max(hi, *others)


@pytest.mark.parametrize("a", [1, 2j])
def test_matched_projection_minimises_distance_against_sphere_oracle(a):
    Q = np.array([[1, a], [0, 0]], dtype=complex)
    m = qc.matched_projection(Q).mQ
    lo, hi = _sphere_extremes(Q)
    assert nl.op_norm(m - Q) == pytest.approx(lo, abs=1e-9)
    assert nl.op_norm(np.eye(2) - m - Q) == pytest.approx(hi, abs=1e-9)


def test_a_equals_one_distances_frozen():
    # frozen from the sphere oracle above
    Q = np.array([[1, 1], [0, 0]], dtype=complex)
    m = qc.matched_projection(Q).mQ
    assert nl.op_norm(m - Q) == pytest.approx(0.7071067811865476, abs=1e-12)
    assert nl.op_norm(np.eye(2) - m - Q) == pytest.approx(1.7071067811865475, abs=1e-12)


def test_reject_example_residuals():
    P = np.diag([1.0, 0.0])
    Q = np.array([[1.0, 1.0], [0.0, 0.0]])
    res = qc.pair_residuals(P, Q)
    for k in qc.CHARACTERIZATIONS:
        assert res[k] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(qc.PairRejected) as info:
        qc.verify_pair(P, Q)
    assert info.value.invariant == "definition"


def test_verify_rejects_non_projection_and_non_idempotent():
    with pytest.raises(qc.PairRejected) as info:
        qc.verify_pair(np.diag([2.0, 0.0]), np.diag([1.0, 0.0]))
    assert info.value.invariant == "P projection"
    with pytest.raises(qc.PairRejected) as info:
        qc.verify_pair(np.diag([1.0, 0.0]), np.diag([2.0, 0.0]))
    assert info.value.invariant == "Q idempotent"
    with pytest.raises(InputError):
        qc.verify_pair(np.eye(2), np.eye(3))


def test_trivial_pair_P_P():
    P = np.diag([1.0, 1.0, 0.0])
    pair = qc.verify_pair(P, P)
    assert pair.char_residual == 0.0


def test_A_family():
    pair = qc.build_from_A(np.diag([2.0, -1.0]))
    assert pair.n == 4
    L = pair.Q[:2, 2:]
    np.testing.assert_allclose(-L, np.diag([np.sqrt(2.0), np.sqrt(2.0)]), atol=1e-14)
    with pytest.raises(InputError):
        qc.build_from_A(np.diag([0.5]))
    with pytest.raises(InputError):
        qc.build_from_A(np.array([[2.0, 1.0], [0.0, 2.0]]))


def test_A_equal_identity_gives_Q_equal_P():
    pair = qc.build_from_A(np.eye(2))
    np.testing.assert_allclose(pair.Q, pair.P, atol=1e-15)


def test_krein_accept_and_reject(rng):
    J = sp.random_symmetry(4, rng, k=2)
    Q = sp.random_weighted_projection(J, rng, k=2)
    pair = qc.build_krein(J, Q)
    assert pair.char_residual < 1e-9
    Q_bad = sp.random_idempotent(4, rng, k=2)
    with pytest.raises(qc.PairRejected) as info:
        qc.build_krein(J, Q_bad)
    assert info.value.invariant == "(JQ)* = JQ"
    with pytest.raises(InputError):
        qc.build_krein(np.diag([1.0, 2.0]), np.eye(2))


def test_range_projection_of_idempotent(rng):
    Q = sp.random_idempotent(5, rng, k=2)
    R = qc.range_projection_of_idempotent(Q)
    assert nl.op_norm(R - nl.projector(nl.range_space(Q))) < 1e-10


def test_matched_requires_idempotent():
    with pytest.raises(InputError):
        qc.matched_projection(np.diag([2.0, 0.0]))


def test_probe_on_two_by_two():
    Q = np.array([[1, 1], [0, 0]], dtype=complex)
    rep = qc.distance_extremality_probe(Q, 10_000, seed=7)
    assert rep.violations == 0
    assert rep.lower_bound <= rep.min_dist
    assert rep.max_dist <= rep.upper_bound + 1e-9


@given(seeds, st.integers(1, 8))
def test_matched_pair_always_validates(seed, n):
    rng = np.random.default_rng(seed)
    Q = sp.random_idempotent(n, rng)
    mr = qc.matched_projection(Q)
    assert mr.pinv_route_gap < 1e-8
    qc.verify_pair(mr.mQ, Q)


@given(seeds, st.integers(1, 8))
def test_characterization_verdicts_agree_on_random_inputs(seed, n):
    rng = np.random.default_rng(seed)
    P = sp.random_projection(n, rng)
    Q = sp.random_idempotent(n, rng)
    assert qc.characterization_verdicts_agree(qc.diagnose_pair(P, Q))


@given(quasi_pairs())
def test_sigma_closure(pair):
    assert len(qc.sigma_closure(pair)) == 8


@given(quasi_pairs(max_dim=6))
def test_constructed_pairs_have_tiny_residuals(pair):
    d = qc.diagnose_pair(pair.P, pair.Q)
    assert d.accepted
    assert max(d.residuals.values()) < 1e-9
