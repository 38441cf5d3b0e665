import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpp import decomp as dc
from qpp import friedrichs as fr
from qpp import numlin as nl
from qpp import qppcore as qc
from qpp import sampling as sp
from qpp.numlin import InputError, Subspace

from conftest import quasi_pairs, seeds


def test_equal_subspaces_have_zero_cosine():
    M = Subspace(np.eye(3, dtype=complex)[:, :2])
    assert fr.friedrichs_cos(M, M) == 0.0
    assert fr.complement_invariance_check(M, M) == 0.0


def test_orthogonal_lines():
    M, N = fr.lines_at_angle(np.pi / 2)
    assert fr.friedrichs_cos(M, N) < 1e-15


def test_lines_at_sixty_degrees():
    M, N = fr.lines_at_angle(np.pi / 3)
    assert fr.friedrichs_cos(M, N) == pytest.approx(0.5, abs=1e-10)
    assert fr.complement_invariance_check(M, N) < 1e-10


def test_ambient_mismatch():
    with pytest.raises(InputError):
        fr.friedrichs_cos(Subspace.full(2), Subspace.full(3))


def test_norm_equation_P_P():
    P = np.diag([1.0, 0.0]).astype(complex)
    pair = qc.verify_pair(P, P)
    rep = fr.norm_equation_check(pair, dc.anatomize(pair))
    assert rep.lhs == rep.rhs == 0.0


def test_lines_at_sixty_degrees_are_not_a_quasi_pair_but_satisfy_the_equation():
    M, N = fr.lines_at_angle(np.pi / 3)
    P, Q = nl.projector(M), nl.projector(N)
    with pytest.raises(qc.PairRejected):
        qc.verify_pair(P, Q)
    rep = fr.projection_norm_equation(P, Q)
    assert rep.lhs == pytest.approx(0.5, abs=1e-12)
    assert rep.rhs == pytest.approx(0.5, abs=1e-12)
    assert rep.cosine == pytest.approx(0.5, abs=1e-12)


def test_projection_norm_equation_requires_projections():
    with pytest.raises(InputError):
        fr.projection_norm_equation(np.array([[1.0, 1.0], [0.0, 0.0]]), np.eye(2))


def test_two_by_two_norm_equation():
    fam = qc.two_by_two_family(1)
    pair = qc.verify_pair(fam.projections[0], fam.Q)
    rep = fr.norm_equation_check(pair, dc.anatomize(pair))
    assert rep.gap < 1e-9
    alpha, beta, meet = rep.max_split
    assert alpha == rep.lhs and meet == 0.0
    assert set(rep.to_json()) >= {"cosine", "lhs", "rhs", "max_split"}


@given(quasi_pairs(max_dim=12))
def test_norm_equation_random(pair):
    rep = fr.norm_equation_check(pair, dc.anatomize(pair))
    assert rep.gap < 1e-8
    assert abs(rep.adjoint_side - rep.rhs) < 1e-8


@given(seeds, st.integers(1, 10))
def test_complement_invariance_and_projection_specialisation(seed, n):
    rng = np.random.default_rng(seed)
    P, Q = sp.random_projection(n, rng), sp.random_projection(n, rng)
    assert fr.complement_invariance_check(nl.range_space(P), nl.range_space(Q)) < 1e-8
    rep = fr.projection_norm_equation(P, Q)
    assert rep.gap < 1e-8
    assert abs(rep.lhs - rep.cosine) < 1e-8
    assert 0.0 <= rep.cosine <= 1.0
