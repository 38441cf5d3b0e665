import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpp import decomp as dc
from qpp import numlin as nl
from qpp import qppcore as qc
from qpp import simequiv as se
from qpp.numlin import InputError

from conftest import quasi_pairs

TOL = 1e-8


def _anat(P, Q):
    pair = qc.verify_pair(P, Q)
    return pair, dc.anatomize(pair)


def test_P_P_gives_identity():
    P = np.diag([1.0, 0.0, 1.0]).astype(complex)
    pair, anat = _anat(P, P)
    W = se.build_W(anat)
    np.testing.assert_allclose(W.W, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(W.Ptilde, np.zeros((3, 3)), atol=1e-15)
    assert se.verify_similarity(W, pair, anat).worst < 1e-15
    U = se.build_U(anat)
    np.testing.assert_allclose(U.U, np.eye(3), atol=1e-15)
    assert se.ep_check(anat).worst < 1e-15


def test_two_by_two_example():
    fam = qc.two_by_two_family(1)
    pair, anat = _anat(fam.projections[0], fam.Q)
    assert se.verify_similarity(se.build_W(anat), pair, anat).worst < 1e-9
    cert = se.verify_unitary(se.build_U(anat), anat)
    assert cert.residuals["U*U = I"] < 1e-10
    assert cert.worst < 1e-9
    assert se.ep_check(anat).worst < 1e-9


def test_lambda_validation():
    fam = qc.two_by_two_family(1)
    _, anat = _anat(fam.projections[0], fam.Q)
    with pytest.raises(InputError):
        se.build_W(anat, (1, 0, 1))
    with pytest.raises(InputError):
        se.build_W(anat, (1, 1))
    with pytest.raises(InputError):
        se.build_U(anat, (2, 1, 1))


def test_W_is_not_unitary_when_Q_is_oblique():
    fam = qc.two_by_two_family(1)
    _, anat = _anat(fam.projections[0], fam.Q)
    gap = se.norm_gap(anat)
    assert gap.complement_norm > 1 >= gap.compressed_norm
    assert gap.holds
    W = se.build_W(anat).W
    assert nl.op_norm(W.conj().T @ W - np.eye(2)) > 1e-3


def test_solution_json_header():
    P = np.diag([1.0, 0.0])
    _, anat = _anat(P, P)
    assert len(se.build_W(anat, (1, 2j, -1)).to_json()["lambda"]) == 3


lambdas = st.tuples(*(st.floats(0, 2 * np.pi) for _ in range(3))).map(lambda t: tuple(np.exp(1j * np.array(t))))


@given(quasi_pairs(), lambdas)
def test_similarity_and_unitary_for_every_pair(pair, ls):
    anat = dc.anatomize(pair)
    assert se.verify_similarity(se.build_W(anat, ls), pair, anat).worst < TOL
    assert se.verify_unitary(se.build_U(anat, ls), anat).worst < TOL
    assert se.ep_check(anat).worst < TOL


@given(quasi_pairs(), st.tuples(*(st.complex_numbers(min_magnitude=0.1, max_magnitude=10) for _ in range(3))))
def test_similarity_for_non_unit_lambdas(pair, ls):
    anat = dc.anatomize(pair)
    sol = se.build_W(anat, ls)
    scale = max(1.0, *(abs(l) for l in ls)) / min(1.0, *(abs(l) for l in ls))
    assert se.verify_similarity(sol, pair, anat).worst < TOL * scale


@given(quasi_pairs())
def test_structure_and_norm_gap(pair):
    anat = dc.anatomize(pair)
    res = se.structure_residuals(anat)
    assert res["V2*V1=0"] < 1e-10 and res["V1*V2=0"] < 1e-10
    assert max(res.values()) < TOL
    assert se.norm_gap(anat).holds
