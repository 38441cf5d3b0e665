import numpy as np
import pytest
from hypothesis import given

from qpp import decomp as dc
from qpp import numlin as nl
from qpp import qppcore as qc
from qpp import sampling as sp
from qpp.numlin import InputError

from conftest import quasi_pairs

TOL = 1e-8


def _pair(P, Q):
    pair = qc.verify_pair(P, Q)
    return pair, dc.anatomize(pair)


def test_anatomy_of_P_P():
    P = np.diag([1.0, 1.0, 0.0]).astype(complex)
    pair, anat = _pair(P, P)
    for T in (anat.T1, anat.T2, anat.T3, anat.T4):
        assert nl.op_norm(T) == 0.0
    assert [anat.H(i).dim for i in range(1, 7)] == [2, 0, 0, 1, 0, 0]
    assert anat.M.dim == 0
    assert dc.certify_semiharmony(anat, pair).passed
    assert dc.certify_harmony(anat, pair).passed


def test_two_by_two_anatomy():
    fam = qc.two_by_two_family(1)
    pair, anat = _pair(fam.projections[0], fam.Q)
    assert [anat.H(i).dim for i in range(1, 7)] == [0, 0, 0, 0, 1, 1]
    assert anat.M.dim == 2
    assert dc.certify_semiharmony(anat, pair).worst < 1e-12
    assert dc.certify_harmony(anat, pair).worst < 1e-12
    assert max(dc.invariant_residuals(anat).values()) < 1e-12


def test_block_pair_dimensions():
    P, Q = sp.block_quasi_pair([2.0, -1.0], n1=1, n2=2, n3=1, n4=3)
    pair, anat = _pair(P, Q)
    assert [anat.H(i).dim for i in range(1, 5)] == [1, 2, 1, 3]
    assert anat.H5.dim == anat.H6.dim == 2
    assert anat.M.dim == 2 * 2 + 2 + 1


def test_certificate_rejects_foreign_anatomy():
    P = np.diag([1.0, 0.0])
    pair, anat = _pair(P, P)
    other = qc.verify_pair(np.diag([0.0, 1.0]), np.diag([0.0, 1.0]))
    with pytest.raises(InputError):
        dc.certify_semiharmony(anat, other)


def test_cert_report_json():
    rep = dc.CertReport({"a": 0.0, "b": 1.0}, 1e-8)
    assert rep.failures() == ["b"]
    assert rep.to_json()["a"] == {"residual": 0.0, "pass": True}
    assert not rep.passed


def test_restriction_of_trivial_pair_is_empty():
    P = np.diag([1.0, 0.0])
    r = dc.restrict_to_M(qc.verify_pair(P, P))
    assert r.empty and r.pair is None


def test_matched_witness_two_by_two():
    fam = qc.two_by_two_family(2j)
    w = dc.matched_pair_witness(fam.Q)
    assert max(w.gaps.values()) < 1e-12


@given(quasi_pairs())
def test_certificates_hold_for_every_pair(pair):
    anat = dc.anatomize(pair)
    assert dc.certify_semiharmony(anat, pair).worst < TOL
    assert dc.certify_harmony(anat, pair).worst < TOL
    res = dc.invariant_residuals(anat)
    assert res["T1+T2 Hermitian"] < 1e-10
    assert max(res.values()) < TOL


@given(quasi_pairs(max_dim=8))
def test_semiharmony_is_stable_under_the_four_pair_operations(pair):
    assert max(dc.semiharmony_sigma_stability(pair).values()) < TOL


@given(quasi_pairs())
def test_restriction_to_M(pair):
    r = dc.restrict_to_M(pair)
    if r.empty:
        return
    assert max(r.checks.values()) < TOL
    sub = dc.anatomize(r.pair)
    assert dc.certify_semiharmony(sub, r.pair).worst < TOL
    # H1 and H4 vanish on M
    assert sub.H1.dim == sub.H4.dim == 0


@given(quasi_pairs())
def test_matched_witness_random(pair):
    w = dc.matched_pair_witness(pair.Q)
    assert max(w.gaps.values()) < TOL
