import numpy as np
import pytest

from numpy.testing import assert_allclose

from kzdk.kzdk_utils.exceptions import ExcludedParameterException, KZDKException
from kzdk.kzdk_utils.gl11_modules import as_spec
from kzdk.kzdk_utils.quantum_gl11 import (
    antipode,
    build_qmodule,
    coassociativity_residual,
    counit,
    dk_compare,
    h_from_kappa,
    hopf_axioms_residual,
    intertwining_residual,
    kappa_from_h,
    qdecompose,
    qtensor,
    quantum_braiding,
    quasitriangularity_residual,
    r_matrix,
)
from kzdk.kzdk_utils.tensor_ring import decompose


KAPPA = 1.7
H = h_from_kappa(KAPPA)


def q(text, h=H):
    return build_qmodule(as_spec(text), h)


def test_h_kappa_round_trip():
    assert_allclose(kappa_from_h(h_from_kappa(2.5)), 2.5)
    assert_allclose(h_from_kappa(1.0), 1j * np.pi)
    with pytest.raises(KZDKException):
        kappa_from_h(0)


@pytest.mark.parametrize("text", ["T:0.3,0", "Pi*T:-0.45,1", "A:1", "P:0", "Pi*P:-1"])
def test_quantum_modules_satisfy_relations(text):
    rep = q(text)
    assert rep.relations_residual() < 1e-12
    assert rep.parity_residual() == 0


def test_quantum_typical_coupling():
    rep = q("T:0.3,0")
    assert_allclose(rep.psi_plus.entries[0, 1], 2 * np.sinh(0.3 * H))
    assert_allclose(rep.K, np.exp(0.3 * H / 2) * np.eye(2))


def test_quantum_typical_excluded_when_sinh_vanishes():
    with pytest.raises(ExcludedParameterException):
        build_qmodule(as_spec("T:1,0"), h_from_kappa(1.0))


@pytest.mark.parametrize("pair", [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "P:0"), ("P:0", "P:1"), ("A:1", "T:0.25,0")])
def test_coproduct_is_an_algebra_map(pair):
    assert qtensor(*map(q, pair)).algebra_map_residual() < 1e-12


def test_qtensor_rejects_mixed_h():
    with pytest.raises(KZDKException):
        qtensor(q("T:0.3,0"), q("T:0.2,0", h=h_from_kappa(2.0)))


@pytest.mark.parametrize("pair", [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "P:0"), ("P:0", "P:1"), ("Pi*T:0.3,0", "T:0.3,0")])
def test_r_matrix_intertwines(pair):
    A, B = map(q, pair)
    assert intertwining_residual(A, B).passed
    assert intertwining_residual(B, A).passed


def test_quantum_braiding_shape_and_parities():
    A, B = q("T:0.3,0"), q("P:0")
    sigma = quantum_braiding(A, B)
    assert sigma.entries.shape == (8, 8)
    assert sigma.col_parities.tolist() == [1, 0, 0, 1, 0, 1, 1, 0]
    assert np.linalg.cond(r_matrix(A, B).entries) < 1e6


@pytest.mark.parametrize("triple", [("T:0.3,0", "P:0", "T:0.2,0"), ("T:0.3,0", "T:0.2,0", "T:-0.1,1")])
def test_quasitriangularity_and_coassociativity(triple):
    A, B, C = map(q, triple)
    report = quasitriangularity_residual(A, B, C)
    assert report.passed, report
    assert set(report.details) == {"coproductLeft", "coproductRight"}
    assert coassociativity_residual(A, B, C).passed


def test_counit_and_antipode_words():
    assert counit(("K", "Kinv")) == 1
    assert counit(("K", "psi+")) == 0
    assert antipode(("psi+", "psi-")) == [(-1, ("psi-", "psi+"))]
    assert antipode(("E", "psi+")) == [(1, ("psi+", "E"))]
    with pytest.raises(KZDKException):
        antipode(("E",), "other")


@pytest.mark.parametrize("text", ["T:0.3,0", "P:0", "A:2", "Pi*T:-0.2,1"])
def test_derived_antipode_satisfies_hopf_axioms(text):
    report = hopf_axioms_residual(q(text), "derived")
    assert report.passed, report
    assert report.details["antipode"] == "derived"


def test_printed_antipode_fails_where_k_is_nontrivial():
    failing = hopf_axioms_residual(q("T:0.3,0"), "printed")
    assert not failing.passed
    assert failing.details["counitLeft"] < 1e-12
    assert max(failing.details["antipodeLeft"], failing.details["antipodeRight"]) > 1e-3
    # E = 0 on P, so K = 1 and both antipodes agree
    assert hopf_axioms_residual(q("P:0"), "printed").passed


@pytest.mark.parametrize(
    "pair",
    [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "T:-0.3,0"), ("T:0.3,0", "P:0"), ("P:0", "P:0"), ("Pi*P:0", "A:1")],
)
def test_quantum_ring_matches_classical(pair):
    quantum = qdecompose(*map(q, pair))
    classical = decompose(*pair, kappa=KAPPA)
    assert quantum.multiset() == classical.multiset()
    assert quantum.residual < 1e-9


@pytest.mark.parametrize("pair", [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "T:0.3,0"), ("T:0.3,0", "P:0"), ("P:0", "P:0")])
def test_drinfeld_kohno_conjugacy_invariants(pair):
    report = dk_compare(*pair, KAPPA)
    assert report.passed, report.to_record()
    assert report.double_braiding["match"]
    if pair[0] == pair[1]:
        assert report.braiding is not None and report.braiding["match"]
    record = report.to_record()
    assert record["operands"] == list(pair)
    assert record["kappa"] == "1.7"


def test_drinfeld_kohno_tolerance_decides_the_match():
    pair = ("T:0.37,0", "T:0.21,0.5")
    loose = dk_compare(*pair, 1.0)
    double = loose.double_braiding
    assert loose.passed
    assert double["eigenvalueDistance"] < 1e-10 and double["analyticDistance"] < 1e-10
    tight = dk_compare(*pair, 1.0, tol=1e-18)
    assert max(tight.double_braiding["eigenvalueDistance"], tight.double_braiding["analyticDistance"]) > 1e-18
    assert not tight.passed
    assert not tight.double_braiding["match"]
    assert tight.double_braiding["classicalProfile"] == tight.double_braiding["quantumProfile"]
    with pytest.raises(KZDKException):
        dk_compare(*pair, 1.0, tol=-1.0)


def test_drinfeld_kohno_distance_on_defective_blocks():
    # P⊗P double braiding is unipotent with a rank-3 block
    report = dk_compare("P:0", "P:0", KAPPA)
    assert report.passed, report.to_record()
    assert report.double_braiding["eigenvalueDistance"] < 1e-10
