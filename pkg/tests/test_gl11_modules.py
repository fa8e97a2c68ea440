import numpy as np
import pytest

from numpy.testing import assert_allclose

from kzdk.kzdk_utils.exceptions import ModuleSpecException
from kzdk.kzdk_utils.gl11_modules import (
    ModuleSpec,
    as_spec,
    build_module,
    casimir,
    casimir_matrix,
    check_relations,
    conformal_dimension,
    diagonal_action,
    dual_module,
    parity_reverse,
    supercommutator_residual,
    tensor_casimir,
)
from kzdk.kzdk_utils.superlinalg import act_in_slot


SPECS = ("T:0.3,0", "T:-0.45,1.5", "A:2", "P:0", "P:-1", "Pi*T:1/4,0", "Pi*P:1")


@pytest.mark.parametrize(
    "text, kind, e, n, rev",
    [
        ("T:0.3,0", "T", 0.3, 0, False),
        ("Pi*T:1/4,-1", "T", 0.25, -1, True),
        ("A:2", "A", 0, 2, False),
        ("P:0.5", "P", 0, 0.5, False),
        ("T:0.2+0.1j,0", "T", 0.2 + 0.1j, 0, False),
    ],
)
def test_parse_module_spec(text, kind, e, n, rev):
    spec = as_spec(text)
    assert spec.kind == kind
    assert spec.e == pytest.approx(e)
    assert spec.n == pytest.approx(n)
    assert spec.parity_reversed is rev


@pytest.mark.parametrize("text", ["T:0,1", "X:1", "T:1", "A:1,2", "P:", "T:a,b", "A:1/0"])
def test_invalid_specs_raise(text):
    with pytest.raises(ModuleSpecException):
        as_spec(text)


def test_spec_equality_to_ten_digits():
    assert ModuleSpec("T", 0.3, 0) == ModuleSpec("T", 0.3 + 1e-13, 0)
    assert ModuleSpec("T", 0.3, 0) != ModuleSpec("T", 0.3 + 1e-6, 0)
    assert ModuleSpec("P", 0, 1) != ModuleSpec("P", 0, 1).reversed()
    assert len({ModuleSpec("A", 0, 1), ModuleSpec("A", 0, 1.0 + 1e-12)}) == 1


def test_labels():
    assert ModuleSpec("T", 0.3, 0).label == "T:0.3,0"
    assert ModuleSpec("P", 0, -1, True).label == "Pi*P:-1"
    assert ModuleSpec("A", 0, 2).shifted(-1).label == "A:1"


@pytest.mark.parametrize("text", SPECS)
def test_generators_satisfy_relations(text):
    rep = build_module(as_spec(text))
    assert check_relations(rep) <= 1e-12
    assert rep.dim == rep.spec.dim


@pytest.mark.parametrize("text", SPECS)
def test_dual_and_parity_reverse_are_modules(text):
    rep = build_module(as_spec(text))
    assert check_relations(dual_module(rep)) <= 1e-12
    flipped = parity_reverse(rep)
    assert check_relations(flipped) <= 1e-12
    assert flipped.spec == rep.spec.reversed()
    assert flipped.parities.tolist() == ((rep.parities + 1) % 2).tolist()


def test_standard_parities():
    assert build_module(as_spec("T:0.3,0")).parities.tolist() == [0, 1]
    assert build_module(as_spec("P:0")).parities.tolist() == [1, 0, 0, 1]
    assert build_module(as_spec("Pi*A:0")).parities.tolist() == [1]


def test_casimir_on_typical_is_scalar():
    spec = as_spec("T:0.3,1.2")
    C = casimir(build_module(spec)).entries
    assert_allclose(C, 2 * conformal_dimension(spec) * np.eye(2), atol=1e-14)


def test_casimir_on_projective_is_nilpotent():
    C = casimir(build_module(as_spec("P:0.5"))).entries
    assert np.abs(C).max() > 0.5
    assert_allclose(C @ C, 0, atol=1e-14)


@pytest.mark.parametrize("pair", [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "P:0"), ("P:0", "P:1"), ("A:1", "T:0.7,0")])
def test_tensor_casimir_from_coproduct(pair):
    factors = [build_module(as_spec(s)) for s in pair]
    parities = [f.parities for f in factors]
    delta = [diagonal_action(factors, g).entries for g in ("E", "N", "psi+", "psi-")]
    total = casimir_matrix(*delta)
    singles = sum(
        act_in_slot(casimir(f), slot, parities).entries for slot, f in enumerate(factors, start=1)
    )
    assert_allclose(total - singles, 2 * tensor_casimir(factors, 1, 2).entries, atol=1e-13)


def test_tensor_casimir_is_invariant():
    factors = [build_module(as_spec(s)) for s in ("T:0.3,0", "P:0", "T:-0.2,1")]
    for i, j in ((1, 2), (2, 3), (1, 3)):
        omega = tensor_casimir(factors, i, j).entries
        assert supercommutator_residual(omega, factors) < 1e-12


def test_tensor_casimir_slot_validation():
    factors = [build_module(as_spec("T:0.3,0"))] * 2
    with pytest.raises(ModuleSpecException):
        tensor_casimir(factors, 1, 1)
    with pytest.raises(ModuleSpecException):
        tensor_casimir(factors, 1, 3)


def test_unknown_generator():
    with pytest.raises(ModuleSpecException):
        build_module(as_spec("A:0")).generator("F")
