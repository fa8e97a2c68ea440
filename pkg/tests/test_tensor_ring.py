import numpy as np
import pytest

from collections import Counter

from kzdk.kzdk_utils.exceptions import ExcludedParameterException
from kzdk.kzdk_utils.gl11_modules import ModuleSpec, as_spec, build_module, check_relations
from kzdk.kzdk_utils.tensor_ring import (
    decompose,
    genericity,
    ring_summands,
    ring_table,
    tensor_product,
)


def T(e, n, rev=False):
    return ModuleSpec("T", e, n, rev)


def P(n, rev=False):
    return ModuleSpec("P", 0, n, rev)


def _table(a, b):
    return Counter(dict(ring_table(as_spec(a), as_spec(b))))


def test_ring_table_typical_pair():
    assert _table("T:0.3,0", "T:0.2,1") == Counter({T(0.5, 1.5): 1, T(0.5, 0.5, True): 1})


def test_ring_table_opposite_charges_give_projective():
    assert _table("T:0.3,0", "T:-0.3,1") == Counter({P(1, True): 1})


def test_ring_table_with_projective():
    assert _table("T:0.3,0", "P:1") == Counter({T(0.3, 2, True): 1, T(0.3, 1): 2, T(0.3, 0, True): 1})
    assert _table("P:0", "P:0") == Counter({P(1, True): 1, P(0): 2, P(-1, True): 1})


def test_ring_table_atypical_shifts_weight():
    assert _table("A:2", "T:0.3,0") == Counter({T(0.3, 2): 1})
    assert _table("P:0", "A:-1") == Counter({P(-1): 1})


def test_ring_table_parity_reversal():
    plain = _table("T:0.3,0", "T:0.2,0")
    flipped = _table("Pi*T:0.3,0", "T:0.2,0")
    assert flipped == Counter({spec.reversed(): m for spec, m in plain.items()})
    assert _table("Pi*T:0.3,0", "Pi*T:0.2,0") == plain


@pytest.mark.parametrize(
    "a, b",
    [
        ("T:0.3,0", "T:0.2,1"),
        ("T:0.3,0", "T:-0.3,0"),
        ("T:0.3,0", "P:0"),
        ("P:0", "T:-0.45,0.5"),
        ("P:0", "P:1"),
        ("A:1", "T:0.3,0"),
        ("A:1", "P:0"),
        ("Pi*T:0.3,0", "T:0.25,0"),
        ("Pi*P:0", "T:0.3,0"),
    ],
)
def test_decompose_matches_ring_table(a, b):
    result = decompose(a, b)
    assert result.matches(ring_table(as_spec(a), as_spec(b)))
    assert result.residual < 1e-9
    assert result.dim == as_spec(a).dim * as_spec(b).dim


def test_decompose_iterated_product():
    AB = tensor_product(build_module(as_spec("T:0.3,0")), build_module(as_spec("T:0.2,0")))
    result = decompose(AB, "T:0.15,0")
    assert result.matches(ring_summands(tensor_product(AB, build_module(as_spec("T:0.15,0")))))
    assert result.dim == 8


def test_change_of_basis_certificate():
    result = decompose("T:0.3,0", "P:0")
    S = result.change_of_basis
    assert S.shape == (8, 8)
    assert np.linalg.cond(S) < 1e8
    assert result.to_record()["certificateResidual"] == result.residual


def test_tensor_product_is_a_module():
    rep = tensor_product(build_module(as_spec("P:0")), build_module(as_spec("Pi*T:0.3,1")))
    assert check_relations(rep) <= 1e-12
    assert rep.label == "P:0⊗Pi*T:0.3,1"
    assert [s.label for s in rep.leaves()] == ["P:0", "Pi*T:0.3,1"]


def test_genericity_flags():
    assert genericity(["T:0.3,0", "T:0.2,0"], 1.0).generic
    single = genericity(["T:1,0", "T:0.2,0"], 1.0)
    assert not single.generic
    assert single.violations[0].condition == "e_1/kappa"
    pair = genericity(["T:0.6,0", "T:0.4,0"], 1.0)
    assert [v.condition for v in pair.violations] == ["(e_1+e_2)/kappa"]
    # a vanishing sum is allowed
    assert genericity(["T:0.3,0", "T:-0.3,0"], 1.0).generic
    assert not genericity(["T:0.3,0", "T:0.3,0"], 0.6).generic


def test_decompose_rejects_excluded_parameters():
    with pytest.raises(ExcludedParameterException):
        decompose("T:0.6,0", "T:0.4,0")


def test_force_accepts_excluded_parameters(caplog):
    result = decompose("T:1,0", "T:0.3,0", force=True)
    assert result.matches(ring_table(as_spec("T:1,0"), as_spec("T:0.3,0")))
    assert "force=True" in caplog.text


def test_multiset_and_labels():
    result = decompose("P:0", "P:0")
    assert result.labels == ["Pi*P:1", "2xP:0", "Pi*P:-1"]
    assert sum(result.multiset().values()) == 4
    assert result.dim == 16
