import pytest

from kzdk import KZDK, KZDKDataFrame
from kzdk.kzdk_utils.core_exporter import REPORT_KEYS
from kzdk.kzdk_utils.exceptions import ExcludedParameterException, KZDKException


TTT = ("T:0.3,0", "T:0.2,0", "T:0.15,0")


@pytest.fixture
def engine():
    return KZDK(1.0)


def test_decompose_record(engine):
    result = engine.decompose("T:0.3,0", "P:0")
    assert result.passed
    record = result.records[0]
    assert record["matchesRingTable"]
    assert record["summandLabels"] == record["ringTable"]
    assert "changeOfBasis" in result.matrices
    assert "decompose" in engine.timings


def test_associator_both_methods(engine):
    result = engine.associator(*TTT, method="both", t=1e-3, steps=2000)
    assert [r["method"] for r in result.records] == ["frames", "pexp", "crossCheck"]
    assert result.passed, result.records
    assert set(result.matrices) == {"alpha_frames", "alpha_pexp"}


def test_associator_unknown_method(engine):
    with pytest.raises(KZDKException):
        engine.associator(*TTT, method="series")


def test_braiding_and_monodromy(engine):
    assert engine.braiding("T:0.3,0", "T:0.3,0").records[0]["eigenvalues"]
    result = engine.monodromy("T:0.3,0", "P:0", "T:0.2,0")
    assert result.passed, result.records


def test_verify(engine):
    result = engine.verify(TTT, ("hexagon", "triangle"))
    assert result.passed
    assert {r["axiom"] for r in result.records} == {"hexagonPlus", "hexagonMinus", "unitality"}


def test_quantum_commands():
    engine = KZDK(1.7)
    assert engine.qring("T:0.3,0", "P:0").passed
    assert engine.dk_compare("T:0.3,0", "T:0.2,1").passed
    result = engine.qverify(["T:0.3,0", "P:0", "T:0.2,0"])
    assert result.passed
    printed = [r for r in result.records if not r["counted"]]
    assert printed and not all(r["passed"] for r in printed)


def test_correlator(engine):
    result = engine.correlator(["P:0", "P:0"], constants={"A": 1, "B": 0.5})
    assert result.passed, result.records
    types = [r["type"] for r in result.records]
    assert types[:3] == ["gradedInvariants", "invariants", "closedForm"]
    assert "logProbe" in types and types[-1] == "projectedAgreement"


def test_excluded_parameters_raise():
    with pytest.raises(ExcludedParameterException):
        KZDK(1.0).decompose("T:0.6,0", "T:0.4,0")
    assert KZDK(1.0, force=True).decompose("T:0.6,0", "T:0.4,0").records


def test_report_and_records(engine):
    result = engine.decompose("T:0.3,0", "T:0.2,0")
    document = engine.report(result, {"kappa": "1"}, emit_matrices=True)
    assert set(REPORT_KEYS) <= set(document)
    assert "matrices" in document
    assert "matrices" not in engine.report(result, {})
    frame = KZDK.records(result)
    assert isinstance(frame, KZDKDataFrame)
    assert isinstance(frame.head(1), KZDKDataFrame)
    assert bool(frame["passed"].iloc[0])


def test_records_frame_export(engine, tmp_path):
    frame = KZDK.records(engine.decompose("T:0.3,0", "T:0.2,0"))
    path = frame.export(tmp_path / "records.csv")
    assert path.exists()
