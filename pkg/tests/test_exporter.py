import json

import numpy as np
import pandas as pd
import pytest

from pathlib import Path

from kzdk.kzdk import KZDKExporter
from kzdk.kzdk_utils.core_exporter import (
    REPORT_KEYS,
    CoreExporter,
    CoreExtensions,
    KZDKMainExporter,
    build_report,
    to_jsonable,
    validate_report,
)
from kzdk.kzdk_utils.exceptions import ExporterException


@pytest.fixture
def document():
    return build_report(
        "decompose",
        {"kappa": "1"},
        [
            {"operands": ["T:0.3,0", "T:0.2,0"], "residual": 1e-15, "passed": True, "summary": {"count": 2}},
            {"operands": ["P:0", "P:0"], "residual": 2e-14, "passed": True, "summary": {"count": 4}},
        ],
        {"branch": "principal"},
        {"decompose": 0.01},
        {"sigma": np.array([[1, 1j], [0, -1]])},
    )


@pytest.mark.parametrize(
    "given, expected",
    [
        ("", "kzdk_report.json"),
        ("file", "file.json"),
        (".csv", "kzdk_report.csv"),
        ("csv", "kzdk_report.csv"),
        ("file.csv", "file.csv"),
        ("sub/.hidden.json", "sub/.hidden.json"),
    ],
)
def test_path_resolution(given, expected, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert CoreExporter(given).export_path == Path(expected)


def test_directory_and_special_paths(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "out").mkdir()
    assert CoreExporter("out").export_path == Path("out") / "kzdk_report.json"
    assert CoreExporter(".").export_path == tmp_path / "kzdk_report.json"
    assert CoreExporter("~").export_path == Path.home() / "kzdk_report.json"


def test_unsupported_extension():
    with pytest.raises(ExporterException):
        CoreExporter("report.xlsx")
    assert CoreExtensions.compatible_exts == ("json", "csv")
    assert CoreExtensions.get_ext_method(".CSV") == "to_csv"
    with pytest.raises(ExporterException):
        CoreExtensions.get_ext_method("xlsx")
    with pytest.raises(ExporterException):
        CoreExtensions.get_ext_method(3)
    assert not hasattr(CoreExtensions, "ext_methods")


def test_existing_file_without_overwrite_gets_new_name(tmp_path):
    target = tmp_path / "report.json"
    target.write_text("{}")
    exporter = CoreExporter(target, overwrite=False)
    assert exporter.file_found
    assert exporter.export_path != target
    assert exporter.export_path.name.startswith("report_")


def test_json_export(document, tmp_path):
    path = KZDKExporter(document).export(tmp_path / "nested" / "report.json")
    loaded = json.loads(path.read_text())
    assert set(REPORT_KEYS) <= set(loaded)
    assert loaded["schemaVersion"] == 1
    assert loaded["records"][1]["operands"] == ["P:0", "P:0"]
    assert loaded["matrices"]["sigma"][0][1] == [0.0, 1.0]


def test_csv_export_flattens_records(document, tmp_path):
    path = KZDKMainExporter(document, export_path=tmp_path / "report.csv")._export()
    frame = pd.read_csv(path)
    assert len(frame) == 2
    assert "summary.count" in frame.columns
    assert frame["summary.count"].tolist() == [2, 4]


def test_overwrite_warns(document, tmp_path):
    target = tmp_path / "report.json"
    target.write_text("{}")
    with pytest.warns(UserWarning):
        KZDKExporter(document).export(target)
    assert json.loads(target.read_text())["command"] == "decompose"


def test_validate_report():
    with pytest.raises(ExporterException):
        validate_report([])
    with pytest.raises(ExporterException):
        validate_report({"schemaVersion": 1})
    with pytest.raises(ExporterException):
        validate_report({k: None for k in REPORT_KEYS} | {"schemaVersion": 99})


def test_to_jsonable():
    assert to_jsonable(1 + 0j) == 1.0
    assert to_jsonable(np.complex128(1 - 2j)) == [1.0, -2.0]
    assert to_jsonable({0.5 + 0j: np.bool_(True)}) == {"0.5": True}
    assert to_jsonable(np.array([1, 2])) == [1, 2]
    assert to_jsonable(np.eye(2)) == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
