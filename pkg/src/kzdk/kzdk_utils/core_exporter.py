import logging
import re
import warnings

import numpy as np
import pandas as pd

from pathlib import Path
from uuid import uuid4

from .exceptions import ExporterException
from .type_hints import PathLike, StringTuple
from .utils import clean_path, format_number, matrix_to_pairs
from .wrappers import ClassProperty


logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REPORT_KEYS = ("schemaVersion", "command", "config", "records", "provenance", "timings")



# region Extensions
class CoreExtensions:
    DEFAULT_EXTS = {
        "json": "to_json",
        "csv": "to_csv",
    }

    @classmethod
    def _clean_ext(cls, ext: str = "", *, period_prefix: bool = False):
        new_ext = ext.removeprefix(".")
        return f".{new_ext}" if period_prefix else new_ext

    @classmethod
    def _check_ext(cls, ext: str = "") -> str:
        if not isinstance(ext, str):
            raise ExporterException(f"Report extension must be a string, received {ext!r}.")
        default_exts = cls.compatible_exts
        valid_exts = "|".join(re.escape(i) for i in default_exts)

        if not re.match(fr"^\.?({valid_exts})$", ext, flags=re.IGNORECASE):
            raise ExporterException(
                f"Unsupported report extension {ext!r}. Supported: {default_exts!r}."
            )

        return cls._clean_ext(ext).lower()

    @classmethod
    def get_ext_method(cls, ext: str = "") -> str:
        return cls.DEFAULT_EXTS[cls._check_ext(ext)]

    @ClassProperty
    def compatible_exts(cls) -> StringTuple:
        return (*cls.DEFAULT_EXTS,)



# region Exporter
class CoreExporter(CoreExtensions):
    """
    Resolves a report path.

    1. ""                  -> "kzdk_report.json"
    2. "path/to/dir/"      -> "path/to/dir/kzdk_report.json"
    3. "file"              -> "file.json"
    4. ".csv" or "csv"     -> "kzdk_report.csv"
    5. "file.csv"          -> "file.csv"
    6. "dir/.hidden.json"  -> "dir/.hidden.json"
    7. "." or "~"          -> "<cwd or home>/kzdk_report.json"

    An existing file is overwritten with a warning, or kept and the new report
    written under a suffixed name when ``overwrite=False``.
    """
    __slots__ = (
        "_ep",
        "_overwrite",
        "_file_found",
        "_file_ext",
        "_file_method",
    )

    DEFAULT_FILE = "kzdk_report"
    DEFAULT_EXTENSION = "json"

    def __init__(
        self,
        export_path: PathLike = "",
        *,
        overwrite: bool = True
        ):
        self._overwrite = overwrite
        self._ep, self._file_found = self._check_fp(export_path)
        self._file_ext = self._clean_ext(self._ep.suffix)
        self._file_method = self.get_ext_method(self._file_ext)

    @property
    def export_path(self) -> Path:
        return self._ep

    @property
    def file_found(self) -> bool:
        return self._file_found

    @staticmethod
    def _unique_id():
        return str(uuid4()).split("-")[0]

    def _check_fp(self, export_path: PathLike = "") -> tuple[Path, bool]:
        export_path = clean_path(export_path, posix=False)
        default_file = self.DEFAULT_FILE
        ext = self.DEFAULT_EXTENSION
        ext_escape = "|".join(re.escape(i) for i in self.compatible_exts)

        if not export_path:
            export_path = default_file

        if re.match(r"^([.~])$", export_path):
            if export_path.startswith("."):
                export_path = Path.cwd()
            export_path = Path(export_path).expanduser() / default_file

        elif (ext_match := re.match(fr"^\.?({ext_escape})$", export_path, flags=re.IGNORECASE)):
            # ".csv" | "csv"
            ext = self._check_ext(ext_match.group(1))
            export_path = default_file

        elif (dot_match := re.match(r"^(.*?)\.([^./\\]+)$", export_path)):
            # "file.csv" | "dir/.hidden.json"
            ext = self._check_ext(dot_match.group(2))
            export_path = dot_match.group(1)

        valid_fp = Path(export_path).expanduser()
        if valid_fp.is_dir():
            valid_fp = valid_fp / default_file

        valid_fp = valid_fp.parent / (valid_fp.name + self._clean_ext(ext, period_prefix=True))

        found_file = valid_fp.is_file()
        if found_file and not self._overwrite:
            valid_fp = valid_fp.parent / f"{valid_fp.stem}_{self._unique_id()}{valid_fp.suffix}"
        return valid_fp, found_file



# region MainExporter
class KZDKMainExporter(CoreExporter):
    """Writes a report document: the full JSON object, or its records table as CSV."""
    __slots__ = ("_doc",)

    def __init__(
        self,
        document: dict,
        *,
        export_path: PathLike = "",
        overwrite: bool = True
        ):
        super().__init__(export_path, overwrite=overwrite)
        self._doc = validate_report(document)

    def _success_msg(self) -> None:
        if all((self._file_found, self._overwrite)):
            warnings.warn(
                f"[WARNING] The specified file ({self._ep.name!r}) already exists and will be overwritten."
                )
            logger.warning("Overwriting %s", self._ep)
        logger.info("Report exported to %s using pandas method %s", self._ep, self._file_method)

    def records_frame(self) -> pd.DataFrame:
        return pd.json_normalize(self._doc["records"], sep=".")

    def _export(self, **to_kwargs) -> Path:
        self._ep.parent.mkdir(parents=True, exist_ok=True)
        if self._file_method == "to_json":
            to_kwargs.setdefault("indent", 2)
            to_kwargs.setdefault("double_precision", 15)
            pd.Series(self._doc, dtype=object).to_json(self._ep, **to_kwargs)
        else:
            to_kwargs.setdefault("index", False)
            self.records_frame().to_csv(self._ep, **to_kwargs)
        self._success_msg()
        return self._ep
# endregion


def _key(k) -> str:
    if isinstance(k, str):
        return k
    return format_number(k) if isinstance(k, (complex, float)) else str(k)


def to_jsonable(obj):
    """Plain JSON types; complex scalars become floats or [re, im], matrices row-major pairs."""
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return matrix_to_pairs(obj) if obj.ndim == 2 else [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        obj = complex(obj)
        return obj.real if obj.imag == 0 else [obj.real, obj.imag]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def build_report(
    command: str,
    config: dict,
    records: list[dict],
    provenance: dict,
    timings: dict,
    matrices: dict | None = None,
    ) -> dict:
    document = {
        "schemaVersion": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "records": records,
        "provenance": provenance,
        "timings": timings,
    }
    if matrices is not None:
        document["matrices"] = {name: matrix_to_pairs(m) for name, m in matrices.items()}
    return to_jsonable(document)


def validate_report(document) -> dict:
    if not isinstance(document, dict):
        raise ExporterException(
            f"A report must be a dict, received {type(document).__name__!r}."
        )
    missing = [k for k in REPORT_KEYS if k not in document]
    if missing:
        raise ExporterException(
            f"Report is missing the keys {missing!r}."
            f"\nExpected keys: {REPORT_KEYS!r}"
        )
    if document["schemaVersion"] != SCHEMA_VERSION:
        raise ExporterException(
            f"Unsupported schema version {document['schemaVersion']!r}; expected {SCHEMA_VERSION}."
        )
    return document


__all__ = (
    "CoreExporter",
    "CoreExtensions",
    "KZDKMainExporter",
    "REPORT_KEYS",
    "SCHEMA_VERSION",
    "build_report",
    "to_jsonable",
    "validate_report",
)
