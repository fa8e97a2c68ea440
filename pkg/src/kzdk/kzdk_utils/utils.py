import os
import re
import sys

import numpy as np

from fractions import Fraction
from pathlib import Path

from .exceptions import ExporterException, ModuleSpecException, KZDKException
from .type_hints import ComplexLike, PathLike



# region Constants
DEFAULT_TOL = 1e-10
CROSS_TOL = 1e-8
AXIOM_TOL = 1e-8
RANK_TOL = 1e-9
RELATION_TOL = 1e-12
GENERICITY_MARGIN = 1e-6
SAMPLING_MARGIN = 1e-4

SERIES_ORDER_CAP = 60
SERIES_STOP_RATIO = 1e-13
MATCHING_POINT = 0.5

PEXP_T = 1e-4
PEXP_STEPS = 10**5

SNAP_DIGITS = 10
THREADS_ENV = "KZDK_THREADS"

BRANCH_CONVENTION = "principal logarithm, Arg in (-pi, pi]"

_SPEC_PATTERN = re.compile(
    r"^\s*(?P<pi>(?:pi|Pi|PI)\*)?(?P<kind>[TAPtap])\s*:\s*(?P<args>.+?)\s*$"
)



# region Functions
def check_pyversion():
    global PY_VERSION
    PY_VERSION = tuple(
        getattr(sys.version_info, i) for i in ("major", "minor")
        )
    if not PY_VERSION >= (3, 10):
        py_v = ".".join(map(str, PY_VERSION))
        raise Exception(
            "Python version 3.10 or higher is required to run this script. "
            f"Please update your Python version {py_v!r} and try again."
        )


def parse_number(text: str) -> complex:
    """
    Parse a decimal, a rational ``p/q`` or a Python complex literal.
    """
    raw = str(text).strip().replace(" ", "")
    if not raw:
        raise ModuleSpecException("Empty numeric field in module spec.")
    try:
        if "/" in raw and "j" not in raw:
            return complex(float(Fraction(raw)))
        return complex(raw)
    except (ValueError, ZeroDivisionError) as err:
        raise ModuleSpecException(
            f"Could not parse {raw!r} as a number. "
            "Use a decimal (0.25), a rational (1/4) or a complex literal (0.2+0.1j)."
            f"\nOriginal error: {err}"
        )


def parse_module_spec(text: str) -> tuple[str, complex, complex, bool]:
    """
    Split a module spec string into ``(kind, e, n, parity_reversed)``.

    Accepted forms:
        - "T:e,n"  typical module
        - "A:n"    one dimensional atypical module
        - "P:n"    four dimensional projective module
        - "Pi*"    prefix on any of the above for parity reversal
    """
    if not isinstance(text, str):
        raise ModuleSpecException(
            f"Module spec must be a string, received {text!r} of type {type(text).__name__!r}."
        )

    match_ = _SPEC_PATTERN.match(text)
    if not match_:
        raise ModuleSpecException(
            f"Invalid module spec {text!r}. "
            "Expected one of 'T:e,n', 'A:n', 'P:n' with an optional 'Pi*' prefix."
        )

    kind = match_.group("kind").upper()
    fields = [i for i in match_.group("args").split(",")]
    parity_reversed = match_.group("pi") is not None

    match kind:
        case "T":
            if len(fields) != 2:
                raise ModuleSpecException(
                    f"Typical spec {text!r} needs two fields 'e,n', received {len(fields)}."
                )
            e, n = map(parse_number, fields)
        case _:
            if len(fields) != 1:
                raise ModuleSpecException(
                    f"Spec {text!r} needs a single field 'n', received {len(fields)}."
                )
            e, n = 0j, parse_number(fields[0])
    return kind, e, n, parity_reversed


def format_number(z: ComplexLike) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-14:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def snap(z: ComplexLike, ndigits: int = SNAP_DIGITS) -> complex:
    z = complex(z)
    real, imag = round(z.real, ndigits), round(z.imag, ndigits)
    # avoid -0.0 leaking into labels
    return complex(real + 0.0, imag + 0.0)


def distance_to_integer(z: ComplexLike, *, exclude_zero: bool = False) -> float:
    z = complex(z)
    nearest = round(z.real)
    if exclude_zero and nearest == 0:
        # the nearest admissible integers are then -1 and +1
        return min(abs(z - 1), abs(z + 1))
    return abs(z - nearest)


def validate_kappa(kappa: ComplexLike) -> complex:
    try:
        kappa = complex(kappa)
    except (TypeError, ValueError):
        raise KZDKException(f"`kappa` must be a complex number, received {kappa!r}.")
    if not np.isfinite(kappa) or abs(kappa) < 1e-300:
        raise KZDKException(
            f"`kappa` must be finite and nonzero. Received {kappa = }."
        )
    return kappa


def thread_count(default: int = 4) -> int:
    raw = os.environ.get(THREADS_ENV, "")
    if not raw.strip():
        return max(1, min(default, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise KZDKException(
            f"Environment variable {THREADS_ENV} must be a positive integer, received {raw!r}."
        )
    if value < 1:
        raise KZDKException(f"{THREADS_ENV} must be >= 1, received {value}.")
    return value


def clean_path(fp: PathLike, posix: bool = True) -> PathLike:
    if not isinstance(fp, (str, os.PathLike)):
        raise ExporterException(
            "The provided path is not a valid string or Path object."
            f"\nPath provided: {fp = }"
        )
    if isinstance(fp, Path):
        fp = fp.as_posix()

    clean_fp = str(fp).strip()
    return Path(clean_fp) if posix else clean_fp


def matrix_to_pairs(matrix: np.ndarray) -> list:
    """Row-major ``[re, im]`` pairs for report serialization."""
    matrix = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]
# ---------------------------------------------------------------------------------------------------------
