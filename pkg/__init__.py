from .src.kzdk.kzdk import (
    KZDK,
    CommandResult,
    KZDKDataFrame,
    KZDKExporter,
)
from .src.kzdk.kzdk_utils.core_exporter import (
    CoreExtensions,
    CoreExporter,
    KZDKMainExporter,
)
from .src.kzdk.kzdk_utils.exceptions import (
    CorrelatorException,
    DecompositionException,
    ExcludedParameterException,
    ExporterException,
    KZDKException,
    ModuleSpecException,
    VerificationException,
)



__all__ = (
    "CommandResult",
    "CoreExporter",
    "CoreExtensions",
    "CorrelatorException",
    "DecompositionException",
    "ExcludedParameterException",
    "ExporterException",
    "KZDK",
    "KZDKDataFrame",
    "KZDKException",
    "KZDKExporter",
    "KZDKMainExporter",
    "ModuleSpecException",
    "VerificationException",
)
