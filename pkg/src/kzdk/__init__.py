from .kzdk_utils.category_checks import AxiomReport, run_axioms
from .kzdk_utils.core_exporter import CoreExporter, CoreExtensions, KZDKMainExporter
from .kzdk_utils.correlators import CorrelatorSolution, InvariantBasis, closed_form
from .kzdk_utils.exceptions import (
    CorrelatorException,
    DecompositionException,
    ExcludedParameterException,
    ExporterException,
    JordanException,
    KZDKException,
    ModuleSpecException,
    SuperLinalgException,
    VerificationException,
)
from .kzdk_utils.gl11_modules import ModuleRep, ModuleSpec, build_module
from .kzdk_utils.kz_engine import KZSolver, KZSystem
from .kzdk_utils.quantum_gl11 import QModuleRep, build_qmodule
from .kzdk_utils.superlinalg import GradedMatrix
from .kzdk_utils.tensor_ring import DecompositionResult
from .kzdk_utils.utils import check_pyversion
from .kzdk import KZDK, CommandResult, KZDKDataFrame, KZDKExporter


check_pyversion()


__all__ = (
    "AxiomReport",
    "CommandResult",
    "CoreExporter",
    "CoreExtensions",
    "CorrelatorException",
    "CorrelatorSolution",
    "DecompositionException",
    "DecompositionResult",
    "ExcludedParameterException",
    "ExporterException",
    "GradedMatrix",
    "InvariantBasis",
    "JordanException",
    "KZDK",
    "KZDKDataFrame",
    "KZDKException",
    "KZDKExporter",
    "KZDKMainExporter",
    "KZSolver",
    "KZSystem",
    "ModuleRep",
    "ModuleSpec",
    "ModuleSpecException",
    "QModuleRep",
    "SuperLinalgException",
    "VerificationException",
    "build_module",
    "build_qmodule",
    "closed_form",
    "run_axioms",
)
