from .category_checks import (
    AxiomReport,
    beta,
    beta_braid_residual,
    braiding_equivariance_residual,
    equivariance_residual,
    hexagon_residual,
    pentagon_residual,
    run_axioms,
    triangle_residual,
)
from .core_exporter import (
    CoreExporter,
    CoreExtensions,
    KZDKMainExporter,
    build_report,
)
from .correlators import (
    CorrelatorSolution,
    InvariantBasis,
    closed_form,
    graded_invariants,
    invariant_basis,
    log_probe,
    printed_invariants,
    projected_kz_solve,
    verify_solution,
)
from .exceptions import (
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
from .gl11_modules import (
    ModuleRep,
    ModuleSpec,
    build_module,
    casimir,
    dual_module,
    parity_reverse,
    tensor_casimir,
)
from .kz_engine import (
    KZSolver,
    KZSystem,
    associator,
    associator_pexp,
    braiding,
    monodromy0,
    reverse_braiding,
    series_at0,
    series_at1,
    spectral_data,
)
from .quantum_gl11 import (
    QModuleRep,
    build_qmodule,
    dk_compare,
    hopf_axioms_residual,
    qdecompose,
    qtensor,
    quantum_braiding,
    quasitriangularity_residual,
    r_matrix,
)
from .superlinalg import (
    GradedMatrix,
    JordanData,
    act_in_slot,
    jordan_chains,
    power_with_log,
    super_kron,
)
from .tensor_ring import (
    DecompositionResult,
    decompose,
    genericity,
    ring_table,
    tensor_product,
)


__all__ = (
    "AxiomReport",
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
    "JordanData",
    "JordanException",
    "KZDKException",
    "KZDKMainExporter",
    "KZSolver",
    "KZSystem",
    "ModuleRep",
    "ModuleSpec",
    "ModuleSpecException",
    "QModuleRep",
    "SuperLinalgException",
    "VerificationException",
    "act_in_slot",
    "associator",
    "associator_pexp",
    "beta",
    "beta_braid_residual",
    "braiding",
    "braiding_equivariance_residual",
    "build_module",
    "build_qmodule",
    "build_report",
    "casimir",
    "closed_form",
    "decompose",
    "dk_compare",
    "dual_module",
    "equivariance_residual",
    "genericity",
    "graded_invariants",
    "hexagon_residual",
    "hopf_axioms_residual",
    "invariant_basis",
    "jordan_chains",
    "log_probe",
    "monodromy0",
    "parity_reverse",
    "pentagon_residual",
    "power_with_log",
    "printed_invariants",
    "projected_kz_solve",
    "qdecompose",
    "qtensor",
    "quantum_braiding",
    "quasitriangularity_residual",
    "r_matrix",
    "reverse_braiding",
    "ring_table",
    "run_axioms",
    "series_at0",
    "series_at1",
    "spectral_data",
    "super_kron",
    "tensor_casimir",
    "tensor_product",
    "triangle_residual",
    "verify_solution",
)
