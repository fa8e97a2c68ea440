import logging

import numpy as np
import pandas as pd

from dataclasses import dataclass, field

from .kzdk_utils.category_checks import (
    KOSZUL_CONVENTION,
    braiding_equivariance_residual,
    equivariance_residual,
    run_axioms,
)
from .kzdk_utils.core_exporter import KZDKMainExporter, build_report
from .kzdk_utils.correlators import (
    closed_form,
    graded_invariants,
    invariant_basis,
    log_probe,
    projected_kz_solve,
    select_form,
    verify_solution,
)
from .kzdk_utils.exceptions import KZDKException
from .kzdk_utils.gl11_modules import as_module, as_spec
from .kzdk_utils.kz_engine import (
    KZSolver,
    KZSystem,
    associator_pexp,
    braiding,
    casimir_eigenvalues,
    monodromy0,
)
from .kzdk_utils.quantum_gl11 import (
    build_qmodule,
    coassociativity_residual,
    dk_compare,
    h_from_kappa,
    hopf_axioms_residual,
    intertwining_residual,
    qdecompose,
    qtensor,
    quasitriangularity_residual,
)
from .kzdk_utils.superlinalg import jordan_chains
from .kzdk_utils.tensor_ring import decompose, ring_summands, tensor_product
from .kzdk_utils.type_hints import ComplexLike, DataFrame, PathLike, PexpScheme
from .kzdk_utils.utils import (
    AXIOM_TOL,
    BRANCH_CONVENTION,
    CROSS_TOL,
    DEFAULT_TOL,
    PEXP_STEPS,
    PEXP_T,
    format_number,
    validate_kappa,
)
from .kzdk_utils.wrappers import WRAPPERS


logger = logging.getLogger(__name__)

TIMED = WRAPPERS["Timed"]
CERTIFICATE_TOL = 1e-9
PEXP_AGREEMENT_TOL = 1e-6
PROBE_DELTA = 1e-3
PROBE_FLOOR = 1e-4



# region Results
@dataclass(frozen=True)
class CommandResult:
    command: str
    records: list[dict]
    passed: bool
    matrices: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)


def _summand_labels(summands) -> list[str]:
    return [spec.label if mult == 1 else f"{mult}x{spec.label}" for spec, mult in summands]


def _eigenvalues(M: np.ndarray) -> list[complex]:
    return np.sort_complex(np.linalg.eigvals(M)).tolist()
# endregion



# region Exporter
class KZDKExporter(KZDKMainExporter):
    __slots__ = ("_document",)

    def __init__(self, document: dict):
        self._document = document

    def export(self, export_path: PathLike = "", overwrite: bool = True, **to_kwargs):
        """
        Acceptable values for the `export_path` parameter.

        1. Empty string:
            - "" → "kzdk_report.json" in the current directory.

        2. Directory path:
            - "path/to/dir/" → "path/to/dir/kzdk_report.json"

        3. File name only:
            - "file" → "file.json"

        4. Extension only:
            - ".csv" or "csv" → "kzdk_report.csv"

        5. File with extension:
            - "file.csv" → "file.csv" (the records table)

        6. Hidden file:
            - ".hidden.json" → ".hidden.json"

        7. Special directory symbols:
            - "." → "<current_working_directory>/kzdk_report.json"
            - "~" → "<home_directory>/kzdk_report.json"
        """
        super().__init__(self._document, export_path=export_path, overwrite=overwrite)
        return self._export(**to_kwargs)


class KZDKDataFrame(DataFrame):
    @property
    def _constructor(self):
        return KZDKDataFrame

    def export(self, *args, command: str = "records", **kwargs):
        records = self.to_dict(orient="records")
        document = build_report(command, {}, records, {}, {})
        return KZDKExporter(document).export(*args, **kwargs)
# endregion



# region Facade
class KZDK:
    """
    Verification front end at a fixed level ``kappa``.

    Every command returns a ``CommandResult`` whose records carry their
    tolerance and a ``passed`` flag; ``report`` assembles the JSON document.
    """
    __slots__ = (
        "_kappa",
        "_tol",
        "_order",
        "_force",
        "_timings",
    )

    def __init__(
        self,
        kappa: ComplexLike = 1.0,
        *,
        tol: float | None = None,
        order: int | None = None,
        force: bool = False,
        ) -> None:
        self._kappa = validate_kappa(kappa)
        self._tol = tol
        self._order = order
        self._force = force
        self._timings = {}

    def __repr__(self) -> str:
        return f"KZDK(kappa={format_number(self._kappa)})"

    @property
    def kappa(self) -> complex:
        return self._kappa

    @property
    def timings(self) -> dict:
        return dict(self._timings)

    def _tolerance(self, default: float) -> float:
        return default if self._tol is None else self._tol

    def _provenance(self, **extra) -> dict:
        return {
            "branch": BRANCH_CONVENTION,
            "koszul": KOSZUL_CONVENTION,
            "kappa": format_number(self._kappa),
            "order": "adaptive" if self._order is None else self._order,
            **extra,
        }

    @TIMED
    def decompose(self, A, B) -> CommandResult:
        tol = self._tolerance(CERTIFICATE_TOL)
        result = decompose(A, B, kappa=self._kappa, force=self._force)
        expected = ring_summands(tensor_product(as_module(A), as_module(B)))
        matches = result.matches(expected)
        record = {
            **result.to_record(),
            "summandLabels": result.labels,
            "ringTable": _summand_labels(expected),
            "matchesRingTable": matches,
            "tolerance": tol,
            "passed": matches and result.residual <= tol,
        }
        return CommandResult(
            "decompose", [record], record["passed"],
            {"changeOfBasis": result.change_of_basis}, self._provenance(),
        )

    @TIMED
    def associator(
        self,
        V1,
        V2,
        V3,
        *,
        method: str = "frames",
        t: float = PEXP_T,
        steps: int = PEXP_STEPS,
        scheme: PexpScheme = "magnus4",
        ) -> CommandResult:
        """
        Associator by frame matching, by the regularised P-exponential, or
        both with their difference.
        """
        sys = KZSystem((V1, V2, V3), self._kappa)
        records, matrices = [], {}
        alphas = {}

        if method in ("frames", "both"):
            solver = KZSolver(sys, order=self._order, force=self._force)
            alphas["frames"] = solver.associator().entries
            records.append({"method": "frames", **solver.diagnostics})
        if method in ("pexp", "both"):
            alphas["pexp"] = associator_pexp(sys, t, steps, scheme=scheme, force=self._force).entries
            records.append({"method": "pexp", "t": t, "steps": steps, "scheme": scheme})
        if not alphas:
            raise KZDKException(f"Unknown associator method {method!r}. Expected 'frames', 'pexp' or 'both'.")

        passed = True
        for record in records:
            alpha = alphas[record["method"]]
            check = equivariance_residual(alpha, list(sys.factors), tol=AXIOM_TOL)
            record.update(
                operands=list(sys.labels),
                equivarianceResidual=check.residual,
                tolerance=AXIOM_TOL,
                passed=check.passed,
            )
            passed = passed and check.passed
            matrices[f"alpha_{record['method']}"] = alpha

        if len(alphas) == 2:
            tol = self._tolerance(PEXP_AGREEMENT_TOL)
            diff = float(np.linalg.norm(alphas["frames"] - alphas["pexp"], 2))
            records.append({
                "method": "crossCheck",
                "operands": list(sys.labels),
                "difference": diff,
                "tolerance": tol,
                "passed": diff <= tol,
            })
            passed = passed and diff <= tol
        return CommandResult("associator", records, passed, matrices, self._provenance(t=t, steps=steps))

    @TIMED
    def braiding(self, A, B) -> CommandResult:
        A, B = as_module(A), as_module(B)
        sigma = braiding(A, B, self._kappa).entries
        check = braiding_equivariance_residual(A, B, self._kappa, tol=self._tolerance(AXIOM_TOL))
        record = {
            **check.to_record(),
            "eigenvalues": _eigenvalues(sigma) if as_spec(A) == as_spec(B) else [],
            "casimirEigenvalues": casimir_eigenvalues(A, B),
        }
        return CommandResult("braiding", [record], check.passed, {"sigma": sigma}, self._provenance())

    @TIMED
    def monodromy(self, V1, V2, V3) -> CommandResult:
        """Loop around x = 0 against the double braiding σ_{21}σ_{12} ⊗ 1."""
        tol = self._tolerance(CROSS_TOL)
        sys = KZSystem((V1, V2, V3), self._kappa)
        A, B, C = sys.factors
        M0 = monodromy0(sys).entries
        double = braiding(B, A, self._kappa).entries @ braiding(A, B, self._kappa).entries
        residual = float(np.linalg.norm(M0 - np.kron(double, np.eye(C.dim)), 2))
        candidates = [np.exp(2j * np.pi * lam / self._kappa) for lam in casimir_eigenvalues(A, B)]
        profile = jordan_chains(M0, candidates).profile()
        record = {
            "operands": list(sys.labels),
            "eigenvalues": _eigenvalues(M0),
            "jordanProfile": {format_number(k): v for k, v in profile.items()},
            "doubleBraidingResidual": residual,
            "tolerance": tol,
            "passed": residual <= tol,
        }
        return CommandResult("monodromy", [record], record["passed"], {"monodromy0": M0}, self._provenance())

    @TIMED
    def verify(self, specs, axioms=("all",)) -> CommandResult:
        reports = run_axioms(specs, self._kappa, tuple(axioms), order=self._order, tol=self._tolerance(AXIOM_TOL))
        return CommandResult(
            "verify",
            [r.to_record() for r in reports],
            all(r.passed for r in reports),
            provenance=self._provenance(),
        )

    @TIMED
    def qring(self, A, B) -> CommandResult:
        tol = self._tolerance(CERTIFICATE_TOL)
        h = h_from_kappa(self._kappa)
        Aq, Bq = build_qmodule(as_spec(A), h), build_qmodule(as_spec(B), h)
        quantum = qdecompose(Aq, Bq, force=self._force)
        classical = decompose(A, B, kappa=self._kappa, force=self._force)
        same = quantum.multiset() == classical.multiset()
        algebra_map = qtensor(Aq, Bq).algebra_map_residual()
        record = {
            "operands": list(quantum.operands),
            "quantum": quantum.labels,
            "classical": classical.labels,
            "match": same,
            "certificateResidual": quantum.residual,
            "algebraMapResidual": algebra_map,
            "tolerance": tol,
            "passed": same and quantum.residual <= tol and algebra_map <= tol,
        }
        return CommandResult("qring", [record], record["passed"], provenance=self._provenance(h=h))

    @TIMED
    def qverify(self, specs) -> CommandResult:
        """
        Hopf axioms on every module, intertwining on the first pair and, with
        three modules, the cabling identities and coassociativity.
        The printed antipode is reported but not counted.
        """
        tol = self._tolerance(AXIOM_TOL)
        h = h_from_kappa(self._kappa)
        reps = [build_qmodule(as_spec(s), h) for s in specs]
        counted, reported = [], []
        for rep in reps:
            counted.append(hopf_axioms_residual(rep, "derived", tol=tol))
            reported.append(hopf_axioms_residual(rep, "printed", tol=tol))
        if len(reps) >= 2:
            counted.append(intertwining_residual(reps[0], reps[1], tol=tol))
            counted.append(intertwining_residual(reps[1], reps[0], tol=tol))
        if len(reps) >= 3:
            counted.append(quasitriangularity_residual(*reps[:3], tol=tol))
            counted.append(coassociativity_residual(*reps[:3], tol=tol))
        records = [
            *({**r.to_record(), "counted": True} for r in counted),
            *({**r.to_record(), "counted": False} for r in reported),
        ]
        return CommandResult(
            "qverify", records, all(r.passed for r in counted), provenance=self._provenance(h=h),
        )

    @TIMED
    def dk_compare(self, A, B) -> CommandResult:
        report = dk_compare(A, B, self._kappa, tol=self._tolerance(CROSS_TOL), force=self._force)
        return CommandResult(
            "dk-compare", [report.to_record()], report.passed, provenance=self._provenance(h=report.h),
        )

    @TIMED
    def correlator(
        self,
        specs,
        *,
        form: str = "auto",
        constants: dict | None = None,
        sector: ComplexLike | None = None,
        samples: int | None = None,
        ) -> CommandResult:
        """
        Closed form check on the invariant sector, the logarithm probes and
        agreement with the numerically integrated projected equation.
        """
        specs = [as_spec(s) for s in specs]
        kind = select_form(specs) if form == "auto" else form
        solution = closed_form(kind, specs, self._kappa, constants, sector)
        points = None
        if samples:
            points = np.linspace(0.5, 2.7, samples) if len(specs) == 2 else np.linspace(0.1, 0.9, samples)

        report = verify_solution(solution, points, tol=self._tolerance(DEFAULT_TOL))
        grid = np.asarray(report.samples)
        records = [
            {"type": "gradedInvariants", **graded_invariants(specs).to_record()},
            {"type": "invariants", **invariant_basis(specs).to_record()},
            {"type": "closedForm", **report.to_record()},
        ]
        passed = report.passed

        for tag in solution.tags:
            probe = log_probe(solution, tag, PROBE_DELTA, grid)
            forced = probe["residual"] > PROBE_FLOOR
            records.append({"type": "logProbe", **probe, "floor": PROBE_FLOOR, "passed": forced})
            passed = passed and forced

        anchor = 1.0 if len(specs) == 2 else 0.5
        numeric = projected_kz_solve(
            specs, self._kappa, grid, solution.evaluate(anchor), anchor=anchor, sector=solution.sector,
        )
        exact = np.array([solution.evaluate(x) for x in grid])
        scale = np.maximum(1.0, np.linalg.norm(exact, axis=1))
        agreement = float(np.max(np.linalg.norm(numeric - exact, axis=1) / scale))
        records.append({
            "type": "projectedAgreement",
            "anchor": anchor,
            "difference": agreement,
            "tolerance": CROSS_TOL,
            "passed": agreement <= CROSS_TOL,
        })
        passed = passed and agreement <= CROSS_TOL
        return CommandResult("correlator", records, passed, provenance=self._provenance(form=kind))

    def report(self, result: CommandResult, config: dict, *, emit_matrices: bool = False) -> dict:
        return build_report(
            result.command,
            config,
            result.records,
            result.provenance,
            self.timings,
            result.matrices if emit_matrices else None,
        )

    @staticmethod
    def records(result: CommandResult) -> KZDKDataFrame:
        return KZDKDataFrame(pd.json_normalize(result.records))
# endregion


__all__ = (
    "CommandResult",
    "KZDK",
    "KZDKDataFrame",
    "KZDKExporter",
)
