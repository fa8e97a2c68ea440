import logging

import numpy as np

from dataclasses import dataclass
from functools import reduce
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from .category_checks import AxiomReport
from .core_exporter import to_jsonable
from .exceptions import ExcludedParameterException, JordanException, KZDKException
from .gl11_modules import (
    GENERATORS,
    ModuleRep,
    ModuleSpec,
    as_spec,
    build_module,
)
from .kz_engine import braiding, casimir_eigenvalues
from .superlinalg import (
    GradedMatrix,
    JordanData,
    act_in_slot,
    graded_permutation,
    jordan_chains,
    tensor_parities,
)
from .tensor_ring import CoreDecomposer, DecompositionResult, genericity
from .type_hints import AntipodeVariant, ComplexLike
from .utils import (
    AXIOM_TOL,
    CROSS_TOL,
    GENERICITY_MARGIN,
    format_number,
    snap,
    validate_kappa,
)
from .wrappers import WRAPPERS


logger = logging.getLogger(__name__)

AXIOM = WRAPPERS["Axiom"]



# region QModuleRep
@dataclass(frozen=True, eq=False)
class QModuleRep(ModuleRep):
    """Module of U_h(gl(1|1)); {ψ⁺, ψ⁻} = 2 sinh(hE)."""
    h: complex = 0j

    def anticommutator(self) -> np.ndarray:
        return 2 * linalg.sinhm(self.h * self.E.entries)

    @property
    def K(self) -> np.ndarray:
        return linalg.expm(self.h * self.E.entries / 2)

    @property
    def K_inv(self) -> np.ndarray:
        return linalg.expm(-self.h * self.E.entries / 2)


@dataclass(frozen=True, eq=False)
class QTensor(QModuleRep):
    """Product of two quantum modules through Δψ± = ψ±⊗K + K⁻¹⊗ψ±."""

    def algebra_map_residual(self) -> float:
        return self.relations_residual()


def h_from_kappa(kappa: ComplexLike) -> complex:
    return 1j * np.pi / validate_kappa(kappa)


def kappa_from_h(h: ComplexLike) -> complex:
    h = complex(h)
    if h == 0:
        raise KZDKException("h = 0 has no finite kappa.")
    return 1j * np.pi / h


def build_qmodule(spec: ModuleSpec, h: ComplexLike) -> QModuleRep:
    """
    Quantum module in the printed bases. ``T`` carries 2 sinh(eh) in ψ⁺;
    ``P`` uses q = e^h in the off-diagonal entries.
    """
    spec, h = as_spec(spec), complex(h)
    classical = build_module(spec)
    p = classical.parities
    E, N = classical.E.entries, classical.N.entries
    pp, pm = classical.psi_plus.entries, classical.psi_minus.entries

    match spec.kind:
        case "T":
            coupling = 2 * np.sinh(spec.e * h)
            if abs(coupling) < GENERICITY_MARGIN:
                raise ExcludedParameterException(
                    f"sinh(e h) vanishes for {spec.label!r} at h={format_number(h)}; e/kappa is an integer."
                )
            pp = np.array([[0, coupling], [0, 0]])
        case "P":
            q = np.exp(h)
            pp = np.array([
                [0, 1, -q, 0],
                [0, 0, 0, q],
                [0, 0, 0, 1],
                [0, 0, 0, 0],
            ])
            pm = np.array([
                [0, 0, 0, 0],
                [-1, 0, 0, 0],
                [-1 / q, 0, 0, 0],
                [0, 1 / q, -1, 0],
            ])

    mats = (GradedMatrix(m, p) for m in (E, N, pp, pm))
    return QModuleRep(spec, p, *mats, h=h)


def _common_h(*reps: QModuleRep) -> complex:
    h = reps[0].h
    if any(abs(r.h - h) > 1e-14 * max(1.0, abs(h)) for r in reps):
        raise KZDKException(f"Quantum modules carry different h: {[r.h for r in reps]!r}.")
    return h


def qtensor(A: QModuleRep, B: QModuleRep) -> QTensor:
    h = _common_h(A, B)
    factors = [A.parities, B.parities]
    parities = tensor_parities(factors)

    def act(x, slot):
        return act_in_slot(x, slot, factors).entries

    E = act(A.E.entries, 1) + act(B.E.entries, 2)
    N = act(A.N.entries, 1) + act(B.N.entries, 2)
    odd = [
        act(a.entries, 1) @ act(B.K, 2) + act(A.K_inv, 1) @ act(b.entries, 2)
        for a, b in ((A.psi_plus, B.psi_plus), (A.psi_minus, B.psi_minus))
    ]
    mats = (GradedMatrix(m, parities) for m in (E, N, *odd))
    return QTensor(None, parities, *mats, factors=(A, B), h=h)
# endregion



# region RMatrix
def _r_operator(reps: list[QModuleRep], i: int, j: int) -> np.ndarray:
    """Universal R evaluated in slots i < j of the product of ``reps``."""
    h = _common_h(*reps)
    parities = [r.parities for r in reps]

    def act(x, slot):
        return act_in_slot(x, slot, parities).entries

    Ei, Ni, Ej, Nj = (act(m, s) for m, s in (
        (reps[i - 1].E.entries, i), (reps[i - 1].N.entries, i),
        (reps[j - 1].E.entries, j), (reps[j - 1].N.entries, j),
    ))
    cartan = linalg.expm(h * (Ei @ Ej + Ei @ Nj + Ni @ Ej))
    fermionic = act(reps[i - 1].K @ reps[i - 1].psi_plus.entries, i) @ act(
        reps[j - 1].K_inv @ reps[j - 1].psi_minus.entries, j
    )
    return cartan @ (np.eye(cartan.shape[0]) - fermionic)


def r_matrix(A: QModuleRep, B: QModuleRep) -> GradedMatrix:
    """R = exp[h(E⊗E + E⊗N + N⊗E)] (1 - Kψ⁺ ⊗ K⁻¹ψ⁻) on A⊗B."""
    return GradedMatrix(_r_operator([A, B], 1, 2), tensor_parities([A.parities, B.parities]))


def quantum_braiding(A: QModuleRep, B: QModuleRep) -> GradedMatrix:
    """σ_q = P·R : A⊗B → B⊗A."""
    P = graded_permutation(A.parities, B.parities)
    return GradedMatrix(P.entries @ r_matrix(A, B).entries, P.parities, P.col_parities)


def opposite_coproduct(A: QModuleRep, B: QModuleRep, generator: str) -> np.ndarray:
    P_ab = graded_permutation(A.parities, B.parities).entries
    P_ba = graded_permutation(B.parities, A.parities).entries
    return P_ba @ qtensor(B, A).generator(generator).entries @ P_ab


@AXIOM("intertwining", report_cls=AxiomReport)
def _intertwining(A, B):
    R = r_matrix(A, B).entries
    AB = qtensor(A, B)
    residual = max(
        float(np.linalg.norm(R @ AB.generator(x).entries - opposite_coproduct(A, B, x) @ R, 2))
        for x in GENERATORS
    )
    return {"residual": residual, "operands": (A.label, B.label), "details": {"h": format_number(A.h)}}


def intertwining_residual(A: QModuleRep, B: QModuleRep, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """max over generators of ‖RΔ(x) - Δᵒᵖ(x)R‖."""
    return _intertwining(A, B, tol=tol)


@AXIOM("quasitriangularity", report_cls=AxiomReport)
def _quasitriangularity(A, B, C):
    reps = [A, B, C]
    R12, R13, R23 = (_r_operator(reps, i, j) for i, j in ((1, 2), (1, 3), (2, 3)))
    left = r_matrix(qtensor(A, B), C).entries
    right = r_matrix(A, qtensor(B, C)).entries
    details = {
        "coproductLeft": float(np.linalg.norm(left - R13 @ R23, 2)),
        "coproductRight": float(np.linalg.norm(right - R13 @ R12, 2)),
    }
    return {"residual": max(details.values()), "operands": (A.label, B.label, C.label), "details": details}


def quasitriangularity_residual(A: QModuleRep, B: QModuleRep, C: QModuleRep, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """(Δ⊗1)R = R₁₃R₂₃ and (1⊗Δ)R = R₁₃R₁₂ in A⊗B⊗C."""
    return _quasitriangularity(A, B, C, tol=tol)


@AXIOM("coassociativity", report_cls=AxiomReport)
def _coassociativity(A, B, C):
    left, right = qtensor(qtensor(A, B), C), qtensor(A, qtensor(B, C))
    residual = max(
        float(np.linalg.norm(left.generator(x).entries - right.generator(x).entries, 2))
        for x in GENERATORS
    )
    return {"residual": residual, "operands": (A.label, B.label, C.label)}


def coassociativity_residual(A: QModuleRep, B: QModuleRep, C: QModuleRep, *, tol: float = AXIOM_TOL) -> AxiomReport:
    return _coassociativity(A, B, C, tol=tol)
# endregion



# region Hopf
_ODD = {"psi+", "psi-"}

COPRODUCT = {
    "E": [(1, ("E",), ()), (1, (), ("E",))],
    "N": [(1, ("N",), ()), (1, (), ("N",))],
    "psi+": [(1, ("psi+",), ("K",)), (1, ("Kinv",), ("psi+",))],
    "psi-": [(1, ("psi-",), ("K",)), (1, ("Kinv",), ("psi-",))],
    "K": [(1, ("K",), ("K",))],
    "Kinv": [(1, ("Kinv",), ("Kinv",))],
}

COUNIT = {"E": 0, "N": 0, "psi+": 0, "psi-": 0, "K": 1, "Kinv": 1}

ANTIPODE = {
    "derived": {
        "E": [(-1, ("E",))],
        "N": [(-1, ("N",))],
        "psi+": [(-1, ("psi+",))],
        "psi-": [(-1, ("psi-",))],
        "K": [(1, ("Kinv",))],
        "Kinv": [(1, ("K",))],
    },
    "printed": {
        "E": [(-1, ("E",))],
        "N": [(-1, ("N",))],
        "psi+": [(-1, ("K", "psi+"))],
        "psi-": [(-1, ("psi-", "Kinv"))],
        "K": [(1, ("Kinv",))],
        "Kinv": [(1, ("K",))],
    },
}


def counit(word: tuple[str, ...]) -> complex:
    return reduce(lambda acc, letter: acc * COUNIT[letter], word, 1)


def antipode(word: tuple[str, ...], variant: AntipodeVariant = "derived") -> list[tuple[complex, tuple]]:
    """γ on a word: anti-multiplicative with the Koszul sign of reversing its odd letters."""
    if variant not in ANTIPODE:
        raise KZDKException(f"Unknown antipode variant {variant!r}. Expected one of {tuple(ANTIPODE)!r}.")
    odd = [letter in _ODD for letter in word]
    sign = (-1) ** sum(odd[a] and odd[b] for a in range(len(word)) for b in range(a + 1, len(word)))
    terms = [(sign, ())]
    for letter in reversed(word):
        terms = [
            (c * c2, w + w2)
            for c, w in terms
            for c2, w2 in ANTIPODE[variant][letter]
        ]
    return terms


def _word_matrix(rep: QModuleRep, word: tuple[str, ...]) -> np.ndarray:
    letters = {
        "E": rep.E.entries, "N": rep.N.entries,
        "psi+": rep.psi_plus.entries, "psi-": rep.psi_minus.entries,
        "K": rep.K, "Kinv": rep.K_inv,
    }
    return reduce(lambda acc, letter: acc @ letters[letter], word, np.eye(rep.dim, dtype=complex))


def _terms_matrix(rep, terms) -> np.ndarray:
    return sum((c * _word_matrix(rep, w) for c, w in terms), np.zeros((rep.dim, rep.dim), dtype=complex))


@AXIOM("hopf", report_cls=AxiomReport)
def _hopf(A, variant):
    details = {"counitLeft": 0.0, "counitRight": 0.0, "antipodeLeft": 0.0, "antipodeRight": 0.0}
    identity = np.eye(A.dim)
    for letter, split in COPRODUCT.items():
        x = _word_matrix(A, (letter,))
        unit = COUNIT[letter] * identity
        checks = {
            "counitLeft": sum(c * counit(w1) * _word_matrix(A, w2) for c, w1, w2 in split) - x,
            "counitRight": sum(c * _word_matrix(A, w1) * counit(w2) for c, w1, w2 in split) - x,
            "antipodeLeft": sum(
                c * _terms_matrix(A, antipode(w1, variant)) @ _word_matrix(A, w2) for c, w1, w2 in split
            ) - unit,
            "antipodeRight": sum(
                c * _word_matrix(A, w1) @ _terms_matrix(A, antipode(w2, variant)) for c, w1, w2 in split
            ) - unit,
        }
        for name, diff in checks.items():
            details[name] = max(details[name], float(np.linalg.norm(diff, 2)))
    return {
        "residual": max(details.values()),
        "operands": (A.label,),
        "details": {**details, "antipode": variant},
    }


def hopf_axioms_residual(A: QModuleRep, variant: AntipodeVariant = "derived", *, tol: float = AXIOM_TOL) -> AxiomReport:
    """
    Counit (ε⊗1)Δ = 1 = (1⊗ε)Δ and antipode m(γ⊗1)Δ = ηε = m(1⊗γ)Δ on the
    generators E, N, ψ±, K^±1 in the representation ``A``.
    """
    return _hopf(A, variant, tol=tol)
# endregion



# region Decomposition
class QuantumDecomposer(CoreDecomposer):
    __slots__ = ("_h",)

    def __init__(self, rep: QModuleRep, **kwargs) -> None:
        super().__init__(rep, **kwargs)
        self._h = rep.h

    def build_block(self, spec: ModuleSpec) -> QModuleRep:
        return build_qmodule(spec, self._h)

    def projective_basis(self, top: np.ndarray) -> list[np.ndarray]:
        pp, pm = self._matrices["psi+"], self._matrices["psi-"]
        q = np.exp(self._h)
        return [pp @ top, top, q * (pp @ pm @ top - top), q * (pm @ top)]


def qdecompose(A: QModuleRep, B: QModuleRep, *, force: bool = False) -> DecompositionResult:
    """Decompose A⊗B over U_h(gl(1|1)); same summand labels as the classical ring."""
    h = _common_h(A, B)
    genericity([A.spec, B.spec], kappa_from_h(h)).enforce(force=force)
    return QuantumDecomposer(qtensor(A, B)).decompose()
# endregion



# region DrinfeldKohno
def _profile_key(jordan: JordanData) -> list:
    return sorted(
        ((snap(lam, 8).real, snap(lam, 8).imag), sizes) for lam, sizes in jordan.profile().items()
    )


def _matched_distance(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max(initial=0.0))


def _spectral_estimates(matrix: np.ndarray, jordan: JordanData) -> tuple[np.ndarray, np.ndarray]:
    # mean eigenvalue per generalized eigenspace, from the trace of the restriction
    estimates, assigned = [], []
    for lam in jordan.eigenvalues():
        V = np.hstack([b.chain for b in jordan.blocks if abs(b.eigenvalue - lam) < 1e-12])
        restricted = np.linalg.lstsq(V, matrix @ V, rcond=None)[0]
        estimates += [np.trace(restricted) / V.shape[1]] * V.shape[1]
        assigned += [lam] * V.shape[1]
    return np.asarray(estimates), np.asarray(assigned)


def _compare(classical: np.ndarray, quantum: np.ndarray, candidates: list[complex], tol: float) -> dict:
    raw_c, raw_q = np.linalg.eigvals(classical), np.linalg.eigvals(quantum)
    out = {
        "classicalEigenvalues": np.sort_complex(raw_c).tolist(),
        "quantumEigenvalues": np.sort_complex(raw_q).tolist(),
        "rawEigenvalueDistance": _matched_distance(raw_c, raw_q),
    }
    try:
        jc, jq = jordan_chains(classical, candidates), jordan_chains(quantum, candidates)
    except JordanException as err:
        logger.info("dk_compare: Jordan data unavailable (%s)", err)
        out.update(classicalProfile=None, quantumProfile=None, eigenvalueDistance=None, match=False)
        return out
    pc, pq = _profile_key(jc), _profile_key(jq)
    est_c, lam_c = _spectral_estimates(classical, jc)
    est_q, lam_q = _spectral_estimates(quantum, jq)
    distance = _matched_distance(est_c, est_q)
    analytic = float(max(np.abs(est_c - lam_c).max(initial=0.0), np.abs(est_q - lam_q).max(initial=0.0)))
    out.update(
        classicalProfile=pc,
        quantumProfile=pq,
        eigenvalueDistance=distance,
        analyticDistance=analytic,
        match=pc == pq and distance <= tol and analytic <= tol,
    )
    return out


@dataclass(frozen=True)
class DKReport:
    operands: tuple[str, str]
    kappa: complex
    h: complex
    double_braiding: dict
    braiding: dict | None = None
    tolerance: float = CROSS_TOL
    passed: bool = False

    def to_record(self) -> dict:
        record = {
            "operands": list(self.operands),
            "kappa": format_number(self.kappa),
            "h": format_number(self.h),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "doubleBraiding": to_jsonable(self.double_braiding),
        }
        if self.braiding is not None:
            record["braiding"] = to_jsonable(self.braiding)
        return record


def dk_compare(A, B, kappa: ComplexLike, *, tol: float = CROSS_TOL, force: bool = False) -> DKReport:
    """
    Compare the classical braiding P·e^(iπΩ/κ) with σ_q = P·R at h = iπ/κ
    through conjugation invariants: Jordan profiles of the double braidings
    against the analytic eigenvalues e^(2πiλ/κ), and of the braidings
    themselves (±e^(iπλ/κ)) when A = B.

    Each generalized eigenspace contributes its mean eigenvalue; the two
    multisets must agree with each other and with the analytic values to
    ``tol``, and the Jordan profiles must coincide.
    """
    if not tol >= 0:
        raise KZDKException(f"dk_compare needs a non-negative tolerance, received {tol = }.")
    kappa = validate_kappa(kappa)
    A, B = as_spec(A), as_spec(B)
    genericity([A, B], kappa).enforce(force=force)
    h = h_from_kappa(kappa)
    Ac, Bc = build_module(A), build_module(B)
    Aq, Bq = build_qmodule(A, h), build_qmodule(B, h)
    lams = casimir_eigenvalues(Ac, Bc)

    classical = braiding(Bc, Ac, kappa).entries @ braiding(Ac, Bc, kappa).entries
    quantum = quantum_braiding(Bq, Aq).entries @ quantum_braiding(Aq, Bq).entries
    double = _compare(classical, quantum, [np.exp(2j * np.pi * lam / kappa) for lam in lams], tol)
    passed = double["match"]

    single = None
    if A == B:
        halves = [s * np.exp(1j * np.pi * lam / kappa) for lam in lams for s in (1, -1)]
        single = _compare(braiding(Ac, Bc, kappa).entries, quantum_braiding(Aq, Bq).entries, halves, tol)
        passed = passed and single["match"]

    logger.info("dk_compare %s, %s: %s", A.label, B.label, "match" if passed else "MISMATCH")
    return DKReport((A.label, B.label), kappa, h, double, single, tol, passed)
# endregion


__all__ = (
    "ANTIPODE",
    "COPRODUCT",
    "COUNIT",
    "DKReport",
    "QModuleRep",
    "QTensor",
    "QuantumDecomposer",
    "antipode",
    "build_qmodule",
    "coassociativity_residual",
    "counit",
    "dk_compare",
    "h_from_kappa",
    "hopf_axioms_residual",
    "intertwining_residual",
    "kappa_from_h",
    "opposite_coproduct",
    "qdecompose",
    "qtensor",
    "quantum_braiding",
    "quasitriangularity_residual",
    "r_matrix",
)
