import logging

import numpy as np

from dataclasses import dataclass, field

from .exceptions import VerificationException
from .gl11_modules import GENERATORS, ModuleRep, ModuleSpec, as_module, diagonal_action, supercommutator_residual
from .kz_engine import KZSystem, associator, braiding, reverse_braiding
from .tensor_ring import tensor_product
from .type_hints import BraidSign, ComplexLike
from .utils import AXIOM_TOL, BRANCH_CONVENTION
from .wrappers import WRAPPERS


logger = logging.getLogger(__name__)

AXIOM = WRAPPERS["Axiom"]
KOSZUL_CONVENTION = (
    "x acting in slot i picks up (-1)^(|x| * parity of the factors left of i); "
    "P(a⊗b) = (-1)^(|a||b|) b⊗a"
)
AXIOM_GROUPS = ("pentagon", "hexagon", "beta", "equivariance", "triangle")



# region AxiomReport
@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    operands: tuple[str, ...]
    residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "axiom": self.axiom,
            "operands": list(self.operands),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            **self.details,
        }



# region Helpers
def _alpha(factors, kappa: ComplexLike, order: int | None) -> np.ndarray:
    return associator(KZSystem(tuple(factors), kappa), order).entries


def _sigma(A, B, kappa: ComplexLike, sign: BraidSign) -> np.ndarray:
    if sign not in (1, -1):
        raise VerificationException(f"Braiding sign must be +1 or -1, received {sign!r}.")
    make = braiding if sign == 1 else reverse_braiding
    return make(A, B, kappa).entries


def _eye(rep: ModuleRep) -> np.ndarray:
    return np.eye(rep.dim)


def _norm(diff: np.ndarray) -> float:
    return float(np.linalg.norm(diff, 2))


def _labels(*reps) -> tuple[str, ...]:
    return tuple(r.label for r in reps)


def beta(X, Y, Z, kappa: ComplexLike, sign: BraidSign = 1, order: int | None = None) -> np.ndarray:
    """β^± = α_{YXZ} (σ^±_{XY} ⊗ 1) α_{XYZ}⁻¹ : X⊗(Y⊗Z) → Y⊗(X⊗Z)."""
    X, Y, Z = map(as_module, (X, Y, Z))
    inner = np.kron(_sigma(X, Y, kappa, sign), _eye(Z))
    return _alpha((Y, X, Z), kappa, order) @ inner @ np.linalg.inv(_alpha((X, Y, Z), kappa, order))
# endregion



# region Axioms
@AXIOM("pentagon", report_cls=AxiomReport)
def _pentagon(V1, V2, V3, V4, kappa, order):
    V23, V12, V34 = tensor_product(V2, V3), tensor_product(V1, V2), tensor_product(V3, V4)
    lhs = (
        np.kron(_eye(V1), _alpha((V2, V3, V4), kappa, order))
        @ _alpha((V1, V23, V4), kappa, order)
        @ np.kron(_alpha((V1, V2, V3), kappa, order), _eye(V4))
    )
    rhs = _alpha((V1, V2, V34), kappa, order) @ _alpha((V12, V3, V4), kappa, order)
    return {
        "residual": _norm(lhs - rhs),
        "operands": _labels(V1, V2, V3, V4),
        "details": {"order": order, "koszul": KOSZUL_CONVENTION},
    }


def pentagon_residual(V1, V2, V3, V4, kappa: ComplexLike, order: int | None = None, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """
    (1⊗α₂₃₄) α_{1,23,4} (α₁₂₃⊗1) against α_{1,2,34} α_{12,3,4} on V₁⊗V₂⊗V₃⊗V₄,
    fused pairs entering as product factors of a three-point system.
    """
    return _pentagon(*map(as_module, (V1, V2, V3, V4)), kappa, order, tol=tol)


def _hexagon_parts(V1, V2, V3, kappa, sign, order):
    V23 = tensor_product(V2, V3)
    lhs = (
        _alpha((V2, V3, V1), kappa, order)
        @ _sigma(V1, V23, kappa, sign)
        @ _alpha((V1, V2, V3), kappa, order)
    )
    rhs = (
        np.kron(_eye(V2), _sigma(V1, V3, kappa, sign))
        @ _alpha((V2, V1, V3), kappa, order)
        @ np.kron(_sigma(V1, V2, kappa, sign), _eye(V3))
    )
    return {
        "residual": _norm(lhs - rhs),
        "operands": _labels(V1, V2, V3),
        "details": {"sign": sign, "order": order, "koszul": KOSZUL_CONVENTION, "branch": BRANCH_CONVENTION},
    }


@AXIOM("hexagonPlus", report_cls=AxiomReport)
def _hexagon_plus(V1, V2, V3, kappa, order):
    return _hexagon_parts(V1, V2, V3, kappa, 1, order)


@AXIOM("hexagonMinus", report_cls=AxiomReport)
def _hexagon_minus(V1, V2, V3, kappa, order):
    return _hexagon_parts(V1, V2, V3, kappa, -1, order)


def hexagon_residual(
    V1,
    V2,
    V3,
    kappa: ComplexLike,
    sign: BraidSign = 1,
    order: int | None = None,
    *,
    tol: float = AXIOM_TOL,
    ) -> AxiomReport:
    """α₂₃₁ σ^±_{1,23} α₁₂₃ against (1⊗σ^±₁₃) α₂₁₃ (σ^±₁₂⊗1)."""
    if sign not in (1, -1):
        raise VerificationException(f"Hexagon sign must be +1 or -1, received {sign!r}.")
    check = _hexagon_plus if sign == 1 else _hexagon_minus
    return check(*map(as_module, (V1, V2, V3)), kappa, order, tol=tol)


@AXIOM("equivariance", report_cls=AxiomReport)
def _equivariance(alpha, factors):
    factors = [as_module(f) for f in factors]
    alpha = np.asarray(alpha)
    if alpha.shape != (np.prod([f.dim for f in factors]),) * 2:
        raise VerificationException(
            f"Operator of shape {alpha.shape!r} does not act on {'⊗'.join(f.label for f in factors)!r}."
        )
    return {"residual": supercommutator_residual(alpha, factors), "operands": _labels(*factors)}


def equivariance_residual(alpha, factors, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """max over E, N, ψ± of ‖[α, Δ(x)]‖."""
    return _equivariance(alpha, factors, tol=tol)


@AXIOM("equivariance", report_cls=AxiomReport)
def _braiding_equivariance(A, B, kappa):
    sigma = braiding(A, B, kappa).entries
    residual = max(
        _norm(sigma @ diagonal_action([A, B], x).entries - diagonal_action([B, A], x).entries @ sigma)
        for x in GENERATORS
    )
    return {"residual": residual, "operands": _labels(A, B), "details": {"map": "braiding"}}


def braiding_equivariance_residual(A, B, kappa: ComplexLike, *, tol: float = AXIOM_TOL) -> AxiomReport:
    return _braiding_equivariance(as_module(A), as_module(B), kappa, tol=tol)


@AXIOM("betaBraid", report_cls=AxiomReport)
def _beta_braid(V1, V2, V3, V4, kappa, order):
    details = {}
    for sign, name in ((1, "plus"), (-1, "minus")):
        inverse = beta(V1, V2, V3, kappa, sign, order) @ beta(V2, V1, V3, kappa, -sign, order)
        details[f"inverse_{name}"] = _norm(inverse - np.eye(inverse.shape[0]))

        X, Y, Z, U = V1, V2, V3, V4
        lhs = (
            beta(Y, Z, tensor_product(X, U), kappa, sign, order)
            @ np.kron(_eye(Y), beta(X, Z, U, kappa, sign, order))
            @ beta(X, Y, tensor_product(Z, U), kappa, sign, order)
        )
        rhs = (
            np.kron(_eye(Z), beta(X, Y, U, kappa, sign, order))
            @ beta(X, Z, tensor_product(Y, U), kappa, sign, order)
            @ np.kron(_eye(X), beta(Y, Z, U, kappa, sign, order))
        )
        details[f"braid_{name}"] = _norm(lhs - rhs)
    return {
        "residual": max(details.values()),
        "operands": _labels(V1, V2, V3, V4),
        "details": details,
    }


def beta_braid_residual(V1, V2, V3, V4, kappa: ComplexLike, order: int | None = None, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """
    β^±β^∓ = 1 on V₁,V₂,V₃ and the braid relation β₁₂β₂₃β₁₂ = β₂₃β₁₂β₂₃ on the
    right-bracketed V₁⊗(V₂⊗(V₃⊗V₄)), for both signs.
    """
    return _beta_braid(*map(as_module, (V1, V2, V3, V4)), kappa, order, tol=tol)


@AXIOM("unitality", report_cls=AxiomReport)
def _triangle(V1, V3, kappa, order):
    unit = as_module(ModuleSpec("A", 0, 0))
    alpha = _alpha((V1, unit, V3), kappa, order)
    return {
        "residual": _norm(alpha - np.eye(alpha.shape[0])),
        "operands": _labels(V1, unit, V3),
    }


def triangle_residual(V1, V3, kappa: ComplexLike, order: int | None = None, *, tol: float = AXIOM_TOL) -> AxiomReport:
    """α_{V₁,A₀,V₃} = 1; the unit constraints are identities."""
    return _triangle(as_module(V1), as_module(V3), kappa, order, tol=tol)
# endregion



# region Runner
def run_axioms(
    specs: list,
    kappa: ComplexLike,
    axioms: tuple[str, ...] = ("all",),
    *,
    order: int | None = None,
    tol: float = AXIOM_TOL,
    ) -> list[AxiomReport]:
    """
    Run the requested axiom groups on ``specs``.

    Three-factor groups (hexagon, equivariance, triangle) use the first three
    modules; pentagon and beta need four.
    """
    groups = AXIOM_GROUPS if "all" in axioms else tuple(axioms)
    unknown = set(groups) - set(AXIOM_GROUPS)
    if unknown:
        raise VerificationException(
            f"Unknown axiom group(s) {sorted(unknown)!r}. Expected any of {AXIOM_GROUPS + ('all',)!r}."
        )
    reps = [as_module(s) for s in specs]
    needs_four = {"pentagon", "beta"} & set(groups)
    if needs_four and len(reps) < 4:
        if "all" in axioms:
            groups = tuple(g for g in groups if g not in needs_four)
        else:
            raise VerificationException(
                f"{sorted(needs_four)!r} need four modules, received {len(reps)}."
            )
    if len(reps) < 3:
        raise VerificationException(f"Axiom checks need at least three modules, received {len(reps)}.")

    reports = []
    V1, V2, V3 = reps[:3]
    for group in groups:
        match group:
            case "pentagon":
                reports.append(pentagon_residual(*reps[:4], kappa, order, tol=tol))
            case "hexagon":
                reports.extend(hexagon_residual(V1, V2, V3, kappa, s, order, tol=tol) for s in (1, -1))
            case "beta":
                reports.append(beta_braid_residual(*reps[:4], kappa, order, tol=tol))
            case "equivariance":
                alpha = _alpha((V1, V2, V3), kappa, order)
                reports.append(equivariance_residual(alpha, [V1, V2, V3], tol=tol))
                reports.append(braiding_equivariance_residual(V1, V2, kappa, tol=tol))
            case "triangle":
                reports.append(triangle_residual(V1, V3, kappa, order, tol=tol))
    return reports
# endregion


__all__ = (
    "AXIOM_GROUPS",
    "AxiomReport",
    "beta",
    "beta_braid_residual",
    "braiding_equivariance_residual",
    "equivariance_residual",
    "hexagon_residual",
    "pentagon_residual",
    "run_axioms",
    "triangle_residual",
)
