import logging

import numpy as np

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from scipy import linalg

from .exceptions import DecompositionException, ExcludedParameterException
from .gl11_modules import (
    ModuleRep,
    ModuleSpec,
    as_module,
    as_spec,
    build_module,
)
from .superlinalg import GradedMatrix, act_in_slot, tensor_parities
from .type_hints import ComplexLike
from .utils import (
    DEFAULT_TOL,
    GENERICITY_MARGIN,
    RANK_TOL,
    distance_to_integer,
    format_number,
    snap,
    validate_kappa,
)


logger = logging.getLogger(__name__)



# region Products
def tensor_product(A: ModuleRep, B: ModuleRep) -> ModuleRep:
    """Product module with the primitive coproduct Δ(x) = x⊗1 + 1⊗x."""
    A, B = as_module(A), as_module(B)
    factors = [A.parities, B.parities]
    parities = tensor_parities(factors)
    mats = [
        GradedMatrix(
            act_in_slot(a, 1, factors).entries + act_in_slot(b, 2, factors).entries,
            parities,
        )
        for a, b in zip(A.generators.values(), B.generators.values())
    ]
    return ModuleRep(None, parities, *mats, factors=(A, B))


def ring_table(a: ModuleSpec, b: ModuleSpec) -> list[tuple[ModuleSpec, int]]:
    """
    Summands of ``a⊗b`` with multiplicities. A parity reversal on either
    input reverses every summand.
    """
    a, b = as_spec(a), as_spec(b)
    s = a.n + b.n

    def T(e, n, rev=False):
        return ModuleSpec("T", e, n, rev)

    def P(n, rev=False):
        return ModuleSpec("P", 0, n, rev)

    match a.kind, b.kind:
        case "A", _:
            out = [(ModuleSpec(b.kind, b.e, s), 1)]
        case _, "A":
            out = [(ModuleSpec(a.kind, a.e, s), 1)]
        case "T", "T":
            total = a.e + b.e
            if abs(total) <= DEFAULT_TOL * max(1.0, abs(a.e)):
                out = [(P(s, True), 1)]
            else:
                out = [(T(total, s + 0.5), 1), (T(total, s - 0.5, True), 1)]
        case ("T", "P") | ("P", "T"):
            e = a.e if a.kind == "T" else b.e
            out = [(T(e, s + 1, True), 1), (T(e, s), 2), (T(e, s - 1, True), 1)]
        case "P", "P":
            out = [(P(s + 1, True), 1), (P(s), 2), (P(s - 1, True), 1)]

    if a.parity_reversed ^ b.parity_reversed:
        out = [(spec.reversed(), mult) for spec, mult in out]
    return out


def ring_summands(rep) -> list[tuple[ModuleSpec, int]]:
    """Summand multiset of an elementary or iterated product module."""
    if isinstance(rep, ModuleSpec) or isinstance(rep, str):
        return [(as_spec(rep), 1)]
    if rep.spec is not None:
        return [(rep.spec, 1)]
    if len(rep.factors) != 2:
        raise DecompositionException(
            f"Cannot read the summands of {rep.label!r}: expected a binary product."
        )
    counts = Counter()
    for a, ma in ring_summands(rep.factors[0]):
        for b, mb in ring_summands(rep.factors[1]):
            for spec, mult in ring_table(a, b):
                counts[spec] += ma * mb * mult
    return sorted(counts.items(), key=lambda kv: _sort_key(kv[0]))


def _sort_key(spec: ModuleSpec) -> tuple:
    kind, e, n, rev = spec.key
    return (kind, e.real, e.imag, -n.real, -n.imag, rev)



# region Genericity
@dataclass(frozen=True)
class GenericityViolation:
    condition: str
    value: complex
    distance: float

    def __str__(self) -> str:
        return f"{self.condition} = {format_number(self.value)} (distance {self.distance:.3e})"


@dataclass(frozen=True)
class GenericityReport:
    kappa: complex
    specs: tuple[ModuleSpec, ...]
    violations: tuple[GenericityViolation, ...]
    margin: float = GENERICITY_MARGIN

    @property
    def generic(self) -> bool:
        return not self.violations

    def enforce(self, *, force: bool = False) -> "GenericityReport":
        if self.generic:
            return self
        listed = "\n".join(f"  - {v}" for v in self.violations)
        if force:
            logger.warning(
                "Accepting near-excluded parameters (force=True) for %s:\n%s",
                ", ".join(s.label for s in self.specs), listed,
            )
            return self
        raise ExcludedParameterException(
            "Parameters lie in (or within "
            f"{self.margin:g} of) the excluded set for kappa={format_number(self.kappa)}:"
            f"\n{listed}"
        )


def genericity(
    specs: list[ModuleSpec],
    kappa: ComplexLike = 1.0,
    *,
    margin: float = GENERICITY_MARGIN,
    ) -> GenericityReport:
    """
    Conditions on the typical factors: e_i/κ ∉ ℤ and, for every subset of two
    or more, (Σ e_i)/κ ∉ ℤ∖{0}.
    """
    kappa = validate_kappa(kappa)
    specs = tuple(as_spec(s) for s in specs)
    typical = [(i, s) for i, s in enumerate(specs, start=1) if s.is_typical]
    violations = []

    for i, s in typical:
        z = s.e / kappa
        d = distance_to_integer(z)
        if d < margin:
            violations.append(GenericityViolation(f"e_{i}/kappa", z, d))

    for size in range(2, len(typical) + 1):
        for subset in combinations(typical, size):
            z = sum(s.e for _, s in subset) / kappa
            names = "+".join(f"e_{i}" for i, _ in subset)
            if round(z.real) == 0 and abs(z) <= 1e-14:
                continue
            d = distance_to_integer(z, exclude_zero=True)
            d = min(d, abs(z)) if abs(z) < margin else d
            if d < margin:
                violations.append(GenericityViolation(f"({names})/kappa", z, d))

    return GenericityReport(kappa, specs, tuple(violations), margin)
# endregion



# region Decomposition
@dataclass(frozen=True)
class DecompositionResult:
    """
    Summand multiset of a product together with its certificate.

    ``change_of_basis`` has the block basis as columns, so its inverse maps
    standard coordinates to block coordinates.
    """
    operands: tuple[str, ...]
    summands: tuple[tuple[ModuleSpec, int], ...]
    blocks: tuple[ModuleSpec, ...]
    change_of_basis: np.ndarray
    residual: float

    def multiset(self) -> Counter:
        return Counter({spec: mult for spec, mult in self.summands})

    @property
    def labels(self) -> list[str]:
        return [spec.label if mult == 1 else f"{mult}x{spec.label}" for spec, mult in self.summands]

    @property
    def dim(self) -> int:
        return sum(spec.dim * mult for spec, mult in self.summands)

    def matches(self, expected: list[tuple[ModuleSpec, int]]) -> bool:
        return self.multiset() == Counter(dict(expected))

    def to_record(self) -> dict:
        return {
            "operands": list(self.operands),
            "summands": [
                {"module": spec.label, "kind": spec.kind, "parityReversed": spec.parity_reversed, "multiplicity": mult}
                for spec, mult in self.summands
            ],
            "certificateResidual": self.residual,
            "basisCondition": float(np.linalg.cond(self.change_of_basis)),
        }


class CoreDecomposer:
    """
    Splits a module into the indecomposables of the category.

    Highest vectors ker ψ⁺ per weight space give typical summands when E ≠ 0.
    For E = 0, tops t with ψ⁺ψ⁻t ≠ 0 generate projective summands and the
    remaining joint kernel of ψ± gives atypical ones. Subclasses fix the
    block matrices and the projective basis.
    """
    __slots__ = (
        "_rep",
        "_tol",
        "_result",
        "_weights",
    )

    def __init__(self, rep: ModuleRep, *, tol: float = RANK_TOL) -> None:
        self._rep = rep
        self._tol = tol
        self._result = None
        self._weights = None

    def build_block(self, spec: ModuleSpec) -> ModuleRep:
        raise NotImplementedError

    def projective_basis(self, top: np.ndarray) -> list[np.ndarray]:
        raise NotImplementedError

    @property
    def _matrices(self) -> dict[str, np.ndarray]:
        return {name: g.entries for name, g in self._rep.generators.items()}

    def _central_charge(self) -> complex:
        E = self._matrices["E"]
        value = np.trace(E) / E.shape[0]
        if np.linalg.norm(E - value * np.eye(E.shape[0]), 2) > 1e3 * self._tol * max(1.0, abs(value)):
            raise DecompositionException(
                f"E does not act as a scalar on {self._rep.label!r}; the module is outside the category."
            )
        return complex(value)

    def weight_spaces(self) -> list[tuple[int, complex, np.ndarray]]:
        """(parity, N-weight, basis columns) for every nonzero weight space."""
        if self._weights is not None:
            return self._weights
        N = self._matrices["N"]
        dim = N.shape[0]
        spaces = []
        for parity in (0, 1):
            idx = np.flatnonzero(self._rep.parities == parity)
            if idx.size == 0:
                continue
            block = N[np.ix_(idx, idx)]
            clusters = []
            for w in np.linalg.eigvals(block):
                if not any(abs(w - c) < 1e-7 for c in clusters):
                    clusters.append(w)
            for w in clusters:
                w = snap(w)
                kernel = linalg.null_space(block - w * np.eye(idx.size), rcond=self._tol)
                if kernel.shape[1] == 0:
                    continue
                W = np.zeros((dim, kernel.shape[1]), dtype=complex)
                W[idx] = kernel
                spaces.append((parity, w, W))
        self._weights = spaces
        return spaces

    def _rank_directions(self, image: np.ndarray, scale: float) -> np.ndarray:
        if image.shape[1] == 0:
            return np.zeros((image.shape[1], 0), dtype=complex)
        _, s, Vh = np.linalg.svd(image, full_matrices=False)
        rank = int(np.sum(s > 1e2 * self._tol * max(1.0, scale)))
        return Vh[:rank].conj().T

    def _typical_summands(self, charge: complex) -> list[tuple[ModuleSpec, list]]:
        pp, pm = self._matrices["psi+"], self._matrices["psi-"]
        found = []
        for parity, w, W in self.weight_spaces():
            kernel = linalg.null_space(pp @ W, rcond=self._tol)
            for h in (W @ kernel).T:
                spec = ModuleSpec("T", snap(charge), snap(w - 0.5), bool(parity))
                found.append((spec, [h, pm @ h]))
        return found

    def _atypical_summands(self) -> list[tuple[ModuleSpec, list]]:
        pp, pm = self._matrices["psi+"], self._matrices["psi-"]
        scale = max(1.0, np.linalg.norm(pp, 2) * np.linalg.norm(pm, 2))
        found = []
        for parity, w, W in self.weight_spaces():
            tops = W @ self._rank_directions(pp @ pm @ W, scale)
            for t in tops.T:
                found.append((ModuleSpec("P", 0, snap(w), bool(parity)), self.projective_basis(t)))

        taken = [v for _, basis in found for v in basis]
        Q = linalg.orth(np.column_stack(taken)) if taken else np.zeros((self._rep.dim, 0))
        for parity, w, W in self.weight_spaces():
            joint = W @ linalg.null_space(np.vstack([pp @ W, pm @ W]), rcond=self._tol)
            if joint.shape[1] == 0:
                continue
            residue = joint - Q @ (Q.conj().T @ joint)
            for a in (joint @ self._rank_directions(residue, 1.0)).T:
                found.append((ModuleSpec("A", 0, snap(w), bool(parity)), [a]))
        return found

    def _certify(self, pieces) -> tuple[np.ndarray, float]:
        S = np.column_stack([v for _, basis in pieces for v in basis])
        if S.shape[0] != S.shape[1]:
            raise DecompositionException(
                f"Summands of {self._rep.label!r} span {S.shape[1]} of {S.shape[0]} dimensions."
                f"\nFound: {[spec.label for spec, _ in pieces]!r}"
            )
        if np.linalg.cond(S) > 1e10:
            raise DecompositionException(
                f"Summand bases of {self._rep.label!r} are numerically dependent."
            )
        S_inv = np.linalg.inv(S)
        blocks = [self.build_block(spec) for spec, _ in pieces]
        residual = 0.0
        for name, X in self._matrices.items():
            expected = linalg.block_diag(*(b.generator(name).entries for b in blocks))
            residual = max(residual, float(np.linalg.norm(S_inv @ X @ S - expected, 2)))
        expected_parities = np.concatenate([b.parities for b in blocks])
        if not np.array_equal(expected_parities, self._rep.parities[np.argmax(np.abs(S), axis=0)]):
            raise DecompositionException(
                f"Parity flags of the summands of {self._rep.label!r} are inconsistent with the basis."
            )
        return S, residual

    def decompose(self) -> DecompositionResult:
        if self._result is not None:
            return self._result
        charge = self._central_charge()
        if abs(charge) > 1e2 * self._tol:
            pieces = self._typical_summands(charge)
        else:
            pieces = self._atypical_summands()
        S, residual = self._certify(pieces)

        counts = Counter(spec for spec, _ in pieces)
        summands = tuple(sorted(counts.items(), key=lambda kv: _sort_key(kv[0])))
        operands = tuple(f.label for f in self._rep.factors) or (self._rep.label,)
        self._result = DecompositionResult(
            operands, summands, tuple(spec for spec, _ in pieces), S, residual
        )
        logger.debug("decomposed %s into %s, residual %.2e", self._rep.label, self._result.labels, residual)
        return self._result


class ClassicalDecomposer(CoreDecomposer):
    __slots__ = ()

    def build_block(self, spec: ModuleSpec) -> ModuleRep:
        return build_module(spec)

    def projective_basis(self, top: np.ndarray) -> list[np.ndarray]:
        pp, pm = self._matrices["psi+"], self._matrices["psi-"]
        bottom = pp @ pm @ top
        return [pp @ top, top / 2 + bottom, top / 2 - bottom, pm @ top]


def decompose(
    A: ModuleRep,
    B: ModuleRep,
    *,
    kappa: ComplexLike = 1.0,
    force: bool = False,
    ) -> DecompositionResult:
    """
    Decompose ``A⊗B`` into indecomposables.

    Parameters:
        - A, B: modules, specs or spec strings; products are accepted.
        - kappa (complex): scale of the genericity conditions.
        - force (bool): accept near-excluded parameters with a warning.
    """
    A, B = as_module(A), as_module(B)
    genericity([*A.leaves(), *B.leaves()], kappa).enforce(force=force)
    return ClassicalDecomposer(tensor_product(A, B)).decompose()
# endregion


__all__ = (
    "ClassicalDecomposer",
    "CoreDecomposer",
    "DecompositionResult",
    "GenericityReport",
    "GenericityViolation",
    "decompose",
    "genericity",
    "ring_summands",
    "ring_table",
    "tensor_product",
)
