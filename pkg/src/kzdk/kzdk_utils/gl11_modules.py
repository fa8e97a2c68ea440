import logging

import numpy as np

from dataclasses import dataclass, replace
from functools import reduce

from .exceptions import ModuleSpecException
from .superlinalg import (
    GradedMatrix,
    act_in_slot,
    supertranspose,
    tensor_parities,
)
from .type_hints import ComplexLike, GeneratorName, ModuleKind
from .utils import RELATION_TOL, format_number, parse_module_spec as _split_spec, snap


logger = logging.getLogger(__name__)


GENERATORS: tuple[GeneratorName, ...] = ("E", "N", "psi+", "psi-")
_DIMS = {"T": 2, "A": 1, "P": 4}



# region ModuleSpec
@dataclass(frozen=True, eq=False)
class ModuleSpec:
    """
    Label of a module of the category.

    Two specs compare equal when their parameters agree to ten digits, so
    labels produced by different computations can be grouped into multisets.
    """
    kind: ModuleKind
    e: complex = 0j
    n: complex = 0j
    parity_reversed: bool = False

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in _DIMS:
            raise ModuleSpecException(
                f"Unknown module kind {self.kind!r}. Expected one of {tuple(_DIMS)!r}."
            )
        e, n = complex(self.e), complex(self.n)
        if kind == "T" and abs(e) == 0:
            raise ModuleSpecException(
                "Typical modules require e != 0. "
                f"Received {e = } for kind 'T'; use 'A' or 'P' for e = 0."
            )
        if kind in ("A", "P") and abs(e) != 0:
            raise ModuleSpecException(
                f"Atypical and projective modules carry e = 0. Received {e = } for kind {kind!r}."
            )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parity_reversed", bool(self.parity_reversed))

    @classmethod
    def from_string(cls, text: str) -> "ModuleSpec":
        kind, e, n, parity_reversed = _split_spec(text)
        return cls(kind, e, n, parity_reversed)

    @property
    def key(self) -> tuple:
        return (self.kind, snap(self.e), snap(self.n), self.parity_reversed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleSpec):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"ModuleSpec({self.label!r})"

    @property
    def dim(self) -> int:
        return _DIMS[self.kind]

    @property
    def is_typical(self) -> bool:
        return self.kind == "T"

    @property
    def label(self) -> str:
        prefix = "Pi*" if self.parity_reversed else ""
        if self.kind == "T":
            return f"{prefix}T:{format_number(self.e)},{format_number(self.n)}"
        return f"{prefix}{self.kind}:{format_number(self.n)}"

    def reversed(self) -> "ModuleSpec":
        return replace(self, parity_reversed=not self.parity_reversed)

    def shifted(self, dn: ComplexLike) -> "ModuleSpec":
        return replace(self, n=self.n + complex(dn))



# region ModuleRep
@dataclass(frozen=True, eq=False)
class ModuleRep:
    """
    Concrete module: parity vector and the four generator matrices.

    A product of modules carries ``spec=None`` and keeps its ``factors``.
    """
    spec: ModuleSpec | None
    parities: np.ndarray
    E: GradedMatrix
    N: GradedMatrix
    psi_plus: GradedMatrix
    psi_minus: GradedMatrix
    factors: tuple = ()
    label: str = ""

    def __post_init__(self):
        if not self.label:
            name = self.spec.label if self.spec is not None else "⊗".join(f.label for f in self.factors)
            object.__setattr__(self, "label", name)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label!r}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def is_composite(self) -> bool:
        return self.spec is None and bool(self.factors)

    @property
    def generators(self) -> dict[str, GradedMatrix]:
        return dict(zip(GENERATORS, (self.E, self.N, self.psi_plus, self.psi_minus)))

    def generator(self, name: GeneratorName) -> GradedMatrix:
        try:
            return self.generators[name]
        except KeyError:
            raise ModuleSpecException(
                f"Unknown generator {name!r}. Expected one of {GENERATORS!r}."
            )

    def leaves(self) -> list[ModuleSpec]:
        """Specs of the elementary factors, left to right."""
        if self.spec is not None:
            return [self.spec]
        return [s for f in self.factors for s in f.leaves()]

    def anticommutator(self) -> np.ndarray:
        """Expected value of {ψ⁺, ψ⁻}."""
        return self.E.entries

    def relations_residual(self) -> float:
        E, N, pp, pm = (g.entries for g in self.generators.values())
        residuals = (
            N @ pp - pp @ N - pp,
            N @ pm - pm @ N + pm,
            pp @ pm + pm @ pp - self.anticommutator(),
            E @ N - N @ E,
            E @ pp - pp @ E,
            E @ pm - pm @ E,
            pp @ pp,
            pm @ pm,
        )
        return max(float(np.abs(r).max(initial=0.0)) for r in residuals)

    def parity_residual(self) -> float:
        """Deviation of E, N from even and ψ± from odd."""
        return max(
            float(np.abs(self.E.odd_part()).max(initial=0.0)),
            float(np.abs(self.N.odd_part()).max(initial=0.0)),
            float(np.abs(self.psi_plus.even_part()).max(initial=0.0)),
            float(np.abs(self.psi_minus.even_part()).max(initial=0.0)),
        )
# endregion



# region Builders
def _graded(entries, parities) -> GradedMatrix:
    return GradedMatrix(np.asarray(entries, dtype=complex), parities)


def _standard_parities(spec: ModuleSpec) -> np.ndarray:
    base = {"T": [0, 1], "A": [0], "P": [1, 0, 0, 1]}[spec.kind]
    return (np.array(base) + int(spec.parity_reversed)) % 2


def parse_module_spec(text: str) -> ModuleSpec:
    return ModuleSpec.from_string(text)


def as_spec(obj) -> ModuleSpec:
    if isinstance(obj, ModuleSpec):
        return obj
    if isinstance(obj, ModuleRep) and obj.spec is not None:
        return obj.spec
    if isinstance(obj, str):
        return ModuleSpec.from_string(obj)
    raise ModuleSpecException(
        f"Expected a ModuleSpec, an elementary ModuleRep or a spec string, received {obj!r}."
    )


def as_module(obj) -> ModuleRep:
    if isinstance(obj, ModuleRep):
        return obj
    return build_module(as_spec(obj))


def build_module(spec: ModuleSpec) -> ModuleRep:
    """
    Classical module with the printed bases.

    - ``T:e,n`` basis (↑, ↓): N = diag(n+1/2, n-1/2), ψ⁺↓ = e↑, ψ⁻↑ = ↓.
    - ``A:n``: N = n, everything else zero.
    - ``P:n`` basis (r, e1, e2, l) with t = e1+e2, b = (e1-e2)/2:
      ψ⁺t = r, ψ⁺l = b, ψ⁻t = l, ψ⁻r = -b.
    """
    spec = as_spec(spec)
    e, n = spec.e, spec.n
    p = _standard_parities(spec)

    match spec.kind:
        case "T":
            E = e * np.eye(2)
            N = np.diag([n + 0.5, n - 0.5])
            pp = [[0, e], [0, 0]]
            pm = [[0, 0], [1, 0]]
        case "A":
            E, N, pp, pm = [[0]], [[n]], [[0]], [[0]]
        case "P":
            E = np.zeros((4, 4))
            N = np.diag([n + 1, n, n, n - 1])
            pp = 0.5 * np.array([
                [0, 1, 1, 0],
                [0, 0, 0, 1],
                [0, 0, 0, -1],
                [0, 0, 0, 0],
            ])
            pm = 0.5 * np.array([
                [0, 0, 0, 0],
                [-1, 0, 0, 0],
                [1, 0, 0, 0],
                [0, 1, 1, 0],
            ])

    return ModuleRep(spec, p, *(_graded(m, p) for m in (E, N, pp, pm)))


def parity_reverse(rep: ModuleRep) -> ModuleRep:
    if rep.spec is None:
        raise ModuleSpecException(
            f"parity_reverse expects an elementary module, received the product {rep.label!r}."
        )
    flipped = (rep.parities + 1) % 2
    return replace(
        rep,
        spec=rep.spec.reversed(),
        parities=flipped,
        E=_graded(rep.E.entries, flipped),
        N=_graded(rep.N.entries, flipped),
        psi_plus=_graded(rep.psi_plus.entries, flipped),
        psi_minus=_graded(rep.psi_minus.entries, flipped),
        label="",
    )


def dual_module(rep: ModuleRep) -> ModuleRep:
    """Dual module, x ↦ -x^st on every generator."""
    p = rep.parities
    mats = [-supertranspose(g, p).entries for g in rep.generators.values()]
    return ModuleRep(None, p, *(_graded(m, p) for m in mats), label=f"dual({rep.label})")


def casimir_matrix(E, N, pp, pm) -> np.ndarray:
    return N @ E + E @ N + pm @ pp - pp @ pm + E @ E


def casimir(rep: ModuleRep) -> GradedMatrix:
    E, N, pp, pm = (g.entries for g in rep.generators.values())
    return _graded(casimir_matrix(E, N, pp, pm), rep.parities)


def conformal_dimension(spec: ModuleSpec) -> complex:
    spec = as_spec(spec)
    return spec.e * (spec.n + spec.e / 2) if spec.is_typical else 0j


def _factor_parities(factors) -> list[np.ndarray]:
    return [f.parities for f in factors]


def diagonal_action(factors: list[ModuleRep], generator: GeneratorName) -> GradedMatrix:
    parities = _factor_parities(factors)
    terms = [
        act_in_slot(f.generator(generator), slot, parities).entries
        for slot, f in enumerate(factors, start=1)
    ]
    return GradedMatrix(reduce(np.add, terms), tensor_parities(parities))


def tensor_casimir(factors: list[ModuleRep], i: int, j: int) -> GradedMatrix:
    """
    Ω_ij = N_i E_j + E_i N_j + ψ⁻_i ψ⁺_j - ψ⁺_i ψ⁻_j + E_i E_j on the full product.
    """
    count = len(factors)
    if i == j or not (1 <= i <= count and 1 <= j <= count):
        raise ModuleSpecException(
            f"tensor_casimir needs two distinct slots in 1..{count}, received {i = }, {j = }."
        )
    parities = _factor_parities(factors)

    def act(name, slot):
        return act_in_slot(factors[slot - 1].generator(name), slot, parities).entries

    omega = (
        act("N", i) @ act("E", j)
        + act("E", i) @ act("N", j)
        + act("psi-", i) @ act("psi+", j)
        - act("psi+", i) @ act("psi-", j)
        + act("E", i) @ act("E", j)
    )
    return GradedMatrix(omega, tensor_parities(parities))


def supercommutator_residual(X: np.ndarray, factors: list[ModuleRep]) -> float:
    """max over generators of ‖[X, Δ(x)]‖ for an even operator X."""
    X = np.asarray(X)
    out = 0.0
    for name in GENERATORS:
        D = diagonal_action(factors, name).entries
        out = max(out, float(np.linalg.norm(X @ D - D @ X, 2)))
    return out


def check_relations(rep: ModuleRep, tol: float = RELATION_TOL) -> float:
    residual = max(rep.relations_residual(), rep.parity_residual())
    if residual > tol:
        raise ModuleSpecException(
            f"Module {rep.label!r} violates the gl(1|1) relations, {residual = :.3e}."
        )
    logger.debug("relations on %s: residual %.2e", rep.label, residual)
    return residual
# endregion


__all__ = (
    "GENERATORS",
    "ModuleRep",
    "ModuleSpec",
    "as_module",
    "as_spec",
    "build_module",
    "casimir",
    "casimir_matrix",
    "check_relations",
    "conformal_dimension",
    "diagonal_action",
    "dual_module",
    "parity_reverse",
    "parse_module_spec",
    "supercommutator_residual",
    "tensor_casimir",
)
