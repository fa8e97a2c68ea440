import logging
import re

import numpy as np

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from scipy import linalg
from scipy.integrate import solve_ivp

from .exceptions import CorrelatorException
from .gl11_modules import ModuleSpec, as_module, as_spec, diagonal_action, tensor_casimir
from .kz_engine import KZSystem
from .type_hints import ClosedFormKind, ComplexLike
from .utils import DEFAULT_TOL, RANK_TOL, format_number, snap, validate_kappa


logger = logging.getLogger(__name__)

CLOSED_FORMS: tuple[ClosedFormKind, ...] = ("sol1", "sol2", "sol31", "TTP1", "PPP0", "PPP1")
DEFAULT_CONSTANTS = {"A": 1.0, "B": 1.0, "C3": 0.0, "C4": 0.0}

# letter -> (module kind, coordinates, N offset)
_LETTERS = {
    "u": ("T", (1, 0), 0.5),
    "d": ("T", (0, 1), -0.5),
    "r": ("P", (1, 0, 0, 0), 1),
    "t": ("P", (0, 1, 1, 0), 0),
    "b": ("P", (0, 0.5, -0.5, 0), 0),
    "l": ("P", (0, 0, 0, 1), -1),
}

# Each invariant is a list of (coefficient, signed word sum); coefficients
# "e1", "e2", "e3" refer to the typical factors in order.
_CATALOGUE = {
    "TT": [
        [(1, "ud + du")],
    ],
    "PP": [
        [(1, "rb - br")],
        [(1, "tb + rl - lr + bt")],
        [(1, "bb")],
        [(1, "lb - bl")],
    ],
    "TTT": [
        [(1, "uud + udu + duu")],
        [("e1", "udd"), ("e2", "-dud"), ("e3", "ddu")],
    ],
    "TTP": [
        [(1, "uub - udr - dur")],
        [("e1", "uul + udt + dut"), (1, "udb + ddr")],
        [(1, "udb + dub")],
        [("e1", "udl + dul"), (1, "ddb")],
    ],
    "PPP": [
        [(1, "rrb - rbr + brr")],
        [(1, "trb - tbr - rrl - rbt + lrr + brt")],
        [(1, "rtb + rrl - rlr + rbt - btr - brt")],
        [(1, "rbb - brb")],
        [(1, "rbb - bbr")],
        [(1, "btb + brl - blr + bbt")],
        [(1, "bbb")],
        [(1, "tlb - tbl - rll + llr - lbt + blt")],
        [(1, "ltb + lrl - llr + lbt - btl - blt")],
        [(1, "lbb - bbl")],
        [(1, "blb - bbl")],
        [(1, "llb - lbl + bll")],
    ],
}

_FORM_PATTERNS = {
    "sol1": ("TT",),
    "sol2": ("PP",),
    "TTP1": ("TTP",),
    "PPP0": ("PPP",),
    "PPP1": ("PPP",),
}



# region Invariants
@dataclass(frozen=True, eq=False)
class PrintedInvariant:
    label: str
    sector: complex
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class InvariantBasis:
    """
    Invariant vectors of a product, one column each, grouped by N-sector
    (sector = Σn minus the N-weight). Printed vectors replace the numeric
    ones in every sector they span.
    """
    factors: tuple[ModuleSpec, ...]
    vectors: np.ndarray
    labels: tuple[str, ...]
    sectors: tuple[complex, ...]
    residual: float
    printed_residual: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def dims(self) -> dict[complex, int]:
        return _count(self.sectors)

    def sector(self, sector: ComplexLike) -> np.ndarray:
        sector = snap(sector)
        return self.vectors[:, [i for i, s in enumerate(self.sectors) if s == sector]]

    def vector(self, label: str) -> np.ndarray:
        try:
            return self.vectors[:, self.labels.index(label)]
        except ValueError:
            raise CorrelatorException(
                f"No invariant labelled {label!r}. Available: {self.labels!r}"
            )

    def to_record(self) -> dict:
        return {
            "operands": [s.label for s in self.factors],
            "dimension": self.dim,
            "sectors": {format_number(s): n for s, n in self.dims().items()},
            "labels": list(self.labels),
            "annihilationResidual": self.residual,
            "printedResidual": self.printed_residual,
        }


def _pattern(specs) -> str:
    return "".join(s.kind for s in specs)


def _sector_label(sector: complex) -> str:
    return str(Fraction(sector.real).limit_denominator(8))


def _parse_words(text: str) -> list[tuple[int, str]]:
    terms = re.findall(r"([+-]?)\s*([a-z]+)", text)
    return [(-1 if sign == "-" else 1, word) for sign, word in terms]


def _word_vector(word: str) -> np.ndarray:
    return reduce(np.kron, (np.asarray(_LETTERS[c][1], dtype=complex) for c in word))


def _word_sector(word: str) -> complex:
    return snap(-sum(_LETTERS[c][2] for c in word))


def printed_invariants(specs) -> list[PrintedInvariant]:
    """
    Printed invariant vectors for the cases TT, PP, TTT, TTP and PPP (no
    parity reversal). Other products have no printed list.
    """
    specs = [as_spec(s) for s in specs]
    pattern = _pattern(specs)
    if pattern not in _CATALOGUE or any(s.parity_reversed for s in specs):
        return []
    e_values = {f"e{i}": s.e for i, s in enumerate((s for s in specs if s.is_typical), start=1)}

    raw = []
    for terms in _CATALOGUE[pattern]:
        vector, sector = 0, None
        for coef, text in terms:
            scale = e_values[coef] if isinstance(coef, str) else coef
            for sign, word in _parse_words(text):
                vector = vector + sign * scale * _word_vector(word)
                sector = _word_sector(word) if sector is None else sector
        raw.append((sector, vector))

    counts = {}
    for sector, _ in raw:
        counts[sector] = counts.get(sector, 0) + 1
    seen, out = {}, []
    for sector, vector in raw:
        seen[sector] = seen.get(sector, 0) + 1
        label = f"I_{_sector_label(sector)}"
        if counts[sector] > 1:
            label += f",{seen[sector]}"
        out.append(PrintedInvariant(label, sector, vector))
    return out


def _actions(reps, names) -> list[np.ndarray]:
    return [diagonal_action(reps, name).entries for name in names]


def _graded_kernel(reps, specs, *, strict: bool, tol: float):
    E, pp, pm = _actions(reps, ("E", "psi+", "psi-"))
    weights = np.real_if_close(np.diag(diagonal_action(reps, "N").entries))
    total_n = sum(s.n for s in specs)
    stack = np.vstack([E, pp, pm])

    columns, sectors = [], []
    for w in sorted({snap(v) for v in weights}, key=lambda z: (z.real, z.imag)):
        sector = snap(total_n - w)
        if strict and abs(w) > 1e-9:
            continue
        idx = np.flatnonzero([snap(v) == w for v in weights])
        kernel = linalg.null_space(stack[:, idx], rcond=tol)
        for k in kernel.T:
            v = np.zeros(len(weights), dtype=complex)
            v[idx] = k
            columns.append(v)
            sectors.append(sector)
    V = np.column_stack(columns) if columns else np.zeros((len(weights), 0), dtype=complex)
    return V, sectors


def _annihilation(reps, V, names) -> float:
    if V.shape[1] == 0:
        return 0.0
    return max(float(np.linalg.norm(X @ V, 2)) for X in _actions(reps, names))


def _build_basis(specs, *, strict: bool, tol: float) -> InvariantBasis:
    specs = tuple(as_spec(s) for s in specs)
    reps = [as_module(s) for s in specs]
    V, sectors = _graded_kernel(reps, specs, strict=strict, tol=tol)
    labels = [f"v_{_sector_label(s)}#{k}" for k, s in enumerate(sectors)]

    printed = printed_invariants(specs)
    printed_residual = {}
    for sector in sorted(set(sectors), key=lambda z: z.real):
        idx = [i for i, s in enumerate(sectors) if s == sector]
        Q = V[:, idx]
        mine = [p for p in printed if p.sector == sector]
        for p in mine:
            leftover = p.vector - Q @ (Q.conj().T @ p.vector)
            printed_residual[p.label] = float(np.linalg.norm(leftover) / np.linalg.norm(p.vector))
        if not mine:
            continue
        P = np.column_stack([p.vector for p in mine])
        if np.linalg.matrix_rank(P, tol=1e-8) == len(idx) and len(mine) == len(idx):
            V[:, idx] = P
            for i, p in zip(idx, mine):
                labels[i] = p.label

    names = ("E", "N", "psi+", "psi-") if strict else ("E", "psi+", "psi-")
    residual = _annihilation(reps, V, names)
    logger.debug(
        "invariants of %s: dims %s, residual %.2e",
        "⊗".join(s.label for s in specs), {format_number(k): v for k, v in _count(sectors).items()}, residual,
    )
    return InvariantBasis(specs, V, tuple(labels), tuple(sectors), residual, printed_residual)


def _count(sectors) -> dict:
    out = {}
    for s in sectors:
        out[s] = out.get(s, 0) + 1
    return out


def invariant_basis(specs, *, tol: float = DEFAULT_TOL) -> InvariantBasis:
    """Joint kernel of the diagonal E, N, ψ⁺ and ψ⁻ (the N-weight zero part)."""
    return _build_basis(specs, strict=True, tol=tol)


def graded_invariants(specs, *, tol: float = DEFAULT_TOL) -> InvariantBasis:
    """
    Vectors killed by the diagonal E and ψ±, split by N-sector. Its dimension
    is the invariant count quoted per product (TT 1, PP 4, TTT 2, TTP 4, PPP 16).
    """
    return _build_basis(specs, strict=False, tol=tol)
# endregion



# region ClosedForms
@dataclass(frozen=True)
class LogMonomial:
    """coef · x^a (1-x)^b (ln x)^i (ln(1-x))^j; ``tag`` names the coefficient for probes."""
    coef: complex
    a: complex = 0j
    b: complex = 0j
    i: int = 0
    j: int = 0
    tag: str = ""

    def _parts(self, x: complex):
        # factors absent from the monomial stay 1 so two-point forms evaluate at x = 1
        px = x**self.a if self.a else 1
        py = (1 - x) ** self.b if self.b else 1
        L0 = np.log(x) if self.i else 1
        L1 = np.log(1 - x) if self.j else 1
        return px * py, L0, L1

    def __call__(self, x: complex) -> complex:
        base, L0, L1 = self._parts(x)
        return self.coef * base * L0**self.i * L1**self.j

    def derivative(self, x: complex) -> complex:
        base, L0, L1 = self._parts(x)
        out = 0j
        if self.a:
            out += self.a / x * base * L0**self.i * L1**self.j
        if self.b:
            out -= self.b / (1 - x) * base * L0**self.i * L1**self.j
        if self.i:
            out += self.i / x * base * L0 ** (self.i - 1) * L1**self.j
        if self.j:
            out -= self.j / (1 - x) * base * L0**self.i * L1 ** (self.j - 1)
        return self.coef * out

@dataclass(frozen=True, eq=False)
class CorrelatorSolution:
    """
    f(x) = Σ_k c_k(x) I_k with each c_k a sum of ``LogMonomial``. Two-point
    solutions take x = z₁ - z₂ and ignore the (1-x) factors.
    """
    kind: ClosedFormKind
    factors: tuple[ModuleSpec, ...]
    kappa: complex
    sector: complex
    constants: dict
    terms: tuple[tuple[str, np.ndarray, tuple[LogMonomial, ...]], ...]

    @property
    def points(self) -> int:
        return len(self.factors)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(m.tag for _, _, ms in self.terms for m in ms if m.tag))

    def evaluate(self, x: ComplexLike) -> np.ndarray:
        x = complex(x)
        return sum(sum(m(x) for m in ms) * v for _, v, ms in self.terms)

    def derivative(self, x: ComplexLike) -> np.ndarray:
        x = complex(x)
        return sum(sum(m.derivative(x) for m in ms) * v for _, v, ms in self.terms)

    def perturbed(self, tag: str, delta: complex) -> "CorrelatorSolution":
        if tag not in self.tags:
            raise CorrelatorException(f"Unknown coefficient tag {tag!r}. Available: {self.tags!r}")
        terms = tuple(
            (label, v, tuple(replace(m, coef=m.coef + delta) if m.tag == tag else m for m in ms))
            for label, v, ms in self.terms
        )
        return replace(self, terms=terms)


def select_form(specs) -> ClosedFormKind:
    """Closed form family used by ``--form auto``."""
    pattern = _pattern([as_spec(s) for s in specs])
    return {"TT": "sol1", "PP": "sol2", "TTP": "TTP1", "PPP": "PPP1"}.get(pattern, "sol31")


def _check_form(kind, specs) -> None:
    if kind not in CLOSED_FORMS:
        raise CorrelatorException(f"Unknown closed form {kind!r}. Expected one of {CLOSED_FORMS!r}.")
    pattern = _pattern(specs)
    allowed = _FORM_PATTERNS.get(kind)
    if allowed is not None and pattern not in allowed:
        raise CorrelatorException(
            f"Closed form {kind!r} applies to {allowed!r} products, received {pattern!r}."
        )
    if kind in _FORM_PATTERNS and any(s.parity_reversed for s in specs):
        raise CorrelatorException(f"Closed form {kind!r} is written for the unreversed modules.")
    if kind == "sol31" and len(specs) != 3:
        raise CorrelatorException(f"'sol31' is a three-point form, received {len(specs)} modules.")
    total_e = sum(s.e for s in specs)
    if abs(total_e) > 1e-10 * max(1.0, max(abs(s.e) for s in specs)):
        raise CorrelatorException(
            f"Correlators need Σe = 0 over the factors, received Σe = {format_number(total_e)}."
        )


def _printed_by_label(specs) -> dict[str, np.ndarray]:
    return {p.label: p.vector for p in printed_invariants(specs)}


def _mono(coef, a=0j, b=0j, i=0, j=0, tag=""):
    return LogMonomial(complex(coef), complex(a), complex(b), i, j, tag)


def _rayleigh(op: np.ndarray, v: np.ndarray) -> complex:
    return complex(v.conj() @ op @ v / (v.conj() @ v))


def closed_form(
    kind: ClosedFormKind,
    specs,
    kappa: ComplexLike,
    constants: dict | None = None,
    sector: ComplexLike | None = None,
    ) -> CorrelatorSolution:
    """
    Explicit two- and three-point solutions on the invariant sectors.

    Parameters:
        - kind (str): one of ``sol1``, ``sol2``, ``sol31``, ``TTP1``, ``PPP0``, ``PPP1``.
        - specs: the factors, in order.
        - kappa (complex): level.
        - constants (dict): free constants ``A``, ``B``, ``C3``, ``C4``; missing ones default.
        - sector: N-sector for families with several (``sol2``, ``sol31``, ``PPP1``).
    """
    specs = tuple(as_spec(s) for s in specs)
    kappa = validate_kappa(kappa)
    _check_form(kind, specs)
    c = {**DEFAULT_CONSTANTS, **(constants or {})}
    A, B, C3, C4 = (complex(c[k]) for k in ("A", "B", "C3", "C4"))
    I = _printed_by_label(specs)
    k = kappa

    match kind:
        case "sol1":
            e1, e2 = specs[0].e, specs[1].e
            delta = specs[0].n * e2 + specs[1].n * e1 + e1 * e2
            sector = 0j
            terms = [("I_0", I["I_0"], (_mono(A, delta / k),))]
        case "sol2":
            sector = snap(0 if sector is None else sector)
            if sector == 0:
                terms = [
                    ("I_0,1", I["I_0,1"], (_mono(A),)),
                    ("I_0,2", I["I_0,2"], (_mono(B), _mono(2 * A / k, i=1, tag="log"))),
                ]
            elif sector in (-1, 1):
                label = f"I_{_sector_label(sector)}"
                terms = [(label, I[label], (_mono(A),))]
            else:
                raise CorrelatorException(f"'sol2' has sectors -1, 0, 1, received {sector!r}.")
        case "sol31":
            basis = graded_invariants(specs)
            one_dim = [s for s, n in basis.dims().items() if n == 1]
            if sector is None:
                if not one_dim:
                    raise CorrelatorException(
                        f"No one dimensional invariant sector in {'⊗'.join(s.label for s in specs)!r}."
                    )
                sector = one_dim[0]
            sector = snap(sector)
            if sector not in one_dim:
                raise CorrelatorException(
                    f"Sector {format_number(sector)} has dimension {basis.dims().get(sector, 0)}; "
                    "'sol31' needs a one dimensional sector."
                )
            v = basis.sector(sector)[:, 0]
            sys = KZSystem(specs, kappa)
            alpha, beta = _rayleigh(sys.omega12.entries, v), _rayleigh(sys.omega23.entries, v)
            label = basis.labels[basis.sectors.index(sector)]
            terms = [(label, v, (_mono(A, alpha / k, beta / k),))]
        case "TTP1":
            e1 = specs[0].e
            d12 = specs[0].n * specs[1].e + specs[1].n * e1 + e1 * specs[1].e
            d23 = -e1 * specs[2].n
            sector = 0j
            terms = [
                ("I_0,1", I["I_0,1"], (_mono(A, d12 / k, d23 / k),)),
                ("I_0,2", I["I_0,2"], (
                    _mono(A * B, d12 / k, d23 / k),
                    _mono(A * e1 / k, d12 / k, d23 / k, j=1, tag="logOneMinusX"),
                    _mono(-A * e1 / k, d12 / k, d23 / k, i=1, tag="logX"),
                )),
            ]
        case "PPP0":
            sector = 0j
            terms = [
                ("I_0,1", I["I_0,1"], (_mono(A),)),
                ("I_0,2", I["I_0,2"], (_mono(B), _mono(2 * A / k, j=1, tag="logOneMinusX"))),
            ]
        case "PPP1":
            sector = snap(-1 if sector is None else sector)
            if sector == -1:
                logs3 = (_mono(-B / k, i=1, tag="logX:3"), _mono(B / k, j=1, tag="logOneMinusX:3"))
                logs4 = (_mono((A + B) / k, i=1, tag="logX:4"), _mono((B - A) / k, j=1, tag="logOneMinusX:4"))
            elif sector == 1:
                logs3 = (_mono(A / k, i=1, tag="logX:3"), _mono((2 * B - A) / k, j=1, tag="logOneMinusX:3"))
                logs4 = (_mono(B / k, i=1, tag="logX:4"), _mono(-B / k, j=1, tag="logOneMinusX:4"))
            else:
                raise CorrelatorException(f"'PPP1' has sectors -1 and 1, received {sector!r}.")
            s = _sector_label(sector)
            terms = [
                (f"I_{s},1", I[f"I_{s},1"], (_mono(A),)),
                (f"I_{s},2", I[f"I_{s},2"], (_mono(B),)),
                (f"I_{s},3", I[f"I_{s},3"], (_mono(C3), *logs3)),
                (f"I_{s},4", I[f"I_{s},4"], (_mono(C4), *logs4)),
            ]

    return CorrelatorSolution(kind, specs, kappa, sector, dict(c), tuple(terms))
# endregion



# region Verification
@dataclass(frozen=True)
class CorrelatorReport:
    kind: str
    operands: tuple[str, ...]
    sector: complex
    residual: float
    samples: tuple[float, ...]
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "form": self.kind,
            "operands": list(self.operands),
            "sector": format_number(self.sector),
            "residual": self.residual,
            "samples": list(self.samples),
            "tolerance": self.tolerance,
            "passed": self.passed,
            **self.details,
        }


def _default_samples(points: int) -> tuple[float, ...]:
    return (0.5, 1.3, 2.7) if points == 2 else (0.1, 0.3, 0.5, 0.7, 0.9)


def _kz_operators(specs, kappa):
    reps = [as_module(s) for s in specs]
    if len(reps) == 2:
        return tensor_casimir(reps, 1, 2).entries, None
    if len(reps) == 3:
        sys = KZSystem(tuple(reps), kappa)
        return sys.omega12.entries, sys.omega23.entries
    raise CorrelatorException(f"Correlators cover two and three points, received {len(reps)}.")


def _connection(O12, O23, x):
    return O12 / x if O23 is None else O12 / x + O23 / (x - 1)


def _residual_at(solution: CorrelatorSolution, O12, O23, x: complex) -> float:
    singular = (0,) if O23 is None else (0, 1)
    if any(abs(x - p) < 1e-14 for p in singular):
        raise CorrelatorException(f"Sample point {x!r} is a singular point of the KZ equation.")
    f = solution.evaluate(x)
    res = solution.kappa * solution.derivative(x) - _connection(O12, O23, x) @ f
    return float(np.linalg.norm(res) / max(1.0, np.linalg.norm(f)))


def verify_solution(
    solution: CorrelatorSolution,
    samples=None,
    *,
    tol: float = DEFAULT_TOL,
    ) -> CorrelatorReport:
    """max over samples of ‖κf' - (Ω₁₂/x + Ω₂₃/(x-1))f‖ / max(1, ‖f‖)."""
    samples = tuple(samples) if samples is not None else _default_samples(solution.points)
    O12, O23 = _kz_operators(solution.factors, solution.kappa)
    residual = max(_residual_at(solution, O12, O23, complex(x)) for x in samples)
    report = CorrelatorReport(
        solution.kind,
        tuple(s.label for s in solution.factors),
        solution.sector,
        residual,
        tuple(float(np.real(x)) for x in samples),
        tol,
        bool(residual <= tol),
        {"constants": {k: format_number(v) for k, v in solution.constants.items()}},
    )
    logger.info(
        "%s on %s: residual %.3e (%s)",
        solution.kind, ", ".join(report.operands), residual, "pass" if report.passed else "FAIL",
    )
    return report


def log_probe(solution: CorrelatorSolution, tag: str, delta: float = 1e-3, samples=None) -> dict:
    """Residual after shifting the coefficient tagged ``tag`` by ``delta``."""
    report = verify_solution(solution.perturbed(tag, delta), samples)
    return {"tag": tag, "delta": delta, "residual": report.residual}


def projected_kz_solve(
    specs,
    kappa: ComplexLike,
    grid,
    initial: np.ndarray | None = None,
    *,
    anchor: float | None = None,
    sector: ComplexLike | None = None,
    ) -> np.ndarray:
    """
    Integrate the KZ equation restricted to the invariant span.

    The initial vector at ``anchor`` (x = 1/2 for three points, z₁ - z₂ = 1 for
    two) is projected onto the span; rows of the result are the full-space
    solution at each grid point.
    """
    specs = tuple(as_spec(s) for s in specs)
    kappa = validate_kappa(kappa)
    basis = graded_invariants(specs)
    V = basis.vectors if sector is None else basis.sector(sector)
    if V.shape[1] == 0:
        raise CorrelatorException(
            f"No invariants in {'⊗'.join(s.label for s in specs)!r}"
            + ("" if sector is None else f" in sector {format_number(sector)}")
        )
    Q = linalg.orth(V, rcond=RANK_TOL)
    O12, O23 = _kz_operators(specs, kappa)
    R12 = Q.conj().T @ O12 @ Q
    R23 = None if O23 is None else Q.conj().T @ O23 @ Q
    anchor = (1.0 if len(specs) == 2 else 0.5) if anchor is None else anchor
    y0 = Q.conj().T @ (Q[:, 0] if initial is None else np.asarray(initial, dtype=complex))

    def rhs(x, y):
        return _connection(R12, R23, x) @ y / kappa

    grid = np.asarray(grid, dtype=float)
    out = np.empty((grid.size, Q.shape[0]), dtype=complex)
    for side in (grid < anchor, grid >= anchor):
        idx = np.flatnonzero(side)
        if idx.size == 0:
            continue
        order = idx[np.argsort(np.abs(grid[idx] - anchor))]
        points = grid[order]
        if np.any(np.abs(points - anchor) < 1e-15):
            out[order[np.abs(points - anchor) < 1e-15]] = Q @ y0
        rest = np.abs(points - anchor) >= 1e-15
        if not rest.any():
            continue
        sol = solve_ivp(
            rhs, (anchor, points[rest][-1]), y0, method="DOP853",
            t_eval=points[rest], rtol=1e-12, atol=1e-14,
        )
        if not sol.success:
            raise CorrelatorException(f"Projected KZ integration failed: {sol.message}")
        out[order[rest]] = (Q @ sol.y).T
    return out
# endregion


__all__ = (
    "CLOSED_FORMS",
    "CorrelatorReport",
    "CorrelatorSolution",
    "InvariantBasis",
    "LogMonomial",
    "PrintedInvariant",
    "closed_form",
    "graded_invariants",
    "invariant_basis",
    "log_probe",
    "printed_invariants",
    "projected_kz_solve",
    "select_form",
    "verify_solution",
)
