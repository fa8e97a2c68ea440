import logging

import numpy as np

from dataclasses import dataclass, field
from math import factorial
from scipy import linalg
from scipy.integrate import solve_ivp
from scipy.special import expit

from .exceptions import ExcludedParameterException, KZDKException, SuperLinalgException
from .gl11_modules import ModuleRep, as_module, supercommutator_residual, tensor_casimir
from .superlinalg import (
    GradedMatrix,
    JordanBlock,
    JordanData,
    graded_permutation,
    jordan_chains,
    power_with_log,
    solve_shifted,
)
from .tensor_ring import GenericityViolation, genericity, ring_summands
from .type_hints import ComplexLike, PexpScheme
from .utils import (
    CROSS_TOL,
    GENERICITY_MARGIN,
    MATCHING_POINT,
    PEXP_STEPS,
    PEXP_T,
    SERIES_ORDER_CAP,
    SERIES_STOP_RATIO,
    distance_to_integer,
    format_number,
    validate_kappa,
)
from .wrappers import WRAPPERS


logger = logging.getLogger(__name__)

TIMED = WRAPPERS["Timed"]
_OPERATORS = ("omega12", "omega23")



# region KZSystem
@dataclass(frozen=True, eq=False)
class KZSystem:
    """
    Three-point KZ equation  κ f'(x) = (Ω₁₂/x + Ω₂₃/(x-1)) f(x)  on V₁⊗V₂⊗V₃.

    Factors may themselves be product modules; Ω then acts on the fused slot
    through the coproduct.
    """
    factors: tuple[ModuleRep, ModuleRep, ModuleRep]
    kappa: complex
    omega12: GradedMatrix = field(init=False, repr=False)
    omega23: GradedMatrix = field(init=False, repr=False)
    omega13: GradedMatrix = field(init=False, repr=False)

    def __post_init__(self):
        factors = tuple(as_module(f) for f in self.factors)
        if len(factors) != 3:
            raise KZDKException(
                f"A three-point KZ system needs exactly three factors, received {len(factors)}."
            )
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "kappa", validate_kappa(self.kappa))
        for name, (i, j) in zip(("omega12", "omega23", "omega13"), ((1, 2), (2, 3), (1, 3))):
            object.__setattr__(self, name, tensor_casimir(list(factors), i, j))

    @classmethod
    def build(cls, factors, kappa: ComplexLike) -> "KZSystem":
        return cls(tuple(factors), kappa)

    def __repr__(self) -> str:
        return f"KZSystem({', '.join(self.labels)}; kappa={format_number(self.kappa)})"

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f.label for f in self.factors)

    @property
    def parities(self) -> np.ndarray:
        return self.omega12.parities

    @property
    def dim(self) -> int:
        return self.omega12.dim

    def operator(self, which: str) -> GradedMatrix:
        if which not in _OPERATORS:
            raise KZDKException(f"Unknown operator {which!r}. Expected one of {_OPERATORS!r}.")
        return getattr(self, which)

    def pair(self, which: str) -> tuple[ModuleRep, ModuleRep]:
        self.operator(which)
        return (self.factors[0], self.factors[1]) if which == "omega12" else (self.factors[1], self.factors[2])

    def connection(self, x: complex) -> np.ndarray:
        return (self.omega12.entries / x + self.omega23.entries / (x - 1)) / self.kappa

    def invariant_residual(self) -> float:
        total = self.omega12.entries + self.omega23.entries + self.omega13.entries
        comm = max(
            float(np.linalg.norm(total @ o.entries - o.entries @ total, 2))
            for o in (self.omega12, self.omega23)
        )
        equivariance = max(
            supercommutator_residual(o.entries, list(self.factors))
            for o in (self.omega12, self.omega23, self.omega13)
        )
        return max(comm, equivariance)
# endregion



# region Spectra
def _pair_eigenvalues(a, b) -> list[complex]:
    match a.kind, b.kind:
        case "T", "T":
            e1, n1, e2, n2 = a.e, a.n, b.e, b.n
            if abs(e1 + e2) <= 1e-12 * max(1.0, abs(e1)):
                return [e1 * (n2 - n1) - e1**2]
            return [
                e1 * e2 + e1 * (n2 + 0.5) + e2 * (n1 + 0.5),
                e1 * e2 + e1 * (n2 - 0.5) + e2 * (n1 - 0.5),
            ]
        case "T", "P":
            return [a.e * (b.n + 1), a.e * b.n, a.e * (b.n - 1)]
        case "P", "T":
            return [b.e * (a.n + 1), b.e * a.n, b.e * (a.n - 1)]
        case "T", "A":
            return [a.e * b.n]
        case "A", "T":
            return [b.e * a.n]
        case _:
            return [0j]


def casimir_eigenvalues(X, Y) -> list[complex]:
    """
    Spectrum of Ω₁₂ on X⊗Y read from the analytic table; product factors
    contribute the union over their summands.
    """
    out = []
    for a, _ in ring_summands(as_module(X)):
        for b, _ in ring_summands(as_module(Y)):
            for lam in _pair_eigenvalues(a, b):
                lam = complex(lam)
                if not any(abs(lam - u) <= 1e-12 * max(1.0, abs(u)) for u in out):
                    out.append(lam)
    return out


def resonance_check(sys: KZSystem, *, margin: float = GENERICITY_MARGIN) -> list[GenericityViolation]:
    """Eigenvalue gaps of Ω₁₂ and Ω₂₃ that are (near) nonzero integer multiples of κ."""
    found = []
    for which in _OPERATORS:
        eigs = casimir_eigenvalues(*sys.pair(which))
        for i, la in enumerate(eigs):
            for lb in eigs[i + 1:]:
                z = (la - lb) / sys.kappa
                d = distance_to_integer(z, exclude_zero=True)
                if d < margin:
                    found.append(GenericityViolation(f"eigenvalue gap of {which} / kappa", z, d))
    return found


def spectral_data(sys: KZSystem, which: str = "omega12", *, force: bool = False) -> JordanData:
    X, Y = sys.pair(which)
    genericity([*X.leaves(), *Y.leaves()], sys.kappa).enforce(force=force)
    return jordan_chains(sys.operator(which), casimir_eigenvalues(X, Y))
# endregion



# region Series
@dataclass(frozen=True, eq=False)
class AsymptoticSolution:
    """
    f(x) = Σ_m Σ_j c[m, j] s^(m+λ/κ) (ln s)^j  with s = x at point 0 and s = 1-x at point 1.
    """
    point: int
    exponent: complex
    kappa: complex
    coeffs: np.ndarray
    chain_index: int = 0

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def log_degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def leading(self) -> np.ndarray:
        return self.coeffs[0, 0]

    def _local(self, x: ComplexLike) -> complex:
        s = complex(x) if self.point == 0 else 1 - complex(x)
        if s == 0:
            raise SuperLinalgException(f"Series at {self.point} cannot be evaluated at its own pole.")
        return s

    def _terms(self, x):
        s = self._local(x)
        L = np.log(s)
        mu = self.exponent / self.kappa
        m = np.arange(self.order + 1)
        j = np.arange(self.log_degree + 1)
        powers = np.exp((m + mu) * L)
        logs = L ** j
        dlogs = np.concatenate([[0], j[1:] * L ** (j[1:] - 1)])
        return s, m + mu, powers, logs, dlogs

    def evaluate(self, x: ComplexLike) -> np.ndarray:
        _, _, powers, logs, _ = self._terms(x)
        return np.einsum("m,j,mjd->d", powers, logs, self.coeffs)

    def derivative(self, x: ComplexLike) -> np.ndarray:
        s, rates, powers, logs, dlogs = self._terms(x)
        inner = rates[:, None] * logs[None, :] + dlogs[None, :]
        ds = np.einsum("m,mj,mjd->d", powers, inner, self.coeffs) / s
        return ds if self.point == 0 else -ds


def series_residual(solution: AsymptoticSolution, sys: KZSystem, x: ComplexLike) -> float:
    """Relative residual ‖κf' - (Ω₁₂/x + Ω₂₃/(x-1)) f‖ / (‖f‖ / s)."""
    x = complex(x)
    f = solution.evaluate(x)
    res = sys.kappa * solution.derivative(x) - sys.kappa * sys.connection(x) @ f
    s = abs(solution._local(x))
    return float(np.linalg.norm(res) / max(np.linalg.norm(f) / s, 1e-300))


def _block_series(
    sys: KZSystem,
    block: JordanBlock,
    point: int,
    order: int | None,
    radius: float,
    ) -> list[AsymptoticSolution]:
    pole, other = (sys.omega12, sys.omega23) if point == 0 else (sys.omega23, sys.omega12)
    B = other.entries
    kappa, lam, k = sys.kappa, block.eigenvalue, block.size
    dim = sys.dim
    cap = SERIES_ORDER_CAP if order is None else order

    first = np.zeros((k, k, dim), dtype=complex)   # (solution i, log power j, vector)
    for i in range(k):
        for j in range(i + 1):
            first[i, j] = block.chain[:, i - j] / (factorial(j) * kappa**j)
    terms = [first]
    running = first.copy()
    scale0 = max(np.abs(first).max(), 1e-300)
    quiet = 0

    for m in range(1, cap + 1):
        c = np.zeros_like(first)
        for j in range(k - 1, -1, -1):
            rhs = B @ running[:, j].T
            if j + 1 < k:
                rhs = rhs + kappa * (j + 1) * c[:, j + 1].T
            c[:, j] = solve_shifted(pole, lam + m * kappa, rhs).T
        terms.append(c)
        running += c
        if order is None:
            size = np.abs(c).max() * radius**m
            quiet = quiet + 1 if size <= SERIES_STOP_RATIO * scale0 else 0
            if quiet >= 2:
                break
    else:
        if order is None:
            logger.debug("series at %d reached the order cap %d for eigenvalue %s", point, cap, lam)

    coeffs = np.stack(terms, axis=1)   # (i, m, j, d)
    logger.debug("series at %d: eigenvalue %s, block %d, order %d", point, format_number(lam), k, len(terms) - 1)
    return [
        AsymptoticSolution(point, lam, kappa, coeffs[i, :, : i + 1].copy(), chain_index=i)
        for i in range(k)
    ]


def series_at0(sys: KZSystem, chain: JordanBlock, order: int | None = 20) -> list[AsymptoticSolution]:
    """One solution per chain vector of Ω₁₂ around x = 0; ``order=None`` truncates adaptively."""
    return _block_series(sys, chain, 0, order, MATCHING_POINT + 0.1)


def series_at1(sys: KZSystem, chain: JordanBlock, order: int | None = 20) -> list[AsymptoticSolution]:
    """One solution per chain vector of Ω₂₃ around x = 1, exponent (1-x)^(+λ/κ)."""
    return _block_series(sys, chain, 1, order, MATCHING_POINT + 0.1)


@dataclass(frozen=True, eq=False)
class FundamentalFrame:
    point: int
    solutions: tuple[AsymptoticSolution, ...]
    jordan: JordanData

    def matrix(self, x: ComplexLike) -> np.ndarray:
        """Normalised frame Φ(x)·S⁻¹, asymptotic to s^(Ω/κ) at the point."""
        phi = np.column_stack([sol.evaluate(x) for sol in self.solutions])
        return phi @ np.linalg.inv(self.jordan.basis())

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.jordan.basis()))
# endregion



# region Solver
class KZSolver:
    """
    Frame-matching solver for one KZ system.

    Spectral data, series frames and the associator are computed lazily and
    cached; ``diagnostics`` records truncation orders, frame conditioning and
    the cross-check between two matching points.
    """
    __slots__ = (
        "_sys",
        "_order",
        "_jordan",
        "_frames",
        "_alpha",
        "_diagnostics",
        "_timings",
    )

    def __init__(
        self,
        sys: KZSystem,
        *,
        order: int | None = None,
        force: bool = False,
        ) -> None:
        if order is not None and order < 1:
            raise KZDKException(f"Series order must be positive, received {order = }.")
        self._sys = sys
        self._order = order
        self._jordan = {}
        self._frames = {}
        self._alpha = None
        self._diagnostics = {}
        self._timings = {}

        genericity([s for f in sys.factors for s in f.leaves()], sys.kappa).enforce(force=force)
        resonances = resonance_check(sys)
        if resonances:
            listed = "\n".join(f"  - {v}" for v in resonances)
            if not force:
                raise ExcludedParameterException(
                    f"Resonant KZ system {sys!r}; the series recursions are singular:\n{listed}"
                )
            logger.warning("Resonant KZ system accepted with force=True:\n%s", listed)

    @property
    def system(self) -> KZSystem:
        return self._sys

    @property
    def diagnostics(self) -> dict:
        return dict(self._diagnostics)

    @property
    def timings(self) -> dict:
        return dict(self._timings)

    def spectral(self, which: str = "omega12") -> JordanData:
        if which not in self._jordan:
            X, Y = self._sys.pair(which)
            self._jordan[which] = jordan_chains(self._sys.operator(which), casimir_eigenvalues(X, Y))
        return self._jordan[which]

    def frame(self, point: int) -> FundamentalFrame:
        if point not in self._frames:
            jordan = self.spectral("omega12" if point == 0 else "omega23")
            builder = series_at0 if point == 0 else series_at1
            solutions = [
                sol for block in jordan.blocks for sol in builder(self._sys, block, self._order)
            ]
            frame = FundamentalFrame(point, tuple(solutions), jordan)
            self._frames[point] = frame
            self._diagnostics[f"frame{point}Condition"] = frame.condition
            self._diagnostics[f"frame{point}Order"] = max(s.order for s in solutions)
        return self._frames[point]

    def _match(self, x: float) -> np.ndarray:
        F1 = self.frame(1).matrix(x)
        if np.linalg.cond(F1) > 1e12:
            raise SuperLinalgException(
                f"Frame at x = 1 is singular at the matching point {x}; raise the order or move away from the excluded set."
            )
        return np.linalg.solve(F1, self.frame(0).matrix(x))

    def _transport(self, start: float = 0.3, stop: float = 0.7) -> np.ndarray:
        dim, kappa = self._sys.dim, self._sys.kappa
        O12, O23 = self._sys.omega12.entries, self._sys.omega23.entries

        def rhs(x, y):
            Y = y.reshape(dim, dim)
            return ((O12 / x + O23 / (x - 1)) @ Y / kappa).ravel()

        sol = solve_ivp(
            rhs,
            (start, stop),
            self.frame(0).matrix(start).astype(complex).ravel(),
            method="DOP853",
            rtol=1e-12,
            atol=1e-14,
        )
        if not sol.success:
            raise SuperLinalgException(f"ODE transport failed: {sol.message}")
        transported = sol.y[:, -1].reshape(dim, dim)
        return np.linalg.solve(self.frame(1).matrix(stop), transported)

    @TIMED
    def associator(self) -> GradedMatrix:
        if self._alpha is not None:
            return self._alpha
        x0 = MATCHING_POINT
        alpha = self._match(x0)
        left, right = self._match(x0 - 0.1), self._match(x0 + 0.1)
        consistency = float(np.linalg.norm(left - right, 2) / max(1.0, np.linalg.norm(alpha, 2)))
        self._diagnostics["matchingConsistency"] = consistency
        self._diagnostics["method"] = "frames"

        if consistency > CROSS_TOL:
            logger.warning(
                "Frame matching for %r is inconsistent (%.2e); falling back to ODE transport.",
                self._sys, consistency,
            )
            alpha = self._transport()
            self._diagnostics["method"] = "transport"

        self._diagnostics["inverseResidual"] = float(
            np.linalg.norm(np.linalg.inv(alpha) @ alpha - np.eye(self._sys.dim), 2)
        )
        self._alpha = GradedMatrix(alpha, self._sys.parities)
        return self._alpha


def associator(
    sys: KZSystem,
    order: int | None = None,
    *,
    force: bool = False,
    ) -> GradedMatrix:
    """α = F₁⁻¹F₀ matched at x = 1/2; identity whenever a factor is one dimensional."""
    return KZSolver(sys, order=order, force=force).associator()
# endregion



# region PathOrdered
def _endpoint_gauge(pole: np.ndarray, other: np.ndarray, kappa: complex, t: float, order: int) -> np.ndarray:
    """H(t) = Σ H_m t^m with pole·H_m - H_m(pole + mκ) = other·Σ_{k<m} H_k."""
    dim = pole.shape[0]
    H = [np.eye(dim, dtype=complex)]
    running = H[0].copy()
    for m in range(1, order + 1):
        Hm = linalg.solve_sylvester(pole, -(pole + m * kappa * np.eye(dim)), other @ running)
        H.append(Hm)
        running = running + Hm
    return sum(Hm * t**m for m, Hm in enumerate(H))


def associator_pexp(
    sys: KZSystem,
    t: float = PEXP_T,
    steps: int = PEXP_STEPS,
    *,
    scheme: PexpScheme = "magnus4",
    endpoint_order: int = 8,
    force: bool = False,
    ) -> GradedMatrix:
    """
    Regularised path-ordered exponential
    α ≈ t^(-Ω₂₃/κ) H₁(t)⁻¹ · Pexp ∫_t^(1-t) · H₀(t) t^(Ω₁₂/κ).

    The transport runs in u = ln(x/(1-x)), where the connection
    ((1-x)Ω₁₂ - xΩ₂₃)/κ is bounded.
    """
    if not 0 < t < 0.5:
        raise KZDKException(f"`t` must lie in (0, 1/2), received {t = }.")
    if steps < 1:
        raise KZDKException(f"`steps` must be positive, received {steps = }.")
    if scheme not in ("midpoint", "magnus4"):
        raise KZDKException(f"Unknown scheme {scheme!r}. Expected 'midpoint' or 'magnus4'.")

    solver = KZSolver(sys, force=force)
    kappa, dim = sys.kappa, sys.dim
    O12, O23 = sys.omega12.entries, sys.omega23.entries

    def A(u):
        x = expit(u)
        return ((1 - x) * O12 - x * O23) / kappa

    u0 = np.log(t / (1 - t))
    h = -2 * u0 / steps
    gauss = (0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6)
    U = np.eye(dim, dtype=complex)
    for k in range(steps):
        start = u0 + k * h
        if scheme == "midpoint":
            step = h * A(start + h / 2)
        else:
            A1, A2 = A(start + gauss[0] * h), A(start + gauss[1] * h)
            step = h / 2 * (A1 + A2) + np.sqrt(3) * h**2 / 12 * (A2 @ A1 - A1 @ A2)
        U = linalg.expm(step) @ U

    H0 = _endpoint_gauge(O12, O23, kappa, t, endpoint_order)
    H1 = _endpoint_gauge(O23, O12, kappa, t, endpoint_order)
    near0 = power_with_log(sys.omega12, solver.spectral("omega12"), t, kappa).entries
    near1_inv = power_with_log(sys.omega23, solver.spectral("omega23"), t, -kappa).entries
    alpha = near1_inv @ np.linalg.solve(H1, U @ H0 @ near0)
    logger.debug("associator_pexp(%r): t=%g, steps=%d, scheme=%s", sys, t, steps, scheme)
    return GradedMatrix(alpha, sys.parities)
# endregion



# region Braiding
def _pair_jordan(A: ModuleRep, B: ModuleRep) -> tuple[GradedMatrix, JordanData]:
    omega = tensor_casimir([A, B], 1, 2)
    return omega, jordan_chains(omega, casimir_eigenvalues(A, B))


def braiding(A, B, kappa: ComplexLike) -> GradedMatrix:
    """σ = P·e^(iπΩ/κ) : A⊗B → B⊗A."""
    A, B = as_module(A), as_module(B)
    kappa = validate_kappa(kappa)
    omega, jordan = _pair_jordan(A, B)
    half_turn = power_with_log(omega, jordan, -1, kappa, log_x=1j * np.pi)
    P = graded_permutation(A.parities, B.parities)
    return GradedMatrix(P.entries @ half_turn.entries, P.parities, P.col_parities)


def reverse_braiding(A, B, kappa: ComplexLike) -> GradedMatrix:
    """σ⁻ = σ_{B,A}⁻¹ : A⊗B → B⊗A."""
    A, B = as_module(A), as_module(B)
    back = braiding(B, A, kappa)
    return GradedMatrix(np.linalg.inv(back.entries), back.col_parities, back.parities)


def monodromy0(sys: KZSystem) -> GradedMatrix:
    """Loop around x = 0: e^(2πiΩ₁₂/κ)."""
    jordan = jordan_chains(sys.omega12, casimir_eigenvalues(*sys.pair("omega12")))
    return power_with_log(sys.omega12, jordan, 1, sys.kappa, log_x=2j * np.pi)
# endregion


__all__ = (
    "AsymptoticSolution",
    "FundamentalFrame",
    "KZSolver",
    "KZSystem",
    "associator",
    "associator_pexp",
    "braiding",
    "casimir_eigenvalues",
    "monodromy0",
    "resonance_check",
    "reverse_braiding",
    "series_at0",
    "series_at1",
    "series_residual",
    "spectral_data",
)
