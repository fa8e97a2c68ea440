import logging
import math

import numpy as np

from dataclasses import dataclass, field
from functools import reduce
from scipy import linalg

from .exceptions import (
    ExcludedParameterException,
    JordanException,
    SuperLinalgException,
)
from .type_hints import ArrayLike, ComplexLike, ParityList, ParityVector
from .utils import DEFAULT_TOL, RANK_TOL


logger = logging.getLogger(__name__)



# region GradedMatrix
@dataclass(frozen=True, eq=False)
class GradedMatrix:
    """
    Dense complex matrix on a Z2-graded space.

    ``parities`` label the rows (target space); ``col_parities`` label the
    columns (source space) and default to ``parities``. They differ only for
    maps between distinct spaces such as braidings A⊗B -> B⊗A.
    """
    entries: np.ndarray
    parities: ParityVector
    col_parities: ParityVector = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise SuperLinalgException(
                f"GradedMatrix entries must be two dimensional, received shape {entries.shape!r}."
            )
        parities = _as_parities(self.parities)
        col_parities = parities if self.col_parities is None else _as_parities(self.col_parities)
        if entries.shape != (len(parities), len(col_parities)):
            raise SuperLinalgException(
                "GradedMatrix shape does not match its parity vectors. "
                f"\n{entries.shape = }, rows={len(parities)}, cols={len(col_parities)}"
            )
        if not np.all(np.isfinite(entries)):
            raise SuperLinalgException("GradedMatrix entries must be finite (no NaN/Inf).")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "parities", parities)
        object.__setattr__(self, "col_parities", col_parities)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other):
        if isinstance(other, GradedMatrix):
            return GradedMatrix(self.entries @ other.entries, self.parities, other.col_parities)
        return self.entries @ np.asarray(other)

    def __repr__(self) -> str:
        return f"GradedMatrix(dim={self.dim}, parities={self.parities.tolist()})"

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_square(self) -> bool:
        return np.array_equal(self.parities, self.col_parities)

    @classmethod
    def identity(cls, parities: ArrayLike) -> "GradedMatrix":
        parities = _as_parities(parities)
        return cls(np.eye(len(parities)), parities)

    def even_part(self) -> np.ndarray:
        return np.where(_parity_mask(self.parities, self.col_parities), self.entries, 0)

    def odd_part(self) -> np.ndarray:
        return np.where(_parity_mask(self.parities, self.col_parities), 0, self.entries)

    def degree(self, tol: float = DEFAULT_TOL) -> int | None:
        """0 for even, 1 for odd, ``None`` for an inhomogeneous matrix."""
        even, odd = np.abs(self.even_part()).max(initial=0), np.abs(self.odd_part()).max(initial=0)
        if odd <= tol:
            return 0
        if even <= tol:
            return 1
        return None

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))



# region JordanData
@dataclass(frozen=True)
class JordanBlock:
    eigenvalue: complex
    chain: np.ndarray   # columns v^(0) ... v^(k-1), (M - λ) v^(i) = v^(i-1)

    @property
    def size(self) -> int:
        return self.chain.shape[1]


@dataclass(frozen=True)
class JordanData:
    blocks: tuple[JordanBlock, ...]
    dim: int
    residual: float = 0.0

    def basis(self) -> np.ndarray:
        return np.hstack([b.chain for b in self.blocks])

    def eigenvalues(self) -> list[complex]:
        seen = []
        for block in self.blocks:
            if not any(abs(block.eigenvalue - s) < 1e-12 for s in seen):
                seen.append(block.eigenvalue)
        return seen

    def profile(self) -> dict[complex, list[int]]:
        """Block sizes per eigenvalue, largest first."""
        out = {}
        for lam in self.eigenvalues():
            out[lam] = sorted(
                (b.size for b in self.blocks if abs(b.eigenvalue - lam) < 1e-12),
                reverse=True,
            )
        return out

    def normal_form(self) -> np.ndarray:
        return linalg.block_diag(*(_jordan_block(b.eigenvalue, b.size) for b in self.blocks))

    def reconstruct(self) -> np.ndarray:
        S = self.basis()
        return S @ self.normal_form() @ np.linalg.inv(S)



# region Functions
def _as_parities(parities: ArrayLike) -> ParityVector:
    arr = np.asarray(parities)
    if arr.ndim != 1:
        raise SuperLinalgException(f"Parity vector must be one dimensional, received {arr.shape!r}.")
    arr = arr.astype(int) % 2
    arr.setflags(write=False)
    return arr


def _parity_mask(rows: ParityVector, cols: ParityVector) -> np.ndarray:
    return np.equal.outer(rows, cols)


def _entries(x) -> np.ndarray:
    return x.entries if isinstance(x, GradedMatrix) else np.asarray(x, dtype=complex)


def _jordan_block(lam: complex, size: int) -> np.ndarray:
    return lam * np.eye(size) + np.eye(size, k=1)


def tensor_parities(factors: ParityList) -> ParityVector:
    """Parities of the flattened product, first factor slowest."""
    if not factors:
        return _as_parities([0])
    combined = reduce(lambda a, b: np.add.outer(a, b).ravel(), (np.asarray(f) for f in factors))
    return _as_parities(combined)


def _act(x: np.ndarray, slot: int, factors: ParityList) -> np.ndarray:
    n_factors = len(factors)
    if not 1 <= slot <= n_factors:
        raise SuperLinalgException(
            f"Slot {slot} out of range for a product of {n_factors} factor(s)."
        )
    own = _as_parities(factors[slot - 1])
    if x.shape != (len(own), len(own)):
        raise SuperLinalgException(
            f"Operator of shape {x.shape!r} does not fit slot {slot} of dimension {len(own)}."
        )
    left = tensor_parities(factors[:slot - 1])
    right_dim = math.prod(len(f) for f in factors[slot:])

    mask = _parity_mask(own, own)
    x_even, x_odd = np.where(mask, x, 0), np.where(mask, 0, x)
    left_id = np.eye(len(left)) if slot > 1 else np.eye(1)
    left_sign = np.diag((-1.0) ** left) if slot > 1 else np.eye(1)
    right_id = np.eye(right_dim)
    return np.kron(np.kron(left_id, x_even), right_id) + np.kron(np.kron(left_sign, x_odd), right_id)


def act_in_slot(x, slot: int, factors: ParityList) -> GradedMatrix:
    """
    Operator acting as ``x`` in ``slot`` (1-based) and as the identity elsewhere.

    The odd part of ``x`` picks up ``(-1)^p`` where ``p`` is the total parity
    of the factors left of ``slot`` in the vector it acts on.
    """
    return GradedMatrix(_act(_entries(x), slot, factors), tensor_parities(factors))


def super_kron(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """
    Super tensor product ``(A⊗B)[(a,b),(c,d)] = A[a,c] B[b,d] (-1)^{(p(b)+p(d)) p(c)}``.

    The rule ``(-1)^{p(b)(p(a)+p(c))}`` gives ``D·(A⊗B)·D`` with ``D = (-1)^{p(a)p(b)}``.
    """
    factors = [A.parities, B.parities]
    return GradedMatrix(
        _act(A.entries, 1, factors) @ _act(B.entries, 2, factors),
        tensor_parities(factors),
    )


def graded_permutation(pa: ArrayLike, pb: ArrayLike) -> GradedMatrix:
    """``a⊗b -> (-1)^{p(a)p(b)} b⊗a`` as a map from A⊗B to B⊗A."""
    pa, pb = _as_parities(pa), _as_parities(pb)
    da, db = len(pa), len(pb)
    perm = np.zeros((da * db, da * db), dtype=complex)
    for a in range(da):
        for b in range(db):
            perm[b * da + a, a * db + b] = (-1) ** (pa[a] * pb[b])
    return GradedMatrix(perm, tensor_parities([pb, pa]), tensor_parities([pa, pb]))


def supertranspose(x, parities: ArrayLike) -> GradedMatrix:
    parities = _as_parities(parities)
    x = _entries(x)
    signs = (-1.0) ** (np.add.outer(parities, parities) * parities[:, None])
    return GradedMatrix(signs * x.T, parities)


def _orth(vectors: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if vectors.size == 0 or vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    return linalg.orth(vectors, rcond=tol)


def _complement_directions(candidates: np.ndarray, against: np.ndarray, tol: float) -> np.ndarray:
    """Vectors in span(candidates) orthogonal to span(against), orthonormal."""
    if candidates.shape[1] == 0:
        return candidates
    Q = _orth(against, tol)
    projected = candidates - Q @ (Q.conj().T @ candidates)
    U, s, _ = np.linalg.svd(projected, full_matrices=False)
    scale = max(1.0, np.linalg.norm(candidates, 2))
    return U[:, s > tol * scale]


def jordan_chains(
    M,
    eigenvalues: list[ComplexLike],
    *,
    tol: float = RANK_TOL,
    ) -> JordanData:
    """
    Jordan chains of ``M`` for analytically known eigenvalues.

    Parameters:
        - M: square matrix (GradedMatrix or array).
        - eigenvalues (list[complex]): the spectrum; duplicates are merged, and
          values with empty generalized eigenspace are skipped.
        - tol (float): relative rank threshold.

    Returns:
        - JordanData whose chains satisfy ``(M - λ) v^(i) = v^(i-1)``.
    """
    M = _entries(M)
    dim = M.shape[0]
    scale = max(1.0, np.linalg.norm(M, 2))
    unique = []
    for lam in map(complex, eigenvalues):
        if not any(abs(lam - u) <= 1e-12 * scale for u in unique):
            unique.append(lam)

    blocks = []
    for lam in unique:
        shifted = M - lam * np.eye(dim)
        # ker N^k = {v : N v ∈ ker N^(k-1)}
        kernels = [np.zeros((dim, 0), dtype=complex)]
        while True:
            Q = kernels[-1]
            reduced = shifted - Q @ (Q.conj().T @ shifted)
            K = linalg.null_space(reduced, rcond=tol)
            if K.shape[1] <= Q.shape[1] or K.shape[1] == dim + 1:
                break
            kernels.append(K)
            if K.shape[1] == dim:
                break
        if len(kernels) == 1:
            continue

        chosen = []   # (level, top)
        for level in range(len(kernels) - 1, 0, -1):
            images = [
                np.linalg.matrix_power(shifted, top_level - level) @ top
                for top_level, top in chosen
            ]
            occupied = np.hstack([kernels[level - 1], *(img[:, None] for img in images)]) \
                if images else kernels[level - 1]
            for column in _complement_directions(kernels[level], occupied, tol).T:
                chosen.append((level, column / np.linalg.norm(column)))

        for level, top in chosen:
            chain = [top]
            for _ in range(level - 1):
                chain.append(shifted @ chain[-1])
            blocks.append(JordanBlock(lam, np.column_stack(chain[::-1])))

        geometric = kernels[1].shape[1]
        found = sum(1 for lvl, _ in chosen)
        if found != geometric:
            raise JordanException(
                f"Chain count {found} differs from the geometric multiplicity {geometric} "
                f"for eigenvalue {lam!r}."
            )

    total = sum(b.size for b in blocks)
    if total != dim:
        raise JordanException(
            "Supplied eigenvalues are inconsistent with the matrix: "
            f"generalized eigenspaces cover {total} of {dim} dimensions."
            f"\n{eigenvalues = }"
        )

    residual = 0.0
    for block in blocks:
        shifted = M - block.eigenvalue * np.eye(dim)
        prev = np.zeros(dim, dtype=complex)
        for i in range(block.size):
            v = block.chain[:, i]
            residual = max(residual, float(np.linalg.norm(shifted @ v - prev)))
            prev = v
    if residual > 1e3 * tol * scale:
        raise JordanException(
            f"Jordan chains fail the chain relation, {residual = :.3e}."
        )
    logger.debug("jordan_chains: profile %s, residual %.2e", JordanData(tuple(blocks), dim).profile(), residual)
    return JordanData(tuple(blocks), dim, residual)


def power_with_log(
    M,
    jordan: JordanData,
    x: ComplexLike,
    kappa: ComplexLike,
    *,
    log_x: ComplexLike | None = None,
    ) -> GradedMatrix:
    """
    ``x^{M/κ} = S · ⊕ x^{λ/κ} Σ_i (ln x / κ)^i / i! J^i · S⁻¹`` on the Jordan basis.

    ``log_x`` overrides the principal logarithm, e.g. ``iπ`` for a half turn.
    """
    parities = M.parities if isinstance(M, GradedMatrix) else np.zeros(jordan.dim, dtype=int)
    if log_x is None:
        if x == 0:
            raise SuperLinalgException("power_with_log is undefined at x = 0.")
        log_x = np.log(complex(x))
    log_x, kappa = complex(log_x), complex(kappa)

    pieces = []
    for block in jordan.blocks:
        k = block.size
        nil = np.eye(k, k=1)
        acc = np.zeros((k, k), dtype=complex)
        term = np.eye(k, dtype=complex)
        for i in range(k):
            acc += term
            term = term @ nil * (log_x / kappa) / (i + 1)
        pieces.append(np.exp(block.eigenvalue * log_x / kappa) * acc)

    S = jordan.basis()
    return GradedMatrix(S @ linalg.block_diag(*pieces) @ np.linalg.inv(S), parities)


def solve_shifted(
    M,
    mu: ComplexLike,
    b: ArrayLike,
    *,
    tol: float = DEFAULT_TOL,
    ) -> np.ndarray:
    """
    Solve ``(M - μ) v = b``. A near-singular shift means μ sits on the spectrum of
    ``M``, which only happens on the excluded parameter set.
    """
    M = _entries(M)
    shifted = M - complex(mu) * np.eye(M.shape[0])
    sv = linalg.svdvals(shifted)
    if sv.min(initial=np.inf) < tol * max(1.0, sv.max(initial=0.0)):
        raise ExcludedParameterException(
            f"Shifted system is singular: mu={mu!r} is (numerically) an eigenvalue. "
            "The parameters lie in the excluded (resonant) set."
            f"\nsmallest singular value: {sv.min():.3e}"
        )
    b = np.asarray(b, dtype=complex)
    v = linalg.lu_solve(linalg.lu_factor(shifted), b)
    residual = np.linalg.norm(shifted @ v - b) / max(1.0, np.linalg.norm(b))
    if residual > 1e3 * tol:
        raise SuperLinalgException(f"solve_shifted lost accuracy, {residual = :.3e}.")
    return v
# endregion


__all__ = (
    "GradedMatrix",
    "JordanBlock",
    "JordanData",
    "act_in_slot",
    "graded_permutation",
    "jordan_chains",
    "power_with_log",
    "solve_shifted",
    "super_kron",
    "supertranspose",
    "tensor_parities",
)
