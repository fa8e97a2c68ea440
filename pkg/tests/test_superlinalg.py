import numpy as np
import pytest

from numpy.testing import assert_allclose
from scipy import linalg

from kzdk.kzdk_utils.exceptions import (
    ExcludedParameterException,
    JordanException,
    SuperLinalgException,
)
from kzdk.kzdk_utils.gl11_modules import as_spec, build_module
from kzdk.kzdk_utils.superlinalg import (
    GradedMatrix,
    act_in_slot,
    graded_permutation,
    jordan_chains,
    power_with_log,
    solve_shifted,
    super_kron,
    supertranspose,
    tensor_parities,
)


ODD = np.array([[0, 1], [0, 0]], dtype=complex)
ODD_DOWN = np.array([[0, 0], [1, 0]], dtype=complex)
EVEN = np.array([[1, 0], [0, -2]], dtype=complex)
PAR = [0, 1]


def test_graded_matrix_validation():
    with pytest.raises(SuperLinalgException):
        GradedMatrix(np.eye(3), [0, 1])
    with pytest.raises(SuperLinalgException):
        GradedMatrix(np.array([[np.nan, 0], [0, 1]]), PAR)
    with pytest.raises(SuperLinalgException):
        GradedMatrix(np.ones(4), [0, 1, 0, 1])


def test_graded_matrix_degree():
    assert GradedMatrix(EVEN, PAR).degree() == 0
    assert GradedMatrix(ODD, PAR).degree() == 1
    assert GradedMatrix(EVEN + ODD, PAR).degree() is None
    assert_allclose(GradedMatrix(EVEN + ODD, PAR).odd_part(), ODD)


def test_tensor_parities_row_major():
    assert tensor_parities([PAR, PAR]).tolist() == [0, 1, 1, 0]
    assert tensor_parities([[0], PAR, [1]]).tolist() == [1, 0]


def test_act_in_slot_koszul_sign():
    M = act_in_slot(ODD, 2, [PAR, PAR]).entries
    # e_{a,b}, index 2a + b; the odd map picks up (-1)^{p(a)}
    assert M[0, 1] == 1
    assert M[2, 3] == -1
    assert np.count_nonzero(M) == 2


def test_act_in_slot_rejects_bad_slot():
    with pytest.raises(SuperLinalgException):
        act_in_slot(ODD, 3, [PAR, PAR])
    with pytest.raises(SuperLinalgException):
        act_in_slot(np.eye(3), 1, [PAR, PAR])


def test_odd_operators_in_distinct_slots_anticommute():
    factors = [PAR, PAR, PAR]
    for x, y in ((ODD, ODD), (ODD, ODD_DOWN), (ODD_DOWN, ODD)):
        a = act_in_slot(x, 1, factors).entries
        b = act_in_slot(y, 3, factors).entries
        assert_allclose(a @ b + b @ a, 0, atol=1e-14)


def test_super_kron_matches_slot_composition():
    A, B = GradedMatrix(ODD + EVEN, PAR), GradedMatrix(ODD_DOWN, PAR)
    expected = act_in_slot(A, 1, [PAR, PAR]).entries @ act_in_slot(B, 2, [PAR, PAR]).entries
    assert_allclose(super_kron(A, B).entries, expected)
    # (A⊗B)[(a,b),(c,d)] sign (-1)^{(p(b)+p(d)) p(c)}
    K = super_kron(GradedMatrix(np.eye(2), PAR), B).entries
    assert K[3, 2] == -1
    assert K[1, 0] == 1


def test_super_kron_psi_minus_psi_plus_on_typical():
    T = build_module(as_spec("T:0.3,0"))
    K = super_kron(T.psi_minus, T.psi_plus).entries
    # only (a,b)=(1,0), (c,d)=(0,1) survives; p(b) = p(c) = 0 so the sign is +
    expected = np.zeros((4, 4), dtype=complex)
    expected[2, 1] = 0.3
    assert_allclose(K, expected)


def _mirrored_kron(A, B, pa, pb):
    # (A⊗B)[(a,b),(c,d)] = (-1)^{p(b)(p(a)+p(c))} A[a,c] B[b,d]
    out = np.zeros((len(pa) * len(pb),) * 2, dtype=complex)
    for a, c, b, d in np.ndindex(len(pa), len(pa), len(pb), len(pb)):
        sign = (-1) ** (pb[b] * (pa[a] + pa[c]))
        out[a * len(pb) + b, c * len(pb) + d] = sign * A[a, c] * B[b, d]
    return out


def test_super_kron_and_mirrored_rule_differ_by_a_diagonal_sign():
    T = build_module(as_spec("T:0.3,0"))
    pa = pb = [0, 1]
    D = np.diag([(-1.0) ** (p * q) for p in pa for q in pb])
    for A, B in [(T.psi_plus, T.N), (T.N, T.psi_minus), (T.psi_minus, T.psi_minus), (T.psi_minus, T.psi_plus)]:
        mirrored = _mirrored_kron(A.entries, B.entries, pa, pb)
        assert_allclose(super_kron(A, B).entries, D @ mirrored @ D, atol=1e-15)
    # ψ⁺⊗N: entries with exactly one odd⊗odd index pair change sign
    mirrored = _mirrored_kron(T.psi_plus.entries, T.N.entries, pa, pb)
    assert not np.allclose(super_kron(T.psi_plus, T.N).entries, mirrored)


def test_super_kron_is_associative():
    rng = np.random.default_rng(3)
    pa, pb, pc = [0, 1], [1, 0, 0, 1], [0, 1]

    def random_graded(p):
        n = len(p)
        return GradedMatrix(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), p)

    A, B, C = random_graded(pa), random_graded(pb), random_graded(pc)
    left = super_kron(super_kron(A, B), C)
    right = super_kron(A, super_kron(B, C))
    assert_allclose(left.entries, right.entries, atol=1e-13)
    assert left.parities.tolist() == right.parities.tolist() == tensor_parities([pa, pb, pc]).tolist()


def test_graded_permutation_is_an_involution():
    pa, pb = [0, 1], [1, 0, 0, 1]
    forward = graded_permutation(pa, pb)
    back = graded_permutation(pb, pa)
    assert_allclose((back @ forward).entries, np.eye(8))
    assert forward.parities.tolist() == tensor_parities([pb, pa]).tolist()
    assert forward.col_parities.tolist() == tensor_parities([pa, pb]).tolist()


def test_graded_permutation_sign_on_odd_pair():
    P = graded_permutation(PAR, PAR).entries
    assert P[3, 3] == -1
    assert P[2, 1] == 1 and P[1, 2] == 1


def test_graded_permutation_naturality():
    P = graded_permutation(PAR, PAR).entries
    for x in (ODD, EVEN, ODD_DOWN):
        left = act_in_slot(x, 1, [PAR, PAR]).entries
        right = act_in_slot(x, 2, [PAR, PAR]).entries
        assert_allclose(P @ left, right @ P, atol=1e-14)


def test_supertranspose_reverses_odd_products_with_sign():
    X = np.array([[0, 2], [3, 0]], dtype=complex)
    Y = np.array([[0, 5], [-1, 0]], dtype=complex)
    lhs = supertranspose(X @ Y, PAR).entries
    rhs = supertranspose(Y, PAR).entries @ supertranspose(X, PAR).entries
    assert_allclose(lhs, -rhs)


def test_jordan_chains_single_block():
    M = np.array([[2, 1, 0], [0, 2, 0], [0, 0, -1]], dtype=complex)
    data = jordan_chains(M, [2, -1])
    assert data.profile() == {2: [2], -1: [1]}
    assert_allclose(data.reconstruct(), M, atol=1e-12)


def test_jordan_chains_conjugated_block():
    rng = np.random.default_rng(3)
    S = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    J = linalg.block_diag([[0.5, 1], [0, 0.5]], [[0.5]], [[-1.5]])
    M = S @ J @ np.linalg.inv(S)
    data = jordan_chains(M, [0.5, -1.5])
    assert data.profile()[0.5] == [2, 1]
    assert data.residual < 1e-8


def test_jordan_chains_inconsistent_spectrum():
    with pytest.raises(JordanException):
        jordan_chains(np.diag([1.0, 2.0]), [5.0])


def test_power_with_log_on_jordan_block():
    lam, kappa, x = 0.7, 1.3, 0.4
    M = np.array([[lam, 1], [0, lam]], dtype=complex)
    P = power_with_log(M, jordan_chains(M, [lam]), x, kappa).entries
    expected = x ** (lam / kappa) * np.array([[1, np.log(x) / kappa], [0, 1]])
    assert_allclose(P, expected, atol=1e-13)


def test_power_with_log_matches_expm():
    rng = np.random.default_rng(11)
    S = rng.normal(size=(3, 3))
    M = S @ np.diag([1.0, -0.5, 0.25]) @ np.linalg.inv(S)
    jordan = jordan_chains(M, [1.0, -0.5, 0.25])
    kappa = 0.8
    assert_allclose(
        power_with_log(M, jordan, 2.5, kappa).entries,
        linalg.expm(M * np.log(2.5) / kappa),
        atol=1e-10,
    )
    # half turn with an explicit logarithm
    assert_allclose(
        power_with_log(M, jordan, -1, kappa, log_x=1j * np.pi).entries,
        linalg.expm(1j * np.pi * M / kappa),
        atol=1e-10,
    )


def test_solve_shifted():
    M = np.diag([1.0, 2.0, 3.0])
    v = solve_shifted(M, 0.5, [1, 1, 1])
    assert_allclose((M - 0.5 * np.eye(3)) @ v, [1, 1, 1])
    with pytest.raises(ExcludedParameterException):
        solve_shifted(M, 2.0, [1, 1, 1])
