import numpy as np
import pytest

from numpy.testing import assert_allclose

from kzdk.kzdk_utils.exceptions import ExcludedParameterException, KZDKException
from kzdk.kzdk_utils.gl11_modules import as_spec, build_module, supercommutator_residual, tensor_casimir
from kzdk.kzdk_utils.kz_engine import (
    KZSolver,
    KZSystem,
    associator,
    associator_pexp,
    braiding,
    casimir_eigenvalues,
    monodromy0,
    resonance_check,
    reverse_braiding,
    series_at0,
    series_at1,
    series_residual,
    spectral_data,
)
from kzdk.kzdk_utils.superlinalg import jordan_chains


KAPPA = 1.0
TTT = ("T:0.3,0", "T:0.2,0", "T:0.15,0")


@pytest.fixture(scope="module")
def ttt():
    return KZSystem(TTT, KAPPA)


def _close_sets(a, b, tol=1e-10):
    return all(min(abs(x - y) for y in b) < tol for x in a) and all(min(abs(x - y) for y in a) < tol for x in b)


@pytest.mark.parametrize(
    "a, b",
    [("T:0.3,0", "T:0.2,1"), ("T:0.3,0", "T:-0.3,1"), ("T:0.3,0", "P:0"), ("A:2", "T:0.3,0"), ("P:0", "P:0")],
)
def test_casimir_eigenvalues_match_numerics(a, b):
    A, B = build_module(as_spec(a)), build_module(as_spec(b))
    omega = tensor_casimir([A, B], 1, 2).entries
    data = jordan_chains(omega, casimir_eigenvalues(A, B))
    assert sum(block.size for block in data.blocks) == A.dim * B.dim
    assert_allclose(data.reconstruct(), omega, atol=1e-9)


def test_projective_pair_jordan_profile():
    A = build_module(as_spec("P:0"))
    omega = tensor_casimir([A, A], 1, 2).entries
    ranks = [np.linalg.matrix_rank(np.linalg.matrix_power(omega, k)) for k in range(4)]
    assert ranks == [16, 6, 1, 0]
    data = jordan_chains(omega, casimir_eigenvalues(A, A))
    assert data.profile() == {0: [3, 2, 2, 2, 2, 1, 1, 1, 1, 1]}


def test_system_invariants(ttt):
    assert ttt.dim == 8
    assert ttt.labels == TTT
    assert ttt.invariant_residual() < 1e-12
    assert "kappa=1" in repr(ttt)


def test_system_requires_three_factors():
    with pytest.raises(KZDKException):
        KZSystem(("T:0.3,0", "T:0.2,0"), KAPPA)


def test_resonance_check_flags_integer_gaps():
    # Ω₁₂ gap on T⊗T equals e₁+e₂
    resonant = KZSystem(("T:0.6,0", "T:0.4,0", "T:0.15,0"), KAPPA)
    assert resonance_check(resonant)
    with pytest.raises(ExcludedParameterException):
        KZSolver(resonant)


def test_spectral_data_covers_space(ttt):
    data = spectral_data(ttt, "omega12")
    assert sum(b.size for b in data.blocks) == ttt.dim
    assert_allclose(data.reconstruct(), ttt.omega12.entries, atol=1e-9)


def test_series_solutions_solve_the_equation(ttt):
    data = spectral_data(ttt, "omega12")
    for block in data.blocks:
        for sol in series_at0(ttt, block, order=30):
            assert series_residual(sol, ttt, 0.3) < 1e-10
    data1 = spectral_data(ttt, "omega23")
    for block in data1.blocks:
        for sol in series_at1(ttt, block, order=30):
            assert series_residual(sol, ttt, 0.7) < 1e-10


def test_series_with_jordan_block():
    # T_e ⊗ T_-e fuses to a projective cover: Ω₁₂ has a 2x2 block
    sys = KZSystem(("T:0.3,0", "T:-0.3,0", "T:0.15,0"), KAPPA)
    data = spectral_data(sys, "omega12")
    assert max(b.size for b in data.blocks) == 2
    for block in data.blocks:
        for sol in series_at0(sys, block, order=30):
            assert series_residual(sol, sys, 0.25) < 1e-10


def test_associator_is_equivariant_and_invertible(ttt):
    solver = KZSolver(ttt)
    alpha = solver.associator().entries
    assert supercommutator_residual(alpha, list(ttt.factors)) < 1e-8
    assert solver.diagnostics["matchingConsistency"] < 1e-8
    assert solver.diagnostics["inverseResidual"] < 1e-8
    assert "associator" in solver.timings


def test_associator_with_one_dimensional_factor():
    for specs in (("A:1", "T:0.3,0", "T:0.2,0"), ("T:0.3,0", "A:-1", "P:0")):
        alpha = associator(KZSystem(specs, KAPPA)).entries
        assert_allclose(alpha, np.eye(alpha.shape[0]), atol=1e-9)


def test_frames_and_pexp_agree(ttt):
    frames = associator(ttt).entries
    pexp = associator_pexp(ttt, t=1e-3, steps=2000).entries
    assert np.linalg.norm(frames - pexp, 2) < 1e-6


def test_pexp_argument_validation(ttt):
    with pytest.raises(KZDKException):
        associator_pexp(ttt, t=0.7)
    with pytest.raises(KZDKException):
        associator_pexp(ttt, steps=0)
    with pytest.raises(KZDKException):
        associator_pexp(ttt, scheme="euler")


def test_braiding_square_is_monodromy(ttt):
    A, B, C = ttt.factors
    double = braiding(B, A, KAPPA).entries @ braiding(A, B, KAPPA).entries
    assert_allclose(monodromy0(ttt).entries, np.kron(double, np.eye(C.dim)), atol=1e-10)


def test_double_braiding_eigenvalues():
    A, B = build_module(as_spec("T:0.3,0")), build_module(as_spec("P:0"))
    double = braiding(B, A, KAPPA).entries @ braiding(A, B, KAPPA).entries
    expected = [np.exp(2j * np.pi * lam / KAPPA) for lam in casimir_eigenvalues(A, B)]
    assert _close_sets(np.linalg.eigvals(double), expected, tol=1e-7)


def test_reverse_braiding_inverts(ttt):
    A, B, _ = ttt.factors
    back = reverse_braiding(A, B, KAPPA).entries
    assert_allclose(braiding(B, A, KAPPA).entries @ back, np.eye(4), atol=1e-12)
