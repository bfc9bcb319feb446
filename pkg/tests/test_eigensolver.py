import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st

from hubbard_ent.eigensolver import (
    dense_ground_state,
    degeneracy_check,
    fix_sign,
    ground_state,
    lanczos_ground_state,
)
from hubbard_ent.fock import Sector, enumerate_sector
from hubbard_ent.hamiltonian import HubbardParams, build_hamiltonian, free_fermion_energy


def hubbard(L, U):
    return build_hamiltonian(HubbardParams.from_U(L, U), enumerate_sector(Sector.half_filling(L)))


@given(st.floats(0, 50))
def test_dimer_energy(U):
    gs = ground_state(hubbard(2, U))
    assert gs.energy == pytest.approx((U - np.sqrt(U * U + 16)) / 2, abs=1e-12)


@pytest.mark.parametrize("L", [4, 6])
def test_free_fermion_dense(L):
    gs = ground_state(hubbard(L, 0.0))
    assert gs.method == "dense"
    assert gs.energy == pytest.approx(free_fermion_energy(L, L // 2, L // 2), abs=1e-12)


@pytest.mark.parametrize("U", [0.0, 1.0, 8.0])
def test_lanczos_agrees_with_dense(U):
    H = hubbard(6, U)
    dense = dense_ground_state(H)
    lz = lanczos_ground_state(H, tol=1e-11)
    assert lz.converged
    assert lz.energy == pytest.approx(dense.energy, abs=1e-10)
    assert abs(abs(lz.vector @ dense.vector) - 1) < 1e-10
    assert lz.gap == pytest.approx(dense.gap, rel=1e-6)


def test_lanczos_deterministic():
    H = hubbard(8, 2.0)
    a = lanczos_ground_state(H, seed=3)
    b = lanczos_ground_state(H, seed=3)
    assert np.array_equal(a.vector, b.vector) and a.energy == b.energy


def test_lanczos_restarts_with_small_krylov():
    H = hubbard(6, 4.0)
    lz = lanczos_ground_state(H, tol=1e-9, krylov_dim=20, max_iter=5000)
    assert lz.converged and lz.iterations > 20
    assert lz.energy == pytest.approx(dense_ground_state(H).energy, abs=1e-9)


def test_lanczos_reports_nonconvergence():
    lz = lanczos_ground_state(hubbard(8, 4.0), tol=1e-14, krylov_dim=10, max_iter=20)
    assert not lz.converged and lz.residual > 1e-14


def test_small_invariant_subspace():
    A = sp.diags([1.0, 2.0, 3.0])
    lz = lanczos_ground_state(A)
    assert lz.converged and lz.energy == pytest.approx(1.0)


def test_sign_convention():
    gs = ground_state(hubbard(4, 1.0))
    k = np.argmax(np.abs(gs.vector))
    assert gs.vector[k] > 0
    np.testing.assert_array_equal(fix_sign(-gs.vector), gs.vector)


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        dense_ground_state(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_degeneracy_flag():
    gs = dense_ground_state(np.diag([1.0, 1.0, 2.0]))
    assert degeneracy_check(gs)
    assert not degeneracy_check(ground_state(hubbard(4, 1.0)))


def test_residual_reported():
    H = hubbard(4, 3.0)
    gs = ground_state(H)
    assert gs.residual == pytest.approx(np.linalg.norm(H @ gs.vector - gs.energy * gs.vector), abs=1e-15)
    assert gs.residual < 1e-10


def test_toy_matrices():
    gs = dense_ground_state(np.diag([0.0, 1.0, 2.0]))
    assert gs.energy == 0.0 and np.array_equal(np.abs(gs.vector), [1.0, 0.0, 0.0])
    lz = lanczos_ground_state(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    assert lz.energy == pytest.approx(-1.0, abs=1e-14)


@given(st.floats(0, 30))
def test_variational_bound(U):
    H = hubbard(6, U)
    assert lanczos_ground_state(H).energy >= dense_ground_state(H).energy - 1e-9


def test_l12_strong_coupling_converges():
    lz = ground_state(hubbard(12, 8.0), tol=1e-8, max_iter=500)
    assert lz.method == "lanczos" and lz.converged and lz.iterations <= 500
    assert lz.residual <= 1e-8
