import numpy as np
import pytest

from hubbard_ent import oracle

from conftest import mode_ops


@pytest.mark.parametrize("L", [1, 2, 3])
def test_canonical_anticommutators(L):
    ops = mode_ops(L)
    n = len(ops)
    eye = np.eye(ops[0].shape[0])
    for a in range(n):
        for b in range(n):
            ca, cb = ops[a].toarray(), ops[b].toarray()
            np.testing.assert_array_equal(ca @ cb.T + cb.T @ ca, eye * (a == b))
            np.testing.assert_array_equal(ca @ cb + cb @ ca, 0)


def test_size_guard():
    with pytest.raises(ValueError):
        oracle.build_mode_operators(7)


def test_sector_energy_dimer():
    for U in (0.0, 2.0, 10.0):
        e = oracle.sector_ground_energy(2, 1, 1, 1.0, U)
        assert e == pytest.approx((U - np.sqrt(U * U + 16)) / 2, abs=1e-12)


def test_particle_number_conserved():
    L = 3
    ops = mode_ops(L)
    H = oracle.full_hamiltonian(L, 1.0, 2.0, ops)
    N = sum(c.T @ c for c in ops)
    assert abs(H @ N - N @ H).max() < 1e-13


def test_two_rdm_routes_agree_on_product_like_state():
    # vacuum on the environment: no fermion signs, so both routes coincide
    L = 2
    psi = np.zeros(16)
    psi[0b0101] = psi[0b1010] = 1 / np.sqrt(2)  # modes: 0=1u, 1=2u, 2=1d, 3=2d
    a = oracle.rdm_by_expectation(psi, L, 1, 2, mode_ops(L))
    b = oracle.rdm_qubit_partial_trace(psi, L, 1, 2)
    assert np.trace(a) == pytest.approx(1)
    np.testing.assert_allclose(np.abs(a), np.abs(b), atol=1e-15)
