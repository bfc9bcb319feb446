import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from hubbard_ent.entanglement import (
    SIGMA_Z,
    EntanglementError,
    confinement_coefficients,
    fit_generic_family,
    four_tangle,
    frozen_lhfs_state,
    generic_family_state,
    initial_lhfs_index,
    lbc,
    lbc_terms,
    local_entropy_from_d,
    pair_spin_squared,
    project_to_spin_state,
    pure_state_concurrence_squared,
    pure_state_lbc,
    qubit_pair_rdm,
    so_generators,
    spectral_decomposition,
    track_lhfs,
    von_neumann_entropy,
    wootters_concurrence,
)
from hubbard_ent.rdm import FERMIONIC, JORDAN_WIGNER, LHFS_INDICES, pair_rdm, single_site_rdm

from conftest import random_density_matrix, solved

seeds = st.integers(0, 2**32 - 1)


def embed_two_qubit(rho2):
    """Two-qubit state on levels {0, 1} of each ququart."""
    idx = [4 * a + b for a in (0, 1) for b in (0, 1)]
    rho = np.zeros((16, 16), dtype=complex)
    rho[np.ix_(idx, idx)] = rho2
    return rho


def random_pure(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def spin_state(amps: dict) -> np.ndarray:
    """Four-qubit vector from {'uddu': a, ...}; site 1 most significant, up=0."""
    psi = np.zeros(16)
    for key, a in amps.items():
        psi[int(key.replace("u", "0").replace("d", "1"), 2)] = a
    return psi


# --- entropy -------------------------------------------------------------------


def test_entropy_limits():
    assert von_neumann_entropy(np.diag([1.0, 0, 0, 0])) == 0.0
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-14)
    assert von_neumann_entropy(np.eye(16) / 16) == pytest.approx(4.0, abs=1e-14)


def test_entropy_rejects_bad_input():
    with pytest.raises(EntanglementError):
        von_neumann_entropy(np.diag([0.5, 0.4]))
    with pytest.raises(EntanglementError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


@given(seeds, st.floats(0, 1))
def test_entropy_concave(seed, p):
    rng = np.random.default_rng(seed)
    a, b = random_density_matrix(rng, 4), random_density_matrix(rng, 4)
    mix = von_neumann_entropy(p * a + (1 - p) * b)
    assert mix >= p * von_neumann_entropy(a) + (1 - p) * von_neumann_entropy(b) - 1e-10


@pytest.mark.parametrize("U", [0.5, 2.0, 8.0])
def test_site_entropy_from_double_occupancy(U):
    basis, gs = solved(4, U)
    for s in range(1, 5):
        site = single_site_rdm(gs, basis, s)
        assert von_neumann_entropy(site.matrix) == pytest.approx(local_entropy_from_d(site.d), abs=1e-10)


# --- lower bound of concurrence ------------------------------------------------


def test_generators():
    g = so_generators(4)
    assert len(g.pairs) == 6
    for m in g.matrices:
        np.testing.assert_array_equal(m, m.conj().T)
        assert np.trace(m) == 0


def test_generator_conventions_agree():
    rng = np.random.default_rng(5)
    rho = random_density_matrix(rng, 16, rank=3)
    np.testing.assert_allclose(lbc_terms(rho, hermitian=True), lbc_terms(rho, hermitian=False), atol=1e-12)


def test_lbc_wootters_reduction():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        rho2 = random_density_matrix(rng, 4, rank=int(rng.integers(1, 5)))
        tau2, _ = lbc(embed_two_qubit(rho2))
        assert tau2 == pytest.approx(2 / 3 * wootters_concurrence(rho2) ** 2, abs=1e-8)


def test_lbc_bounded_by_pure_concurrence():
    rng = np.random.default_rng(99)
    for _ in range(100):
        psi = random_pure(rng, 16)
        tau2, _ = pure_state_lbc(psi)
        assert tau2 <= pure_state_concurrence_squared(psi) + 1e-10


def test_lbc_product_and_bell():
    prod = np.kron(random_pure(np.random.default_rng(1), 4), random_pure(np.random.default_rng(2), 4))
    assert pure_state_lbc(prod)[0] == pytest.approx(0, abs=1e-10)
    bell = np.zeros(16)
    bell[[0, 5]] = 1 / np.sqrt(2)
    assert pure_state_lbc(bell)[0] == pytest.approx(2 / 3, abs=1e-12)
    # maximally entangled LHFS-type state
    lhfs = np.zeros(16)
    lhfs[list(LHFS_INDICES)] = 0.5
    assert pure_state_lbc(lhfs)[1] == pytest.approx(1.0, abs=1e-8)


def test_lbc_shape_check():
    with pytest.raises(ValueError):
        lbc(np.eye(4) / 4)


@given(seeds, st.floats(0, 1))
def test_wootters_werner(seed, p):
    bell = np.zeros(4)
    bell[[1, 2]] = 1 / np.sqrt(2)
    rho = p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4
    assert wootters_concurrence(rho) == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-7)


@given(seeds)
def test_wootters_pure_state_formula(seed):
    psi = random_pure(np.random.default_rng(seed), 4)
    expected = 2 * abs(psi[0] * psi[3] - psi[1] * psi[2])
    assert wootters_concurrence(np.outer(psi, psi.conj())) == pytest.approx(expected, abs=1e-7)


# --- spectral structure ----------------------------------------------------------


@pytest.mark.parametrize("conv", [FERMIONIC, JORDAN_WIGNER])
def test_pair_spin_squared_spectrum(conv):
    w = np.linalg.eigvalsh(pair_spin_squared(conv))
    # two spin-1/2 fermion sites: S in {0 (x6), 1/2 (x8 states), 1 (x... )}
    values = sorted(set(np.round(w, 10)))
    assert values == [0.0, 0.75, 2.0]


@pytest.mark.parametrize("conv", [FERMIONIC, JORDAN_WIGNER])
@pytest.mark.parametrize("pair", [(1, 2), (2, 3), (1, 3), (1, 4)])
def test_spectral_decomposition_reconstructs(conv, pair):
    basis, gs = solved(4, 1.5)
    pr = pair_rdm(gs, basis, *pair, conv)
    dec = spectral_decomposition(pr)
    np.testing.assert_allclose(dec.matrix(), pr.matrix, atol=1e-12)
    assert np.all(np.diff(dec.probabilities) <= 1e-12)
    assert set(dec.S) <= {0.0, 0.5, 1.0}


def test_lhfs_dominant_at_half_filling():
    basis, gs = solved(4, 0.0)
    dec = spectral_decomposition(pair_rdm(gs, basis, 1, 2))
    k = initial_lhfs_index(dec)
    assert k == 0 and dec.probabilities[0] > 0.8
    assert dec.S[k] == 0 and dec.N[k] == 2


def test_dimer_lhfs_amplitudes():
    basis, gs = solved(2, 0.0)
    dec = spectral_decomposition(pair_rdm(gs, basis, 1, 2, FERMIONIC))
    rec = track_lhfs([dec], [0.0])[0]
    assert rec.probability == pytest.approx(1)
    np.testing.assert_allclose(np.abs(rec.amplitudes), 0.5, atol=1e-12)
    # singlet under the fermionic pair ordering
    np.testing.assert_allclose(rec.amplitudes, [0.5, -0.5, 0.5, 0.5], atol=1e-12)


def test_tracking_is_continuous():
    grid = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0]
    decs = []
    for U in grid:
        basis, gs = solved(4, U)
        decs.append(spectral_decomposition(pair_rdm(gs, basis, 1, 2)))
    recs = track_lhfs(decs, grid)
    assert not any(r.discontinuity for r in recs)
    assert all(r.overlap > 0.9 for r in recs)
    assert [r.U for r in recs] == grid
    p = [r.probability for r in recs]
    assert all(b >= a - 1e-12 for a, b in zip(p, p[1:]))


def test_frozen_state_identity_at_reference():
    basis, gs = solved(4, 2.0)
    dec = spectral_decomposition(pair_rdm(gs, basis, 1, 2))
    rec = track_lhfs([dec], [2.0])[0]
    np.testing.assert_allclose(frozen_lhfs_state(dec, rec.vector, rec.index), dec.matrix(), atol=1e-12)
    with pytest.raises(EntanglementError):
        frozen_lhfs_state(dec, 2 * rec.vector)
    bad = np.zeros(16)
    bad[0] = 1
    with pytest.raises(EntanglementError):
        frozen_lhfs_state(dec, bad)


# --- confinement and four-qubit invariants ---------------------------------------


def test_ghz_tangle():
    ghz = np.zeros(16)
    ghz[[0, 15]] = 1 / np.sqrt(2)
    assert four_tangle(ghz) == pytest.approx(1.0, abs=1e-15)
    assert four_tangle(np.eye(16)[3]) == 0.0


@given(arrays(np.float64, 16, elements=st.floats(-1, 1)), arrays(np.float64, 16, elements=st.floats(-np.pi, np.pi)))
def test_tangle_invariant_under_local_z(re, phases):
    if np.linalg.norm(re) < 1e-3:
        return
    psi = re / np.linalg.norm(re)
    zzzz = np.kron(np.kron(SIGMA_Z, SIGMA_Z), np.kron(SIGMA_Z, SIGMA_Z))
    assert four_tangle(zzzz @ psi) == pytest.approx(four_tangle(psi), abs=1e-12)
    # a local phase rotation on every qubit multiplies the invariant by a unit phase
    u = np.diag([np.exp(-0.5j * phases[0]), np.exp(0.5j * phases[0])])
    uu = np.kron(np.kron(u, u), np.kron(u, u))
    assert four_tangle(uu @ psi) == pytest.approx(four_tangle(psi), abs=1e-12)


@given(arrays(np.float64, 4, elements=st.floats(-1, 1)))
def test_generic_family_tangle_and_fit(z):
    psi = generic_family_state(z)
    assert four_tangle(psi) == pytest.approx(abs(np.sum(z**2)) ** 2, abs=1e-10)
    fit = fit_generic_family(psi)
    assert fit.is_member
    np.testing.assert_allclose(fit.z, z, atol=1e-12)


def test_dimer_confinement_singlet():
    basis, gs = solved(2, 1e4)
    proj = project_to_spin_state(gs, basis)
    assert proj.leakage < 1e-6
    np.testing.assert_allclose(np.abs(proj.state), [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0], atol=1e-6)
    assert proj.state[1] == pytest.approx(-proj.state[2], abs=1e-6)
    assert wootters_concurrence(qubit_pair_rdm(proj.state, 2, 1, 2)) == pytest.approx(1, abs=1e-6)


def test_confinement_leakage_guard():
    basis, gs = solved(4, 0.0)
    with pytest.raises(EntanglementError):
        project_to_spin_state(gs, basis, max_leakage=0.1)


def test_confinement_state_structure():
    basis, gs = solved(4, 1e4)
    proj = project_to_spin_state(gs, basis)
    psi = proj.state
    a, b, g = confinement_coefficients(psi)
    assert (a, b, g) == pytest.approx((1 / np.sqrt(6), 3 * np.sqrt(8639) / 500, np.sqrt(16747 / 3) / 500), abs=1e-3)
    assert 2 * (a * a + b * b + g * g) == pytest.approx(1, abs=1e-9)
    assert fit_generic_family(psi).residual < 1e-6
    assert four_tangle(psi) == pytest.approx(1, abs=1e-6)


def test_written_coefficient_placement_is_inconsistent():
    """Placing 1/sqrt6 on |uudd>,|dduu> and the small weight on |uddu>,|duud>
    is not the Heisenberg ground state: it contradicts C12 = 0.866."""
    a, b, g = 1 / np.sqrt(6), 3 * np.sqrt(8639) / 500, np.sqrt(16747 / 3) / 500
    literal = spin_state({"dduu": -a, "uudd": -a, "dudu": b, "udud": b, "duud": -g, "uddu": -g})
    swapped = spin_state({"dduu": -g, "uudd": -g, "dudu": b, "udud": b, "duud": -a, "uddu": -a})
    c_lit = [wootters_concurrence(qubit_pair_rdm(literal, 4, *p)) for p in [(1, 2), (2, 3), (1, 4)]]
    c_sw = [wootters_concurrence(qubit_pair_rdm(swapped, 4, *p)) for p in [(1, 2), (2, 3), (1, 4)]]
    assert c_lit[0] < 0.01 and c_lit[1] > 0.8
    assert c_sw == pytest.approx([np.sqrt(3) / 2, 0, 0], abs=1e-3)
    basis, gs = solved(4, 1e4)
    psi = project_to_spin_state(gs, basis).state
    assert abs(psi @ swapped) == pytest.approx(1, abs=1e-6)
