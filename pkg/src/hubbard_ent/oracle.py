"""Brute-force full Fock space reference used to validate the sector fast paths.

Everything here works on the 4**L dimensional space whose basis index has bit
``m`` set when mode ``m`` is occupied (same mode numbering as the rest of the
package). Nothing in this module reuses the sign logic of ``fock``/``rdm``.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

MAX_ORACLE_SITES = 6


def _check_L(L: int) -> None:
    if not 1 <= L <= MAX_ORACLE_SITES:
        raise ValueError(f"oracle supports 1 <= L <= {MAX_ORACLE_SITES}, got {L}")


def build_mode_operators(L: int) -> list[sp.csr_matrix]:
    """Annihilators c_m, m = 0..2L-1, as Jordan-Wigner matrices.

    c_m = Z (x) ... (x) Z (x) a (x) 1 ... with the string over modes below m.
    """
    _check_L(L)
    n_modes = 2 * L
    dim = 1 << n_modes
    x = np.arange(dim)
    ops = []
    for m in range(n_modes):
        occupied = ((x >> m) & 1).astype(bool)
        src = x[occupied]
        string = np.zeros(len(src), dtype=np.int64)
        for k in range(m):
            string += (src >> k) & 1
        vals = np.where(string % 2, -1.0, 1.0)
        ops.append(sp.csr_matrix((vals, (src ^ (1 << m), src)), shape=(dim, dim)))
    return ops


def up_mode(site: int, L: int) -> int:
    return site - 1


def down_mode(site: int, L: int) -> int:
    return L + site - 1


def full_hamiltonian(L: int, t: float = 1.0, u: float = 0.0, ops=None) -> sp.csr_matrix:
    ops = ops or build_mode_operators(L)
    dim = ops[0].shape[0]
    h = sp.csr_matrix((dim, dim))
    for mode in (up_mode, down_mode):
        for s in range(1, L):
            a, b = ops[mode(s, L)], ops[mode(s + 1, L)]
            h = h - t * (a.T @ b + b.T @ a)
    for s in range(1, L + 1):
        nu = ops[up_mode(s, L)].T @ ops[up_mode(s, L)]
        nd = ops[down_mode(s, L)].T @ ops[down_mode(s, L)]
        h = h + u * (nu @ nd)
    return sp.csr_matrix(h)


def sector_indices(L: int, n_up: int, n_down: int) -> np.ndarray:
    """Full-space indices of a sector, in the sector basis order."""
    x = np.arange(1 << (2 * L))
    up = x & ((1 << L) - 1)
    down = x >> L
    keep = (np.bitwise_count(up) == n_up) & (np.bitwise_count(down) == n_down)
    sel = x[keep]
    order = np.lexsort((down[keep], up[keep]))
    return sel[order]


def embed(L: int, n_up: int, n_down: int, vector: np.ndarray) -> np.ndarray:
    full = np.zeros(1 << (2 * L), dtype=np.asarray(vector).dtype)
    full[sector_indices(L, n_up, n_down)] = vector
    return full


def sector_block(H_full, L: int, n_up: int, n_down: int) -> np.ndarray:
    idx = sector_indices(L, n_up, n_down)
    return H_full[np.ix_(idx, idx)].toarray() if sp.issparse(H_full) else H_full[np.ix_(idx, idx)]


def sector_ground_energy(L: int, n_up: int, n_down: int, t: float = 1.0, u: float = 0.0) -> float:
    block = sector_block(full_hamiltonian(L, t, u), L, n_up, n_down)
    return float(np.linalg.eigvalsh(block)[0])


def _pair_modes(i: int, j: int, L: int) -> list[int]:
    return [up_mode(i, L), down_mode(i, L), up_mode(j, L), down_mode(j, L)]


def rdm_by_expectation(full_psi: np.ndarray, L: int, i: int, j: int, ops=None) -> np.ndarray:
    """Pair RDM from <psi| X_{s' <- s} |psi>, X = A+_{s'} P_vac A_s.

    A+_s creates the pair configuration s in the order (i up, i down, j up,
    j down); P_vac projects the four pair modes onto their vacuum. So
    rho[s, s'] = <P A_s psi | ... > = sum_x w_s[x] conj(w_s'[x]).
    """
    _check_L(L)
    ops = ops or build_mode_operators(L)
    modes = _pair_modes(i, j, L)
    dim = ops[0].shape[0]
    p_vac = sp.identity(dim, format="csr")
    for m in modes:
        p_vac = p_vac @ (sp.identity(dim) - ops[m].T @ ops[m])
    w = np.zeros((16, dim), dtype=np.result_type(full_psi, float))
    for s in range(16):
        a, b = divmod(s, 4)
        occ = [a & 1, (a >> 1) & 1, b & 1, (b >> 1) & 1]
        vec = np.asarray(full_psi)
        # A_s = c_{j,down}^. c_{j,up}^. c_{i,down}^. c_{i,up}^. ; rightmost acts first
        for m, n in zip(modes, occ):
            if n:
                vec = ops[m] @ vec
        w[s] = p_vac @ vec
    return w @ w.conj().T


def rdm_qubit_partial_trace(full_psi: np.ndarray, L: int, i: int, j: int) -> np.ndarray:
    """Pair RDM treating each mode as a qubit (plain partial trace, no fermion signs).

    This is the Jordan-Wigner spin-chain alternative to the fermionic-mode RDM.
    """
    n_modes = 2 * L
    psi = np.asarray(full_psi).reshape((2,) * n_modes)
    # reshape axis k corresponds to bit n_modes - 1 - k
    axis = lambda m: n_modes - 1 - m
    keep = [axis(m) for m in _pair_modes(i, j, L)]
    psi = np.moveaxis(psi, keep, range(4)).reshape(16, -1)
    rho_bits = psi @ psi.conj().T  # index bits (i up, i down, j up, j down), first most significant
    # to pair index 4a + b with a = n_up + 2 n_down
    perm = np.empty(16, dtype=int)
    for x in range(16):
        iu, idn, ju, jd = (x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1
        perm[4 * (iu + 2 * idn) + (ju + 2 * jd)] = x
    return rho_bits[np.ix_(perm, perm)]


def full_spin_squared(L: int, ops=None) -> sp.csr_matrix:
    ops = ops or build_mode_operators(L)
    s_plus = sum(ops[up_mode(s, L)].T @ ops[down_mode(s, L)] for s in range(1, L + 1))
    n_up = sum(ops[up_mode(s, L)].T @ ops[up_mode(s, L)] for s in range(1, L + 1))
    n_dn = sum(ops[down_mode(s, L)].T @ ops[down_mode(s, L)] for s in range(1, L + 1))
    sz = 0.5 * (n_up - n_dn)
    return sp.csr_matrix(s_plus.T @ s_plus + sz @ sz + sz)
