"""Sector-restricted Fermi-Hubbard Hamiltonian with open boundaries.

    H = -t sum_{i,s} (c+_{i,s} c_{i+1,s} + h.c.) + u sum_i n_{i,up} n_{i,down}

Because the spin-up modes precede all spin-down modes, hopping signs only
involve same-species modes and the sector matrix factorises as
``T_up (x) 1 + 1 (x) T_down + diag(u * n_double)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from hubbard_ent.fock import (
    DOWN,
    UP,
    FockState,
    SectorBasis,
    annihilate,
    apply_hop,
    create,
    double_occupancy_counts,
    mode_index,
)

# bytes allowed for the CSR arrays of one sector Hamiltonian
DEFAULT_MEMORY_BUDGET = 2 * 1024**3


class HamiltonianTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class HubbardParams:
    L: int
    t: float = 1.0
    u: float = 0.0

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("hopping amplitude t must be positive")
        if self.u < 0:
            raise ValueError("on-site interaction u must be non-negative")

    @property
    def U(self) -> float:
        return self.u / self.t

    @classmethod
    def from_U(cls, L: int, U: float, t: float = 1.0) -> "HubbardParams":
        return cls(L=L, t=t, u=U * t)


@dataclass(frozen=True)
class SparseHamiltonian:
    """Real symmetric sector Hamiltonian stored with both triangles (CSR)."""

    matrix: sp.csr_matrix
    params: HubbardParams

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.dim:
            raise ValueError(f"vector length {x.shape[0]} does not match dimension {self.dim}")
        return self.matrix @ x

    __matmul__ = matvec

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()


def species_hopping(L: int, states: np.ndarray, t: float) -> sp.csr_matrix:
    """Nearest-neighbour hopping of one spin species on its sorted masks."""
    lookup = {int(m): k for k, m in enumerate(states)}
    rows, cols, vals = [], [], []
    for k, mask in enumerate(states):
        state = FockState(int(mask), 0, L)
        for i in range(1, L):
            for a, b in ((i, i + 1), (i + 1, i)):
                hopped = apply_hop(state, a, b, UP)
                if hopped is None:
                    continue
                new, sign = hopped
                rows.append(lookup[new.up])
                cols.append(k)
                vals.append(-t * sign)
    n = len(states)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def estimate_nnz(basis: SectorBasis) -> int:
    return len(basis) * (1 + 2 * 2 * (basis.L - 1))


def build_hamiltonian(
    params: HubbardParams,
    basis: SectorBasis,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> SparseHamiltonian:
    if basis.L != params.L:
        raise ValueError(f"basis has L={basis.L} but params have L={params.L}")
    # CSR: 8-byte value + 4-byte column per entry
    need = 12 * estimate_nnz(basis)
    if need > memory_budget:
        raise HamiltonianTooLarge(f"sector needs ~{need} bytes, budget is {memory_budget}")

    t_up = species_hopping(params.L, basis.up_states, params.t)
    t_dn = species_hopping(params.L, basis.down_states, params.t)
    eye_up = sp.identity(len(basis.up_states), format="csr")
    eye_dn = sp.identity(len(basis.down_states), format="csr")
    diag = sp.diags(params.u * double_occupancy_counts(basis).astype(float))

    h = sp.kron(t_up, eye_dn, format="csr") + sp.kron(eye_up, t_dn, format="csr") + diag
    h = sp.csr_matrix(h)
    h.sum_duplicates()
    h.sort_indices()
    return SparseHamiltonian(h, params)


def apply_spin_squared(basis: SectorBasis, x: np.ndarray) -> np.ndarray:
    """Total S^2 acting on a sector vector, via explicit operator action.

    Uses S^2 = S_z^2 + S_z + S^- S^+ with S^+_j = c+_{j,up} c_{j,down}.
    Loops over states; intended for small test sectors.
    """
    L = basis.L
    sz = 0.5 * (basis.sector.n_up - basis.sector.n_down)
    out = (sz * sz + sz) * np.asarray(x, dtype=float).copy()
    for k, state in enumerate(basis):
        amp = x[k]
        if amp == 0:
            continue
        for j in range(1, L + 1):
            step = annihilate(state, mode_index(j, DOWN, L))
            if step is None:
                continue
            s1, sg1 = step
            step = create(s1, mode_index(j, UP, L))
            if step is None:
                continue
            s2, sg2 = step
            for i in range(1, L + 1):
                step = annihilate(s2, mode_index(i, UP, L))
                if step is None:
                    continue
                s3, sg3 = step
                step = create(s3, mode_index(i, DOWN, L))
                if step is None:
                    continue
                s4, sg4 = step
                out[basis.index(s4)] += sg1 * sg2 * sg3 * sg4 * amp
    return out


def free_fermion_energy(L: int, n_up: int, n_down: int, t: float = 1.0) -> float:
    """Ground energy at u = 0: fill the lowest open-chain orbitals per species."""
    levels = np.sort(-2 * t * np.cos(np.arange(1, L + 1) * np.pi / (L + 1)))
    return float(levels[:n_up].sum() + levels[:n_down].sum())
