"""Sector-resolved exact diagonalization of the open 1D Fermi-Hubbard chain
and pairwise (ququart) entanglement analysis of its ground state."""

from hubbard_ent.fock import FockState, Sector, SectorBasis, enumerate_sector
from hubbard_ent.hamiltonian import HubbardParams, SparseHamiltonian, build_hamiltonian
from hubbard_ent.eigensolver import GroundState, ground_state
from hubbard_ent.rdm import PairRDM, SiteRDM, pair_rdm, single_site_rdm

__all__ = [
    "FockState",
    "Sector",
    "SectorBasis",
    "enumerate_sector",
    "HubbardParams",
    "SparseHamiltonian",
    "build_hamiltonian",
    "GroundState",
    "ground_state",
    "PairRDM",
    "SiteRDM",
    "pair_rdm",
    "single_site_rdm",
]
