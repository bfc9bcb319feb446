from functools import lru_cache

import numpy as np
import pytest
from hypothesis import settings

from hubbard_ent.eigensolver import ground_state
from hubbard_ent.fock import Sector, enumerate_sector
from hubbard_ent.hamiltonian import HubbardParams, build_hamiltonian
from hubbard_ent import oracle

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@lru_cache(maxsize=None)
def solved(L: int, U: float):
    """(basis, ground state) at half filling, cached across tests."""
    basis = enumerate_sector(Sector.half_filling(L))
    gs = ground_state(build_hamiltonian(HubbardParams.from_U(L, U), basis))
    return basis, gs


@lru_cache(maxsize=None)
def mode_ops(L: int):
    return oracle.build_mode_operators(L)


def random_density_matrix(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    rank = rank or d
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
