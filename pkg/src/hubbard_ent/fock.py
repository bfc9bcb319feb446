"""Bit-packed Fock states and fixed-(N_up, N_down) sector bases.

Mode ordering used everywhere in the package: the spin-up mode of site ``s``
is mode ``s - 1`` and the spin-down mode is ``L + s - 1`` (sites are
1-indexed). A basis ket is the product of creation operators of its occupied
modes in ascending mode order acting on the vacuum.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

MAX_SITES = 16

UP = "up"
DOWN = "down"


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class FockState:
    """Occupations of the ``2L`` modes; bit ``s-1`` of ``up``/``down`` is site ``s``."""

    up: int
    down: int
    L: int

    def __post_init__(self):
        limit = 1 << self.L
        if not (0 <= self.up < limit and 0 <= self.down < limit):
            raise ValueError(f"occupation masks exceed {self.L} sites")

    @property
    def n_up(self) -> int:
        return popcount(self.up)

    @property
    def n_down(self) -> int:
        return popcount(self.down)

    def occupation(self, site: int, spin: str) -> int:
        _check_site(site, self.L)
        mask = self.up if spin == UP else self.down
        return (mask >> (site - 1)) & 1

    def local_index(self, site: int) -> int:
        """Index in the local order (|0>, |up>, |down>, |updown>)."""
        return self.occupation(site, UP) + 2 * self.occupation(site, DOWN)

    @classmethod
    def from_string(cls, text: str) -> "FockState":
        """Parse e.g. ``"ud,0"`` (site 1 doubly occupied, site 2 empty).

        Per-site tokens: ``0``, ``u``, ``d``, ``ud``.
        """
        tokens = [tok.strip() for tok in text.split(",")]
        up = down = 0
        for k, tok in enumerate(tokens):
            if tok not in ("0", "u", "d", "ud"):
                raise ValueError(f"bad site token {tok!r}")
            if "u" in tok:
                up |= 1 << k
            if "d" in tok:
                down |= 1 << k
        return cls(up, down, len(tokens))

    def __str__(self) -> str:
        names = {0: "0", 1: "u", 2: "d", 3: "ud"}
        return ",".join(names[self.local_index(s)] for s in range(1, self.L + 1))


@dataclass(frozen=True)
class Sector:
    L: int
    n_up: int
    n_down: int

    def __post_init__(self):
        if not 1 <= self.L <= MAX_SITES:
            raise ValueError(f"L must be in [1, {MAX_SITES}], got {self.L}")
        if not (0 <= self.n_up <= self.L and 0 <= self.n_down <= self.L):
            raise ValueError(f"invalid particle numbers for L={self.L}: {self.n_up}, {self.n_down}")

    @classmethod
    def half_filling(cls, L: int) -> "Sector":
        if L % 2:
            raise ValueError("half filling needs an even number of sites")
        return cls(L, L // 2, L // 2)

    @property
    def dim(self) -> int:
        return comb(self.L, self.n_up) * comb(self.L, self.n_down)


def species_states(L: int, n: int) -> np.ndarray:
    """All ``L``-bit masks with ``n`` bits set, ascending."""
    masks = sorted(sum(1 << b for b in c) for c in combinations(range(L), n))
    return np.asarray(masks, dtype=np.int64)


class SectorBasis:
    """Sector states in lexicographic order of ``(up, down)`` as integers.

    The order factorises: ``index = k_up * n_down_states + k_down`` where
    ``k_up``/``k_down`` are positions in the sorted single-species lists.
    """

    def __init__(self, sector: Sector):
        self.sector = sector
        self.up_states = species_states(sector.L, sector.n_up)
        self.down_states = species_states(sector.L, sector.n_down)
        self.up = np.repeat(self.up_states, len(self.down_states))
        self.down = np.tile(self.down_states, len(self.up_states))

    @property
    def L(self) -> int:
        return self.sector.L

    def __len__(self) -> int:
        return len(self.up)

    def __getitem__(self, k: int) -> FockState:
        return FockState(int(self.up[k]), int(self.down[k]), self.L)

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    @property
    def states(self) -> list[FockState]:
        return list(self)

    def index(self, state: FockState) -> int:
        """Position of ``state``; raises ``KeyError`` if not in the sector."""
        iu = int(np.searchsorted(self.up_states, state.up))
        idn = int(np.searchsorted(self.down_states, state.down))
        if (
            state.L != self.L
            or iu >= len(self.up_states)
            or idn >= len(self.down_states)
            or self.up_states[iu] != state.up
            or self.down_states[idn] != state.down
        ):
            raise KeyError(state)
        return iu * len(self.down_states) + idn

    def __contains__(self, state: FockState) -> bool:
        try:
            self.index(state)
        except KeyError:
            return False
        return True


def enumerate_sector(sector: Sector) -> SectorBasis:
    return SectorBasis(sector)


def _check_site(site: int, L: int) -> None:
    if not 1 <= site <= L:
        raise ValueError(f"site {site} out of range [1, {L}]")


def mode_index(site: int, spin: str, L: int) -> int:
    _check_site(site, L)
    return site - 1 if spin == UP else L + site - 1


def _mode_bits(state: FockState) -> int:
    return state.up | (state.down << state.L)


def _from_mode_bits(bits: int, L: int) -> FockState:
    mask = (1 << L) - 1
    return FockState(bits & mask, bits >> L, L)


def annihilate(state: FockState, mode: int) -> Optional[tuple[FockState, int]]:
    """``c_mode |state>`` as ``(state', sign)`` or ``None`` if the mode is empty."""
    bits = _mode_bits(state)
    if not (bits >> mode) & 1:
        return None
    sign = -1 if popcount(bits & ((1 << mode) - 1)) % 2 else 1
    return _from_mode_bits(bits ^ (1 << mode), state.L), sign


def create(state: FockState, mode: int) -> Optional[tuple[FockState, int]]:
    """``c^dagger_mode |state>`` as ``(state', sign)`` or ``None`` if occupied."""
    bits = _mode_bits(state)
    if (bits >> mode) & 1:
        return None
    sign = -1 if popcount(bits & ((1 << mode) - 1)) % 2 else 1
    return _from_mode_bits(bits | (1 << mode), state.L), sign


def apply_hop(state: FockState, i: int, j: int, spin: str) -> Optional[tuple[FockState, int]]:
    """Apply ``c^dagger_{i,spin} c_{j,spin}``.

    The sign is ``(-1)**k`` with ``k`` the number of occupied modes strictly
    between the two modes.
    """
    if i == j:
        raise ValueError("hop needs two distinct sites")
    if spin not in (UP, DOWN):
        raise ValueError(f"unknown spin {spin!r}")
    _check_site(i, state.L)
    _check_site(j, state.L)
    mask = state.up if spin == UP else state.down
    src, dst = 1 << (j - 1), 1 << (i - 1)
    if not mask & src or mask & dst:
        return None
    lo, hi = min(i, j), max(i, j)
    between = mask & ((1 << (hi - 1)) - 1) & ~((1 << lo) - 1)
    sign = -1 if popcount(between) % 2 else 1
    mask = mask ^ src ^ dst
    if spin == UP:
        return FockState(mask, state.down, state.L), sign
    return FockState(state.up, mask, state.L), sign


def double_occupancy_indicator(state: FockState, i: int) -> int:
    _check_site(i, state.L)
    return ((state.up & state.down) >> (i - 1)) & 1


def double_occupancy_counts(basis: SectorBasis) -> np.ndarray:
    """Number of doubly occupied sites of every basis state."""
    return np.bitwise_count(basis.up & basis.down).astype(np.int64)
