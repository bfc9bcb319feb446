"""One- and two-site reduced density matrices of a sector state.

Local basis per site: (|0>, |up>, |down>, |updown>), index ``n_up + 2 n_down``.
Pair basis: ``|a>_i (x) |b>_j`` with index ``4 a + b``.

Two pair conventions are available. ``jordan_wigner`` (default) maps every
mode to a qubit in the global mode order (all up modes, then all down modes)
and takes a plain partial trace. ``fermionic`` builds the pair ket as
c+_{i,up}^a c+_{i,down}^a c+_{j,up}^b c+_{j,down}^b acting before the
environment creators; relative to the global order this costs a sign per
(pair, environment) configuration, computed from popcounts of occupied
environment modes. Single-site RDMs are diagonal and convention free.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hubbard_ent.eigensolver import GroundState
from hubbard_ent.fock import SectorBasis

FERMIONIC = "fermionic"
JORDAN_WIGNER = "jordan_wigner"
CONVENTIONS = (FERMIONIC, JORDAN_WIGNER)

LOCAL_NAMES = ("0", "u", "d", "ud")
LOCAL_N = np.array([0, 1, 1, 2])
LOCAL_SZ = np.array([0.0, 0.5, -0.5, 0.0])

PAIR_N = (LOCAL_N[:, None] + LOCAL_N[None, :]).ravel()
PAIR_SZ = (LOCAL_SZ[:, None] + LOCAL_SZ[None, :]).ravel()
PAIR_NAMES = tuple(f"{a},{b}" for a in LOCAL_NAMES for b in LOCAL_NAMES)

# (|u,d>, |d,u>, |ud,0>, |0,ud>)
LHFS_INDICES = (4 * 1 + 2, 4 * 2 + 1, 4 * 3 + 0, 4 * 0 + 3)


def pair_index(a: int, b: int) -> int:
    return 4 * a + b


@dataclass(frozen=True)
class SiteRDM:
    site: int
    probabilities: np.ndarray  # (v, s_up, s_down, d)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.probabilities)

    @property
    def v(self) -> float:
        return float(self.probabilities[0])

    @property
    def s_up(self) -> float:
        return float(self.probabilities[1])

    @property
    def s_down(self) -> float:
        return float(self.probabilities[2])

    @property
    def d(self) -> float:
        return float(self.probabilities[3])


@dataclass(frozen=True)
class PairRDM:
    L: int
    i: int
    j: int
    matrix: np.ndarray
    convention: str = JORDAN_WIGNER

    @property
    def labels(self) -> list[tuple[int, float]]:
        return list(zip(PAIR_N.tolist(), PAIR_SZ.tolist()))

    def partial_trace(self, keep: str = "i") -> np.ndarray:
        r = self.matrix.reshape(4, 4, 4, 4)
        if keep == "i":
            return np.einsum("abcb->ac", r)
        if keep == "j":
            return np.einsum("abad->bd", r)
        raise ValueError("keep must be 'i' or 'j'")


def _require_usable(gs: GroundState) -> None:
    if not gs.converged:
        raise ValueError("ground state is not converged")


def _local_indices(basis: SectorBasis, site: int) -> np.ndarray:
    b = site - 1
    return ((basis.up >> b) & 1) + 2 * ((basis.down >> b) & 1)


def single_site_rdm(gs: GroundState, basis: SectorBasis, i: int) -> SiteRDM:
    _require_usable(gs)
    if not 1 <= i <= basis.L:
        raise ValueError(f"site {i} out of range")
    weights = np.abs(gs.vector) ** 2
    probs = np.bincount(_local_indices(basis, i), weights=weights, minlength=4)
    return SiteRDM(i, probs)


def pair_signs(basis: SectorBasis, i: int, j: int) -> np.ndarray:
    """Sign taking each global-order ket to (pair site-major) x (environment)."""
    up, down = basis.up, basis.down
    pair_mask = (1 << (i - 1)) | (1 << (j - 1))
    env_up = up & ~pair_mask
    env_dn = down & ~pair_mask
    below_i = (1 << (i - 1)) - 1
    below_j = (1 << (j - 1)) - 1

    n_iu = (up >> (i - 1)) & 1
    n_ju = (up >> (j - 1)) & 1
    n_id = (down >> (i - 1)) & 1
    n_jd = (down >> (j - 1)) & 1
    n_env_up = np.bitwise_count(env_up).astype(np.int64)

    crossings = (
        n_iu * np.bitwise_count(env_up & below_i)
        + n_ju * np.bitwise_count(env_up & below_j)
        + n_id * (n_env_up + np.bitwise_count(env_dn & below_i))
        + n_jd * (n_env_up + np.bitwise_count(env_dn & below_j))
        # c+_{j,up} sits before c+_{i,down} globally but after it in the pair
        + n_ju * n_id
    )
    return 1 - 2 * (crossings.astype(np.int64) & 1)


def pair_rdm(gs: GroundState, basis: SectorBasis, i: int, j: int, convention: str = JORDAN_WIGNER) -> PairRDM:
    """Two-site RDM of sites ``i < j``.

    ``convention="jordan_wigner"`` (default) treats every mode as a qubit in
    the global mode order and takes a plain partial trace. ``"fermionic"`` is
    the fermionic-mode RDM with site-major pair kets. The two agree up to
    fixed signs for contiguous pairs but differ by environment-dependent
    signs otherwise.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")
    _require_usable(gs)
    L = basis.L
    if i == j:
        raise ValueError("pair needs two distinct sites")
    if not (1 <= i < j <= L):
        raise ValueError(f"need 1 <= i < j <= {L}, got ({i}, {j})")
    s = 4 * _local_indices(basis, i) + _local_indices(basis, j)
    pair_mask = (1 << (i - 1)) | (1 << (j - 1))
    env_key = ((basis.up & ~pair_mask) << L) | (basis.down & ~pair_mask)
    _, env = np.unique(env_key, return_inverse=True)
    amps = gs.vector * pair_signs(basis, i, j) if convention == FERMIONIC else gs.vector
    M = np.zeros((env.max() + 1, 16), dtype=amps.dtype)
    M[env, s] = amps
    rho = M.T @ M.conj()
    rho = 0.5 * (rho + rho.conj().T)
    return PairRDM(L, i, j, rho, convention)


def occupation_spectrum(pr: PairRDM) -> list[tuple[str, int, float, float]]:
    """Diagonal of the pair RDM as ``(name, N, S_z, probability)`` rows."""
    diag = np.real(np.diag(pr.matrix))
    return [
        (PAIR_NAMES[k], int(PAIR_N[k]), float(PAIR_SZ[k]), float(diag[k])) for k in range(16)
    ]


_HEADER = struct.Struct("<4s3i")


def write_prdm(path: str | Path, pr: PairRDM) -> None:
    """Binary dump: 16-byte header (b"PRDM", L, i, j as int32) + 256 LE float64."""
    m = np.asarray(pr.matrix)
    if np.iscomplexobj(m):
        if np.abs(m.imag).max() > 1e-14:
            raise ValueError("binary format stores real matrices only")
        m = m.real
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(b"PRDM", pr.L, pr.i, pr.j))
        fh.write(np.ascontiguousarray(m, dtype="<f8").tobytes())


def read_prdm(path: str | Path, convention: str = JORDAN_WIGNER) -> PairRDM:
    data = Path(path).read_bytes()
    if len(data) != _HEADER.size + 256 * 8:
        raise ValueError(f"unexpected file size {len(data)}")
    magic, L, i, j = _HEADER.unpack_from(data)
    if magic != b"PRDM":
        raise ValueError(f"bad magic {magic!r}")
    m = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(16, 16).copy()
    return PairRDM(L, i, j, m, convention)
