"""Entanglement functionals for single sites, ququart pairs and spin-projected states."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from hubbard_ent.eigensolver import GroundState
from hubbard_ent.fock import SectorBasis
from hubbard_ent.rdm import FERMIONIC, JORDAN_WIGNER, LHFS_INDICES, PAIR_N, PAIR_SZ, PairRDM

NEGATIVE_EIG_TOL = 1e-12
# eigenvalues below this fraction of the largest are round-off; zeroed before sqrt
ROUNDOFF_FLOOR = 1e-13
TRACE_TOL = 1e-8
PRODUCT_EIG_TOL = 1e-8

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.diag([1.0, -1.0])


class EntanglementError(ValueError):
    pass


def _matrix(rho) -> np.ndarray:
    return np.asarray(rho.matrix if isinstance(rho, PairRDM) else rho)


def psd_eigvalsh(rho: np.ndarray, tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    """Eigenvalues of a density matrix with round-off negatives clamped to 0."""
    w = np.linalg.eigvalsh(rho)
    if w.min() < -tol:
        raise EntanglementError(f"density matrix has eigenvalue {w.min():.3e}")
    return np.clip(w, 0.0, None)


def _check_trace(rho: np.ndarray) -> None:
    tr = np.trace(rho).real
    if abs(tr - 1) > TRACE_TOL:
        raise EntanglementError(f"trace is {tr}, expected 1")


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


def von_neumann_entropy(rho) -> float:
    """-Tr(rho log2 rho) in bits."""
    rho = _matrix(rho)
    _check_trace(rho)
    return _entropy_bits(psd_eigvalsh(rho))


def local_entropy_from_d(d: float) -> float:
    """Single-site entropy at half filling from the double occupancy alone."""
    if not -1e-14 <= d <= 0.5 + 1e-14:
        raise EntanglementError(f"double occupancy {d} outside [0, 1/2]")
    d = min(max(d, 0.0), 0.5)
    s = 0.5 - d
    return _entropy_bits(np.array([d, d, s, s]))


# --- lower bound of concurrence -------------------------------------------------


@dataclass(frozen=True)
class GeneratorSet:
    d: int
    pairs: tuple[tuple[int, int], ...]
    matrices: np.ndarray  # (d(d-1)/2, d, d)


@lru_cache(maxsize=None)
def so_generators(d: int = 4, hermitian: bool = True) -> GeneratorSet:
    """The d(d-1)/2 generators -i(|m><n| - |n><m|), m < n.

    ``hermitian=False`` gives the real antisymmetric form |m><n| - |n><m|.
    """
    pairs = tuple(combinations(range(d), 2))
    mats = np.zeros((len(pairs), d, d), dtype=complex)
    for k, (m, n) in enumerate(pairs):
        mats[k, m, n] = 1
        mats[k, n, m] = -1
    if hermitian:
        mats = -1j * mats
    mats.setflags(write=False)
    return GeneratorSet(d, pairs, mats)


@lru_cache(maxsize=None)
def _flip_operators(d: int, hermitian: bool = True) -> np.ndarray:
    g = so_generators(d, hermitian).matrices
    ops = np.einsum("aij,bkl->abikjl", g, g).reshape(len(g) ** 2, d * d, d * d)
    ops.setflags(write=False)
    return ops


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    if w.min() < -NEGATIVE_EIG_TOL:
        raise EntanglementError(f"density matrix has eigenvalue {w.min():.3e}")
    w = np.where(w < ROUNDOFF_FLOOR * w.max(), 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def lbc_terms(rho, d: int = 4, hermitian: bool = True) -> np.ndarray:
    """C_ab for every ordered pair of generators, shape (n_gen, n_gen).

    Eigenvalues of rho * rho_tilde are taken from the similar Hermitian
    matrix sqrt(rho) rho_tilde sqrt(rho).
    """
    rho = _matrix(rho).astype(complex)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} matrix, got {rho.shape}")
    _check_trace(rho)
    root = _sqrt_psd(0.5 * (rho + rho.conj().T))
    ops = _flip_operators(d, hermitian)
    tilde = ops @ rho.conj() @ ops
    herm = root @ tilde @ root
    herm = 0.5 * (herm + np.conj(np.swapaxes(herm, -1, -2)))
    ev = np.linalg.eigvalsh(herm)
    if ev.min() < -PRODUCT_EIG_TOL:
        raise EntanglementError(f"rho * rho_tilde has eigenvalue {ev.min():.3e}")
    ev = np.where(ev < ROUNDOFF_FLOOR * ev.max(axis=1, keepdims=True).clip(min=1e-300), 0.0, ev)
    lam = np.sqrt(ev)[:, ::-1][:, :4]
    c = np.maximum(0.0, lam[:, 0] - lam[:, 1:].sum(axis=1))
    n = len(so_generators(d).pairs)
    return c.reshape(n, n)


def lbc(rho, d: int = 4) -> tuple[float, float]:
    """Lower bound of the squared concurrence and its square root."""
    c = lbc_terms(rho, d)
    tau2 = d / (2 * (d - 1)) * float((c**2).sum())
    return tau2, float(np.sqrt(tau2))


def pure_state_lbc(psi: np.ndarray, d: int = 4) -> tuple[float, float]:
    psi = np.asarray(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise EntanglementError(f"state has norm {norm}")
    return lbc(np.outer(psi, psi.conj()), d)


def pure_state_concurrence_squared(psi: np.ndarray, d: int = 4) -> float:
    """C^2 = 2 (1 - Tr rho_A^2) for a pure bipartite d x d state."""
    m = np.asarray(psi).reshape(d, d)
    rho_a = m @ m.conj().T
    return float(2 * (1 - np.trace(rho_a @ rho_a).real))


def wootters_concurrence(rho: np.ndarray) -> float:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("Wootters concurrence needs a 4x4 two-qubit state")
    _check_trace(rho)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ tilde)
    if ev.real.min() < -PRODUCT_EIG_TOL:
        raise EntanglementError(f"rho * rho_tilde has eigenvalue {ev.real.min():.3e}")
    ev = np.where(ev.real < ROUNDOFF_FLOOR * max(ev.real.max(), 1e-300), 0.0, ev.real)
    lam = np.sort(np.sqrt(ev))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# --- spectral structure of pair states -----------------------------------------


# bit of the pair index 4a + b (a = n_up + 2 n_down) holding each mode
_BIT = {"iu": 2, "id": 3, "ju": 0, "jd": 1}
# order in which the pair modes are created in each convention's pair kets
_MODE_ORDER = {
    FERMIONIC: ("iu", "id", "ju", "jd"),
    JORDAN_WIGNER: ("iu", "ju", "id", "jd"),
}


@lru_cache(maxsize=None)
def pair_mode_operators(convention: str = JORDAN_WIGNER) -> dict[str, np.ndarray]:
    """Annihilators of the four pair modes on the 16-dim pair space.

    Fermionic pair kets create (i up, i down, j up, j down) in that order; the
    Jordan-Wigner ones follow the global order (i up, j up, i down, j down).
    """
    order = _MODE_ORDER[convention]
    ops = {}
    for q, name in enumerate(order):
        bit = _BIT[name]
        c = np.zeros((16, 16))
        for x in range(16):
            if not (x >> bit) & 1:
                continue
            earlier = sum((x >> _BIT[p]) & 1 for p in order[:q])
            c[x ^ (1 << bit), x] = (-1) ** earlier
        c.setflags(write=False)
        ops[name] = c
    return ops


@lru_cache(maxsize=None)
def pair_spin_squared(convention: str = JORDAN_WIGNER) -> np.ndarray:
    ops = pair_mode_operators(convention)
    c_iu, c_id, c_ju, c_jd = ops["iu"], ops["id"], ops["ju"], ops["jd"]
    s_plus = c_iu.T @ c_id + c_ju.T @ c_jd
    n = [c.T @ c for c in (c_iu, c_id, c_ju, c_jd)]
    sz = 0.5 * (n[0] - n[1] + n[2] - n[3])
    s2 = s_plus.T @ s_plus + sz @ sz + sz
    s2.setflags(write=False)
    return s2


def total_spin(vector: np.ndarray, convention: str = JORDAN_WIGNER) -> float:
    """S with S(S+1) = <S^2> for a pair vector."""
    s2 = float(np.real(vector.conj() @ pair_spin_squared(convention) @ vector))
    return float(0.5 * (-1 + np.sqrt(1 + 4 * max(s2, 0.0))))


def _fix_vector_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(len(v))))
    phase = v[k] / abs(v[k])
    out = v / phase
    return out.real if np.iscomplexobj(out) and np.abs(out.imag).max() < 1e-14 else out


@dataclass(frozen=True)
class SpectralDecomposition:
    probabilities: np.ndarray  # descending
    vectors: np.ndarray  # columns
    N: np.ndarray
    Sz: np.ndarray
    S: np.ndarray

    def matrix(self) -> np.ndarray:
        return (self.vectors * self.probabilities) @ self.vectors.conj().T

    def block(self, n: int, sz: float) -> np.ndarray:
        return np.flatnonzero((self.N == n) & np.isclose(self.Sz, sz))


def spectral_decomposition(rho, cluster_tol: float = 1e-10, convention: str | None = None) -> SpectralDecomposition:
    """Blockwise eigendecomposition in (N, S_z).

    Within a block, eigenvalues closer than ``cluster_tol`` are rotated to
    diagonalise the pair S^2 so every vector has a definite total spin.
    The S^2 convention defaults to that of a ``PairRDM`` input.
    """
    if convention is None:
        convention = rho.convention if isinstance(rho, PairRDM) else JORDAN_WIGNER
    rho = _matrix(rho)
    s2 = pair_spin_squared(convention)
    entries = []
    for n in range(5):
        for sz in np.unique(PAIR_SZ[PAIR_N == n]):
            idx = np.flatnonzero((PAIR_N == n) & (PAIR_SZ == sz))
            w, v = np.linalg.eigh(rho[np.ix_(idx, idx)])
            start = 0
            while start < len(w):
                stop = start + 1
                while stop < len(w) and w[stop] - w[start] < cluster_tol:
                    stop += 1
                if stop - start > 1:
                    sub = v[:, start:stop]
                    _, rot = np.linalg.eigh(sub.conj().T @ s2[np.ix_(idx, idx)] @ sub)
                    v[:, start:stop] = sub @ rot
                start = stop
            for k in range(len(w)):
                full = np.zeros(16, dtype=v.dtype)
                full[idx] = v[:, k]
                full = _fix_vector_sign(full)
                entries.append((max(float(w[k]), 0.0), n, float(sz), full))
    entries.sort(key=lambda e: (-round(e[0], 12), e[1], e[2], tuple(-np.round(np.real(e[3]), 10))))
    probs = np.array([e[0] for e in entries])
    vecs = np.column_stack([e[3] for e in entries])
    return SpectralDecomposition(
        probabilities=probs,
        vectors=vecs,
        N=np.array([e[1] for e in entries]),
        Sz=np.array([e[2] for e in entries]),
        S=np.array([round(2 * total_spin(e[3], convention)) / 2 for e in entries]),
    )


# --- local half-filled state ---------------------------------------------------


@dataclass(frozen=True)
class LHFSRecord:
    alpha: float
    beta: float
    gamma: float
    delta: float
    probability: float
    U: float
    index: int  # column in the SpectralDecomposition at this U
    overlap: float = 1.0
    discontinuity: bool = False
    vector: np.ndarray = field(default=None, repr=False)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta])


def _lhfs_record(dec: SpectralDecomposition, k: int, U: float, overlap: float, vector: np.ndarray) -> LHFSRecord:
    amps = vector[list(LHFS_INDICES)]
    return LHFSRecord(
        *amps.tolist(),
        probability=float(dec.probabilities[k]),
        U=U,
        index=k,
        overlap=overlap,
        discontinuity=overlap < 0.5,
        vector=vector,
    )


def initial_lhfs_index(dec: SpectralDecomposition) -> int:
    """Highest-probability singlet in the (N=2, S_z=0) block."""
    block = dec.block(2, 0.0)
    singlets = [k for k in block if dec.S[k] == 0]
    candidates = singlets or list(block)
    return max(candidates, key=lambda k: (dec.probabilities[k], -k))


def track_lhfs(decomps: list[SpectralDecomposition], u_values: list[float]) -> list[LHFSRecord]:
    """Follow the LHFS along an ascending U grid by maximal overlap."""
    if len(decomps) != len(u_values):
        raise ValueError("need one U value per decomposition")
    records: list[LHFSRecord] = []
    prev = None
    for dec, U in zip(decomps, u_values):
        if prev is None:
            k = initial_lhfs_index(dec)
            vec = dec.vectors[:, k]
            overlap = 1.0
        else:
            block = dec.block(2, 0.0)
            overlaps = [abs(np.vdot(prev, dec.vectors[:, b])) for b in block]
            k = int(block[int(np.argmax(overlaps))])
            overlap = float(max(overlaps))
            vec = dec.vectors[:, k]
            # continuation keeps the sign of the previous point
            phase = np.vdot(vec, prev)
            if abs(phase) > 0:
                vec = vec * (phase / abs(phase))
            if np.iscomplexobj(vec) and np.abs(vec.imag).max() < 1e-14:
                vec = vec.real
        records.append(_lhfs_record(dec, k, U, overlap, vec))
        prev = vec
    return records


def frozen_lhfs_state(dec: SpectralDecomposition, frozen_vector: np.ndarray, lhfs_index: int | None = None) -> np.ndarray:
    """Mixture with the LHFS projector swapped for a frozen vector, weights kept."""
    frozen_vector = np.asarray(frozen_vector)
    if abs(np.linalg.norm(frozen_vector) - 1) > 1e-10:
        raise EntanglementError("frozen vector must have unit norm")
    outside = np.ones(16, dtype=bool)
    outside[list(LHFS_INDICES)] = False
    if np.abs(frozen_vector[outside]).max() > 1e-10:
        raise EntanglementError("frozen vector must lie in the (N=2, S_z=0) block")
    if lhfs_index is None:
        block = dec.block(2, 0.0)
        lhfs_index = int(block[np.argmax([abs(np.vdot(frozen_vector, dec.vectors[:, b])) for b in block])])
    vecs = dec.vectors.astype(np.result_type(dec.vectors, frozen_vector)).copy()
    vecs[:, lhfs_index] = frozen_vector
    return (vecs * dec.probabilities) @ vecs.conj().T


# --- confinement (singly occupied) projection ---------------------------------


@dataclass(frozen=True)
class SpinProjection:
    L: int
    state: np.ndarray  # 2**L amplitudes, site 1 most significant, up=0 / down=1
    leakage: float


def project_to_spin_state(gs: GroundState, basis: SectorBasis, max_leakage: float = 0.5) -> SpinProjection:
    """Restrict to one electron per site and re-express as a qubit chain.

    The fermionic ket is reordered to site-major order (c+_{1,s1} c+_{2,s2} ...)
    so the amplitudes follow the usual spin-chain sign convention.
    """
    L = basis.L
    if basis.sector.n_up + basis.sector.n_down != L:
        raise ValueError("confinement projection needs half filling")
    full = (1 << L) - 1
    mask = ((basis.up & basis.down) == 0) & ((basis.up | basis.down) == full)
    amps = gs.vector[mask]
    kept = float(np.vdot(amps, amps).real)
    leakage = 1.0 - kept
    if leakage > max_leakage:
        raise EntanglementError(f"leakage {leakage:.3f} exceeds {max_leakage}: not in the confinement regime")
    down = basis.down[mask]
    up = basis.up[mask]
    # inversions: a spin-down electron on an earlier site than a spin-up one
    crossings = np.zeros(len(down), dtype=np.int64)
    for a in range(L):
        down_at_a = (down >> a) & 1
        ups_after = np.bitwise_count(up & ~((1 << (a + 1)) - 1))
        crossings += down_at_a * ups_after
    signs = 1 - 2 * (crossings & 1)
    # site s -> bit L - s of the qubit index
    index = np.zeros(len(down), dtype=np.int64)
    for s in range(1, L + 1):
        index |= ((down >> (s - 1)) & 1) << (L - s)
    state = np.zeros(1 << L, dtype=gs.vector.dtype)
    state[index] = signs * amps / np.sqrt(kept)
    return SpinProjection(L, state, leakage)


def qubit_pair_rdm(state: np.ndarray, L: int, i: int, j: int) -> np.ndarray:
    """Two-qubit reduced state of sites i < j of an L-qubit pure state."""
    psi = np.asarray(state).reshape((2,) * L)
    psi = np.moveaxis(psi, (i - 1, j - 1), (0, 1)).reshape(4, -1)
    return psi @ psi.conj().T


# --- four-qubit invariants -----------------------------------------------------


def four_tangle(psi: np.ndarray) -> float:
    """|<psi*| sigma_y^(x4) |psi>|^2.

    sigma_y^(x4) equals eps^(x4) with eps = [[0, -1], [1, 0]], so the
    contraction is done with an integer matrix.
    """
    psi = np.asarray(psi)
    if psi.shape != (16,):
        raise ValueError("four-tangle needs a 16-amplitude state")
    eps = np.array([[0, -1], [1, 0]])
    e4 = np.kron(np.kron(eps, eps), np.kron(eps, eps))
    return float(abs(psi @ e4 @ psi) ** 2)


@dataclass(frozen=True)
class GenericFourQubitState:
    z: np.ndarray  # (z0, z1, z2, z3)
    amplitudes: np.ndarray
    residual: float

    @property
    def is_member(self) -> bool:
        return self.residual <= 1e-6


def generic_family_state(z) -> np.ndarray:
    z0, z1, z2, z3 = z
    psi = np.zeros(16, dtype=complex)
    psi[[0b0000, 0b1111]] = (z0 + z3) / 2
    psi[[0b0011, 0b1100]] = (z0 - z3) / 2
    psi[[0b0101, 0b1010]] = (z1 + z2) / 2
    psi[[0b0110, 0b1001]] = (z1 - z2) / 2
    return psi


def fit_generic_family(psi: np.ndarray) -> GenericFourQubitState:
    """Read (z0..z3) off the paired amplitudes; residual is the misfit norm."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (16,):
        raise ValueError("need a 16-amplitude state")
    p = (psi[0b0000] + psi[0b1111]) / 2
    q = (psi[0b0011] + psi[0b1100]) / 2
    r = (psi[0b0101] + psi[0b1010]) / 2
    s = (psi[0b0110] + psi[0b1001]) / 2
    z = np.array([p + q, r + s, r - s, p - q])
    if np.abs(z.imag).max() < 1e-14:
        z = z.real
    fitted = generic_family_state(z)
    return GenericFourQubitState(z, psi, float(np.linalg.norm(psi - fitted)))


def confinement_coefficients(psi: np.ndarray) -> tuple[float, float, float]:
    """(alpha, beta, gamma) of an L=4 singlet written as
    -alpha(|uddu> + |duud>) + beta(|udud> + |dudu>) - gamma(|uudd> + |dduu>).

    alpha is the class with both end spins aligned, beta the Neel class and
    gamma the class with paired neighbours; the global sign makes beta >= 0.
    """
    psi = np.real_if_close(np.asarray(psi))
    if psi.shape != (16,):
        raise ValueError("need a 16-amplitude state")
    a = -(psi[0b0110] + psi[0b1001]) / 2
    b = (psi[0b0101] + psi[0b1010]) / 2
    g = -(psi[0b0011] + psi[0b1100]) / 2
    sgn = -1.0 if b < 0 else 1.0
    return float(sgn * a), float(sgn * b), float(sgn * g)
