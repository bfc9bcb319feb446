"""Lowest eigenpair of a sector Hamiltonian: dense for small sectors, Lanczos otherwise."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from hubbard_ent.hamiltonian import SparseHamiltonian

log = logging.getLogger(__name__)

DENSE_THRESHOLD = 4096
DEFAULT_TOL = 1e-10
DEFAULT_DEGENERACY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class GroundState:
    energy: float
    vector: np.ndarray
    gap: float
    converged: bool
    residual: float
    iterations: int = 0
    method: str = "dense"


def fix_sign(v: np.ndarray) -> np.ndarray:
    """Make the first largest-magnitude component positive."""
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


def _as_operator(H):
    if isinstance(H, SparseHamiltonian):
        return H.matrix
    return H


def residual_norm(H, energy: float, vector: np.ndarray) -> float:
    A = _as_operator(H)
    return float(np.linalg.norm(A @ vector - energy * vector))


def dense_ground_state(H) -> GroundState:
    A = _as_operator(H)
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    if dense.shape[0] > DENSE_THRESHOLD:
        raise ValueError(f"dimension {dense.shape[0]} above dense threshold {DENSE_THRESHOLD}")
    if not np.allclose(dense, dense.T, atol=1e-13, rtol=0):
        raise ValueError("matrix is not symmetric")
    w, v = np.linalg.eigh(dense)
    vec = fix_sign(v[:, 0])
    gap = float(w[1] - w[0]) if len(w) > 1 else float("inf")
    return GroundState(
        energy=float(w[0]),
        vector=vec,
        gap=gap,
        converged=True,
        residual=float(np.linalg.norm(dense @ vec - w[0] * vec)),
        method="dense",
    )


def lanczos_ground_state(
    H,
    tol: float = DEFAULT_TOL,
    max_iter: int = 1000,
    seed: int = 0,
    krylov_dim: int = 150,
    check_every: int = 5,
) -> GroundState:
    """Lanczos with full reorthogonalization and explicit restarts.

    Each cycle builds at most ``krylov_dim`` Krylov vectors; an unconverged
    cycle restarts from its lowest Ritz vector. ``max_iter`` bounds the total
    number of matrix-vector products. The gap is the spacing of the two lowest
    Ritz values of the final cycle, which only resolves levels present in the
    start vector.
    """
    A = _as_operator(H)
    n = A.shape[0]
    if n < 2:
        raise ValueError("Lanczos needs dimension >= 2")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    v0 /= np.linalg.norm(v0)
    m = min(krylov_dim, n)

    total = 0
    energy, vec, gap, res = np.nan, v0, np.nan, np.inf
    V = np.empty((m + 1, n))
    while total < max_iter:
        V[0] = v0
        alphas, betas = [], []
        k_done = 0
        for k in range(m):
            w = A @ V[k]
            total += 1
            alphas.append(float(V[k] @ w))
            # full reorthogonalization, applied twice
            for _ in range(2):
                w -= V[: k + 1].T @ (V[: k + 1] @ w)
            beta = float(np.linalg.norm(w))
            k_done = k + 1
            invariant = beta < 1e-13 * max(1.0, abs(alphas[-1]))
            if invariant or k_done == m or total >= max_iter or k_done % check_every == 0:
                theta, s = sla.eigh_tridiagonal(np.array(alphas), np.array(betas))
                if invariant or beta * abs(s[-1, 0]) <= 0.5 * tol or k_done == m or total >= max_iter:
                    break
            betas.append(beta)
            V[k + 1] = w / beta
        theta, s = sla.eigh_tridiagonal(np.array(alphas), np.array(betas))
        energy = float(theta[0])
        vec = V[:k_done].T @ s[:, 0]
        vec /= np.linalg.norm(vec)
        gap = float(theta[1] - theta[0]) if len(theta) > 1 else gap
        res = float(np.linalg.norm(A @ vec - energy * vec))
        log.debug("lanczos cycle: %d matvecs, E=%.15g, residual=%.3g", total, energy, res)
        if res <= tol:
            break
        if k_done < m and beta < 1e-13 * max(1.0, abs(alphas[-1])):
            # invariant subspace: the Ritz pair is exact up to round-off
            break
        v0 = vec
    vec = fix_sign(vec)
    return GroundState(
        energy=energy,
        vector=vec,
        gap=gap,
        converged=bool(res <= tol),
        residual=res,
        iterations=total,
        method="lanczos",
    )


def ground_state(H, tol: float = DEFAULT_TOL, max_iter: int = 1000, seed: int = 0) -> GroundState:
    A = _as_operator(H)
    if A.shape[0] <= DENSE_THRESHOLD:
        return dense_ground_state(H)
    return lanczos_ground_state(H, tol=tol, max_iter=max_iter, seed=seed)


def degeneracy_check(gs: GroundState, threshold: float = DEFAULT_DEGENERACY_THRESHOLD, t: float = 1.0) -> bool:
    """True if the ground state looks degenerate (gap below ``threshold * t``)."""
    return bool(gs.gap < threshold * t)
