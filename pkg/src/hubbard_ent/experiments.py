"""U-sweeps, size scans and figure datasets for the Hubbard-chain entanglement study."""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from hubbard_ent.eigensolver import DEFAULT_DEGENERACY_THRESHOLD, GroundState, degeneracy_check, ground_state
from hubbard_ent.entanglement import (
    SpectralDecomposition,
    confinement_coefficients,
    fit_generic_family,
    four_tangle,
    frozen_lhfs_state,
    lbc,
    project_to_spin_state,
    pure_state_lbc,
    qubit_pair_rdm,
    spectral_decomposition,
    track_lhfs,
    von_neumann_entropy,
    wootters_concurrence,
)
from hubbard_ent.fock import MAX_SITES, Sector, SectorBasis, enumerate_sector
from hubbard_ent.hamiltonian import HubbardParams, build_hamiltonian
from hubbard_ent.rdm import CONVENTIONS, JORDAN_WIGNER, PairRDM, occupation_spectrum, pair_rdm, single_site_rdm

log = logging.getLogger(__name__)

MEASURES = ("lbc", "pair_entropy", "site_entropy", "occupations", "lhfs", "frozen_lhfs")
DEFAULT_MAX_SIZE = 12

CSV_HEADER = (
    "L,U,i,j,tau2,sqrt_tau2,pair_entropy,site_entropy_i,site_entropy_j,"
    "v_i,s_up_i,s_down_i,d_i,p_lhfs,ground_energy,gap,residual,degenerate"
).split(",")

# sqrt_tau2 below this counts as zero in trend checks
LBC_FLOOR = 1e-6


class ConfigError(ValueError):
    pass


class NonConvergence(RuntimeError):
    pass


def default_u_grid(u_min: float = 0.01, u_max: float = 100.0, count: int = 60, scale: str = "log") -> list[float]:
    if count < 1:
        raise ConfigError("u_count must be positive")
    if scale == "log":
        if u_min <= 0:
            raise ConfigError("log-spaced grids need u_min > 0")
        pts = np.logspace(math.log10(u_min), math.log10(u_max), count)
    elif scale == "linear":
        pts = np.linspace(u_min, u_max, count)
    else:
        raise ConfigError(f"unknown U scale {scale!r}")
    grid = [float(u) for u in pts]
    if grid[0] > 0:
        grid.insert(0, 0.0)
    return grid


@dataclass
class SweepConfig:
    sizes: list[int] = field(default_factory=lambda: [4])
    u_values: Optional[list[float]] = None
    u_min: float = 0.01
    u_max: float = 100.0
    u_count: int = 60
    u_scale: str = "log"
    pairs: object = "all"  # "all" or list of (i, j)
    measures: tuple[str, ...] = MEASURES
    tol: float = 1e-10
    max_iter: int = 2000
    seed: int = 0
    out: Optional[Path] = None
    threads: int = 1
    frozen_ref_u: float = 0.0
    convention: str = JORDAN_WIGNER
    degeneracy_threshold: float = DEFAULT_DEGENERACY_THRESHOLD
    max_size: int = DEFAULT_MAX_SIZE

    def validate(self) -> None:
        if not self.sizes:
            raise ConfigError("no system sizes given")
        for L in self.sizes:
            if L < 2 or L % 2:
                raise ConfigError(f"sizes must be even and >= 2, got {L}")
            if L > min(self.max_size, MAX_SITES):
                raise ConfigError(f"L={L} exceeds the size cap {min(self.max_size, MAX_SITES)}")
        if any(u < 0 for u in self.u_grid()):
            raise ConfigError("U values must be non-negative")
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise ConfigError(f"unknown measures {sorted(unknown)}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"unknown RDM convention {self.convention!r}")
        if self.pairs != "all":
            for L in self.sizes:
                for i, j in self.pairs:
                    if not 1 <= i < j <= L:
                        raise ConfigError(f"pair ({i}, {j}) invalid for L={L}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def u_grid(self) -> list[float]:
        if self.u_values is not None:
            return sorted(float(u) for u in self.u_values)
        return default_u_grid(self.u_min, self.u_max, self.u_count, self.u_scale)

    def pairs_for(self, L: int) -> list[tuple[int, int]]:
        if self.pairs == "all":
            return list(combinations(range(1, L + 1), 2))
        return [tuple(p) for p in self.pairs]


@dataclass
class EntanglementReport:
    L: int
    U: float
    i: int
    j: int
    tau2: Optional[float] = None
    sqrt_tau2: Optional[float] = None
    pair_entropy: Optional[float] = None
    site_entropy_i: Optional[float] = None
    site_entropy_j: Optional[float] = None
    v_i: Optional[float] = None
    s_up_i: Optional[float] = None
    s_down_i: Optional[float] = None
    d_i: Optional[float] = None
    p_lhfs: Optional[float] = None
    lhfs_alpha: Optional[float] = None
    lhfs_beta: Optional[float] = None
    lhfs_gamma: Optional[float] = None
    lhfs_delta: Optional[float] = None
    lhfs_sqrt_tau2: Optional[float] = None
    lhfs_discontinuity: bool = False
    frozen_sqrt_tau2: Optional[float] = None
    ground_energy: Optional[float] = None
    gap: Optional[float] = None
    residual: Optional[float] = None
    degenerate: bool = False


@dataclass
class PointResult:
    """Everything computed at one (L, U); pair matrices kept for LHFS tracking."""

    L: int
    U: float
    energy: float
    gap: float
    residual: float
    converged: bool
    degenerate: bool
    site_probs: dict = field(default_factory=dict)
    site_entropy: dict = field(default_factory=dict)
    pair_matrices: dict = field(default_factory=dict)


@lru_cache(maxsize=4)
def _basis(L: int) -> SectorBasis:
    return enumerate_sector(Sector.half_filling(L))


def solve(L: int, U: float, tol: float = 1e-10, max_iter: int = 2000, seed: int = 0) -> tuple[SectorBasis, GroundState]:
    basis = _basis(L)
    H = build_hamiltonian(HubbardParams.from_U(L, U), basis)
    return basis, ground_state(H, tol=tol, max_iter=max_iter, seed=seed)


def _compute_point(args) -> PointResult:
    cfg, L, U = args
    basis, gs = solve(L, U, cfg.tol, cfg.max_iter, cfg.seed)
    degenerate = degeneracy_check(gs, cfg.degeneracy_threshold) if gs.converged else False
    res = PointResult(L, U, gs.energy, gs.gap, gs.residual, gs.converged, degenerate)
    if not gs.converged or degenerate:
        return res
    for s in range(1, L + 1):
        site = single_site_rdm(gs, basis, s)
        res.site_probs[s] = site.probabilities
        res.site_entropy[s] = von_neumann_entropy(site.matrix)
    for i, j in cfg.pairs_for(L):
        res.pair_matrices[(i, j)] = pair_rdm(gs, basis, i, j, cfg.convention).matrix
    return res


def compute_points(cfg: SweepConfig, grid: Sequence[float]) -> list[PointResult]:
    tasks = [(cfg, L, U) for L in cfg.sizes for U in grid]
    if cfg.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_compute_point, tasks))
    else:
        results = [_compute_point(t) for t in tasks]
    return results


def _stream_partial(path: Path, results: Iterable[PointResult]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["L", "U", "ground_energy", "gap", "residual", "converged", "degenerate"])
        for r in results:
            w.writerow([r.L, fmt(r.U), fmt(r.energy), fmt(r.gap), fmt(r.residual), int(r.converged), int(r.degenerate)])


def run_sweep(cfg: SweepConfig) -> list[EntanglementReport]:
    """Compute one report per (L, U, pair), sorted by (L, U, i, j).

    Raises ``NonConvergence`` if any ground state fails to converge.
    """
    cfg.validate()
    grid = cfg.u_grid()
    want = set(cfg.measures)
    track = bool(want & {"lhfs", "frozen_lhfs"})
    work_grid = sorted(set(grid) | ({cfg.frozen_ref_u} if "frozen_lhfs" in want else set()))

    points = compute_points(cfg, work_grid)
    bad = [p for p in points if not p.converged]
    if bad:
        raise NonConvergence(
            "ground state not converged at " + ", ".join(f"L={p.L} U={p.U:g} (residual {p.residual:.2e})" for p in bad)
        )
    by_key = {(p.L, p.U): p for p in points}

    reports: list[EntanglementReport] = []
    for L in cfg.sizes:
        usable = [U for U in work_grid if not by_key[(L, U)].degenerate]
        for i, j in cfg.pairs_for(L):
            lhfs = {}
            frozen = {}
            if track and usable:
                decs = [spectral_decomposition(by_key[(L, U)].pair_matrices[(i, j)], convention=cfg.convention) for U in usable]
                records = track_lhfs(decs, usable)
                lhfs = {rec.U: (rec, dec) for rec, dec in zip(records, decs)}
                if "frozen_lhfs" in want:
                    ref_vec = lhfs[cfg.frozen_ref_u][0].vector if cfg.frozen_ref_u in lhfs else None
                    if ref_vec is not None:
                        for rec, dec in zip(records, decs):
                            frozen[rec.U] = lbc(frozen_lhfs_state(dec, ref_vec, rec.index))[1]
            for U in grid:
                p = by_key[(L, U)]
                rep = EntanglementReport(L, U, i, j, ground_energy=p.energy, gap=p.gap, residual=p.residual, degenerate=p.degenerate)
                if p.degenerate:
                    reports.append(rep)
                    continue
                rho = p.pair_matrices[(i, j)]
                if "lbc" in want:
                    rep.tau2, rep.sqrt_tau2 = lbc(rho)
                if "pair_entropy" in want:
                    rep.pair_entropy = von_neumann_entropy(rho)
                if "site_entropy" in want:
                    rep.site_entropy_i = p.site_entropy[i]
                    rep.site_entropy_j = p.site_entropy[j]
                if "occupations" in want:
                    rep.v_i, rep.s_up_i, rep.s_down_i, rep.d_i = (float(x) for x in p.site_probs[i])
                if U in lhfs:
                    rec, _ = lhfs[U]
                    if "lhfs" in want:
                        rep.p_lhfs = rec.probability
                        rep.lhfs_alpha, rep.lhfs_beta, rep.lhfs_gamma, rep.lhfs_delta = (float(np.real(a)) for a in rec.amplitudes)
                        rep.lhfs_sqrt_tau2 = pure_state_lbc(rec.vector)[1]
                        rep.lhfs_discontinuity = rec.discontinuity
                    if U in frozen:
                        rep.frozen_sqrt_tau2 = frozen[U]
                reports.append(rep)
    reports.sort(key=lambda r: (r.L, r.U, r.i, r.j))

    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        partial = out / "sweep.csv.partial"
        _stream_partial(partial, points)
        write_reports(out / "sweep.csv", reports)
        if track:
            write_lhfs(out / "lhfs.csv", reports)
        partial.unlink()
    return reports


def fmt(x) -> str:
    """17 significant digits, locale independent; None -> empty field."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_reports(path: Path, reports: Sequence[EntanglementReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in reports:
            w.writerow([fmt(getattr(r, name)) for name in CSV_HEADER])


def write_lhfs(path: Path, reports: Sequence[EntanglementReport]) -> None:
    cols = ["L", "U", "i", "j", "p_lhfs", "lhfs_alpha", "lhfs_beta", "lhfs_gamma", "lhfs_delta",
            "lhfs_sqrt_tau2", "frozen_sqrt_tau2", "sqrt_tau2", "lhfs_discontinuity"]
    write_table(path, cols, [[getattr(r, c) for c in cols] for r in reports])


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def read_reports(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --- figures -------------------------------------------------------------------

FIGURES = ("fig1a", "fig1b", "fig1c", "fig1d", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6b", "fig7a", "fig7b", "fig7c")

FIG1_PAIRS = {"fig1a": (1, 2), "fig1b": (2, 3), "fig1c": (1, 3), "fig1d": (1, 4)}
FIG7_PAIRS = {"fig7a": [(1, 2)], "fig7b": [(2, 3), (1, 4)], "fig7c": [(1, 3)]}


def figure_config(name: str, base: Optional[SweepConfig] = None, sizes: Optional[list[int]] = None) -> SweepConfig:
    """Canned sweep behind one figure; ``base`` supplies grid/solver settings."""
    if name not in FIGURES:
        raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    base = base or SweepConfig()
    if name in FIG1_PAIRS:
        return replace(base, sizes=sizes or [4, 6, 8, 10, 12], pairs=[FIG1_PAIRS[name]], measures=("lbc",))
    if name == "fig3a":
        return replace(base, sizes=[4], pairs=[(1, 2), (3, 4)], measures=("site_entropy", "occupations"))
    if name == "fig3b":
        return replace(base, sizes=sizes or [12], pairs=[(1, 2)], measures=("site_entropy", "occupations"))
    if name == "fig4":
        return replace(base, sizes=[4], u_values=[0.0], pairs="all", measures=("lbc", "lhfs"))
    if name in ("fig5a", "fig5b"):
        pair = (1, 2) if name == "fig5a" else (2, 3)
        return replace(base, sizes=sizes or [4, 6, 8, 10, 12], pairs=[pair], measures=("lhfs",))
    if name == "fig6b":
        return replace(base, sizes=[4], pairs="all", measures=("pair_entropy",))
    return replace(base, sizes=[4], pairs=FIG7_PAIRS[name], measures=("lbc", "lhfs", "frozen_lhfs"))


def reproduce_figure(name: str, out: Path, base: Optional[SweepConfig] = None, sizes: Optional[list[int]] = None) -> list[Path]:
    """Write one CSV per curve of the named figure; returns the paths written.

    Schemas:
      fig1*:  U,tau2,sqrt_tau2                       (one file per L)
      fig3*:  U,entropy,v,s_up,s_down,d              (one file per site)
      fig4:   label,N,Sz,probability                 (occupations, one file per pair)
              k,probability,N,Sz,S,is_lhfs           (eigenvalues, one file per pair)
      fig5*:  U,p_lhfs                               (one file per L)
      fig6b:  U,pair_entropy                         (one file per pair)
      fig7*:  U,sqrt_tau2,frozen_sqrt_tau2,lhfs_sqrt_tau2  (one file per pair)
    """
    cfg = figure_config(name, base, sizes)
    cfg = replace(cfg, out=None)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if name == "fig4":
        return _figure4(cfg, out)

    reports = run_sweep(cfg)
    if name in ("fig3a", "fig3b"):
        L = cfg.sizes[0]
        grid = cfg.u_grid()
        points = {p.U: p for p in compute_points(replace(cfg, pairs=[]), grid)}
        for s in range(1, L + 1):
            path = out / f"{name}_L{L}_site{s}.csv"
            rows = []
            for U in grid:
                p = points[U]
                if p.degenerate:
                    rows.append([U, None, None, None, None, None])
                    continue
                rows.append([U, p.site_entropy[s], *p.site_probs[s]])
            write_table(path, ["U", "entropy", "v", "s_up", "s_down", "d"], rows)
            written.append(path)
        return written

    groups: dict = {}
    for r in reports:
        key = r.L if name in FIG1_PAIRS or name in ("fig5a", "fig5b") else (r.i, r.j)
        groups.setdefault(key, []).append(r)
    for key, rows in sorted(groups.items()):
        if name in FIG1_PAIRS:
            path = out / f"{name}_L{key}.csv"
            write_table(path, ["U", "tau2", "sqrt_tau2"], [[r.U, r.tau2, r.sqrt_tau2] for r in rows])
        elif name in ("fig5a", "fig5b"):
            path = out / f"{name}_L{key}.csv"
            write_table(path, ["U", "p_lhfs"], [[r.U, r.p_lhfs] for r in rows])
        elif name == "fig6b":
            path = out / f"{name}_pair{key[0]}{key[1]}.csv"
            write_table(path, ["U", "pair_entropy"], [[r.U, r.pair_entropy] for r in rows])
        else:
            path = out / f"{name}_pair{key[0]}{key[1]}.csv"
            write_table(
                path,
                ["U", "sqrt_tau2", "frozen_sqrt_tau2", "lhfs_sqrt_tau2"],
                [[r.U, r.sqrt_tau2, r.frozen_sqrt_tau2, r.lhfs_sqrt_tau2] for r in rows],
            )
        written.append(path)
    return written


def _figure4(cfg: SweepConfig, out: Path) -> list[Path]:
    basis, gs = solve(4, 0.0, cfg.tol, cfg.max_iter, cfg.seed)
    written = []
    for i, j in combinations(range(1, 5), 2):
        pr = pair_rdm(gs, basis, i, j, cfg.convention)
        path = out / f"fig4a_pair{i}{j}.csv"
        write_table(path, ["label", "N", "Sz", "probability"], [list(row) for row in occupation_spectrum(pr)])
        written.append(path)
        dec = spectral_decomposition(pr)
        k_lhfs = track_lhfs([dec], [0.0])[0].index
        path = out / f"fig4b_pair{i}{j}.csv"
        write_table(
            path,
            ["k", "probability", "N", "Sz", "S", "is_lhfs"],
            [[k, dec.probabilities[k], int(dec.N[k]), dec.Sz[k], dec.S[k], int(k == k_lhfs)] for k in range(16)],
        )
        written.append(path)
    return written


# --- confinement ---------------------------------------------------------------


@dataclass
class ConfinementReport:
    L: int
    U: float
    leakage: float
    state: np.ndarray
    wootters: dict
    coefficients: Optional[tuple[float, float, float]] = None
    generic_z: Optional[np.ndarray] = None
    generic_residual: Optional[float] = None
    four_tangle: Optional[float] = None


def confinement_report(L: int, u_large: float = 1e4, tol: float = 1e-10, max_leakage: float = 1e-3) -> ConfinementReport:
    """Spin-chain analysis of the large-U ground state."""
    if L % 2:
        raise ConfigError("confinement analysis needs even L")
    if u_large < 100:
        raise ConfigError("confinement analysis needs U >= 100")
    basis, gs = solve(L, u_large, tol)
    if not gs.converged:
        raise NonConvergence(f"ground state not converged (residual {gs.residual:.2e})")
    proj = project_to_spin_state(gs, basis)
    if proj.leakage > max_leakage:
        raise ConfigError(f"leakage {proj.leakage:.2e} exceeds {max_leakage:.0e}")
    conc = {(i, j): wootters_concurrence(qubit_pair_rdm(proj.state, L, i, j)) for i, j in combinations(range(1, L + 1), 2)}
    rep = ConfinementReport(L, u_large, proj.leakage, proj.state, conc)
    if L == 4:
        fit = fit_generic_family(proj.state)
        rep.coefficients = confinement_coefficients(proj.state)
        rep.generic_z = fit.z
        rep.generic_residual = fit.residual
        rep.four_tangle = four_tangle(proj.state)
    return rep


def config_fields() -> list[str]:
    return [f.name for f in fields(SweepConfig)]
