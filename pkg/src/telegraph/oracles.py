"""Independent verification engines for the convolution solver.

Three routes that share no code with the closed-form path:

* an explicit second-order leapfrog discretization of the damped wave
  equation (CFL-limited, zero-Dirichlet ends, causally isolated);
* a persistent random walk on a lattice -- repeat the previous move with
  probability p = 1 - k dt/2, step dx = c dt -- whose law converges to the
  point-mass solution, never-flipped walkers forming the cone atoms;
* the Duhamel fixed-point identity of the transformed equation, whose
  residual vanishes on the true solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import UsageError
from .fields import (MixedMeasure, SampledField, SpaceGrid, sample_shifted)
from .kernel import MediumParams
from .quadrature import integrate_bins, panel_count, simpson_pattern
from .solver import solve_rescaled

FIRST_STEPS = ("up", "down", "symmetric")

#: Walkers per RNG block; each block draws from its own Philox stream
#: derived from (seed, block index), so results are reproducible and
#: independent of how blocks are scheduled.
WALK_BLOCK = 8192


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FDConfig:
    """Explicit-scheme configuration; courant = c*dt/dx must stay <= 1."""

    dt: float
    courant: float
    steps: int

    def __post_init__(self):
        if self.dt <= 0 or not math.isfinite(self.dt):
            raise UsageError(f"dt must be positive and finite, got {self.dt}")
        if self.steps < 1:
            raise UsageError(f"steps must be >= 1, got {self.steps}")
        if self.courant > 1.0 + 1e-12:
            raise UsageError(
                f"CFL violation: courant number {self.courant} exceeds 1")


def fd_config_for(t_final: float, grid: SpaceGrid, medium: MediumParams,
                  courant: float = 0.9) -> FDConfig:
    """Largest step count reaching t_final with courant at most the target."""
    if t_final <= 0:
        raise UsageError(f"t_final must be positive, got {t_final}")
    if not 0 < courant <= 1:
        raise UsageError(f"target courant must lie in (0, 1], got {courant}")
    dt_target = courant * grid.dx / medium.c
    steps = max(1, math.ceil(t_final / dt_target - 1e-12))
    dt = t_final / steps
    return FDConfig(dt=dt, courant=medium.c * dt / grid.dx, steps=steps)


def fd_solve(f: SampledField, g: SampledField, t_final: float,
             medium: MediumParams, cfg: FDConfig) -> SampledField:
    """Leapfrog solution of u_tt + k u_t = c^2 u_xx at time steps*dt.

    Update: (u+ - 2u + u-)/dt^2 + k (u+ - u-)/(2 dt) = c^2 D_xx u, solved
    for u+; first step from the Taylor expansion
    u1 = u0 + dt g + (dt^2/2)(c^2 D_xx u0 - k g).  Grid ends are held at
    zero; callers must keep the comparison window causally isolated from
    them.
    """
    if f.grid != g.grid:
        raise UsageError("initial fields must share one grid")
    grid = f.grid
    if abs(medium.c * cfg.dt / grid.dx - cfg.courant) > 1e-9 * max(1.0, cfg.courant):
        raise UsageError("FDConfig courant does not match c*dt/dx for this grid")
    if abs(cfg.steps * cfg.dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise UsageError("FDConfig steps*dt does not reach t_final")
    dt = cfg.dt
    dx2 = grid.dx * grid.dx
    c2 = medium.c ** 2
    k = medium.k

    def lap(u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dx2
        return out

    u_prev = f.values.copy()
    u_prev[0] = u_prev[-1] = 0.0
    u = u_prev + dt * g.values + 0.5 * dt * dt * (c2 * lap(u_prev) - k * g.values)
    u[0] = u[-1] = 0.0
    a_plus = 1.0 + 0.5 * k * dt
    a_minus = 1.0 - 0.5 * k * dt
    for _ in range(cfg.steps - 1):
        u_next = (dt * dt * c2 * lap(u) + 2.0 * u - a_minus * u_prev) / a_plus
        u_next[0] = u_next[-1] = 0.0
        u_prev, u = u, u_next
    return SampledField(grid, u)


# ---------------------------------------------------------------------------
# persistent random walk
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WalkConfig:
    """Lattice walk: repeat the previous move with probability p.

    The first move is fixed by ``first_step`` ("up"/"down" deterministic,
    "symmetric" a fair coin); repeat-or-flip decisions happen on the
    remaining n_steps - 1 moves, so a walker never flips with probability
    p^(n_steps - 1).
    """

    p: float
    dx: float
    dt: float
    n_steps: int
    n_walkers: int
    seed: int
    first_step: str = "symmetric"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise UsageError(f"repeat probability must lie in [0,1], got {self.p}")
        if self.dx <= 0 or self.dt <= 0:
            raise UsageError("dx and dt must be positive")
        if self.n_steps < 1 or self.n_walkers < 1:
            raise UsageError("need at least one step and one walker")
        if self.first_step not in FIRST_STEPS:
            raise UsageError(f"first_step must be one of {FIRST_STEPS}")


def walk_params(medium: MediumParams, dt: float) -> tuple[float, float]:
    """Continuum-matched (p, dx): p = 1 - k dt/2, dx = c dt."""
    if dt <= 0:
        raise UsageError(f"dt must be positive, got {dt}")
    if medium.k * dt > 2.0:
        raise UsageError(
            f"k*dt = {medium.k * dt} > 2 puts the repeat probability below 0")
    return 1.0 - 0.5 * medium.k * dt, medium.c * dt


def walk_config_for(medium: MediumParams, dt: float, t_final: float,
                    n_walkers: int, seed: int,
                    first_step: str = "symmetric") -> WalkConfig:
    p, dx = walk_params(medium, dt)
    n_steps = round(t_final / dt)
    if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, t_final) or n_steps < 1:
        raise UsageError(f"t_final = {t_final} is not a positive multiple of dt = {dt}")
    return WalkConfig(p=p, dx=dx, dt=dt, n_steps=n_steps,
                      n_walkers=n_walkers, seed=seed, first_step=first_step)


def expected_never_flip(cfg: WalkConfig) -> float:
    """Exact probability that a walker never reverses: p^(n_steps-1)."""
    return cfg.p ** (cfg.n_steps - 1)


def simulate_walk(cfg: WalkConfig, block_size: int = WALK_BLOCK) -> MixedMeasure:
    """Empirical law of the walk after n_steps, as a mixed measure.

    Flipped walkers populate a histogram over the parity-matched lattice
    sites (bin width 2 dx); never-flipped walkers are tallied separately
    as atom masses at -+ n dx.  Deterministic for a fixed seed: block b
    always covers walkers [b*block_size, (b+1)*block_size) from stream
    Philox(SeedSequence(seed, spawn_key=(b,))).
    """
    n = cfg.n_steps
    total = cfg.n_walkers
    q = 1.0 - cfg.p
    counts = np.zeros(n + 1, dtype=np.int64)
    never_up = 0
    never_down = 0
    done = 0
    block = 0
    while done < total:
        w = min(block_size, total - done)
        ss = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(block,))
        rng = np.random.Generator(np.random.Philox(seed=ss))
        if cfg.first_step == "up":
            first = np.ones(w, dtype=np.int64)
        elif cfg.first_step == "down":
            first = -np.ones(w, dtype=np.int64)
        else:
            first = rng.integers(0, 2, size=w, dtype=np.int64) * 2 - 1
        if n > 1:
            flips = rng.random((w, n - 1)) < q
            nflips = np.cumsum(flips, axis=1, dtype=np.int32)
            signs = 1 - 2 * (nflips & 1)
            pos_units = first * (1 + signs.sum(axis=1, dtype=np.int64))
            never = nflips[:, -1] == 0
        else:
            pos_units = first.copy()
            never = np.ones(w, dtype=bool)
        never_up += int(np.count_nonzero(never & (first > 0)))
        never_down += int(np.count_nonzero(never & (first < 0)))
        moved = ~never
        counts += np.bincount((pos_units[moved] + n) // 2, minlength=n + 1)
        done += w
        block += 1

    lattice = SpaceGrid(x0=-n * cfg.dx, dx=2.0 * cfg.dx, n=n + 1)
    density = SampledField(lattice, counts / (total * 2.0 * cfg.dx))
    atoms = []
    if never_down:
        atoms.append((-n * cfg.dx, never_down / total))
    if never_up:
        atoms.append((n * cfg.dx, never_up / total))
    return MixedMeasure(
        atoms=tuple(atoms),
        density=density,
        support=(-n * cfg.dx, n * cfg.dx),
        probabilistic=True,
        density_mass_exact=float(counts.sum()) / total,
    )


def binned_tv_distance(estimate: MixedMeasure, reference: MixedMeasure,
                       panels_per_bin: int = 8) -> float:
    """Total-variation distance on the estimate's lattice bins.

    Bins are the histogram sites (width = lattice grid spacing); the
    reference density is integrated over each bin with per-bin Simpson,
    and atoms on either side are assigned to the bin containing them.
    """
    if estimate.density is None:
        raise UsageError("estimate must carry a lattice histogram")
    if reference.density_fn is None:
        raise UsageError("reference must carry a closed-form density")
    grid = estimate.density.grid
    centers = grid.points()
    half = 0.5 * grid.dx
    edges = np.concatenate([centers - half, [centers[-1] + half]])

    p = estimate.density.values * grid.dx
    p = p.copy()
    for pos, wgt in estimate.atoms:
        p[_bin_index(edges, pos)] += wgt

    lo = np.clip(edges[:-1], reference.support[0], reference.support[1])
    hi = np.clip(edges[1:], reference.support[0], reference.support[1])
    qdens = integrate_bins(reference.density_fn, lo, hi, panels_per_bin)
    q = qdens.copy()
    for pos, wgt in reference.atoms:
        q[_bin_index(edges, pos)] += wgt

    # reference mass the bins fail to cover counts fully toward the distance
    uncovered = reference.mass_breakdown().total - float(q.sum())
    return 0.5 * (float(np.abs(p - q).sum()) + abs(uncovered))


def _bin_index(edges: np.ndarray, pos: float) -> int:
    idx = int(np.searchsorted(edges, pos, side="right")) - 1
    return min(max(idx, 0), len(edges) - 2)


# ---------------------------------------------------------------------------
# Duhamel fixed point
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DuhamelConfig:
    """Nested-quadrature resolution for the fixed-point residual."""

    n_slabs: int = 32
    min_panels: int = 64
    panel_factor: int = 4

    def __post_init__(self):
        if self.n_slabs < 2 or self.n_slabs % 2:
            raise UsageError(f"n_slabs must be even and >= 2, got {self.n_slabs}")


def duhamel_residual(f: SampledField, g: SampledField, t: float,
                     medium: MediumParams, cfg: DuhamelConfig = DuhamelConfig(),
                     cache: Optional[dict] = None) -> float:
    """Max-abs residual of the transformed equation's fixed-point identity.

    The growth-compensated field must satisfy

        v(x,t) = [f(x+ct)+f(x-ct)]/2 + (1/2c) int_{x-ct}^{x+ct} (g + (k/2) f)
                 + (k^2/8c) int_0^t int_{x-c(t-s)}^{x+c(t-s)} v(y,s) dy ds,

    so the difference between ``solve_rescaled`` and the right-hand side
    (with v at intermediate times supplied by the solver itself) measures
    self-consistency.  Evaluated at every grid point whose full dependency
    cone fits inside the grid; pass a dict as ``cache`` to share the
    intermediate solves across refinement levels.
    """
    if f.grid != g.grid:
        raise UsageError("initial fields must share one grid")
    if t <= 0:
        raise UsageError(f"fixed-point residual needs t > 0, got {t}")
    grid = f.grid
    c = medium.c
    ct = c * t
    x = grid.points()
    valid = (x - ct >= grid.x0 - 1e-12 * grid.dx) & (x + ct <= grid.x_end + 1e-12 * grid.dx)
    if not valid.any():
        raise UsageError("dependency cone exceeds the grid at every point")

    geff = SampledField(grid, g.values + 0.5 * medium.k * f.values)

    def window_integral(fld: SampledField, radius: float) -> np.ndarray:
        """int_{x-radius}^{x+radius} fld(y) dy at every grid point."""
        if radius <= 0:
            return np.zeros(grid.n)
        n_sub = panel_count(2 * radius, grid.dx, cfg.min_panels, cfg.panel_factor)
        h = 2.0 * radius / n_sub
        weights = simpson_pattern(n_sub) * (h / 3.0)
        acc = np.zeros(grid.n)
        for j in range(n_sub + 1):
            acc += weights[j] * sample_shifted(fld, -(-radius + j * h))
        return acc

    def v_at(s: float) -> SampledField:
        if cache is not None:
            key = round(s, 14)
            if key not in cache:
                cache[key] = solve_rescaled(f, g, s, medium)
            return cache[key]
        return solve_rescaled(f, g, s, medium)

    lhs = v_at(t).values
    rhs = (0.5 * (sample_shifted(f, ct) + sample_shifted(f, -ct))
           + window_integral(geff, ct) / (2.0 * c))

    ds = t / cfg.n_slabs
    outer = simpson_pattern(cfg.n_slabs) * (ds / 3.0)
    source = np.zeros(grid.n)
    for m in range(cfg.n_slabs):  # the s = t node has a collapsed window
        s = m * ds
        source += outer[m] * window_integral(v_at(s), c * (t - s))
    rhs = rhs + (medium.k ** 2 / (8.0 * c)) * source

    return float(np.max(np.abs(lhs[valid] - rhs[valid])))


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

METRICS = ("rel_L2", "TV_distance", "max_abs", "atom_error")


@dataclass(frozen=True)
class ValidationReport:
    """One named check: passes iff value <= tolerance."""

    name: str
    metric: str
    value: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise UsageError(f"metric must be one of {METRICS}, got {self.metric!r}")
        object.__setattr__(self, "passed", bool(self.value <= self.tolerance))


def rel_l2_error(approx: SampledField, reference: SampledField,
                 window: Optional[tuple[float, float]] = None) -> float:
    """Relative L2 error, optionally restricted to a comparison window."""
    if approx.grid != reference.grid:
        raise UsageError("fields must share one grid")
    a = approx.values
    r = reference.values
    if window is not None:
        x = approx.x
        mask = (x >= window[0]) & (x <= window[1])
        a = a[mask]
        r = r[mask]
    denom = math.sqrt(float(np.sum(r * r)))
    if denom == 0.0:
        return math.sqrt(float(np.sum(a * a)))
    return math.sqrt(float(np.sum((a - r) ** 2))) / denom
