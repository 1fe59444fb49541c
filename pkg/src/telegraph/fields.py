"""Uniform grids, sampled fields and mixed (atoms + density) measures.

Sampling between grid points uses 4-point cubic Lagrange interpolation,
with fields extended by zero beyond their grid: the natural convention
for compactly supported data, and it keeps every quadrature window legal
even when a light cone pokes past the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UsageError
from .quadrature import composite_simpson


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform 1-D grid: points x_i = x0 + i*dx for i = 0..n-1."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.x0) and math.isfinite(self.dx)):
            raise UsageError("grid endpoints must be finite")
        if self.dx <= 0:
            raise UsageError(f"grid spacing must be positive, got {self.dx}")
        if int(self.n) != self.n or self.n < 2:
            raise UsageError(f"grid needs at least 2 points, got {self.n}")

    @property
    def x_end(self) -> float:
        return self.x0 + (self.n - 1) * self.dx

    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def covers(self, lo: float, hi: float) -> bool:
        return self.x0 <= lo and hi <= self.x_end

    def extended(self, pad_cells: int) -> "SpaceGrid":
        """Same spacing, pad_cells extra points on each side."""
        return SpaceGrid(self.x0 - pad_cells * self.dx, self.dx, self.n + 2 * pad_cells)


@dataclass(frozen=True)
class SampledField:
    """Real values sampled on a SpaceGrid."""

    grid: SpaceGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.shape[0] != self.grid.n:
            raise UsageError(
                f"values length {vals.shape} does not match grid size {self.grid.n}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("field values must be finite")

    @property
    def x(self) -> np.ndarray:
        return self.grid.points()


def from_function(grid: SpaceGrid, fn: Callable[[np.ndarray], np.ndarray]) -> SampledField:
    return SampledField(grid, np.asarray(fn(grid.points()), dtype=float))


def zeros(grid: SpaceGrid) -> SampledField:
    return SampledField(grid, np.zeros(grid.n))


def _cubic_weights(r: float) -> tuple[float, float, float, float]:
    # Lagrange basis on stencil offsets (-1, 0, 1, 2) evaluated at r in [0, 1)
    rm1 = r - 1.0
    rm2 = r - 2.0
    rp1 = r + 1.0
    return (-r * rm1 * rm2 / 6.0,
            rp1 * rm1 * rm2 / 2.0,
            -r * rp1 * rm2 / 2.0,
            r * rp1 * rm1 / 6.0)


def sample_shifted(f: SampledField, offset: float) -> np.ndarray:
    """Values of f at every grid point shifted by a common offset.

    Returns f(x_i + offset) for i = 0..n-1, cubic interpolation inside the
    grid, zero outside.  An offset that is an exact multiple of dx reduces
    to an index shift with no arithmetic on the values.
    """
    g = f.grid
    n = g.n
    pos = offset / g.dx
    s = math.floor(pos)
    r = pos - s
    out = np.zeros(n)
    if s > n + 1 or s < -(n + 2):
        return out
    v = f.values
    for m, w in zip((-1, 0, 1, 2), _cubic_weights(r)):
        if w == 0.0:
            continue
        shift = s + m
        lo = max(0, -shift)
        hi = min(n, n - shift)
        if lo < hi:
            out[lo:hi] += w * v[lo + shift:hi + shift]
    # the shifted point itself must lie inside the grid, not just its stencil
    first_inside = max(0, math.ceil(-pos))
    last_inside = min(n - 1, math.floor(n - 1 - pos))
    out[:first_inside] = 0.0
    out[last_inside + 1:] = 0.0
    return out


def sample_at(f: SampledField, xq) -> np.ndarray:
    """Values of f at arbitrary query points (cubic inside, zero outside)."""
    xq = np.asarray(xq, dtype=float)
    g = f.grid
    pos = (xq - g.x0) / g.dx
    valid = (pos >= 0.0) & (pos <= g.n - 1)
    idx = np.floor(np.where(valid, pos, 0.0)).astype(np.int64)
    r = pos - idx
    padded = np.zeros(g.n + 6)
    padded[3:3 + g.n] = f.values
    rm1 = r - 1.0
    rm2 = r - 2.0
    rp1 = r + 1.0
    out = ((-r * rm1 * rm2 / 6.0) * padded[idx + 2]
           + (rp1 * rm1 * rm2 / 2.0) * padded[idx + 3]
           + (-r * rp1 * rm2 / 2.0) * padded[idx + 4]
           + (r * rp1 * rm1 / 6.0) * padded[idx + 5])
    return np.where(valid, out, 0.0)


def l2_norm(f: SampledField) -> float:
    """Discrete L2 norm by the trapezoid rule."""
    return float(math.sqrt(np.trapezoid(f.values ** 2, dx=f.grid.dx)))


def derivative_x(f: SampledField) -> SampledField:
    """Second-order spatial derivative: central inside, one-sided at the ends."""
    v = f.values
    dx = f.grid.dx
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * dx)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * dx)
    return SampledField(f.grid, d)


@dataclass(frozen=True)
class MassBreakdown:
    atoms: float
    density: float
    total: float


@dataclass(frozen=True)
class MixedMeasure:
    """Finitely many atoms plus a compactly supported density.

    ``density_fn``, when present, is the exact (vectorized) density the
    samples were taken from; mass quadrature prefers it over the samples.
    ``density_mass_exact`` short-circuits quadrature entirely (used by the
    walk simulator, whose density mass is a walker count).
    """

    atoms: tuple[tuple[float, float], ...]
    density: Optional[SampledField]
    support: tuple[float, float]
    probabilistic: bool = False
    density_fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False, repr=False)
    density_mass_exact: Optional[float] = None

    def __post_init__(self):
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise UsageError(f"support must be a finite interval, got {self.support}")
        atoms = tuple((float(p), float(w)) for p, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for p, w in atoms:
            if not (math.isfinite(p) and math.isfinite(w)):
                raise DomainError("atom positions and weights must be finite")
        if self.density is not None:
            x = self.density.x
            outside = (x < lo - 1e-12 * max(1.0, abs(lo))) | (x > hi + 1e-12 * max(1.0, abs(hi)))
            if np.any(self.density.values[outside] != 0.0):
                raise UsageError("density must vanish outside the support interval")
        if self.probabilistic:
            if any(w < 0 for _, w in atoms):
                raise UsageError("probabilistic measure needs nonnegative atom weights")
            if self.density is not None and np.any(self.density.values < -1e-12):
                raise UsageError("probabilistic measure needs a nonnegative density")

    def atom_mass(self) -> float:
        return float(sum(w for _, w in self.atoms))

    def density_mass(self, n_panels: int = 16384) -> float:
        if self.density_mass_exact is not None:
            return self.density_mass_exact
        lo, hi = self.support
        if hi <= lo:
            return 0.0
        if self.density_fn is not None:
            return composite_simpson(self.density_fn, lo, hi, n_panels)
        if self.density is None:
            return 0.0
        # fall back to the stored samples over their grid
        return float(np.trapezoid(self.density.values, dx=self.density.grid.dx))

    def mass_breakdown(self, n_panels: int = 16384) -> MassBreakdown:
        a = self.atom_mass()
        d = self.density_mass(n_panels)
        return MassBreakdown(a, d, a + d)
