"""Fundamental solution of the damped wave equation in growth-compensated form.

For u_tt + k u_t = c^2 u_xx, substituting v = e^{kt/2} u yields
v_tt = c^2 v_xx + (k^2/4) v.  The impulse-velocity solution of the
transformed problem is supported on the closed light cone |x| <= c|t|:

    psi(x, t) = sgn(t)/(2c) * I0(2 alpha sqrt(c^2 t^2 - x^2)),
    alpha = k/(4c),

odd in t, even in x, equal to sgn(t)/(2c) on the characteristics.  Its
time derivative splits into two Dirac atoms of weight 1/2 riding the
cone boundary plus a bounded density inside; this module evaluates both
pieces for all real times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bessel
from .errors import DomainError

#: Relative tolerance classifying a point as lying on the cone boundary.
CONE_EPS = 1e-12


@dataclass(frozen=True)
class MediumParams:
    """Damping rate k (1/time), wave speed c (length/time), alpha = k/(4c)."""

    k: float
    c: float
    alpha: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.k) and math.isfinite(self.c)):
            raise DomainError("medium parameters must be finite")
        if self.c <= 0:
            raise DomainError(f"wave speed must be positive, got {self.c}")
        if self.k < 0:
            raise DomainError(f"damping rate must be nonnegative, got {self.k}")
        object.__setattr__(self, "alpha", self.k / (4.0 * self.c))


@dataclass(frozen=True)
class ConeCoordinates:
    """Light-cone classification of a space-time point.

    ``lam`` is c^2 t^2 - x^2; ``inside``/``on_boundary`` use the relative
    tolerance CONE_EPS against c^2 t^2 + x^2 so points placed on the
    characteristics by inexact float arithmetic still classify correctly.
    """

    lam: float
    on_boundary: bool
    inside: bool


@dataclass(frozen=True)
class KernelAtoms:
    """The two Dirac atoms of the kernel's time derivative (weights 1/2 each)."""

    positions: tuple[float, float]
    weights: tuple[float, float]


def _check_point(x: float, t: float) -> None:
    if not (math.isfinite(t)):
        raise DomainError(f"time must be finite, got {t!r}")
    if not np.all(np.isfinite(x)):
        raise DomainError("positions must be finite")


def classify_cone(x: float, t: float, medium: MediumParams) -> ConeCoordinates:
    _check_point(x, t)
    lam = (medium.c * t) ** 2 - x * x
    r = abs(float(x))
    big = max(r, medium.c * abs(t))
    if big == 0.0:
        return ConeCoordinates(lam=0.0, on_boundary=True, inside=False)
    # classify on magnitudes normalized by the larger one, so the relative
    # tolerance survives even where the raw squares would underflow
    rn = r / big
    cn = medium.c * abs(t) / big
    lam_n = cn * cn - rn * rn
    on_boundary = abs(lam_n) <= CONE_EPS * (cn * cn + rn * rn)
    return ConeCoordinates(lam=lam, on_boundary=on_boundary,
                           inside=(lam_n > 0) and not on_boundary)


def _masks(x: np.ndarray, t: float, c: float):
    radius = c * abs(t)
    lam = radius * radius - x * x
    r = np.abs(x)
    big = np.maximum(r, radius)
    safe = np.where(big > 0.0, big, 1.0)
    rn = r / safe
    cn = radius / safe
    lam_n = cn * cn - rn * rn
    boundary = np.abs(lam_n) <= CONE_EPS * (cn * cn + rn * rn)
    inside = (lam_n > 0) & ~boundary
    return lam, boundary, inside


def fundamental_solution(x, t: float, medium: MediumParams):
    """Impulse-velocity kernel at positions x (scalar or array) and time t.

    Zero outside the closed cone, sgn(t)/(2c) on it (closed-interval
    convention), sgn(t)/(2c) * I0(2 alpha sqrt(lam)) strictly inside.
    """
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_point(x, t)
    sgn = math.copysign(1.0, t) if t != 0.0 else 0.0
    lam, boundary, inside = _masks(x, t, medium.c)
    out = np.zeros_like(x)
    edge = sgn / (2.0 * medium.c)
    out[boundary] = edge
    if inside.any():
        arg = 2.0 * medium.alpha * np.sqrt(lam[inside])
        out[inside] = edge * bessel.i0_array(arg)
    return float(out[0]) if scalar else out


def time_derivative_regular(x, t: float, medium: MediumParams):
    """Density part of the kernel's time derivative.

    Inside the cone this is alpha*c*|t| * I1(2 alpha sqrt(lam))/sqrt(lam),
    computed as 2 alpha^2 c |t| * (I1(w)/w)(2 alpha sqrt(lam)) so the
    cone boundary is reached continuously with value alpha^2 c |t|.
    Zero outside the cone; even in t.
    """
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_point(x, t)
    lam, boundary, inside = _masks(x, t, medium.c)
    out = np.zeros_like(x)
    supported = boundary | inside
    if supported.any():
        arg = 2.0 * medium.alpha * np.sqrt(np.maximum(lam[supported], 0.0))
        amp = 2.0 * medium.alpha ** 2 * medium.c * abs(t)
        out[supported] = amp * bessel.i1_over_z_array(arg)
    return float(out[0]) if scalar else out


def time_derivative_parts(
        t: float, medium: MediumParams,
) -> tuple[KernelAtoms, Callable[[np.ndarray], np.ndarray]]:
    """Atoms-plus-density decomposition of the kernel's time derivative.

    Atom positions are (-ct, +ct) with weight 1/2 each; at t = 0 the atoms
    coincide at the origin and their combined unit mass is the Dirac delta
    the kernel launches from.  The returned callable evaluates the density.
    """
    if not math.isfinite(t):
        raise DomainError(f"time must be finite, got {t!r}")
    ct = medium.c * t
    atoms = KernelAtoms(positions=(-ct, ct), weights=(0.5, 0.5))

    def density(x):
        return time_derivative_regular(x, t, medium)

    return atoms, density
