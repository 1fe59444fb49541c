"""Phase-space evolution operator and norm-decay reporting.

The solution operator maps (u, u_t) at time 0 to (u, u_t) at time t >= 0;
it satisfies the one-sided semigroup law, identity at t = 0 and
composition across sums of times, up to the solver's quadrature and
velocity-probe error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError
from .fields import SampledField, derivative_x, l2_norm
from .kernel import MediumParams
from .solver import solve, velocity


@dataclass(frozen=True)
class StatePair:
    """A phase-space point: displacement and velocity on one shared grid."""

    u: SampledField
    ut: SampledField

    def __post_init__(self):
        if self.u.grid != self.ut.grid:
            raise UsageError("state components must share one grid")


def evolve(t: float, state: StatePair, medium: MediumParams,
           dt_probe: float = 1e-3) -> StatePair:
    """Propagate a state forward by t >= 0 (one-sided semigroup)."""
    if t < 0:
        raise UsageError(f"the evolution operator is one-sided; got t = {t}")
    u = solve(state.u, state.ut, t, medium)
    ut = velocity(state.u, state.ut, t, medium, dt_probe)
    return StatePair(u, ut)


@dataclass(frozen=True)
class NormRow:
    t: float
    u_l2: float
    ut_l2: float
    ux_l2: float
    envelope: float


def norm_report(state0: StatePair, medium: MediumParams, times,
                dt_probe: float = 1e-3) -> list[NormRow]:
    """Discrete L2 norms of u, u_t, u_x at each time, plus e^{-kt/2}.

    Times must be nonnegative and ascending.  Norms use the trapezoid
    rule; u_x comes from second-order differences on the grid.
    """
    times = [float(t) for t in times]
    if any(t < 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise UsageError("times must be nonnegative and ascending")
    rows = []
    for t in times:
        state = state0 if t == 0.0 else evolve(t, state0, medium, dt_probe)
        rows.append(NormRow(
            t=t,
            u_l2=l2_norm(state.u),
            ut_l2=l2_norm(state.ut),
            ux_l2=l2_norm(derivative_x(state.u)),
            envelope=math.exp(-0.5 * medium.k * t),
        ))
    return rows
