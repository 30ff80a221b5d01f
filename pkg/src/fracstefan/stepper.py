"""Explicit time integration of  dh/dt + Lw phi(h) = 0  on the grid window.

One step is V <- V - dt * Lw phi(V) with the far field held fixed; under
the CFL bound dt * Lip(phi) * total_weight <= 1 the update is a monotone
(order-preserving) map, which is where every qualitative property of the
continuum problem enters the discrete one.  The s = 1 limit uses the
classical 3-point Laplacian and the s = 0 limit is solved exactly as an
ODE.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import EnthalpyState
from .phase import PhaseLaw
from .stencil import Stencil, apply


class CFLError(ValueError):
    """Step size exceeds the monotonicity threshold."""


class NumericsError(RuntimeError):
    """Non-finite values appeared during time stepping."""


@dataclass(frozen=True)
class RunConfig:
    """Horizon, CFL safety factor and snapshot times for one run."""

    t_final: float
    theta: float = 0.9
    snapshot_times: tuple = ()

    def __post_init__(self):
        if not (np.isfinite(self.t_final) and self.t_final >= 0.0):
            raise ValueError("t_final must be finite and >= 0")
        if not (0.0 < self.theta <= 1.0):
            raise ValueError("theta must lie in (0, 1]")
        snaps = tuple(float(t) for t in self.snapshot_times)
        if any(t < 0.0 or t > self.t_final + 1e-12 for t in snaps):
            raise ValueError("snapshot times must lie in [0, t_final]")
        if list(snaps) != sorted(snaps):
            raise ValueError("snapshot times must be sorted")
        object.__setattr__(self, "snapshot_times", snaps)

    def resolved_snapshots(self) -> tuple:
        return self.snapshot_times if self.snapshot_times else (self.t_final,)


def cfl_max_dt(stencil: Stencil, law: PhaseLaw, theta: float = 0.9) -> float:
    """Largest monotone step: theta / (Lip(phi) * sum of all weights)."""
    if not (0.0 < theta <= 1.0):
        raise ValueError("theta must lie in (0, 1]")
    return theta / (law.lipschitz() * stencil.total_weight)


def step(state: EnthalpyState, stencil: Stencil, law: PhaseLaw, dt: float,
         method: str = "direct") -> EnthalpyState:
    """One explicit update V <- V - dt * Lw phi(V)."""
    if abs(stencil.dx - state.grid.dx) > 1e-12 * state.grid.dx:
        raise ValueError(f"stencil dx {stencil.dx} does not match grid dx {state.grid.dx}")
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    if dt > cfl_max_dt(stencil, law, 1.0) * (1.0 + 1e-12):
        raise CFLError(
            f"dt = {dt:.6g} exceeds the monotone limit "
            f"{cfl_max_dt(stencil, law, 1.0):.6g}")
    u = law.phi(state.values)
    out = apply(stencil, u, law.phi(state.far.left_value),
                law.phi(state.far.right_value), method=method)
    new = state.values - dt * out
    if not np.all(np.isfinite(new)):
        bad = int(np.flatnonzero(~np.isfinite(new))[0])
        raise NumericsError(
            f"non-finite value at node {bad} (x = {state.grid.nodes()[bad]:.6g}) "
            f"after step from t = {state.time:.6g}")
    return replace(state, values=new, time=state.time + dt)


def _run_loop(state: EnthalpyState, advance, dt_max: float, config: RunConfig,
              post_step=None) -> list:
    snaps = config.resolved_snapshots()
    out = []
    for ts in snaps:
        while state.time < ts - 1e-12 * max(1.0, ts):
            dt = min(dt_max, ts - state.time)
            state = advance(state, dt)
            if post_step is not None:
                state = post_step(state)
        state = replace(state, time=ts)
        out.append(state)
    return out


def run(state: EnthalpyState, stencil: Stencil, law: PhaseLaw,
        config: RunConfig, method: str = "direct", post_step=None,
        dt_cap=None) -> list:
    """March to each snapshot time, shortening the last sub-step to land
    exactly on it.  post_step, if given, transforms the state after every
    step (used for the Dirichlet restriction in the limit experiments).
    dt_cap lowers the step below the CFL bound when temporal accuracy,
    not stability, is the binding constraint (small s makes the CFL step
    large)."""
    dt_max = cfl_max_dt(stencil, law, config.theta)
    if dt_cap is not None:
        dt_max = min(dt_max, float(dt_cap))

    def advance(st, dt):
        return step(st, stencil, law, dt, method=method)

    return _run_loop(state, advance, dt_max, config, post_step)


def classical_operator(values, dx: float, far_left: float, far_right: float) -> np.ndarray:
    """Standard 3-point discrete -Laplacian with far-field neighbours."""
    V = np.asarray(values, dtype=float)
    vr = np.empty_like(V)
    vl = np.empty_like(V)
    vr[:-1] = V[1:]
    vr[-1] = far_right
    vl[1:] = V[:-1]
    vl[0] = far_left
    return (2.0 * V - vr - vl) / dx**2


def run_classical(state: EnthalpyState, law: PhaseLaw, config: RunConfig) -> list:
    """s = 1 limit: same explicit update with the 3-point Laplacian."""
    dx = state.grid.dx
    dt_max = config.theta * dx**2 / (2.0 * law.lipschitz())

    def advance(st, dt):
        u = law.phi(st.values)
        out = classical_operator(u, dx, law.phi(st.far.left_value),
                                 law.phi(st.far.right_value))
        new = st.values - dt * out
        if not np.all(np.isfinite(new)):
            raise NumericsError(f"non-finite value after step from t = {st.time:.6g}")
        return replace(st, values=new, time=st.time + dt)

    return _run_loop(state, advance, dt_max, config)


def ode_limit(state: EnthalpyState, law: PhaseLaw, t: float) -> EnthalpyState:
    """s = 0 limit, solved exactly:  dh/dt + phi(h) = 0  pointwise.

    For the one-phase law, h > L relaxes as (h0-L) e^{-t} + L and the
    plateau/ice part does not move, so u(x,t) = u0(x) e^{-t} and the free
    boundary is static.
    """
    if law.kind != "one":
        raise ValueError("ode_limit is defined for the one-phase law")
    if t < 0.0:
        raise ValueError("t must be >= 0")
    L = law.latent_heat
    decay = np.exp(-t)

    def relax(v):
        v = np.asarray(v, dtype=float)
        return np.where(v > L, (v - L) * decay + L, v)

    far = replace(state.far,
                  left_value=float(relax(state.far.left_value)),
                  right_value=float(relax(state.far.right_value)))
    return replace(state, values=relax(state.values), far=far,
                   time=state.time + t)
