"""Scripted experiment suites over the solver: free-boundary sweeps,
propagation bounds, far-field tails, L-limits and emerging water regions.

Every function runs the scheme at a documented desk-scale resolution and
returns a report dataclass whose fields echo all inputs; nothing is kept
in module state, so records are reproducible from their parameters alone.
Containment and ordering checks are backed by exact discrete comparison
arguments (same stencil, same dt), so their tolerances are round-off
sized; exponent checks are regression gates with stated windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import Grid1D, FarField, EnthalpyState
from .phase import PhaseLaw
from .stencil import build_power_weights
from .stepper import RunConfig, cfl_max_dt, run, run_classical
from .selfsimilar import (ProfileError, NoWaterError, WindowTooSmallError,
                          FitWindowError, SelfSimilarProfile, step_datum,
                          extract_profile, locate_free_boundary,
                          fit_tail_exponent, fit_front_exponent)


# ---------------------------------------------------------------------------
# shared run plumbing

def run_step_problem(s: float, L: float, P1: float, P2: float, radius: float,
                     dx: float, snapshots, theta: float = 0.9,
                     method: str = "auto", dt_cap=None):
    """One-phase run from the two-state datum; returns (law, snapshots)."""
    grid = Grid1D.centered(radius, dx)
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    values = step_datum(grid.nodes(), L, P1, P2)
    state = EnthalpyState(grid, FarField(L + P1, L - P2), values, 0.0)
    config = RunConfig(t_final=snapshots[-1], theta=theta,
                       snapshot_times=tuple(snapshots))
    return law, run(state, stencil, law, config, method=method, dt_cap=dt_cap)


def box_datum(x: np.ndarray, inside: float, outside: float,
              radius: float, center: float = 0.0) -> np.ndarray:
    """Datum equal to `inside` on B_radius(center) and `outside` elsewhere."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x - center) < radius, inside, outside)


def _classify_missing_front(profile: SelfSimilarProfile) -> str:
    try:
        locate_free_boundary(profile)
    except NoWaterError:
        return "no_water"
    except WindowTooSmallError:
        return "window_too_small"
    return "ok"


def _safe_fit(fit_fn, profile) -> float:
    try:
        return fit_fn(profile).exponent
    except (ProfileError, ValueError):
        return math.nan


# ---------------------------------------------------------------------------
# free-boundary sweeps

@dataclass(frozen=True)
class SweepRecord:
    """One (s, P2) point of a free-boundary sweep, inputs echoed."""

    s: float
    L: float
    P1: float
    P2: float
    dx: float
    domain_radius: float
    t_extract: float
    xi0: float
    tail_exponent: float
    front_exponent: float
    flags: dict = field(default_factory=dict)


def _sweep_point(s, L, P1, P2, dx, radius, t_extract, theta, dt_cap=None) -> SweepRecord:
    law, snaps = run_step_problem(s, L, P1, P2, radius, dx, (t_extract,),
                                  theta=theta, dt_cap=dt_cap)
    prof = extract_profile(snaps[-1], law, s, P1, P2)
    flags = {}
    if not np.isfinite(prof.xi0):
        flags["front"] = _classify_missing_front(prof)
    return SweepRecord(s=s, L=L, P1=P1, P2=P2, dx=dx, domain_radius=radius,
                       t_extract=t_extract, xi0=prof.xi0,
                       tail_exponent=_safe_fit(fit_tail_exponent, prof),
                       front_exponent=_safe_fit(fit_front_exponent, prof),
                       flags=flags)


def sweep_xi0_vs_P2(s_values, P2_values, L: float = 1.0, P1: float = 1.0,
                    dx: float = 0.05, radius: float = 25.0,
                    t_extract: float = 4.0, theta: float = 0.9) -> list:
    """xi0 across P2 per s; flags monotone nonincrease of xi0 in P2.

    The slack for the monotonicity flag is one xi-cell, the quantization
    of the support-edge front estimate.  P2 values must be positive and
    ascending.
    """
    P2_values = [float(p) for p in P2_values]
    if any(p <= 0.0 for p in P2_values):
        raise ValueError("P2 values must be positive")
    if P2_values != sorted(P2_values):
        raise ValueError("P2 values must be sorted ascending")
    records = []
    for s in s_values:
        series = [_sweep_point(float(s), L, P1, p, dx, radius, t_extract, theta)
                  for p in P2_values]
        cell = dx / t_extract ** (1.0 / (2.0 * float(s)))
        vals = [r.xi0 for r in series]
        ok = all(b <= a + cell for a, b in zip(vals, vals[1:])
                 if np.isfinite(a) and np.isfinite(b))
        finite = [v for v in vals if np.isfinite(v)]
        smallest_last = bool(finite) and np.isfinite(vals[-1]) and \
            vals[-1] <= min(finite) + cell
        for r in series:
            r.flags["xi0_monotone_in_P2"] = ok
            r.flags["min_at_largest_P2"] = smallest_last
        records.extend(series)
    return records


def sweep_xi0_vs_s(s_values, P2_values, L: float = 1.0, P1: float = 1.0,
                   dx: float = 0.05, radius: float = 25.0,
                   t_extract: float = 1.0, theta: float = 0.9) -> list:
    """xi0 across s per P2; monotonicity in s is recorded, never asserted.

    Extraction stays at t = 1 because the similarity scale t^(1/(2s))
    explodes as s -> 0; the step is capped so coarse CFL steps at small s
    do not starve the time accuracy.
    """
    s_values = [float(s) for s in s_values]
    if any(not 0.0 < s < 1.0 for s in s_values):
        raise ValueError("s values must lie in (0, 1)")
    records = []
    for P2 in P2_values:
        series = []
        for s in s_values:
            cap = t_extract / 64.0
            series.append(_sweep_point(s, L, P1, float(P2), dx, radius,
                                       t_extract, theta, dt_cap=cap))
        cell = dx / t_extract ** (1.0 / (2.0 * min(s_values)))
        vals = [r.xi0 for r in series]
        finite = [v for v in vals if np.isfinite(v)]
        min_at_smallest = bool(finite) and np.isfinite(vals[0]) and \
            vals[0] <= min(finite) + cell
        for r in series:
            r.flags["min_at_smallest_s"] = min_at_smallest
        records.extend(series)
    return records


# ---------------------------------------------------------------------------
# propagation

@dataclass(frozen=True)
class SupportTrace:
    """Discrete support radius of u against the comparison bound."""

    times: np.ndarray
    support_radius_u: np.ndarray
    theoretical_bound: np.ndarray


@dataclass(frozen=True)
class SupportGrowthReport:
    trace: SupportTrace
    xi0_companion: float
    r_tilde: float
    contained_scaling: bool
    contained_maximal: bool
    radii_nondecreasing: bool
    h_all_positive: bool

    @property
    def passed(self) -> bool:
        return (self.contained_scaling and self.contained_maximal
                and self.radii_nondecreasing and self.h_all_positive)


def support_growth(s: float, L: float, height: float = 1.0, R: float = 1.0,
                   outside_value: float = 0.0, radius: float = 20.0,
                   dx: float = 0.05, snapshots=(0.5, 1.0, 2.0, 4.0),
                   theta: float = 0.9) -> SupportGrowthReport:
    """Box-datum run; support of u vs R + xi0 t^(1/(2s)) and the mass bound.

    The datum is L+height on B_R(0) and `outside_value` elsewhere, so the
    temperature margin is eps = L - outside_value; eps <= 0 is rejected
    because finite speed of propagation genuinely fails without it.  The
    comparison xi0 comes from the matching step-datum run with
    P1 = sup phi(h0) and P2 = eps; the mass bound is
    R~ = (sup phi(h0)/eps + 1) * R.
    """
    eps = L - outside_value
    if eps <= 0.0:
        raise ValueError(
            "datum must sit at least eps > 0 below L outside B_R; with "
            "eps <= 0 finite speed of propagation fails")
    grid = Grid1D.centered(radius, dx)
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    h0 = box_datum(grid.nodes(), L + height, outside_value, R)
    state = EnthalpyState(grid, FarField(outside_value, outside_value), h0, 0.0)
    config = RunConfig(t_final=snapshots[-1], theta=theta,
                       snapshot_times=tuple(snapshots))
    snaps = run(state, stencil, law, config, method="auto")

    p_sup = float(np.max(law.phi(h0)))
    comp_law, comp = run_step_problem(s, L, p_sup, eps, radius, dx, (4.0,),
                                      theta=theta)
    comp_prof = extract_profile(comp[-1], comp_law, s, p_sup, eps)
    xi0 = comp_prof.xi0

    x = grid.nodes()
    times, radii, bounds = [], [], []
    h_all_positive = True
    for st_ in snaps:
        u = law.phi(st_.values)
        pos = np.abs(x[u > 0.0])
        times.append(st_.time)
        radii.append(float(pos.max()) if pos.size else 0.0)
        bounds.append(R + xi0 * st_.time ** (1.0 / (2.0 * s)))
        h_all_positive &= bool(np.min(st_.values) > 0.0)
    times = np.asarray(times)
    radii = np.asarray(radii)
    bounds = np.asarray(bounds)
    r_tilde = (p_sup / eps + 1.0) * R
    return SupportGrowthReport(
        trace=SupportTrace(times, radii, bounds),
        xi0_companion=xi0, r_tilde=r_tilde,
        contained_scaling=bool(np.all(radii <= bounds + dx)),
        contained_maximal=bool(np.all(radii <= r_tilde)),
        radii_nondecreasing=bool(np.all(np.diff(radii) >= 0.0)),
        h_all_positive=h_all_positive)


@dataclass(frozen=True)
class EnthalpyTailReport:
    times: tuple
    slopes: tuple
    expected_slope: float
    r_squared: tuple
    slope_window: tuple
    slope_stable: bool
    h_positive_first_snapshot: bool

    @property
    def passed(self) -> bool:
        within = all(abs(p - self.expected_slope) <= 0.2 for p in self.slopes)
        return within and self.slope_stable and self.h_positive_first_snapshot


def enthalpy_tail(s: float, L: float = 1.0, height: float = 1.0,
                  R: float = 1.0, radius: float = 30.0, dx: float = 0.05,
                  snapshots=(0.25, 0.5), theta: float = 0.9) -> EnthalpyTailReport:
    """Far-field decay of h from a compact datum: slope vs -(1+2s).

    Fits log h against log x on [max(3R, 3), radius/2] (right side; the
    datum is even) at each snapshot and checks the slopes agree with each
    other within 0.1.  h must be positive at every node at the first
    snapshot: infinite speed of propagation for the enthalpy.
    """
    grid = Grid1D.centered(radius, dx)
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    h0 = box_datum(grid.nodes(), L + height, 0.0, R)
    state = EnthalpyState(grid, FarField(0.0, 0.0), h0, 0.0)
    config = RunConfig(t_final=snapshots[-1], theta=theta,
                       snapshot_times=tuple(snapshots))
    snaps = run(state, stencil, law, config, method="auto")

    x = grid.nodes()
    lo, hi = max(3.0 * R, 3.0), radius / 2.0
    floor = 1e-13 * (L + height)
    slopes, r2s = [], []
    for st_ in snaps:
        mask = (x >= lo) & (x <= hi) & (st_.values > floor)
        if int(mask.sum()) < 10:
            raise FitWindowError(
                f"only {int(mask.sum())} samples above round-off in "
                f"[{lo:g}, {hi:g}] at t = {st_.time:g}")
        lx, ly = np.log(x[mask]), np.log(st_.values[mask])
        slope, intercept = np.polyfit(lx, ly, 1)
        resid = ly - (slope * lx + intercept)
        ss_tot = float(np.sum((ly - ly.mean()) ** 2))
        r2s.append(1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot else 1.0)
        slopes.append(float(slope))
    stable = max(slopes) - min(slopes) <= 0.1
    return EnthalpyTailReport(
        times=tuple(st_.time for st_ in snaps), slopes=tuple(slopes),
        expected_slope=-(1.0 + 2.0 * s), r_squared=tuple(r2s),
        slope_window=(lo, hi), slope_stable=bool(stable),
        h_positive_first_snapshot=bool(np.min(snaps[0].values) > 0.0))


# ---------------------------------------------------------------------------
# limits in L, s -> 1 and s -> 0

@dataclass(frozen=True)
class LimitLReport:
    L_values: tuple
    ordering_ok: bool
    monotone_ok: bool
    worst_violation: float
    gap_to_upper: float
    gap_to_lower: float
    outside_water_sup: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.ordering_ok and self.monotone_ok


def _cos_bump(x: np.ndarray) -> np.ndarray:
    """cos^2(pi x / 2) on (-1, 1), zero outside; continuous and compact."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) < 1.0, np.cos(0.5 * np.pi * x) ** 2, 0.0)


def limit_L_bracketing(s: float, L_values=(0.1, 1.0, 10.0, 100.0),
                       radius: float = 15.0, dx: float = 0.05,
                       t_final: float = 0.5, theta: float = 0.9,
                       method: str = "auto") -> LimitLReport:
    """u_bar (whole-space) >= u_L >= u_lower (Dirichlet), monotone in L.

    All runs share one stencil and one dt (every law here is
    1-Lipschitz), which is what makes the discrete comparison exact: the
    orderings hold to round-off, checked against 10*eps*scale.  The
    Dirichlet run realizes u = 0 outside Omega = (-1,1) by clamping those
    nodes after every step.
    """
    grid = Grid1D.centered(radius, dx)
    x = grid.nodes()
    u0 = _cos_bump(x)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    identity = PhaseLaw("identity")
    dt = cfl_max_dt(stencil, identity, theta)
    config = RunConfig(t_final=t_final, theta=theta)
    far0 = FarField(0.0, 0.0)
    outside = np.abs(x) >= 1.0

    upper = run(EnthalpyState(grid, far0, u0.copy(), 0.0), stencil, identity,
                config, method=method, dt_cap=dt)[-1].values

    def clamp(st_):
        v = st_.values.copy()
        v[outside] = 0.0
        return replace(st_, values=v)

    lower = run(EnthalpyState(grid, far0, u0.copy(), 0.0), stencil, identity,
                config, method=method, post_step=clamp, dt_cap=dt)[-1].values

    temps = []
    for L in L_values:
        law = PhaseLaw("one", latent_heat=float(L))
        h0 = np.where(np.abs(x) < 1.0, float(L) + u0, 0.0)
        final = run(EnthalpyState(grid, far0, h0, 0.0), stencil, law,
                    config, method=method, dt_cap=dt)[-1]
        temps.append(np.asarray(law.phi(final.values)))

    # round-off scale of the comparison: u_L is carried as h = L + u, so
    # every arithmetic op rounds at eps * (L + sup u0), not eps * sup u0
    scale = max(L_values) + float(np.max(u0))
    tol = 10.0 * np.finfo(float).eps * max(scale, 1.0)
    worst = 0.0
    ordering_ok = True
    for u in temps:
        worst = max(worst, float(np.max(u - upper)), float(np.max(lower - u)))
    monotone_ok = True
    for ua, ub in zip(temps, temps[1:]):   # L ascending: u must not increase
        worst = max(worst, float(np.max(ub - ua)))
        monotone_ok &= bool(np.all(ub <= ua + tol))
    for u in temps:
        ordering_ok &= bool(np.all(u <= upper + tol) and np.all(u >= lower - tol))
    return LimitLReport(
        L_values=tuple(float(L) for L in L_values),
        ordering_ok=ordering_ok, monotone_ok=monotone_ok,
        worst_violation=worst,
        gap_to_upper=float(np.max(np.abs(temps[0] - upper))),
        gap_to_lower=float(np.max(np.abs(temps[-1] - lower))),
        outside_water_sup=float(np.max(temps[-1][outside])),
        tolerance=tol)


@dataclass(frozen=True)
class FrontComparisonReport:
    s: float
    front_fractional: float
    front_classical: float
    dx: float

    @property
    def gap(self) -> float:
        return abs(self.front_fractional - self.front_classical)

    @property
    def passed(self) -> bool:
        return self.gap <= 3.0 * self.dx


def _right_water_edge(state: EnthalpyState, law: PhaseLaw) -> float:
    u = np.asarray(law.phi(state.values))
    pos = np.flatnonzero(u > 0.0)
    if pos.size == 0:
        return -math.inf
    return float(state.grid.nodes()[pos[-1]])


def classical_front_comparison(s: float = 0.99, L: float = 1.0,
                               P1: float = 1.0, P2: float = 1.0,
                               radius: float = 15.0, dx: float = 0.05,
                               t: float = 1.0,
                               theta: float = 0.9) -> FrontComparisonReport:
    """Water-support edge of the s close to 1 run vs the s = 1 run at time t."""
    law, snaps = run_step_problem(s, L, P1, P2, radius, dx, (t,), theta=theta)
    grid = Grid1D.centered(radius, dx)
    state = EnthalpyState(grid, FarField(L + P1, L - P2),
                          step_datum(grid.nodes(), L, P1, P2), 0.0)
    config = RunConfig(t_final=t, theta=theta)
    classical = run_classical(state, law, config)[-1]
    return FrontComparisonReport(
        s=s, front_fractional=_right_water_edge(snaps[-1], law),
        front_classical=_right_water_edge(classical, law), dx=dx)


@dataclass(frozen=True)
class OdeLimitReport:
    s: float
    t: float
    rel_error: float
    window: tuple

    @property
    def passed(self) -> bool:
        return self.rel_error <= 0.10


def small_s_ode_check(s: float = 0.05, L: float = 1.0, t: float = 0.25,
                      radius: float = 10.0, dx: float = 0.05,
                      theta: float = 0.9) -> OdeLimitReport:
    """As s -> 0 the equation relaxes pointwise: u approaches u0 e^{-t}.

    Runs the fractional problem at small s from h0 = L + u0 on (-1,1)
    and compares the temperature with the exact ODE limit on the inner
    half of the initial support.  The CFL step at small s is enormous,
    so the step is capped for time accuracy.
    """
    grid = Grid1D.centered(radius, dx)
    x = grid.nodes()
    u0 = _cos_bump(x)
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    h0 = np.where(np.abs(x) < 1.0, L + u0, 0.0)
    state = EnthalpyState(grid, FarField(0.0, 0.0), h0, 0.0)
    config = RunConfig(t_final=t, theta=theta)
    final = run(state, stencil, law, config, method="auto", dt_cap=t / 64.0)[-1]
    inner = np.abs(x) <= 0.5
    exact = u0[inner] * math.exp(-t)
    u = np.asarray(law.phi(final.values))[inner]
    rel = float(np.max(np.abs(u - exact)) / np.max(exact))
    return OdeLimitReport(s=s, t=t, rel_error=rel, window=(-0.5, 0.5))


# ---------------------------------------------------------------------------
# asymptotic decay of perturbations

@dataclass(frozen=True)
class DecayReport:
    times: tuple
    sup_diff: tuple
    l1_diff: tuple
    sup_nonincreasing: bool
    l1_nonincreasing: bool
    decayed: bool

    @property
    def passed(self) -> bool:
        return self.sup_nonincreasing and self.l1_nonincreasing and self.decayed


def asymptotic_decay(s: float, L: float = 1.0, P1: float = 1.0,
                     P2: float = 1.0, bump_height=None,
                     bump_radius: float = 1.0, radius: float = 30.0,
                     dx: float = 0.05, times=(1.0, 2.0, 4.0, 8.0),
                     theta: float = 0.9) -> DecayReport:
    """Perturbed vs unperturbed step run: sup and windowed-L1 gaps shrink.

    bump_height defaults to P1/2 on B_bump_radius(0); zero is allowed
    and gives identically zero gaps, which count as decayed.
    """
    if bump_height is None:
        bump_height = 0.5 * P1
    grid = Grid1D.centered(radius, dx)
    x = grid.nodes()
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    far = FarField(L + P1, L - P2)
    config = RunConfig(t_final=times[-1], theta=theta,
                       snapshot_times=tuple(times))
    base0 = step_datum(x, L, P1, P2)
    pert0 = base0 + np.where(np.abs(x) < bump_radius, float(bump_height), 0.0)
    base = run(EnthalpyState(grid, far, base0, 0.0), stencil, law, config,
               method="auto")
    pert = run(EnthalpyState(grid, far, pert0, 0.0), stencil, law, config,
               method="auto")

    sup, l1 = [], []
    for b, p in zip(base, pert):
        d = np.abs(p.values - b.values)
        sup.append(float(d.max()))
        l1.append(float(d.sum() * dx))
    slack = 1e-12 * (abs(bump_height) + P1 + P2)
    return DecayReport(
        times=tuple(times), sup_diff=tuple(sup), l1_diff=tuple(l1),
        sup_nonincreasing=bool(np.all(np.diff(sup) <= slack)),
        l1_nonincreasing=bool(np.all(np.diff(l1) <= slack)),
        decayed=bool(sup[-1] < sup[0] or sup[0] == 0.0))


# ---------------------------------------------------------------------------
# emerging water regions

@dataclass(frozen=True)
class EmergingReport:
    scenario: str
    times: tuple
    region_has_water: tuple
    n_water_components: tuple
    t_onset: float
    t_bound: float
    xi0_companion: float
    water_set_monotone: bool
    no_water_before_bound: bool

    @property
    def passed(self) -> bool:
        if self.scenario == "instant":
            return (bool(self.region_has_water[0])
                    and self.n_water_components[0] >= 2
                    and self.water_set_monotone)
        return (self.no_water_before_bound and math.isfinite(self.t_onset)
                and self.water_set_monotone)


def _count_components(mask: np.ndarray) -> int:
    m = mask.astype(int)
    return int(np.sum(np.diff(np.concatenate(([0], m))) == 1))


def emerging_regions(scenario: str, s: float = 0.5, L: float = 1.0,
                     region_center: float = 5.0, region_radius: float = 2.0,
                     deficit: float = 0.05, radius: float = 12.0,
                     dx: float = 0.05,
                     snapshots=(0.05, 0.2, 0.5, 1.0, 2.0, 4.0),
                     theta: float = 0.9) -> EmergingReport:
    """Second water region appearing instantly (h0 = L there) or after a wait.

    Instant scenario: the remote region sits exactly at the latent heat,
    so any incoming heat melts it immediately.  Delayed scenario: the
    region sits at L - deficit; a companion run from the dominating datum
    h0_hat = L+1 for x <= 2, L - deficit for x > 2 bounds the solution
    from above, so no water can appear in the region before the
    companion's own front reaches it.  That arrival defines t_bound; the
    similarity estimate ((gap)/xi0_hat)^(2s) is reported through
    xi0_companion.
    """
    if scenario not in ("instant", "delayed"):
        raise ValueError("scenario must be 'instant' or 'delayed'")
    grid = Grid1D.centered(radius, dx)
    x = grid.nodes()
    law = PhaseLaw("one", latent_heat=L)
    stencil = build_power_weights(s, dx, G=grid.m - 1)
    region_value = L if scenario == "instant" else L - deficit
    h0 = np.zeros(grid.m)
    h0[np.abs(x) < 2.0] = L + 1.0
    h0[np.abs(x - region_center) < region_radius] = region_value
    config = RunConfig(t_final=snapshots[-1], theta=theta,
                       snapshot_times=tuple(snapshots))
    snaps = run(EnthalpyState(grid, FarField(0.0, 0.0), h0, 0.0),
                stencil, law, config, method="auto")

    region = np.abs(x - region_center) < region_radius
    has_water, n_comp = [], []
    water_sets = []
    for st_ in snaps:
        wet = np.asarray(law.phi(st_.values)) > 0.0
        water_sets.append(wet)
        has_water.append(bool(np.any(wet & region)))
        n_comp.append(_count_components(wet))
    monotone = all(bool(np.all(b[a])) for a, b in zip(water_sets, water_sets[1:]))
    t_onset = math.inf
    for st_, hw in zip(snaps, has_water):
        if hw:
            t_onset = st_.time
            break

    if scenario == "instant":
        return EmergingReport(
            scenario=scenario, times=tuple(st_.time for st_ in snaps),
            region_has_water=tuple(has_water),
            n_water_components=tuple(n_comp), t_onset=t_onset,
            t_bound=math.nan, xi0_companion=math.nan,
            water_set_monotone=monotone, no_water_before_bound=True)

    # companion: dominating datum whose front must reach the region first
    comp0 = np.where(x <= 2.0, L + 1.0, L - deficit)
    comp = run(EnthalpyState(grid, FarField(L + 1.0, L - deficit), comp0, 0.0),
               stencil, law, config, method="auto")
    region_left = region_center - region_radius
    t_bound = math.inf
    ok_before = True
    for st_, hw in zip(comp, has_water):
        edge = _right_water_edge(st_, law)
        if edge < region_left:
            ok_before &= not hw
        elif not math.isfinite(t_bound):
            t_bound = st_.time
    # similarity estimate from the latest snapshot whose front is still
    # safely inside the window (the front may hit the edge at late times)
    xi0_hat = math.nan
    x_max = grid.x_right
    for st_ in comp:
        edge = _right_water_edge(st_, law)
        if edge < x_max - 2.0 * dx:
            xi0_hat = (edge - 2.0) / st_.time ** (1.0 / (2.0 * s))
    return EmergingReport(
        scenario=scenario, times=tuple(st_.time for st_ in snaps),
        region_has_water=tuple(has_water), n_water_components=tuple(n_comp),
        t_onset=t_onset, t_bound=t_bound, xi0_companion=xi0_hat,
        water_set_monotone=monotone, no_water_before_bound=ok_before)
