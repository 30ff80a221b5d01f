"""Tests for the scripted experiment suites, at reduced desk scale.

Each experiment is exercised with coarser grids and shorter horizons than
its defaults so the whole module stays fast; the checked quantities are
the ones that are resolution-robust (ordering and containment flags,
front positions to one cell, exponents to wide windows).  Exact-ordering
claims (bracketing, comparison) still use round-off tolerances because
they hold discretely, not just in the limit.
"""

import math

import numpy as np
import pytest

from fracstefan.experiments import (
    asymptotic_decay,
    box_datum,
    classical_front_comparison,
    emerging_regions,
    enthalpy_tail,
    limit_L_bracketing,
    run_step_problem,
    small_s_ode_check,
    support_growth,
    sweep_xi0_vs_P2,
    sweep_xi0_vs_s,
)
from fracstefan.selfsimilar import extract_profile


# ---------------------------------------------------------------------------
# plumbing


def test_run_step_problem_returns_requested_snapshots():
    law, snaps = run_step_problem(0.5, 1.0, 1.0, 1.0, 5.0, 0.1, (0.25, 0.5))
    assert law.latent_heat == 1.0
    assert [st.time for st in snaps] == [0.25, 0.5]
    assert snaps[0].grid.dx == 0.1
    # far-field carries the step datum's two states
    assert snaps[0].far.left_value == 2.0
    assert snaps[0].far.right_value == 0.0


def test_box_datum_geometry():
    x = np.array([-3.0, -1.0, 0.0, 0.9, 1.0, 4.0])
    out = box_datum(x, inside=2.0, outside=-1.0, radius=1.0)
    # the ball is open: nodes exactly on the boundary take the outside value
    assert out.tolist() == [-1.0, -1.0, 2.0, 2.0, -1.0, -1.0]
    shifted = box_datum(x, inside=1.0, outside=0.0, radius=1.0, center=4.0)
    assert shifted.tolist() == [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]


# ---------------------------------------------------------------------------
# free-boundary sweeps


def test_sweep_xi0_decreases_with_P2():
    recs = sweep_xi0_vs_P2((0.5,), (0.5, 1.0, 2.0), dx=0.1, radius=10.0,
                           t_extract=1.0)
    assert [r.P2 for r in recs] == [0.5, 1.0, 2.0]
    xi0 = [r.xi0 for r in recs]
    assert xi0 == pytest.approx([0.7, 0.3, 0.1], abs=0.05)
    assert all(b <= a for a, b in zip(xi0, xi0[1:]))
    for r in recs:
        assert r.flags["xi0_monotone_in_P2"]
        assert r.flags["min_at_largest_P2"]
        assert r.s == 0.5 and r.L == 1.0 and r.P1 == 1.0
        assert r.t_extract == 1.0


def test_sweep_xi0_increases_with_s():
    recs = sweep_xi0_vs_s((0.25, 0.5, 0.75), (1.0,), dx=0.1, radius=10.0,
                          t_extract=1.0)
    xi0 = [r.xi0 for r in recs]
    assert xi0 == pytest.approx([0.1, 0.3, 0.5], abs=0.05)
    assert all(a < b for a, b in zip(xi0, xi0[1:]))
    assert all(r.flags["min_at_smallest_s"] for r in recs)


def test_sweep_flags_front_beyond_window():
    # P2 = 0.25 melts past x = 2 by t = 4: xi0 cannot be located
    recs = sweep_xi0_vs_P2((0.5,), (0.25,), dx=0.1, radius=2.0, t_extract=4.0)
    assert math.isnan(recs[0].xi0)
    assert recs[0].flags["front"] == "window_too_small"
    assert not recs[0].flags["min_at_largest_P2"]


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        sweep_xi0_vs_P2((0.5,), (1.0, 0.5), dx=0.1, radius=5.0)
    with pytest.raises(ValueError):
        sweep_xi0_vs_P2((0.5,), (0.0, 1.0), dx=0.1, radius=5.0)
    with pytest.raises(ValueError):
        sweep_xi0_vs_s((0.5, 1.0), (1.0,), dx=0.1, radius=5.0)


def test_xi0_does_not_depend_on_latent_heat():
    xi0 = {}
    for L in (0.0, 5.0):
        law, snaps = run_step_problem(0.5, L, 1.0, 1.0, 10.0, 0.05, (1.0,))
        prof = extract_profile(snaps[-1], law, 0.5, 1.0, 1.0)
        xi0[L] = prof.xi0
    assert abs(xi0[0.0] - xi0[5.0]) <= 0.05


# ---------------------------------------------------------------------------
# propagation and tails


def test_support_growth_contained_by_both_bounds():
    rep = support_growth(0.5, 1.0, radius=15.0, dx=0.1,
                         snapshots=(0.5, 1.0, 2.0))
    assert rep.passed
    assert rep.contained_scaling and rep.contained_maximal
    assert rep.radii_nondecreasing and rep.h_all_positive
    # height = eps = 1 gives the same step companion as the P2 sweep
    assert rep.xi0_companion == pytest.approx(0.30, abs=0.05)
    assert rep.r_tilde == 2.0
    assert np.all(rep.trace.support_radius_u <= rep.trace.theoretical_bound + 0.1)
    assert rep.trace.times.tolist() == [0.5, 1.0, 2.0]


def test_support_growth_rejects_vanishing_margin():
    with pytest.raises(ValueError):
        support_growth(0.5, 1.0, outside_value=1.0, radius=5.0, dx=0.1)
    with pytest.raises(ValueError):
        support_growth(0.5, 1.0, outside_value=2.0, radius=5.0, dx=0.1)


def test_enthalpy_tail_slope_and_positivity():
    rep = enthalpy_tail(0.5, radius=20.0, dx=0.1, snapshots=(0.25, 0.5))
    assert rep.passed
    assert rep.expected_slope == -2.0
    for slope in rep.slopes:
        assert -2.2 < slope < -1.85
    for r2 in rep.r_squared:
        assert r2 > 0.999
    assert rep.slope_stable
    assert rep.h_positive_first_snapshot


# ---------------------------------------------------------------------------
# limits in L and s


def test_limit_L_bracketing_is_exact_and_monotone():
    rep = limit_L_bracketing(0.5, L_values=(0.1, 1.0, 10.0), radius=8.0,
                             dx=0.1, t_final=0.25)
    assert rep.passed
    assert rep.ordering_ok and rep.monotone_ok
    # shared stencil + shared dt: violations are pure round-off
    assert rep.worst_violation <= rep.tolerance
    # small L behaves like the whole-space problem, large L like Dirichlet
    assert 0.01 < rep.gap_to_upper < 0.2
    assert rep.gap_to_lower < 1e-12
    assert rep.outside_water_sup == 0.0


def test_classical_front_comparison_close_to_s1():
    rep = classical_front_comparison(radius=8.0, dx=0.1, t=0.5)
    assert rep.passed
    assert rep.gap <= 3.0 * rep.dx
    assert 0.0 < rep.front_fractional < 2.0
    assert 0.0 < rep.front_classical < 2.0


def test_small_s_relaxes_to_pointwise_ode():
    rep = small_s_ode_check()
    assert rep.passed
    assert rep.rel_error < 0.05
    assert rep.window == (-0.5, 0.5)


# ---------------------------------------------------------------------------
# perturbation decay


def test_asymptotic_decay_of_perturbations():
    rep = asymptotic_decay(0.5, radius=12.0, dx=0.1, times=(0.5, 1.0, 2.0))
    assert rep.passed
    assert rep.sup_nonincreasing and rep.l1_nonincreasing
    assert rep.sup_diff[-1] < rep.sup_diff[0]
    assert rep.l1_diff[-1] < rep.l1_diff[0]
    # the perturbation is bounded by its initial size throughout
    assert max(rep.sup_diff) <= 1.0


def test_asymptotic_decay_zero_perturbation():
    rep = asymptotic_decay(0.5, bump_height=0.0, radius=8.0, dx=0.1,
                           times=(0.25, 0.5))
    assert rep.passed
    assert rep.sup_diff == (0.0, 0.0)
    assert rep.l1_diff == (0.0, 0.0)


# ---------------------------------------------------------------------------
# emerging water regions


def test_emerging_instant_second_component():
    rep = emerging_regions("instant", dx=0.1)
    assert rep.passed
    # a region sitting exactly at the latent heat melts immediately
    assert rep.region_has_water[0]
    assert rep.n_water_components[0] >= 2
    assert rep.water_set_monotone
    assert math.isnan(rep.t_bound)


def test_emerging_delayed_respects_comparison_bound():
    rep = emerging_regions("delayed", dx=0.1)
    assert rep.passed
    assert rep.no_water_before_bound
    assert not rep.region_has_water[0]
    assert math.isfinite(rep.t_onset)
    assert rep.t_onset >= rep.t_bound
    assert rep.xi0_companion > 0.0
    assert rep.water_set_monotone


def test_emerging_rejects_unknown_scenario():
    with pytest.raises(ValueError):
        emerging_regions("gradual", dx=0.1)
