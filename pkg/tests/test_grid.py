import numpy as np
import pytest

from fracstefan.grid import (
    EnthalpyState,
    FarField,
    Grid1D,
    init_cell_average,
    init_pointwise,
)


def test_centered_window():
    grid = Grid1D.centered(2.0, 0.5)
    x = grid.nodes()
    assert grid.m == 9
    assert x[0] == -2.0 and x[-1] == 2.0
    np.testing.assert_allclose(np.diff(x), 0.5)
    assert grid.x_right == pytest.approx(2.0)


def test_centered_rounds_radius_to_cells():
    grid = Grid1D.centered(1.04, 0.1)
    assert grid.m == 21
    assert grid.x_left == pytest.approx(-1.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(x_left=0.0, dx=-0.1, m=5)
    with pytest.raises(ValueError):
        Grid1D(x_left=0.0, dx=0.1, m=2)
    with pytest.raises(ValueError):
        Grid1D(x_left=np.nan, dx=0.1, m=5)
    with pytest.raises(ValueError):
        Grid1D.centered(0.01, 0.1)


def test_far_field_validation():
    FarField(1.0, -2.0)
    with pytest.raises(ValueError):
        FarField(np.inf, 0.0)


def test_state_shape_check():
    grid = Grid1D.centered(1.0, 0.5)
    with pytest.raises(ValueError):
        EnthalpyState(grid, FarField(0.0, 0.0), np.zeros(4))
    st = EnthalpyState(grid, FarField(0.0, 0.0), np.arange(grid.m))
    assert st.values.dtype == float


def test_init_pointwise_samples_nodes():
    grid = Grid1D.centered(1.0, 0.25)
    st = init_pointwise(grid, FarField(0.0, 0.0), lambda x: x ** 2)
    np.testing.assert_array_equal(st.values, grid.nodes() ** 2)
    assert st.time == 0.0


def test_init_pointwise_accepts_scalar_only_callable():
    grid = Grid1D.centered(1.0, 0.5)

    def h0(x):
        if x < 0:
            return 1.0
        return 2.0

    st = init_pointwise(grid, FarField(1.0, 2.0), h0)
    np.testing.assert_array_equal(st.values, [1.0, 1.0, 2.0, 2.0, 2.0])


def test_init_pointwise_rejects_nonfinite():
    grid = Grid1D.centered(1.0, 0.5)
    with pytest.raises(ValueError):
        init_pointwise(grid, FarField(0.0, 0.0),
                       lambda x: np.where(x == 0.0, np.inf, 1.0))


def test_cell_average_exact_for_cubics():
    """The two-panel Gauss rule integrates low-degree polynomials exactly:
    the cell mean of x^3 over [x-dx/2, x+dx/2] is x^3 + x dx^2 / 4."""
    grid = Grid1D.centered(2.0, 0.4)
    st = init_cell_average(grid, FarField(0.0, 0.0), lambda x: x ** 3)
    x = grid.nodes()
    np.testing.assert_allclose(st.values, x ** 3 + x * grid.dx ** 2 / 4.0,
                               rtol=0, atol=1e-14)


def test_cell_average_splits_jump_at_node():
    """A jump exactly at a node contributes half of each branch."""
    grid = Grid1D.centered(1.0, 0.5)
    st = init_cell_average(grid, FarField(2.0, 0.0),
                           lambda x: np.where(np.asarray(x) < 0.0, 2.0, 0.0))
    assert st.values[2] == pytest.approx(1.0)
    assert st.values[0] == pytest.approx(2.0)
    assert st.values[-1] == pytest.approx(0.0)


def test_cell_average_matches_pointwise_for_smooth_fine_grid():
    grid = Grid1D.centered(2.0, 0.01)
    f = lambda x: np.exp(-np.asarray(x) ** 2)
    a = init_cell_average(grid, FarField(0.0, 0.0), f).values
    p = init_pointwise(grid, FarField(0.0, 0.0), f).values
    assert np.max(np.abs(a - p)) < 1e-4
