"""Uniform 1-D grid with constant far-field extension, plus initial sampling.

The window [x_left, x_left + (m-1)*dx] carries the unknowns; outside it the
field is modeled as identically equal to the far-field constants.  That
matches every datum used here (step data and compactly supported
perturbations of them), and the operator module consumes the far field
exactly through cumulative tail weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# nodes/weights of 5-point Gauss-Legendre on [-1, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


@dataclass(frozen=True)
class Grid1D:
    """Nodes x_beta = x_left + beta*dx for beta = 0..m-1."""

    x_left: float
    dx: float
    m: int

    def __post_init__(self):
        if not (np.isfinite(self.dx) and self.dx > 0.0):
            raise ValueError("dx must be finite and > 0")
        if int(self.m) != self.m or self.m < 3:
            raise ValueError("m must be an integer >= 3")
        if not np.isfinite(self.x_left):
            raise ValueError("x_left must be finite")

    @property
    def x_right(self) -> float:
        return self.x_left + (self.m - 1) * self.dx

    def nodes(self) -> np.ndarray:
        return self.x_left + self.dx * np.arange(self.m)

    @classmethod
    def centered(cls, radius: float, dx: float) -> "Grid1D":
        """Symmetric window [-radius, radius] with node spacing dx."""
        half = int(round(radius / dx))
        if half < 1:
            raise ValueError("radius must cover at least one cell")
        return cls(x_left=-half * dx, dx=dx, m=2 * half + 1)


@dataclass(frozen=True)
class FarField:
    """Constant extension values left of the window and right of it."""

    left_value: float
    right_value: float

    def __post_init__(self):
        if not (np.isfinite(self.left_value) and np.isfinite(self.right_value)):
            raise ValueError("far-field values must be finite")


@dataclass(frozen=True, eq=False)
class EnthalpyState:
    """Grid samples V_beta of the enthalpy at one time, with far field."""

    grid: Grid1D
    far: FarField
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.m,):
            raise ValueError(f"values must have shape ({self.grid.m},), got {v.shape}")
        object.__setattr__(self, "values", v)


def _sample(h0, x: np.ndarray) -> np.ndarray:
    """Evaluate h0 at the points x, accepting scalar-only callables."""
    try:
        v = np.asarray(h0(x), dtype=float)
        if v.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        v = np.array([float(h0(xx)) for xx in x])
    return v


def init_pointwise(grid: Grid1D, far: FarField, h0) -> EnthalpyState:
    """Initial state with values h0(x_beta).

    Nodes lying exactly on a jump of h0 get whatever branch h0 itself
    assigns there (step data use the convention h0(0) = left branch).
    """
    v = _sample(h0, grid.nodes())
    if not np.all(np.isfinite(v)):
        bad = grid.nodes()[~np.isfinite(v)]
        raise ValueError(f"initial datum is not finite at x = {bad[:5]}")
    return EnthalpyState(grid=grid, far=far, values=v, time=0.0)


def init_cell_average(grid: Grid1D, far: FarField, h0) -> EnthalpyState:
    """Initial state with cell averages of h0 over [x_beta - dx/2, x_beta + dx/2].

    Each cell is integrated by 5-point Gauss-Legendre on each half-cell, so
    a jump located exactly at a node is split evenly between its branches
    and polynomials up to degree 9 are integrated exactly.
    """
    x = grid.nodes()
    quarter = 0.25 * grid.dx
    # evaluation points of the two half-cell panels, shape (m, 10)
    pts = x[:, None] + np.concatenate(
        [-quarter + quarter * _GL_NODES, quarter + quarter * _GL_NODES]
    )[None, :]
    vals = _sample(h0, pts.ravel()).reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("initial datum is not finite inside some cell")
    # each panel mean is sum(w_i f_i)/2; the cell mean averages the panels
    w = np.concatenate([_GL_WEIGHTS, _GL_WEIGHTS]) / 4.0
    v = vals @ w
    return EnthalpyState(grid=grid, far=far, values=v, time=0.0)
