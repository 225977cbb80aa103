"""Uniform 1-D grids, nodal fields, and the finite-difference stencils shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class Grid1D:
    """N equal intervals on [0, L]; node-centered storage (N+1 values)."""

    L: float
    N: int

    def __post_init__(self) -> None:
        if self.N < 8:
            raise ValueError(f"need N >= 8, got {self.N}")
        if self.L <= 0.0:
            raise ValueError(f"need L > 0, got {self.L}")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def n_nodes(self) -> int:
        return self.N + 1

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.N + 1)


@dataclass
class Field:
    """Nodal scalar values on a grid."""

    grid: Grid1D
    values: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.values is None:
            self.values = np.zeros(self.grid.n_nodes)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"expected {self.grid.n_nodes} nodal values, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


def d1_central(f: Field, i: int) -> float:
    """First derivative at node i: centered inside, one-sided (first order) at the ends."""
    v, dx, n = f.values, f.grid.dx, f.grid.n_nodes
    if i == 0:
        return float((v[1] - v[0]) / dx)
    if i == n - 1:
        return float((v[n - 1] - v[n - 2]) / dx)
    return float((v[i + 1] - v[i - 1]) / (2.0 * dx))


def d2_central(f: Field, i: int) -> float:
    """Second derivative at node i; interior nodes only."""
    v, dx, n = f.values, f.grid.dx, f.grid.n_nodes
    if i <= 0 or i >= n - 1:
        raise IndexError("second-difference stencil undefined at edge nodes")
    return float((v[i + 1] - 2.0 * v[i] + v[i - 1]) / dx**2)


def trapezoid(f: Field) -> float:
    """Trapezoidal-rule integral over the whole domain."""
    return float(np.trapz(f.values, dx=f.grid.dx))


def d1_array(values: np.ndarray, dx: float) -> np.ndarray:
    """Vectorized d1_central over all nodes (one-sided at the two ends)."""
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * dx)
    out[0] = (values[1] - values[0]) / dx
    out[-1] = (values[-1] - values[-2]) / dx
    return out


def d2_array(values: np.ndarray, dx: float) -> np.ndarray:
    """Vectorized interior second differences; edge entries set to zero."""
    out = np.zeros_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / dx**2
    return out


def d1_matrix(n_nodes: int, dx: float) -> sp.csr_matrix:
    """Sparse operator matching d1_array (rows = nodes)."""
    rows, cols, vals = [], [], []
    for i in range(1, n_nodes - 1):
        rows += [i, i]
        cols += [i + 1, i - 1]
        vals += [0.5 / dx, -0.5 / dx]
    rows += [0, 0, n_nodes - 1, n_nodes - 1]
    cols += [1, 0, n_nodes - 1, n_nodes - 2]
    vals += [1.0 / dx, -1.0 / dx, 1.0 / dx, -1.0 / dx]
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_nodes, n_nodes))


def d2_matrix(n_nodes: int, dx: float) -> sp.csr_matrix:
    """Sparse operator matching d2_array (zero rows at the edges)."""
    rows, cols, vals = [], [], []
    w = 1.0 / dx**2
    for i in range(1, n_nodes - 1):
        rows += [i, i, i]
        cols += [i - 1, i, i + 1]
        vals += [w, -2.0 * w, w]
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_nodes, n_nodes))
