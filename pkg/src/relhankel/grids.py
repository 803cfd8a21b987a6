"""Quadrature grids and finite differences shared by the transform stack.

Radial and momentum integrals use composite Gauss-Legendre panels sized
against the fastest oscillation they must resolve (quarter-wavelength rule
for kernels J_nu(p r)); radial derivatives use 5-point Fornberg stencils,
4th order in the interior and one-sided at the ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=64)
def _legendre_rule(n: int):
    x, w = roots_legendre(n)
    return x, w


def gauss_panels(edges: np.ndarray, nodes_per_panel: int = 6):
    """Composite Gauss-Legendre rule on the panels defined by ``edges``.

    Returns (nodes, weights), nodes strictly increasing.
    """
    edges = np.asarray(edges, dtype=float)
    x0, w0 = _legendre_rule(nodes_per_panel)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class Quadrature1D:
    """Nodes and weights of a plain-dx quadrature rule on (a, b]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> complex:
        return np.sum(values * self.weights, axis=-1)


def radial_quadrature(r_max: float, osc_scale: float, nodes_per_panel: int = 6,
                      origin_refinement: int = 4) -> Quadrature1D:
    """Panelled rule on (0, r_max] resolving oscillations exp(i*osc_scale*r).

    Panel width <= quarter wavelength pi/(2*osc_scale).  ``origin_refinement``
    geometrically splits the first panel so integrable r^(gamma-1) kernel
    singularities are captured.
    """
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    width = np.pi / (2.0 * max(osc_scale, 1e-12))
    n_panels = max(8, int(np.ceil(r_max / width)))
    edges = np.linspace(0.0, r_max, n_panels + 1)
    if origin_refinement > 0:
        first = edges[1]
        sub = first * 0.5 ** np.arange(origin_refinement, 0, -1)
        edges = np.concatenate([[0.0], sub, edges[1:]])
    nodes, weights = gauss_panels(edges, nodes_per_panel)
    return Quadrature1D(nodes, weights)


def momentum_quadrature(p_max: float, r_max: float,
                        nodes_per_panel: int = 6) -> Quadrature1D:
    """Rule on (0, p_max] resolving exp(i*p*r) up to r = r_max."""
    return radial_quadrature(p_max, r_max, nodes_per_panel, origin_refinement=2)


def fornberg_weights(x: np.ndarray, x0: float, order: int) -> np.ndarray:
    """Finite-difference weights for d^order/dx^order at x0 (Fornberg 1988)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def differentiation_matrix(grid: np.ndarray, stencil: int = 5) -> np.ndarray:
    """Sparse-in-structure d/dr matrix: centered 5-point stencils inside,
    one-sided at the ends.  4th-order accurate on smooth grids."""
    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    if n < stencil:
        raise ValueError(f"grid needs at least {stencil} nodes")
    D = np.zeros((n, n))
    half = stencil // 2
    for i in range(n):
        lo = min(max(0, i - half), n - stencil)
        idx = np.arange(lo, lo + stencil)
        D[i, idx] = fornberg_weights(grid[idx], grid[i], 1)
    return D


def differentiate(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """First derivative of samples along the last axis."""
    D = differentiation_matrix(grid)
    return values @ D.T


def uniform_grid(a: float, b: float, n: int) -> np.ndarray:
    return np.linspace(a, b, n)
