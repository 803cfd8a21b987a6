"""Partial-wave decomposition for 2- and 4-spinor fields.

A field on a polar grid splits into angular-momentum channels, each carrying
a two-component radial profile.  The radial Dirac operator acts channelwise
as a 2x2 first-order matrix; its sign conventions here are the ones under
which the generalized eigenfunctions of :mod:`relhankel.eigenbasis` are exact
solutions (mass diagonal (+m, -m); i-factors on the 2d off-diagonals).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.special import roots_legendre, sph_harm_y

from .grids import differentiation_matrix

__all__ = [
    "Free",
    "AharonovBohm",
    "Coulomb",
    "Model",
    "Channel",
    "RadialSpinor",
    "PolarGrid2D",
    "PolarGrid3D",
    "AngularAliasingError",
    "angular_basis_2d",
    "angular_basis_3d",
    "decompose",
    "synthesize",
    "radial_dirac_apply",
    "project_rad",
    "project_perp",
    "sgn",
]

NU_MAX = np.sqrt(15.0) / 4.0


def sgn(k) -> float:
    """Sign of the channel index with the convention sgn(0) = +1."""
    return 1.0 if k >= 0 else -1.0


@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class AharonovBohm:
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"magnetic flux alpha must lie in (0,1), got {self.alpha}")


@dataclass(frozen=True)
class Coulomb:
    nu: float

    def __post_init__(self):
        if not -NU_MAX < self.nu < 0.0:
            raise ValueError(
                f"coupling nu must lie in (-sqrt(15)/4, 0), got {self.nu}"
            )


Potential = Union[Free, AharonovBohm, Coulomb]


@dataclass(frozen=True)
class Model:
    """Problem instance: dimension, potential, mass."""

    n: int
    potential: Potential
    mass: float

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.n}")
        if self.mass <= 0:
            raise ValueError("mass must be strictly positive")
        if isinstance(self.potential, AharonovBohm) and self.n != 2:
            raise ValueError("Aharonov-Bohm potential requires n = 2")
        if isinstance(self.potential, Coulomb) and self.n != 3:
            raise ValueError("Coulomb potential requires n = 3")

    @classmethod
    def free(cls, n: int, mass: float = 1.0) -> "Model":
        return cls(n, Free(), mass)

    @classmethod
    def aharonov_bohm(cls, alpha: float, mass: float = 1.0) -> "Model":
        return cls(2, AharonovBohm(alpha), mass)

    @classmethod
    def coulomb(cls, nu: float, mass: float = 1.0) -> "Model":
        return cls(3, Coulomb(nu), mass)

    @property
    def spinor_size(self) -> int:
        return 2 if self.n == 2 else 4

    def valid_k(self, k: int) -> bool:
        return self.n == 2 or k != 0

    def radial_k(self) -> Tuple[int, ...]:
        """Channel indices making up the Dirac-radial subspace."""
        return (0,) if self.n == 2 else (-1, 1)


@dataclass(frozen=True)
class Channel:
    """Partial-wave label: k, plus the magnetic index m_k in 3d."""

    k: int
    mk: Optional[float] = None

    def validate(self, model: Model) -> None:
        if not model.valid_k(self.k):
            raise ValueError(f"k = {self.k} not admissible for n = {model.n}")
        if model.n == 3 and self.mk is not None:
            if abs(2 * self.mk - round(2 * self.mk)) > 1e-12 or round(2 * self.mk) % 2 == 0:
                raise ValueError(f"mk must be a half-integer, got {self.mk}")
            if abs(self.mk) > abs(self.k) - 0.5 + 1e-12:
                raise ValueError(f"|mk| <= |k| - 1/2 violated: k={self.k}, mk={self.mk}")

    def bessel_orders(self, model: Model) -> Tuple[float, float]:
        """(upper, lower) kernel orders for the free/AB eigenfunctions."""
        k = self.k
        if model.n == 3:
            return abs(k) + 0.5 * sgn(k), abs(k) - 0.5 * sgn(k)
        alpha = model.potential.alpha if isinstance(model.potential, AharonovBohm) else 0.0
        if k == 0 and alpha > 0.0:
            if alpha <= 0.5:
                return -alpha, 1.0 - alpha
            return alpha, alpha - 1.0
        return abs(k - alpha), abs(k - alpha) + sgn(k)

    def gamma(self, nu: float) -> float:
        g2 = self.k * self.k - nu * nu
        if g2 <= 0:
            raise ValueError(f"k^2 - nu^2 must be positive: k={self.k}, nu={nu}")
        return float(np.sqrt(g2))


def channels_up_to(model: Model, k_max: int) -> Tuple[Channel, ...]:
    """All channels with |k| <= k_max (3d: with every admissible m_k)."""
    out = []
    if model.n == 2:
        for k in range(-k_max, k_max + 1):
            out.append(Channel(k))
    else:
        for k in range(-k_max, k_max + 1):
            if k == 0:
                continue
            mks = np.arange(-abs(k) + 0.5, abs(k), 1.0)
            out.extend(Channel(k, mk) for mk in mks)
    return tuple(out)


@dataclass
class RadialSpinor:
    """Two complex components sampled on a strictly increasing radial grid.

    ``weights`` are plain-dr quadrature weights when the grid came from a
    quadrature rule; norms include the r^(n-1) measure factor.
    """

    grid: np.ndarray
    values: np.ndarray
    n: int
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid.ndim != 1 or np.any(np.diff(self.grid) <= 0) or np.any(self.grid <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        if self.values.shape != (2, len(self.grid)):
            raise ValueError(f"values must have shape (2, {len(self.grid)})")
        if self.n not in (2, 3):
            raise ValueError("n must be 2 or 3")

    def _w(self) -> np.ndarray:
        if self.weights is not None:
            return self.weights
        w = np.gradient(self.grid)
        return w

    def norm(self) -> float:
        w = self._w() * self.grid ** (self.n - 1)
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2 * w)))

    def zero_like(self) -> "RadialSpinor":
        return RadialSpinor(self.grid, np.zeros_like(self.values), self.n, self.weights)


ChannelMap = Dict[Channel, RadialSpinor]


class AngularAliasingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# angular bases
# ---------------------------------------------------------------------------


def angular_basis_2d(k: int, theta):
    """Orthonormal 2-spinor pair (Xi+, Xi-) at angle(s) theta."""
    theta = np.asarray(theta, dtype=float)
    up = np.zeros((2,) + theta.shape, dtype=complex)
    dn = np.zeros((2,) + theta.shape, dtype=complex)
    up[0] = np.exp(1j * k * theta) / np.sqrt(2.0 * np.pi)
    dn[1] = np.exp(1j * (k + 1) * theta) / np.sqrt(2.0 * np.pi)
    return up, dn


def _omega(k: int, mk: float, theta1, theta2):
    """Two-component spherical spinor Omega_{k, mk}."""
    ell = int(round(abs(k + 0.5) - 0.5))
    norm = 1.0 / np.sqrt(abs(2 * k + 1))
    w1 = np.sqrt(abs(k - mk + 0.5))
    w2 = sgn(-k) * np.sqrt(abs(k + mk + 0.5))
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    shape = np.broadcast(theta1, theta2).shape
    comp = np.zeros((2,) + shape, dtype=complex)
    m1 = mk - 0.5
    m2 = mk + 0.5
    if abs(w1) > 0:
        comp[0] = w1 * sph_harm_y(ell, int(round(m1)), theta1, theta2)
    if abs(w2) > 0:
        comp[1] = w2 * sph_harm_y(ell, int(round(m2)), theta1, theta2)
    return norm * comp


def angular_basis_3d(k: int, mk: float, theta1, theta2):
    """Orthonormal 4-spinor pair (Xi+, Xi-) on the sphere.

    theta1 is the polar angle, theta2 the azimuth.
    """
    if k == 0:
        raise ValueError("k = 0 is not admissible in 3d")
    Channel(k, mk).validate(Model.free(3))
    om_up = _omega(k, mk, theta1, theta2)
    om_dn = _omega(-k, mk, theta1, theta2)
    shape = om_up.shape[1:]
    up = np.zeros((4,) + shape, dtype=complex)
    dn = np.zeros((4,) + shape, dtype=complex)
    up[0], up[1] = 1j * om_up[0], 1j * om_up[1]
    dn[2], dn[3] = om_dn[0], om_dn[1]
    return up, dn


# ---------------------------------------------------------------------------
# polar grids, analysis and synthesis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarGrid2D:
    r_nodes: np.ndarray
    r_weights: np.ndarray
    thetas: np.ndarray = field(default=None)

    @classmethod
    def build(cls, r_nodes, r_weights, n_theta: int) -> "PolarGrid2D":
        thetas = np.arange(n_theta) * 2.0 * np.pi / n_theta
        return cls(np.asarray(r_nodes, float), np.asarray(r_weights, float), thetas)

    @property
    def theta_weight(self) -> float:
        return 2.0 * np.pi / len(self.thetas)


@dataclass(frozen=True)
class PolarGrid3D:
    r_nodes: np.ndarray
    r_weights: np.ndarray
    theta1: np.ndarray
    theta1_weights: np.ndarray
    theta2: np.ndarray

    @classmethod
    def build(cls, r_nodes, r_weights, n_theta1: int, n_theta2: int) -> "PolarGrid3D":
        x, w = roots_legendre(n_theta1)
        theta1 = np.arccos(x[::-1])
        w1 = w[::-1]
        theta2 = np.arange(n_theta2) * 2.0 * np.pi / n_theta2
        return cls(np.asarray(r_nodes, float), np.asarray(r_weights, float), theta1, w1, theta2)

    @property
    def theta2_weight(self) -> float:
        return 2.0 * np.pi / len(self.theta2)


PolarGrid = Union[PolarGrid2D, PolarGrid3D]


def _check_nyquist(model: Model, grid: PolarGrid, k_max: int) -> None:
    if model.n == 2:
        needed = 2 * (k_max + 1) + 1
        if len(grid.thetas) < needed:
            raise AngularAliasingError(
                f"n_theta = {len(grid.thetas)} cannot resolve |k| <= {k_max}; need >= {needed}"
            )
    else:
        if len(grid.theta1) < k_max + 1 or len(grid.theta2) < 2 * k_max + 1:
            raise AngularAliasingError(
                f"angular grid ({len(grid.theta1)}, {len(grid.theta2)}) cannot resolve |k| <= {k_max}"
            )


def _basis_arrays(model: Model, channel: Channel, grid: PolarGrid):
    if model.n == 2:
        return angular_basis_2d(channel.k, grid.thetas)
    t1 = grid.theta1[:, None]
    t2 = grid.theta2[None, :]
    return angular_basis_3d(channel.k, channel.mk, t1, t2)


def _angular_weights(model: Model, grid: PolarGrid) -> np.ndarray:
    if model.n == 2:
        return np.full(len(grid.thetas), grid.theta_weight)
    return grid.theta1_weights[:, None] * grid.theta2_weight


def decompose(model: Model, field_values: np.ndarray, grid: PolarGrid,
              k_max: int) -> ChannelMap:
    """Project a spinor field onto every channel with |k| <= k_max.

    2d fields have shape (n_r, n_theta, 2); 3d fields
    (n_r, n_theta1, n_theta2, 4).
    """
    _check_nyquist(model, grid, k_max)
    field_values = np.asarray(field_values, dtype=complex)
    wa = _angular_weights(model, grid)
    out: ChannelMap = {}
    for channel in channels_up_to(model, k_max):
        up, dn = _basis_arrays(model, channel, grid)
        if model.n == 2:
            comp_up = np.einsum("ct,rtc->r", np.conj(up) * wa, field_values)
            comp_dn = np.einsum("ct,rtc->r", np.conj(dn) * wa, field_values)
        else:
            comp_up = np.einsum("cab,rabc->r", np.conj(up) * wa, field_values)
            comp_dn = np.einsum("cab,rabc->r", np.conj(dn) * wa, field_values)
        out[channel] = RadialSpinor(
            grid.r_nodes, np.stack([comp_up, comp_dn]), model.n, grid.r_weights
        )
    return out


def synthesize(model: Model, channel_map: ChannelMap, grid: PolarGrid) -> np.ndarray:
    """Rebuild the spinor field from channel profiles (inverse of decompose)."""
    n_r = len(grid.r_nodes)
    if model.n == 2:
        shape = (n_r, len(grid.thetas), 2)
    else:
        shape = (n_r, len(grid.theta1), len(grid.theta2), 4)
    out = np.zeros(shape, dtype=complex)
    for channel, spinor in channel_map.items():
        up, dn = _basis_arrays(model, channel, grid)
        if model.n == 2:
            out += np.einsum("r,ct->rtc", spinor.values[0], up)
            out += np.einsum("r,ct->rtc", spinor.values[1], dn)
        else:
            out += np.einsum("r,cab->rabc", spinor.values[0], up)
            out += np.einsum("r,cab->rabc", spinor.values[1], dn)
    return out


# ---------------------------------------------------------------------------
# radial Dirac operator
# ---------------------------------------------------------------------------


def radial_dirac_apply(model: Model, channel: Channel, spinor: RadialSpinor) -> RadialSpinor:
    """Apply the channel operator d_k with 4th-order finite differences.

    2d (free/AB, flux alpha, alpha = 0 when free):

        [[ m,  i(d/dr + (k+1-alpha)/r) ],
         [ i(d/dr + (alpha-k)/r),  -m  ]]

    3d (free/Coulomb, V = -nu/r):

        [[ m+V,  -(d/dr - (k-1)/r) ],
         [ (d/dr + (k+1)/r),  -m+V ]]
    """
    channel.validate(model)
    r = spinor.grid
    if len(r) < 5:
        raise ValueError("radial grid needs at least 5 nodes for the stencil")
    D = differentiation_matrix(r)
    f, g = spinor.values
    df = D @ f
    dg = D @ g
    m = model.mass
    k = channel.k
    if model.n == 2:
        alpha = model.potential.alpha if isinstance(model.potential, AharonovBohm) else 0.0
        top = m * f + 1j * (dg + (k + 1 - alpha) / r * g)
        bot = 1j * (df + (alpha - k) / r * f) - m * g
    else:
        V = -model.potential.nu / r if isinstance(model.potential, Coulomb) else 0.0
        top = (m + V) * f - (dg - (k - 1) / r * g)
        bot = (df + (k + 1) / r * f) + (-m + V) * g
    return RadialSpinor(r, np.stack([top, bot]), model.n, spinor.weights)


# ---------------------------------------------------------------------------
# radial / orthogonal projectors
# ---------------------------------------------------------------------------


def project_rad(model: Model, channel_map: ChannelMap) -> ChannelMap:
    keep = set(model.radial_k())
    return {ch: sp for ch, sp in channel_map.items() if ch.k in keep}


def project_perp(model: Model, channel_map: ChannelMap) -> ChannelMap:
    keep = set(model.radial_k())
    return {ch: sp for ch, sp in channel_map.items() if ch.k not in keep}
