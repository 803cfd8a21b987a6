"""Channelwise relativistic Hankel transform.

Forward analysis pairs a radial spinor against the generalized eigenfunction
in the r^(n-1) dr measure; inversion integrates the conjugate kernel over the
spectral measure E dE, done in momentum (E dE = p dp) to avoid the crowding
near |E| = m.  Free and Aharonov-Bohm transforms are two-sided in energy;
the Coulomb one lives on the positive half-line only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional

import numpy as np

from .channels import Channel, Coulomb, Model, RadialSpinor, radial_dirac_apply
from .eigenbasis import Normalization, eigenfunction_matrix
from .grids import Quadrature1D, momentum_quadrature, radial_quadrature

__all__ = [
    "QuadratureSpec",
    "SpectralDensity",
    "TruncationError",
    "GridMismatchError",
    "UnsupportedSectorError",
    "DiagonalizationReport",
    "forward_transform",
    "inverse_transform",
    "verify_diagonalization",
    "sectors_for",
]


class TruncationError(ValueError):
    """Radial data carries mass beyond the truncation radius."""


class GridMismatchError(ValueError):
    """Spinor is not sampled on the spec's quadrature grid."""


class UnsupportedSectorError(ValueError):
    """Negative-energy sector requested for the Coulomb model."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation radii and panel resolution of the transform quadratures."""

    r_max: float
    p_max: float
    nodes_per_panel: int = 6
    origin_refinement: int = 4
    truncation_tol: float = 1e-6

    def __post_init__(self):
        if self.r_max <= 0 or self.p_max <= 0:
            raise ValueError("r_max and p_max must be positive")
        if self.nodes_per_panel < 3:
            raise ValueError("nodes_per_panel must be >= 3")

    @classmethod
    def for_model(cls, model: Model, r_max: Optional[float] = None,
                  p_max: Optional[float] = None, **kw) -> "QuadratureSpec":
        m = model.mass
        return cls(r_max if r_max is not None else 40.0 / m,
                   p_max if p_max is not None else 40.0 * m, **kw)

    def radial_rule(self) -> Quadrature1D:
        return _radial_rule_cached(self)

    def momentum_rule(self) -> Quadrature1D:
        return _momentum_rule_cached(self)


@lru_cache(maxsize=32)
def _radial_rule_cached(spec: QuadratureSpec) -> Quadrature1D:
    return radial_quadrature(spec.r_max, spec.p_max, spec.nodes_per_panel,
                             spec.origin_refinement)


@lru_cache(maxsize=32)
def _momentum_rule_cached(spec: QuadratureSpec) -> Quadrature1D:
    return momentum_quadrature(spec.p_max, spec.r_max, spec.nodes_per_panel)


def sectors_for(model: Model) -> tuple:
    return (1,) if isinstance(model.potential, Coulomb) else (1, -1)


@dataclass
class SpectralDensity:
    """Spectral-side data: complex density per energy-sign sector.

    ``values`` maps the sector sign (+1, -1) to samples on the shared
    positive momentum grid; the energy measure E dE equals p dp there.
    """

    p_nodes: np.ndarray
    p_weights: np.ndarray
    mass: float
    values: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.p_nodes = np.asarray(self.p_nodes, dtype=float)
        self.p_weights = np.asarray(self.p_weights, dtype=float)
        if np.any(self.p_nodes <= 0) or np.any(np.diff(self.p_nodes) <= 0):
            raise ValueError("p grid must be positive and strictly increasing")
        for s, v in self.values.items():
            if s not in (1, -1):
                raise ValueError("sector keys must be +1 or -1")
            if np.shape(v) != np.shape(self.p_nodes):
                raise ValueError("sector values must match the p grid")
            self.values[s] = np.asarray(v, dtype=complex)

    @property
    def energy_grid(self) -> np.ndarray:
        """Positive-sector energies, strictly increasing in (m, E_max]."""
        return np.sqrt(self.p_nodes**2 + self.mass**2)

    def sectors(self):
        return tuple(sorted(self.values.keys(), reverse=True))

    def norm(self) -> float:
        total = 0.0
        for v in self.values.values():
            total += float(np.sum(np.abs(v) ** 2 * self.p_nodes * self.p_weights))
        return float(np.sqrt(total))

    def map_values(self, fn) -> "SpectralDensity":
        """New density with fn(sector, energies, values) applied per sector."""
        E = self.energy_grid
        new = {s: np.asarray(fn(s, s * E, v), dtype=complex)
               for s, v in self.values.items()}
        return SpectralDensity(self.p_nodes, self.p_weights, self.mass, new)


@lru_cache(maxsize=16)
def _kernel(model: Model, channel: Channel, sector: int, spec: QuadratureSpec,
            normalization: Normalization) -> np.ndarray:
    p = spec.momentum_rule().nodes
    r = spec.radial_rule().nodes
    return eigenfunction_matrix(model, channel, sector, p, r, normalization)


def _check_grid(psi: RadialSpinor, spec: QuadratureSpec) -> None:
    r = spec.radial_rule().nodes
    if len(psi.grid) != len(r) or not np.allclose(psi.grid, r, rtol=1e-12, atol=0):
        raise GridMismatchError("spinor must be sampled on spec.radial_rule().nodes")


def _check_truncation(model: Model, psi: RadialSpinor, spec: QuadratureSpec) -> None:
    rule = spec.radial_rule()
    dens = np.sum(np.abs(psi.values) ** 2, axis=0) * psi.grid ** (model.n - 1) * rule.weights
    total = float(np.sum(dens))
    if total == 0.0:
        return
    tail = float(np.sum(dens[psi.grid > 0.95 * spec.r_max]))
    if tail > spec.truncation_tol * total:
        raise TruncationError(
            f"{tail/total:.2e} of the data mass sits in the last 5% of the radial window"
        )


def forward_transform(model: Model, channel: Channel, psi: RadialSpinor,
                      spec: QuadratureSpec,
                      normalization: Normalization = Normalization.ISOMETRIC) -> SpectralDensity:
    """phi_s(E) = int psi_k(E, r)^T psi(r) r^(n-1) dr per energy sector."""
    channel.validate(model)
    _check_grid(psi, spec)
    _check_truncation(model, psi, spec)
    rrule = spec.radial_rule()
    prule = spec.momentum_rule()
    meas = psi.grid ** (model.n - 1) * rrule.weights
    values = {}
    for s in sectors_for(model):
        K = _kernel(model, channel, s, spec, normalization)
        values[s] = K[0] @ (psi.values[0] * meas) + K[1] @ (psi.values[1] * meas)
    return SpectralDensity(prule.nodes, prule.weights, model.mass, values)


def inverse_transform(model: Model, channel: Channel, density: SpectralDensity,
                      spec: QuadratureSpec,
                      normalization: Normalization = Normalization.ISOMETRIC) -> RadialSpinor:
    """Synthesis against the conjugate kernel over E dE (computed as p dp)."""
    channel.validate(model)
    coul = isinstance(model.potential, Coulomb)
    prule = spec.momentum_rule()
    if len(density.p_nodes) != len(prule.nodes) or not np.allclose(
            density.p_nodes, prule.nodes, rtol=1e-12, atol=0):
        raise GridMismatchError("density must live on spec.momentum_rule().nodes")
    out = None
    for s, v in density.values.items():
        if coul and s == -1:
            raise UnsupportedSectorError(
                "the Coulomb transform has no negative-energy sector")
        K = _kernel(model, channel, s, spec, normalization)
        contrib = np.einsum("ipr,p->ir", np.conj(K), v * density.p_nodes * density.p_weights)
        out = contrib if out is None else out + contrib
    if out is None:
        out = np.zeros((2, len(spec.radial_rule().nodes)), dtype=complex)
    rrule = spec.radial_rule()
    return RadialSpinor(rrule.nodes, out, model.n, rrule.weights)


@dataclass(frozen=True)
class DiagonalizationReport:
    """Residual of P_k(d_k psi) = E * P_k(psi); report-only."""

    residual: float
    numerator: float
    denominator: float


def verify_diagonalization(model: Model, channel: Channel, psi: RadialSpinor,
                           spec: QuadratureSpec,
                           normalization: Normalization = Normalization.ISOMETRIC
                           ) -> DiagonalizationReport:
    phi = forward_transform(model, channel, psi, spec, normalization)
    dpsi = radial_dirac_apply(model, channel, psi)
    phi_d = forward_transform(model, channel, dpsi, spec, normalization)
    num = 0.0
    den = 0.0
    E = phi.energy_grid
    for s in phi.sectors():
        target = s * E * phi.values[s]
        num += float(np.sum(np.abs(phi_d.values[s] - target) ** 2
                            * phi.p_nodes * phi.p_weights))
        den += float(np.sum(np.abs(target) ** 2 * phi.p_nodes * phi.p_weights))
    if den == 0.0:
        return DiagonalizationReport(0.0, float(np.sqrt(num)), 0.0)
    return DiagonalizationReport(float(np.sqrt(num / den)), float(np.sqrt(num)),
                                 float(np.sqrt(den)))
