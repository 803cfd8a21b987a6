"""Mixed space-time norms, spectral Sobolev norms, and the admissibility
algebra of the three dispersive-estimate regions.

Sobolev norms are defined through the transform (|E|^s multiplier), which
diagonalizes each model's operator; on the spectrum |E| >= m, so the
homogeneous/inhomogeneous distinction is a bounded factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .channels import AharonovBohm, Channel, Coulomb, Free, Model, PolarGrid2D
from .hankel import SpectralDensity

__all__ = [
    "MixedNormSpec",
    "AdmissibleRegion",
    "mixed_norm",
    "sobolev_norm",
    "beta_exponent",
    "admissible_region",
]


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponents of the L^p_t L^q_{r^{n-1}dr} L^2_angle norm."""

    p: float
    q: float
    time_window: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.p < 2 or self.q < 2:
            raise ValueError("p, q >= 2 required")
        if math.isinf(self.q):
            raise ValueError("q = infinity is not quadrature-representable")


def _trapezoid_weights(t: np.ndarray) -> np.ndarray:
    w = np.zeros_like(t)
    dt = np.diff(t)
    w[:-1] += dt / 2.0
    w[1:] += dt / 2.0
    return w


def mixed_norm(u: np.ndarray, times: np.ndarray, grid, spec: MixedNormSpec,
               n: int) -> float:
    """L^p_t L^q_{r^{n-1}dr} L^2_angle of time-indexed field samples.

    ``u`` has shape (n_t, n_r, ..., components); the angular axes and the
    component axis are contracted in L^2 with the grid's surface weights.
    """
    times = np.asarray(times, dtype=float)
    u = np.asarray(u, dtype=complex)
    if u.shape[0] != len(times):
        raise ValueError("leading axis of u must match times")
    if isinstance(grid, PolarGrid2D):
        ang_w = np.full(len(grid.thetas), grid.theta_weight)
        dens = np.einsum("trtc...->trt", np.abs(u) ** 2) if False else None
        l2ang = np.sqrt(np.einsum("trac,a->tr", np.abs(u) ** 2, ang_w))
    else:
        ang_w = grid.theta1_weights[:, None] * grid.theta2_weight
        l2ang = np.sqrt(np.einsum("trabc,ab->tr", np.abs(u) ** 2, ang_w))
    r = grid.r_nodes
    wr = grid.r_weights * r ** (n - 1)
    lq = np.sum(l2ang**spec.q * wr[None, :], axis=1) ** (1.0 / spec.q)
    if math.isinf(spec.p):
        return float(np.max(lq))
    wt = _trapezoid_weights(times)
    return float(np.sum(lq**spec.p * wt) ** (1.0 / spec.p))


def sobolev_norm(spectral: Dict[Channel, SpectralDensity], s: float) -> float:
    """Spectral H^s norm: (sum_k int |E|^{2s} |phi_k|^2 E dE)^(1/2), |s| <= 1."""
    if abs(s) > 1:
        raise ValueError("|s| <= 1 required")
    total = 0.0
    for phi in spectral.values():
        E = phi.energy_grid
        for v in phi.values.values():
            total += float(np.sum(np.abs(E) ** (2 * s) * np.abs(v) ** 2
                                  * phi.p_nodes * phi.p_weights))
    return math.sqrt(total)


def beta_exponent(p: float, n: int) -> float:
    """Large-radius decay exponent: 1/p - (n-1)/2 on [2,4), 1/p - (3n-4)/6 on [4,inf)."""
    if p < 2:
        raise ValueError("p >= 2 required")
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    inv = 0.0 if math.isinf(p) else 1.0 / p
    if p < 4:
        return inv - (n - 1) / 2.0
    return inv - (3.0 * n - 4.0) / 6.0


@dataclass(frozen=True)
class AdmissibleRegion:
    """Membership predicate and boundary data for one model's (p, q) region."""

    model: Model
    q_max: float
    p_min: float
    degenerate: bool

    def contains(self, p: float, q: float) -> bool:
        if p < 2 or q < 2 or math.isinf(q):
            return (math.isinf(p) and q == 2)
        if math.isinf(p) and q == 2:
            return True
        if self.degenerate:
            return False
        ip = 0.0 if math.isinf(p) else 1.0 / p
        pot = self.model.potential
        if isinstance(pot, Free):
            if self.model.n == 2:
                return p > 2 and ip + 1.0 / q < 0.5
            return ip + 2.0 / q < 1.0
        if isinstance(pot, AharonovBohm):
            if q >= self.q_max or p <= self.p_min:
                return False
            return 2.0 / q + self.p_min * ip * (1.0 - 2.0 / self.q_max) < 1.0
        return q < self.q_max and ip + 2.0 / q < 1.0

    def s_low(self, p: float, q: float) -> float:
        ip = 0.0 if math.isinf(p) else 1.0 / p
        n = self.model.n
        return n / 2.0 - 2.0 * ip - n / q

    def s_high(self, p: float, q: float) -> float:
        ip = 0.0 if math.isinf(p) else 1.0 / p
        n = self.model.n
        return n / 2.0 - ip - n / q

    def boundary(self) -> Dict[str, float]:
        out = {"q_max": self.q_max, "p_min": self.p_min}
        pot = self.model.potential
        if isinstance(pot, AharonovBohm):
            out["alpha"] = pot.alpha
        if isinstance(pot, Coulomb):
            out["nu"] = pot.nu
        return out


def admissible_region(model: Model) -> AdmissibleRegion:
    """Strichartz-admissible (p, q) region; (infinity, 2) always belongs."""
    pot = model.potential
    if isinstance(pot, Free):
        return AdmissibleRegion(model, math.inf, 2.0, False)
    if isinstance(pot, AharonovBohm):
        a = pot.alpha
        q_a = 2.0 / a if a <= 0.5 else 2.0 / (1.0 - a)
        if q_a == 4.0:
            # p(alpha) divides by zero: the region collapses to (infinity, 2)
            return AdmissibleRegion(model, q_a, math.inf, True)
        p_a = (2.0 * q_a - 4.0) / (q_a - 4.0)
        return AdmissibleRegion(model, q_a, p_a, False)
    nu = pot.nu
    q_nu = 3.0 / (1.0 - math.sqrt(1.0 - nu * nu))
    return AdmissibleRegion(model, q_nu, 2.0, False)
