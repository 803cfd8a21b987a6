"""Time evolution as a unimodular spectral multiplier.

No time stepping: u_k(t) = P_k^{-1}(e^{itE} phi_k), exact in t at the
spectral level.  Band filters and the positive-spectrum projection are
multiplier cutoffs and commute with each other and with the flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .channels import (
    Channel,
    ChannelMap,
    Coulomb,
    Model,
    PolarGrid,
    decompose,
    synthesize,
)
from .eigenbasis import Normalization
from .hankel import QuadratureSpec, SpectralDensity, forward_transform, inverse_transform

__all__ = [
    "EvolutionPlan",
    "energy_filter",
    "positive_projection",
    "evolve",
    "evolve_field",
]

SpectralMap = Dict[Channel, SpectralDensity]


@dataclass(frozen=True)
class EvolutionPlan:
    """Times to evaluate, an optional |E| band filter, and the sector flag."""

    times: Tuple[float, ...]
    band: Optional[Tuple[float, float]] = None
    positive_only: bool = False

    def __post_init__(self):
        if self.band is not None and self.band[0] > self.band[1]:
            raise ValueError("band must be an interval (lo, hi)")

    @classmethod
    def for_model(cls, model: Model, times: Sequence[float],
                  band: Optional[Tuple[float, float]] = None,
                  positive_only: bool = False) -> "EvolutionPlan":
        if isinstance(model.potential, Coulomb):
            positive_only = True
        if band is not None and band[1] < model.mass:
            raise ValueError("band lies below the spectrum")
        return cls(tuple(float(t) for t in times), band, positive_only)


def energy_filter(model: Model, density: SpectralDensity,
                  band: Optional[Tuple[float, float]]) -> SpectralDensity:
    """Hard indicator cutoff chi_band(|E|); band=None is the identity."""
    if band is None:
        return density.map_values(lambda s, E, v: v)
    lo, hi = band
    return density.map_values(lambda s, E, v: np.where((np.abs(E) >= lo) & (np.abs(E) <= hi), v, 0.0))


def positive_projection(model: Model, density: SpectralDensity) -> SpectralDensity:
    """Zero the negative sector; idempotent.  Coulomb models only."""
    if not isinstance(model.potential, Coulomb):
        raise ValueError("positive_projection is defined for the Coulomb model")
    return density.map_values(lambda s, E, v: v if s == 1 else np.zeros_like(v))


def _phase(density: SpectralDensity, t: float) -> SpectralDensity:
    return density.map_values(lambda s, E, v: np.exp(1j * t * E) * v)


def evolve(model: Model, spectral: SpectralMap, t: float, spec: QuadratureSpec,
           normalization: Normalization = Normalization.ISOMETRIC) -> ChannelMap:
    """u_k(t, r) = P_k^{-1}(e^{itE} phi_k)(r) for every channel."""
    return {
        ch: inverse_transform(model, ch, _phase(phi, t), spec, normalization)
        for ch, phi in spectral.items()
    }


def evolve_field(model: Model, field_values: np.ndarray, plan: EvolutionPlan,
                 grid: PolarGrid, k_max: int, spec: QuadratureSpec,
                 normalization: Normalization = Normalization.ISOMETRIC) -> np.ndarray:
    """Full pipeline: decompose, transform, filter, evolve, synthesize.

    Returns field samples with a leading time axis.
    """
    if isinstance(model.potential, Coulomb) and not plan.positive_only:
        raise ValueError("Coulomb evolution requires a positive-only plan")
    channel_map = decompose(model, field_values, grid, k_max)
    spectral: SpectralMap = {}
    for ch, spinor in channel_map.items():
        phi = forward_transform(model, ch, spinor, spec, normalization)
        phi = energy_filter(model, phi, plan.band)
        if plan.positive_only and not isinstance(model.potential, Coulomb):
            phi = phi.map_values(lambda s, E, v: v if s == 1 else np.zeros_like(v))
        spectral[ch] = phi
    frames = []
    for t in plan.times:
        snapshot = evolve(model, spectral, t, spec, normalization)
        frames.append(synthesize(model, snapshot, grid))
    return np.stack(frames)
