"""Generalized eigenfunctions of the radial Dirac operators.

Conventions (fixed once by eigen-residual calibration, see tests):

* amplitudes n_up = sqrt((E+m)/2E), n_down = sqrt((E-m)/2E); for E < -m
  these are the swapped pair of the positive-energy weights, which is what
  the inverse-transform kernels require on the negative sector;
* lower-component phases carry sgn(k) (sgn(0) = +1): -i*sgn(k)*sgn(E) in 2d,
  +sgn(k)*sgn(E) in 3d;
* the Coulomb spinor uses the branch e^{i(pr+xi)} 1F1(g - i a, 2g+1, -2ipr),
  the zero-residual member of the sign family;
* ISOMETRIC normalization makes every channel transform unitary: it drops
  sqrt(pi/2) from the 3d free weight, the extra 1/sqrt(2|E|) of the AB
  spinor, and divides the Coulomb kernel by sqrt(pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from .channels import AharonovBohm, Channel, Coulomb, Free, Model, sgn
from .specfun import (
    EvalMethod,
    Variant,
    bessel_j,
    coulomb_phase_integral,
    kummer_1f1,
    log_gamma_complex,
)

__all__ = [
    "EnergyPoint",
    "Normalization",
    "DCParams",
    "SommerfeldVariant",
    "free_eigenfunction",
    "ab_eigenfunction",
    "dc_params",
    "dc_eigenfunction",
    "dc_eigenfunction_rescaled",
    "dc_alpha_scaled",
    "sommerfeld_eigenvalue",
    "eigenfunction_matrix",
]


class Normalization(Enum):
    ISOMETRIC = "isometric"
    AS_PRINTED = "as_printed"


@dataclass(frozen=True)
class EnergyPoint:
    """Point of the continuous spectrum, |E| >= m."""

    e: float
    mass: float

    def __post_init__(self):
        if abs(self.e) < self.mass:
            raise ValueError(f"|E| >= m required, got E={self.e}, m={self.mass}")

    @property
    def p(self) -> float:
        return math.sqrt(self.e * self.e - self.mass * self.mass)

    @property
    def n_plus(self) -> float:
        """Upper-component weight sqrt((E+m)/2E)."""
        return math.sqrt((self.e + self.mass) / (2.0 * self.e))

    @property
    def n_minus(self) -> float:
        """Lower-component weight sqrt((E-m)/2E)."""
        return math.sqrt((self.e - self.mass) / (2.0 * self.e))


def _as_energy(energy, mass: float) -> EnergyPoint:
    if isinstance(energy, EnergyPoint):
        return energy
    return EnergyPoint(float(energy), mass)


def _lower_phase(model: Model, channel: Channel, e_sign: float) -> complex:
    if model.n == 3:
        return sgn(channel.k) * e_sign
    if channel.k == 0 and isinstance(model.potential, AharonovBohm):
        if model.potential.alpha > 0.5:
            return 1j * e_sign
        return -1j * e_sign
    return -1j * sgn(channel.k) * e_sign


def _radial_weight(model: Model, r: np.ndarray, normalization: Normalization) -> np.ndarray:
    if model.n == 2:
        return np.ones_like(r)
    if normalization is Normalization.AS_PRINTED:
        return np.sqrt(np.pi / (2.0 * r))
    return 1.0 / np.sqrt(r)


def free_eigenfunction(model: Model, channel: Channel, energy, r,
                       normalization: Normalization = Normalization.ISOMETRIC) -> np.ndarray:
    """Free generalized eigenfunction, shape (2, len(r))."""
    if not isinstance(model.potential, Free):
        raise ValueError("free_eigenfunction requires a free model")
    channel.validate(model)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    en = _as_energy(energy, model.mass)
    a, b = channel.bessel_orders(model)
    w = _radial_weight(model, r, normalization)
    upper = en.n_plus * w * bessel_j(a, en.p * r)
    lower = _lower_phase(model, channel, math.copysign(1.0, en.e)) * en.n_minus * w \
        * bessel_j(b, en.p * r)
    return np.stack([upper.astype(complex), np.asarray(lower, dtype=complex)])


def ab_eigenfunction(alpha: float, k: int, energy, r, mass: float = 1.0,
                     normalization: Normalization = Normalization.ISOMETRIC) -> np.ndarray:
    """Aharonov-Bohm generalized eigenfunction, shape (2, len(r)).

    AS_PRINTED keeps the extra 1/sqrt(2|E|) of the published formula; the
    default drops it so the channel transform is an isometry.
    """
    model = Model.aharonov_bohm(alpha, mass)
    channel = Channel(k)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    en = _as_energy(energy, mass)
    a, b = channel.bessel_orders(model)
    scale = 1.0
    if normalization is Normalization.AS_PRINTED:
        scale = 1.0 / math.sqrt(2.0 * abs(en.e))
    upper = scale * en.n_plus * bessel_j(a, en.p * r)
    lower = _lower_phase(model, channel, math.copysign(1.0, en.e)) * scale * en.n_minus \
        * bessel_j(b, en.p * r)
    return np.stack([upper.astype(complex), np.asarray(lower, dtype=complex)])


# ---------------------------------------------------------------------------
# Dirac-Coulomb
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DCParams:
    """Channel/energy bookkeeping of the Coulomb eigenfunctions."""

    gamma: float
    alpha_e: float
    xi: float
    prefactor: float
    log_prefactor: float


def dc_params(k: int, nu: float, energy, mass: float = 1.0) -> DCParams:
    """gamma, alpha_E, the phase xi and the Gamma prefactor; E > m only."""
    en = _as_energy(energy, mass)
    if en.e <= mass:
        raise ValueError("Coulomb spectral data is restricted to E > m")
    if k == 0:
        raise ValueError("k = 0 is not admissible")
    gamma = Channel(k).gamma(nu)
    p = en.p
    alpha_e = nu * en.e / p
    num = k - 1j * nu * mass / p
    den = gamma - 1j * alpha_e
    ratio = num / den
    if abs(abs(ratio) - 1.0) > 1e-10:
        raise AssertionError(f"phase lost unimodularity: |e^(2 i xi)| = {abs(ratio)}")
    xi = 0.5 * float(np.angle(ratio))
    lg_p = log_gamma_complex(gamma + 1.0 + 1j * alpha_e)
    lg_2g = log_gamma_complex(2.0 * gamma + 1.0).real
    log_pref = math.log(2.0) + math.pi * alpha_e / 2.0 + lg_p.real - lg_2g
    pref = math.exp(log_pref) if log_pref > -700 else 0.0
    return DCParams(gamma, alpha_e, xi, pref, log_pref)


def _dc_values_quadrature(k, nu, en: EnergyPoint, r, normalization, tolerance, start_nodes):
    gamma = Channel(k).gamma(nu)
    params = dc_params(k, nu, en, en.mass)
    p = en.p
    rho = p * r
    I = coulomb_phase_integral(gamma, params.alpha_e, rho, tolerance=tolerance,
                               start_nodes=start_nodes)
    lg_m = log_gamma_complex(gamma - 1j * params.alpha_e)
    lg_p = log_gamma_complex(gamma + 1.0 + 1j * params.alpha_e)
    logamp = (
        math.log(2.0)
        + math.pi * params.alpha_e / 2.0
        - lg_m.real
        + (gamma - 0.5) * np.log(2.0 * rho)
        - 0.5 * np.log(r)
        - 2.0 * gamma * math.log(2.0)
    )
    if normalization is Normalization.ISOMETRIC:
        logamp = logamp - 0.5 * math.log(math.pi)
    phase = np.exp(1j * (params.xi - lg_p.imag - lg_m.imag))
    core = np.exp(logamp) * phase * I
    return np.stack([en.n_plus * core.imag + 0j, en.n_minus * core.real + 0j])


def _dc_values_series(k, nu, en: EnergyPoint, r, normalization, method: EvalMethod):
    params = dc_params(k, nu, en, en.mass)
    gamma = params.gamma
    if abs(params.alpha_e) > 100.0:
        raise ValueError("series route overflows for |alpha_E| > 100; use quadrature")
    p = en.p
    vals = np.empty((2, len(r)), dtype=complex)
    for j, rj in enumerate(r):
        M = kummer_1f1(gamma - 1j * params.alpha_e, 2.0 * gamma + 1.0,
                       -2j * p * rj, method)
        core = np.exp(1j * (p * rj + params.xi)) * M
        amp = params.prefactor * (2.0 * p * rj) ** (gamma - 0.5) / math.sqrt(rj)
        if normalization is Normalization.ISOMETRIC:
            amp /= math.sqrt(math.pi)
        vals[0, j] = en.n_plus * amp * core.imag
        vals[1, j] = en.n_minus * amp * core.real
    return vals


def dc_eigenfunction(k: int, nu: float, energy, r, mass: float = 1.0,
                     method: EvalMethod = EvalMethod(Variant.INTEGRAL_QUADRATURE, terms=64),
                     normalization: Normalization = Normalization.ISOMETRIC) -> np.ndarray:
    """Coulomb generalized eigenfunction (F_k, G_k), shape (2, len(r)).

    Both components are real; the complex dtype keeps the interface uniform
    with the other models.
    """
    en = _as_energy(energy, mass)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    if method.variant is Variant.SERIES_SUM:
        return _dc_values_series(k, nu, en, r, normalization, method)
    return _dc_values_quadrature(k, nu, en, r, normalization,
                                 method.tolerance, max(method.terms, 64))


def dc_alpha_scaled(nu: float, N: float, y: float = 1.0, mass: float = 1.0) -> float:
    """alpha at the rescaled energy sqrt((Ny)^2 + m^2)."""
    return nu * math.sqrt((N * y) ** 2 + mass * mass) / (N * y)


def dc_eigenfunction_rescaled(k: int, nu: float, N: float, y: float, rho,
                              mass: float = 1.0,
                              method: EvalMethod = EvalMethod(Variant.INTEGRAL_QUADRATURE, terms=64),
                              normalization: Normalization = Normalization.ISOMETRIC) -> np.ndarray:
    """Dyadically rescaled Coulomb eigenfunction H(N, y, rho).

    Direct substitution E = sqrt((Ny)^2 + m^2), r = rho/N times the N^{-1/2}
    from the change of variables, so H(N, 1, rho) * sqrt(N) equals the
    unrescaled eigenfunction at r = rho/N exactly.
    """
    if N <= 0 or y <= 0:
        raise ValueError("N and y must be positive")
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    energy = math.sqrt((N * y) ** 2 + mass * mass)
    return dc_eigenfunction(k, nu, energy, rho / N, mass, method, normalization) / math.sqrt(N)


# ---------------------------------------------------------------------------
# discrete spectrum
# ---------------------------------------------------------------------------


class SommerfeldVariant(Enum):
    AS_PRINTED = "as_printed"
    STANDARD = "standard"


def sommerfeld_eigenvalue(k: int, n_r: int, nu: float, mass: float = 1.0,
                          variant: SommerfeldVariant = SommerfeldVariant.AS_PRINTED) -> float:
    """Discrete Dirac-Coulomb eigenvalue.

    AS_PRINTED uses the denominator (k^2 - nu^2) + n_r^2; STANDARD the
    textbook (sqrt(k^2 - nu^2) + n_r)^2.  They coincide at n_r = 0.
    """
    if k == 0:
        raise ValueError("k = 0 is not admissible")
    if abs(nu) >= abs(k):
        raise ValueError("|nu| < |k| required")
    if k < 0 and n_r < 0:
        raise ValueError("n_r >= 0 required for k < 0")
    if k > 0 and n_r < 1:
        raise ValueError("n_r >= 1 required for k > 0")
    gamma2 = k * k - nu * nu
    if variant is SommerfeldVariant.AS_PRINTED:
        denom = gamma2 + n_r * n_r
    else:
        denom = (math.sqrt(gamma2) + n_r) ** 2
    return math.copysign(1.0, nu) * mass / math.sqrt(1.0 + nu * nu / denom)


# ---------------------------------------------------------------------------
# vectorized kernel matrices for the transforms
# ---------------------------------------------------------------------------


def eigenfunction_matrix(model: Model, channel: Channel, sector: int,
                         p_grid: np.ndarray, r_grid: np.ndarray,
                         normalization: Normalization = Normalization.ISOMETRIC,
                         tolerance: float = 1e-11) -> np.ndarray:
    """Kernel psi_k(E(p), r) on a (p, r) product grid, shape (2, n_p, n_r).

    ``sector`` is the energy sign; the Coulomb model only has +1.
    """
    channel.validate(model)
    if sector not in (-1, 1):
        raise ValueError("sector must be +1 or -1")
    p_grid = np.asarray(p_grid, dtype=float)
    r_grid = np.asarray(r_grid, dtype=float)
    m = model.mass
    E = sector * np.sqrt(p_grid**2 + m * m)
    if isinstance(model.potential, Coulomb):
        if sector != 1:
            raise ValueError("Coulomb transform is restricted to the positive sector")
        out = np.empty((2, len(p_grid), len(r_grid)), dtype=complex)
        for i, pi in enumerate(p_grid):
            en = EnergyPoint(float(np.sqrt(pi * pi + m * m)), m)
            out[:, i, :] = _dc_values_quadrature(
                channel.k, model.potential.nu, en, r_grid, normalization,
                tolerance, 64)
        return out
    a, b = channel.bessel_orders(model)
    n_up = np.sqrt((E + m) / (2.0 * E))
    n_dn = np.sqrt((E - m) / (2.0 * E))
    phase = _lower_phase(model, channel, float(sector))
    w = _radial_weight(model, r_grid, normalization)
    scale = np.ones_like(p_grid)
    if isinstance(model.potential, AharonovBohm) and normalization is Normalization.AS_PRINTED:
        scale = 1.0 / np.sqrt(2.0 * np.abs(E))
    x = np.outer(p_grid, r_grid)
    Ja = bessel_j(a, x.ravel()).reshape(x.shape)
    Jb = bessel_j(b, x.ravel()).reshape(x.shape)
    out = np.empty((2, len(p_grid), len(r_grid)), dtype=complex)
    out[0] = (scale * n_up)[:, None] * Ja * w[None, :]
    out[1] = phase * (scale * n_dn)[:, None] * Jb * w[None, :]
    return out
