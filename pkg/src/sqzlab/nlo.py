"""Focused-Gaussian second-harmonic theory and cavity mode geometry.

Implements the Boyd-Kleinman description of single-pass SHG with a focused
Gaussian beam: the focusing factor h(sigma, xi), conversion between the
effective nonlinear coefficient d_eff and the single-pass effective
nonlinearity E_NL = P_2w / P_w^2, and a ray-matrix eigenmode solver for the
waist of a bow-tie cavity folded around the crystal.

Conventions
-----------
All lengths are in meters, d_eff in m/V, E_NL in 1/W.  The focusing
parameter is xi = length / b with confocal parameter b = k1 * waist^2 and
k1 = 2*pi*n_fund / lambda_fund.  sigma is the dimensionless phase mismatch;
walk-off and absorption are taken as zero (quasi-phase-matched, noncritical
interaction).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as _C, epsilon_0 as _EPS0
from scipy.integrate import quad

from ._scan import grid_then_refine
from .errors import StabilityError

__all__ = [
    "CrystalSpec",
    "FocusingGeometry",
    "EffectiveNonlinearity",
    "bk_integral",
    "bk_focus_factor",
    "optimize_sigma",
    "enl_from_deff",
    "deff_from_enl",
    "focusing_parameter",
    "cavity_waist",
]

# quadrature accuracy for the h integral
_QUAD_EPSABS = 1e-10
_QUAD_LIMIT = 200

# sigma optimization: seed grid on [0, 6] per the scan contract
_SIGMA_MAX = 6.0
_SIGMA_GRID = 200


@dataclass(frozen=True)
class CrystalSpec:
    """Nonlinear crystal constants and geometry.

    Parameters
    ----------
    d_eff : float
        Effective nonlinear coefficient [m/V].  For a quasi-phase-matched
        grating, d_eff = (2/pi) * d_33.
    length : float
        Crystal length along the beam [m].
    lambda_fund : float
        Fundamental vacuum wavelength [m].
    n_fund, n_sh : float
        Refractive indices at the fundamental and the second harmonic.
        Defaults suit 5 mol% MgO:LiNbO3 near 860/430 nm.
    poling_period : float or None
        Quasi-phase-matching period [m]; metadata only, not used in any
        formula here.
    """

    d_eff: float
    length: float
    lambda_fund: float
    n_fund: float = 2.18
    n_sh: float = 2.29
    poling_period: float | None = None

    def __post_init__(self) -> None:
        if not (self.d_eff >= 0.0):
            raise ValueError(f"d_eff must be >= 0, got {self.d_eff}")
        if not (self.length > 0.0):
            raise ValueError(f"length must be > 0, got {self.length}")
        if not (self.lambda_fund > 0.0):
            raise ValueError(f"lambda_fund must be > 0, got {self.lambda_fund}")
        if not (self.n_fund > 1.0 and self.n_sh > 1.0):
            raise ValueError("refractive indices must exceed 1")
        if self.poling_period is not None and not (self.poling_period > 0.0):
            raise ValueError("poling_period must be > 0 when given")

    @property
    def k_fund(self) -> float:
        """Fundamental wavenumber in the medium [1/m]."""
        return 2.0 * math.pi * self.n_fund / self.lambda_fund


@dataclass(frozen=True)
class FocusingGeometry:
    """Gaussian focus inside the crystal.

    sigma_mode is either an explicit dimensionless phase mismatch or None,
    meaning "optimize sigma numerically" (the experimental analog is tuning
    the crystal temperature until conversion peaks).
    """

    waist: float
    sigma_mode: float | None = None

    def __post_init__(self) -> None:
        if not (self.waist > 0.0):
            raise ValueError(f"waist must be > 0, got {self.waist}")
        if self.sigma_mode is not None and not math.isfinite(self.sigma_mode):
            raise ValueError("sigma_mode must be finite when given")


@dataclass(frozen=True)
class EffectiveNonlinearity:
    """Single-pass conversion ratio P_2w / P_w^2 [1/W]."""

    value: float

    def __post_init__(self) -> None:
        if not (self.value >= 0.0):
            raise ValueError(f"E_NL must be >= 0, got {self.value}")


def bk_integral(sigma: float, xi: float) -> complex:
    """Raw focusing integral I = int_{-xi}^{+xi} exp(i*sigma*t) / (1 + i*t) dt.

    Both real and imaginary parts are integrated over the full symmetric
    interval; the imaginary integrand is odd, so Im(I) vanishes up to
    quadrature error.  Callers may verify that cancellation rather than
    assume it.
    """
    if not (xi > 0.0):
        raise ValueError(f"xi must be > 0, got {xi}")
    re = quad(
        lambda t: (math.cos(sigma * t) + t * math.sin(sigma * t)) / (1.0 + t * t),
        -xi, xi, epsabs=_QUAD_EPSABS, limit=_QUAD_LIMIT,
    )[0]
    im = quad(
        lambda t: (math.sin(sigma * t) - t * math.cos(sigma * t)) / (1.0 + t * t),
        -xi, xi, epsabs=_QUAD_EPSABS, limit=_QUAD_LIMIT,
    )[0]
    return complex(re, im)


def bk_focus_factor(sigma: float, xi: float) -> float:
    """Focusing factor h(sigma, xi) = |I|^2 / (4*xi).

    At sigma = 0 this reduces to the closed form (2*arctan xi)^2 / (4*xi);
    for weak focusing h -> xi.

    Parameters
    ----------
    sigma : float
        Dimensionless phase mismatch.
    xi : float
        Focusing parameter, crystal length over confocal parameter; must be
        positive.
    """
    i_val = bk_integral(sigma, xi)
    return (i_val.real ** 2 + i_val.imag ** 2) / (4.0 * xi)


def optimize_sigma(xi: float) -> tuple[float, float]:
    """Maximize h over the phase mismatch at fixed focusing.

    Returns (sigma_opt, h_max) from a 200-point grid on sigma in [0, 6]
    refined by golden-section search.  The curve is flat near its top for
    weak focusing, so sigma_opt is only meaningful to the h tolerance there.
    """
    if not (xi > 0.0):
        raise ValueError(f"xi must be > 0, got {xi}")
    return grid_then_refine(
        lambda s: bk_focus_factor(s, xi), 0.0, _SIGMA_MAX, n_grid=_SIGMA_GRID
    )


def _resolved_h(crystal: CrystalSpec, geom: FocusingGeometry) -> tuple[float, float, float]:
    """(xi, sigma, h) with sigma either as given or optimized."""
    xi = focusing_parameter(crystal, geom)
    if geom.sigma_mode is None:
        sigma, h = optimize_sigma(xi)
    else:
        sigma = geom.sigma_mode
        h = bk_focus_factor(sigma, xi)
    return xi, sigma, h


def focusing_parameter(crystal: CrystalSpec, geom: FocusingGeometry) -> float:
    """xi = length / (k1 * waist^2)."""
    return crystal.length / (crystal.k_fund * geom.waist ** 2)


def enl_from_deff(crystal: CrystalSpec, geom: FocusingGeometry) -> EffectiveNonlinearity:
    """Effective nonlinearity of a focused single pass.

    E_NL = [2 * w1^2 * d_eff^2 / (pi * eps0 * c^3 * n_fund^2 * n_sh)]
           * k1 * length * h(sigma, xi)

    with w1 the fundamental angular frequency.  Scales as d_eff^2 and
    linearly in h.
    """
    xi, _sigma, h = _resolved_h(crystal, geom)
    omega1 = 2.0 * math.pi * _C / crystal.lambda_fund
    prefactor = (
        2.0 * omega1 ** 2 * crystal.d_eff ** 2
        / (math.pi * _EPS0 * _C ** 3 * crystal.n_fund ** 2 * crystal.n_sh)
    )
    return EffectiveNonlinearity(prefactor * crystal.k_fund * crystal.length * h)


def deff_from_enl(
    enl: EffectiveNonlinearity, crystal: CrystalSpec, geom: FocusingGeometry
) -> float:
    """Invert enl_from_deff: the d_eff [m/V] that reproduces a measured E_NL.

    The d_eff field of `crystal` is ignored.  Exact inverse by quadratic
    scaling: d_eff = sqrt(E_NL / E_NL(d_eff = 1)).
    """
    if enl.value == 0.0:
        return 0.0
    unit = enl_from_deff(replace(crystal, d_eff=1.0), geom)
    return math.sqrt(enl.value / unit.value)


def _propagation(d: float) -> np.ndarray:
    return np.array([[1.0, d], [0.0, 1.0]])


def _round_trip_matrix(
    mirror_roc: float,
    curved_separation: float,
    flat_segments: tuple[float, ...],
    crystal: CrystalSpec,
) -> np.ndarray:
    """Reduced round-trip ray matrix, crystal center to crystal center.

    The crystal is replaced by free space of reduced length length/n_fund,
    so the reduced complex beam parameter q~ = q/n propagates with plain
    free-space matrices throughout.  flat_segments are the mirror-to-mirror
    legs outside the curved pair; only their sum matters.
    """
    focal = mirror_roc / 2.0
    # crystal center to curved mirror, in reduced length
    t1 = (curved_separation - crystal.length) / 2.0 + crystal.length / (2.0 * crystal.n_fund)
    mirror = np.array([[1.0, 0.0], [-1.0 / focal, 1.0]])
    m = _propagation(t1) @ mirror
    for seg in flat_segments:
        m = m @ _propagation(seg)
    return m @ mirror @ _propagation(t1)


def cavity_waist(
    mirror_roc: float,
    curved_separation: float,
    round_trip: float,
    crystal: CrystalSpec,
) -> float:
    """Eigenmode waist radius at the crystal center of a bow-tie cavity [m].

    Two identical curved mirrors (radius of curvature mirror_roc) face each
    other across the crystal at curved_separation; the remaining
    round_trip - curved_separation of path closes the ring.  The waist
    follows from the self-consistent Gaussian mode of the round-trip ray
    matrix: w^2 = lambda * Im(q~) / pi, which is index-independent in the
    reduced-parameter convention.

    Raises
    ------
    StabilityError
        If |A + D| >= 2 (no confined mode) or mirror_roc <= 0 (flat
        mirrors cannot stabilize this ring).
    ValueError
        If the crystal does not fit between the curved mirrors or the
        separation exceeds the round trip.
    """
    if mirror_roc <= 0.0:
        raise StabilityError(
            "flat or inverted curved mirrors: ring has no confined Gaussian mode"
        )
    if not (curved_separation > crystal.length):
        raise ValueError(
            f"curved_separation {curved_separation} must exceed crystal length {crystal.length}"
        )
    if not (round_trip > curved_separation):
        raise ValueError(
            f"round_trip {round_trip} must exceed curved_separation {curved_separation}"
        )
    flat = round_trip - curved_separation
    m = _round_trip_matrix(mirror_roc, curved_separation, (flat,), crystal)
    return _waist_from_matrix(m, crystal.lambda_fund)


def _waist_from_matrix(m: np.ndarray, lambda_fund: float) -> float:
    trace = m[0, 0] + m[1, 1]
    if abs(trace) >= 2.0 or m[1, 0] == 0.0:
        raise StabilityError(
            f"cavity unstable: |A + D| = {abs(trace):.4f} outside (-2, 2)"
        )
    imag_q = math.sqrt(4.0 - trace * trace) / (2.0 * abs(m[1, 0]))
    return math.sqrt(lambda_fund * imag_q / math.pi)
