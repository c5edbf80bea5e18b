"""Quadrature-variance model of the OPO output.

Single-mode below-threshold spectra at sideband frequency Omega,

    V-+ = 1 -+ eta * 4x / [(1 +- x)^2 + (Omega/gamma)^2],

degraded by a detection chain (escape, propagation and homodyne
efficiencies) and by local-oscillator phase noise treated as a fixed
rotation angle.  Variances are normalized to shot noise; dB values are
10*log10 of a variance, so negative means squeezed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AboveThresholdError
from .opo import (
    OpoConfig,
    cavity_bandwidth,
    escape_efficiency,
    loss_at_pump,
    pump_state,
    reference_threshold,
)

__all__ = [
    "DetectionChain",
    "QuadraturePair",
    "total_efficiency",
    "quadrature_variance",
    "apply_phase_noise",
    "to_dB",
    "squeezing_vs_pump",
    "predict_limit",
]


@dataclass(frozen=True)
class DetectionChain:
    """Everything between the OPO output coupler and the recorded variance.

    Parameters
    ----------
    eta_homodyne : float
        Homodyne detection efficiency (visibility squared times photodiode
        quantum efficiency), in (0, 1].
    phase_noise_deg : float
        RMS local-oscillator phase fluctuation [degrees], in [0, 90).
    analysis_omega : float
        Sideband angular frequency Omega [rad/s] at which variances are
        evaluated.
    eta_propagation : float
        Path efficiency from OPO to detector, in (0, 1]; default 1.
    """

    eta_homodyne: float
    phase_noise_deg: float
    analysis_omega: float
    eta_propagation: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta_homodyne", "eta_propagation"):
            val = getattr(self, name)
            if not (0.0 < val <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1], got {val}")
        if not (0.0 <= self.phase_noise_deg < 90.0):
            raise ValueError(
                f"phase_noise_deg must lie in [0, 90), got {self.phase_noise_deg}"
            )
        if not (self.analysis_omega >= 0.0):
            raise ValueError(f"analysis_omega must be >= 0, got {self.analysis_omega}")


@dataclass(frozen=True)
class QuadraturePair:
    """Squeezed and antisqueezed quadrature variances, shot noise = 1.

    Pairs produced by quadrature_variance satisfy v_minus <= 1 <= v_plus;
    phase-noise mixing keeps both positive and preserves their sum but can
    reorder them for angles beyond 45 degrees, so only positivity and
    finiteness are enforced here.
    """

    v_minus: float
    v_plus: float

    def __post_init__(self) -> None:
        if not (self.v_minus > 0.0 and math.isfinite(self.v_minus)):
            raise ValueError(f"v_minus must be positive and finite, got {self.v_minus}")
        if not (self.v_plus > 0.0 and math.isfinite(self.v_plus)):
            raise ValueError(f"v_plus must be positive and finite, got {self.v_plus}")


def total_efficiency(rho: float, chain: DetectionChain) -> float:
    """Composite efficiency eta = rho * eta_propagation * eta_homodyne."""
    if not (0.0 < rho <= 1.0):
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    return rho * chain.eta_propagation * chain.eta_homodyne


def quadrature_variance(
    x: float, omega: float, gamma: float, eta: float
) -> QuadraturePair:
    """Squeezing spectrum of a below-threshold OPO at one sideband frequency.

    Evaluates V-+ = 1 -+ eta*4x / [(1 +- x)^2 + (Omega/gamma)^2] in the
    algebraically identical grouped form

        V- = [(1 - x)^2 + 4x(1 - eta) + r^2] / [(1 + x)^2 + r^2]

    (r = Omega/gamma) which avoids the cancellation near x = 1 that would
    otherwise corrupt the lossless purity V- * V+ = 1.
    """
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x >= 1.0:
        raise AboveThresholdError(
            f"x = {x} is at or above threshold; below-threshold spectra only"
        )
    if not (gamma > 0.0):
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if omega < 0.0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    r2 = (omega / gamma) ** 2
    d_minus = (1.0 - x) ** 2 + r2  # denominator of the antisqueezed arm
    d_plus = (1.0 + x) ** 2 + r2
    v_minus = (d_minus + 4.0 * x * (1.0 - eta)) / d_plus
    v_plus = (d_minus + 4.0 * x * eta) / d_minus
    return QuadraturePair(v_minus=v_minus, v_plus=v_plus)


def apply_phase_noise(pair: QuadraturePair, theta_deg: float) -> QuadraturePair:
    """Mix the quadratures through a fixed phase-noise angle.

    V-' = V- cos^2(theta) + V+ sin^2(theta) and conversely, so the pair sum
    is an invariant, preserved bit for bit: the smaller mixed component is
    derived from the sum, and that subtraction never rounds because the
    larger one lies within a factor of two of the sum (Sterbenz).  theta =
    0 is the identity and theta = 90 degrees swaps the quadratures, both
    returned exactly.
    """
    if not (0.0 <= theta_deg <= 90.0):
        raise ValueError(f"theta_deg must lie in [0, 90], got {theta_deg}")
    if pair.v_minus == pair.v_plus:
        return pair  # mixing equal variances changes nothing
    s2 = math.sin(math.radians(theta_deg)) ** 2
    if s2 == 0.0:
        return pair
    if s2 == 1.0:
        return QuadraturePair(v_minus=pair.v_plus, v_plus=pair.v_minus)
    total = pair.v_minus + pair.v_plus
    mixed_minus = (1.0 - s2) * pair.v_minus + s2 * pair.v_plus
    mixed_plus = (1.0 - s2) * pair.v_plus + s2 * pair.v_minus
    if mixed_minus >= mixed_plus:
        mixed_plus = total - mixed_minus
        if mixed_plus <= 0.0:
            # inputs span more than the mantissa: the small arm is below
            # half an ulp of the sum, so any sum-neutral positive stub works
            mixed_plus = math.ulp(total) / 4.0
    else:
        mixed_minus = total - mixed_plus
        if mixed_minus <= 0.0:
            mixed_minus = math.ulp(total) / 4.0
    return QuadraturePair(v_minus=mixed_minus, v_plus=mixed_plus)


def to_dB(v: float) -> float:
    """Variance to decibels: 10*log10(v); 1 (shot noise) maps to 0 dB."""
    if not (v > 0.0):
        raise ValueError(f"variance must be > 0, got {v}")
    return 10.0 * math.log10(v)


def _observed_pair(
    opo: OpoConfig, chain: DetectionChain, pump: float, p_th_ref: float
) -> QuadraturePair:
    """Variance pair at the detector for one pump power."""
    state = pump_state(pump, p_th_ref)
    if state.x >= 1.0:
        raise AboveThresholdError(
            f"pump {pump} W is at or above the threshold {p_th_ref} W"
        )
    rho = escape_efficiency(opo.T, pump, opo.loss)
    gamma = cavity_bandwidth(opo.T, loss_at_pump(opo.loss, pump), opo.round_trip)
    eta = total_efficiency(rho, chain)
    raw = quadrature_variance(state.x, chain.analysis_omega, gamma, eta)
    return apply_phase_noise(raw, chain.phase_noise_deg)


def squeezing_vs_pump(
    opo: OpoConfig, chain: DetectionChain, pump_list: list[float]
) -> list[tuple[float, float, float]]:
    """Squeezing and antisqueezing levels across pump powers.

    Per pump P: x = sqrt(P / P_th*) where P_th* is the measured threshold
    when the config carries one, else the model threshold; the escape
    efficiency and cavity bandwidth use the loss model evaluated at P
    itself.  Returns rows (pump_W, squeeze_dB, antisqueeze_dB) sorted by
    pump power.
    """
    p_th_ref = reference_threshold(opo)
    rows = []
    for pump in sorted(pump_list):
        pair = _observed_pair(opo, chain, pump, p_th_ref)
        rows.append((pump, to_dB(pair.v_minus), to_dB(pair.v_plus)))
    return rows


def predict_limit(
    opo_variant: OpoConfig, chain_variant: DetectionChain, x_grid: list[float]
) -> tuple[float, float]:
    """Best (most negative) squeezing over a grid of normalized pumps.

    Returns (squeeze_dB, x) at the grid minimum; ties go to the smaller x.
    The grid must stay below threshold (x < 1): with a lossless chain the
    squeezing is unbounded as x -> 1, so only the grid minimum is reported.
    """
    xs = sorted(float(x) for x in x_grid)
    if not xs:
        raise ValueError("x_grid must not be empty")
    if xs[0] < 0.0 or xs[-1] >= 1.0:
        raise ValueError("x_grid must lie within [0, 1)")
    p_th_ref = reference_threshold(opo_variant)
    best_db = math.inf
    best_x = xs[0]
    for x in xs:
        pair = _observed_pair(opo_variant, chain_variant, x * x * p_th_ref, p_th_ref)
        db = to_dB(pair.v_minus)
        if db < best_db:
            best_db, best_x = db, x
    return best_db, best_x
