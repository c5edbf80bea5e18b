"""Below-threshold OPO cavity bookkeeping.

Pump-dependent intracavity loss, the self-consistent oscillation threshold,
escape efficiency, output-coupler optimization, resonant parametric gain,
and the cavity decay rate.  Powers are in watts, lengths in meters; T and L
are per-round-trip intensity fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as _C

from ._scan import grid_then_refine
from .errors import (
    AboveThresholdError,
    ModelValidityError,
    NoGainError,
    SolverError,
)
from .nlo import EffectiveNonlinearity

__all__ = [
    "LossModel",
    "OpoConfig",
    "PumpState",
    "loss_at_pump",
    "fit_loss_model",
    "oscillation_threshold",
    "escape_efficiency",
    "pump_power_at_x",
    "pump_state",
    "reference_threshold",
    "optimize_coupler",
    "parametric_gain",
    "threshold_from_gain",
    "cavity_bandwidth",
]


@dataclass(frozen=True)
class LossModel:
    """Linear pump-dependent intracavity loss L = L0 + a * P_2w.

    L0 is the passive round-trip loss, a [1/W] the pump-induced
    (blue-light absorption) coefficient.
    """

    L0: float
    a: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.L0 < 1.0):
            raise ValueError(f"L0 must lie in [0, 1), got {self.L0}")
        if not (self.a >= 0.0):
            raise ValueError(f"a must be >= 0, got {self.a}")


@dataclass(frozen=True)
class OpoConfig:
    """OPO cavity parameters.

    measured_threshold, when set, is an experimentally determined
    oscillation threshold [W] used instead of the model value wherever a
    normalized pump x must match the apparatus (the model threshold runs
    below measurement; see oscillation_threshold).
    """

    T: float
    loss: LossModel
    enl: EffectiveNonlinearity
    round_trip: float
    measured_threshold: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.T < 1.0):
            raise ValueError(f"T must lie in (0, 1), got {self.T}")
        if not (self.enl.value > 0.0):
            raise ValueError("enl.value must be > 0 for an OPO")
        if not (self.round_trip > 0.0):
            raise ValueError(f"round_trip must be > 0, got {self.round_trip}")
        if self.measured_threshold is not None and not (self.measured_threshold > 0.0):
            raise ValueError("measured_threshold must be > 0 when given")


@dataclass(frozen=True)
class PumpState:
    """A pump power paired with its normalized parameter x = sqrt(P/P_th)."""

    p2w: float
    x: float

    def __post_init__(self) -> None:
        if not (self.p2w >= 0.0):
            raise ValueError(f"p2w must be >= 0, got {self.p2w}")
        if not (self.x >= 0.0):
            raise ValueError(f"x must be >= 0, got {self.x}")


def pump_state(p2w: float, p_th: float) -> PumpState:
    """Build a PumpState against a given threshold."""
    if not (p_th > 0.0):
        raise ValueError(f"p_th must be > 0, got {p_th}")
    return PumpState(p2w=p2w, x=math.sqrt(p2w / p_th))


def loss_at_pump(loss: LossModel, p2w: float) -> float:
    """Round-trip loss at a given pump power."""
    if not (p2w >= 0.0):
        raise ValueError(f"p2w must be >= 0, got {p2w}")
    total = loss.L0 + loss.a * p2w
    if total >= 1.0:
        raise ModelValidityError(
            f"loss model leaves its validity range: L({p2w} W) = {total:.4f} >= 1"
        )
    return total


def fit_loss_model(samples: list[tuple[float, float]]) -> LossModel:
    """Least-squares line through (pump power, measured loss) samples.

    Exact through two points.  Raises ValueError when fewer than two
    distinct pump powers are supplied.
    """
    if len(samples) < 2:
        raise ValueError("need at least 2 loss samples to fit a line")
    p = np.asarray([s[0] for s in samples], dtype=float)
    l_meas = np.asarray([s[1] for s in samples], dtype=float)
    if np.unique(p).size < 2:
        raise ValueError("loss samples must cover at least 2 distinct pump powers")
    slope, intercept = np.polyfit(p, l_meas, 1)
    return LossModel(L0=float(intercept), a=float(slope))


def oscillation_threshold(
    T: float,
    enl: EffectiveNonlinearity,
    loss: LossModel,
    p_init: float | None = None,
) -> float:
    """Self-consistent oscillation threshold P_th [W].

    Solves the fixed point P_th = (T + L(P_th))^2 / (4 * E_NL), i.e. the
    loss is evaluated at the threshold pump itself.  Damped iteration
    (factor 0.5) from p_init, default the a = 0 closed form; the result is
    independent of the starting point on the attracting branch.
    """
    if not (0.0 < T < 1.0):
        raise ValueError(f"T must lie in (0, 1), got {T}")
    if not (enl.value > 0.0):
        raise ValueError("E_NL must be > 0")
    static = T + loss.L0
    # discriminant of the equivalent quadratic: real roots need E_NL >= a*(T+L0)
    if enl.value < loss.a * static:
        raise SolverError(
            f"no oscillation threshold: pump-induced loss (a = {loss.a}/W) grows "
            f"faster than parametric gain (E_NL = {enl.value}/W) can overcome"
        )
    p = static ** 2 / (4.0 * enl.value) if p_init is None else float(p_init)
    if p < 0.0:
        raise ValueError(f"p_init must be >= 0, got {p_init}")
    for _ in range(500):
        rhs = (T + loss_at_pump(loss, p)) ** 2 / (4.0 * enl.value)
        nxt = 0.5 * (p + rhs)
        if abs(nxt - p) <= 1e-13 * max(abs(nxt), 1e-30):
            residual = nxt - (T + loss_at_pump(loss, nxt)) ** 2 / (4.0 * enl.value)
            if abs(residual) <= 1e-9 * max(nxt, 1e-30):
                return nxt
        p = nxt
    raise SolverError("oscillation threshold iteration did not converge in 500 steps")


def escape_efficiency(T: float, p2w: float, loss: LossModel) -> float:
    """rho = T / (T + L(p2w)), the fraction of intracavity field that exits."""
    if not (0.0 < T < 1.0):
        raise ValueError(f"T must lie in (0, 1), got {T}")
    return T / (T + loss_at_pump(loss, p2w))


def pump_power_at_x(
    x: float, T: float, enl: EffectiveNonlinearity, loss: LossModel
) -> float:
    """Pump power that realizes normalized pump x against the model threshold."""
    if not (x >= 0.0):
        raise ValueError(f"x must be >= 0, got {x}")
    return x * x * oscillation_threshold(T, enl, loss)


def reference_threshold(opo: OpoConfig) -> float:
    """Threshold used for x: the measured override when set, else the model."""
    if opo.measured_threshold is not None:
        return opo.measured_threshold
    return oscillation_threshold(opo.T, opo.enl, opo.loss)


def optimize_coupler(
    x: float,
    enl: EffectiveNonlinearity,
    loss: LossModel,
    T_range: tuple[float, float],
) -> tuple[float, float]:
    """Output coupler that maximizes escape efficiency at fixed x.

    Raising T lowers rho's denominator share but also raises the threshold,
    hence the pump and the pump-induced loss at fixed x; for a > 0 and
    large x the trade-off yields an interior optimum.  Grid scan (step
    <= 0.001) plus golden-section refinement; ties toward smaller T.
    """
    lo, hi = T_range
    if not (0.0 < lo < hi < 1.0):
        raise ValueError(f"T_range must satisfy 0 < lo < hi < 1, got {T_range}")
    if not (x >= 0.0):
        raise ValueError(f"x must be >= 0, got {x}")
    n_grid = max(201, int(math.ceil((hi - lo) / 0.001)) + 1)

    def rho_of_t(t: float) -> float:
        return escape_efficiency(t, pump_power_at_x(x, t, enl, loss), loss)

    return grid_then_refine(rho_of_t, lo, hi, n_grid=n_grid)


def parametric_gain(x: float) -> tuple[float, float]:
    """Resonant-probe amplification and deamplification at normalized pump x.

    G_amp = 1/(1-x)^2, G_deamp = 1/(1+x)^2 (zero detuning, cavity line
    center).  Diverges at threshold, hence the x < 1 domain.
    """
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x >= 1.0:
        raise AboveThresholdError(f"x = {x} is at or above threshold; gain diverges")
    return 1.0 / (1.0 - x) ** 2, 1.0 / (1.0 + x) ** 2


def threshold_from_gain(g_amp: float, p_pump: float) -> float:
    """Infer the oscillation threshold from a measured amplification.

    x = 1 - 1/sqrt(G_amp), then P_th = p_pump / x^2.
    """
    if not (p_pump > 0.0):
        raise ValueError(f"p_pump must be > 0, got {p_pump}")
    if g_amp <= 1.0:
        raise NoGainError(
            f"G_amp = {g_amp} shows no parametric amplification; threshold unbounded"
        )
    x = 1.0 - 1.0 / math.sqrt(g_amp)
    return p_pump / (x * x)


def cavity_bandwidth(T: float, L: float, round_trip: float) -> float:
    """Cavity decay rate gamma = c * (T + L) / (2 * round_trip) [rad/s].

    The half width at half maximum of the cavity line is gamma / 2pi.
    """
    if not (0.0 < T + L < 1.0):
        raise ValueError(f"T + L must lie in (0, 1), got {T + L}")
    if not (round_trip > 0.0):
        raise ValueError(f"round_trip must be > 0, got {round_trip}")
    return _C * (T + L) / (2.0 * round_trip)
