"""External-enhancement-cavity frequency doubler.

On resonance the circulating fundamental obeys the depleted-buildup fixed
point

    p_circ = T_in * p_in / (1 - sqrt((1-T_in)(1-L_rt)(1 - gamma_sp*p_circ)))^2,

where conversion acts as an intensity-dependent intracavity loss, and the
second harmonic leaves with p_sh = gamma_sp * p_circ^2.  All powers in
watts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ._scan import grid_then_refine
from .errors import ModelValidityError, SolverError

__all__ = [
    "DoublerConfig",
    "DoublerOperatingPoint",
    "circulating_power",
    "shg_output",
    "efficiency_sweep",
    "optimal_input_coupler",
    "fit_round_trip_loss",
]


@dataclass(frozen=True)
class DoublerConfig:
    """Doubler cavity parameters.

    T_in is the input-coupler transmittance at the fundamental (1 means no
    cavity, single pass), L_rt the passive round-trip loss excluding
    conversion, gamma_sp [1/W] the crystal's single-pass conversion
    coefficient (its effective nonlinearity).
    """

    T_in: float
    L_rt: float
    gamma_sp: float

    def __post_init__(self) -> None:
        if not (0.0 < self.T_in <= 1.0):
            raise ValueError(f"T_in must lie in (0, 1], got {self.T_in}")
        if not (0.0 <= self.L_rt < 1.0):
            raise ValueError(f"L_rt must lie in [0, 1), got {self.L_rt}")
        if not (self.gamma_sp >= 0.0):
            raise ValueError(f"gamma_sp must be >= 0, got {self.gamma_sp}")


@dataclass(frozen=True)
class DoublerOperatingPoint:
    """One steady state of the doubler: input, circulating and SH powers."""

    p_in: float
    p_circ: float
    p_sh: float
    efficiency: float

    def __post_init__(self) -> None:
        for name in ("p_in", "p_circ", "p_sh"):
            if not (getattr(self, name) >= 0.0):
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not (0.0 <= self.efficiency <= 1.0):
            raise ValueError(
                f"efficiency must lie in [0, 1], got {self.efficiency}"
            )


def _buildup_rhs(p_circ: float, p_in: float, cfg: DoublerConfig) -> float:
    passive = (1.0 - cfg.T_in) * (1.0 - cfg.L_rt)
    amp = 1.0 - math.sqrt(passive * (1.0 - cfg.gamma_sp * p_circ))
    return cfg.T_in * p_in / (amp * amp)


def circulating_power(p_in: float, cfg: DoublerConfig) -> float:
    """Steady-state circulating fundamental power [W].

    The fixed point is bracketed and bisected (Brent); the right-hand side
    decreases in p_circ, so the physical root is unique.  The solution must
    satisfy gamma_sp * p_circ < 1 for the conversion-loss factor to stay
    meaningful.
    """
    if p_in < 0.0:
        raise ValueError(f"p_in must be >= 0, got {p_in}")
    if p_in == 0.0:
        return 0.0
    hi = _buildup_rhs(0.0, p_in, cfg)  # lossless-conversion buildup bounds the root
    if cfg.gamma_sp > 0.0 and cfg.gamma_sp * hi > 1.0:
        hi = 1.0 / cfg.gamma_sp
        if hi - _buildup_rhs(hi, p_in, cfg) < 0.0:
            raise ModelValidityError(
                "no steady state with gamma_sp * p_circ < 1: conversion model "
                f"breaks down at p_in = {p_in} W"
            )

    def residual(p: float) -> float:
        return p - _buildup_rhs(p, p_in, cfg)

    try:
        root = brentq(residual, 0.0, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    except (ValueError, RuntimeError) as exc:
        raise SolverError(f"circulating-power solve failed: {exc}") from exc
    if abs(residual(root)) > 1e-9 * max(root, 1e-30):
        raise SolverError(
            f"circulating-power fixed point off by {residual(root):.3e} W"
        )
    return root


def shg_output(p_in: float, cfg: DoublerConfig) -> DoublerOperatingPoint:
    """Second-harmonic output and conversion efficiency at one input power."""
    p_circ = circulating_power(p_in, cfg)
    p_sh = cfg.gamma_sp * p_circ * p_circ
    efficiency = p_sh / p_in if p_in > 0.0 else 0.0
    return DoublerOperatingPoint(
        p_in=p_in, p_circ=p_circ, p_sh=p_sh, efficiency=efficiency
    )


def efficiency_sweep(
    p_in_list: list[float], cfg: DoublerConfig
) -> list[DoublerOperatingPoint]:
    """shg_output across a monotone list of input powers."""
    prev = -math.inf
    for p in p_in_list:
        if p < 0.0 or p < prev:
            raise ValueError("p_in_list must be nonnegative and nondecreasing")
        prev = p
    rows = []
    for p in p_in_list:
        try:
            rows.append(shg_output(p, cfg))
        except (SolverError, ModelValidityError) as exc:
            raise type(exc)(f"sweep row p_in = {p} W: {exc}") from exc
    return rows


def optimal_input_coupler(
    p_in: float,
    L_rt: float,
    gamma_sp: float,
    T_range: tuple[float, float],
) -> tuple[float, float]:
    """Input coupler maximizing conversion efficiency at fixed input power.

    Grid scan (step <= 0.001) plus golden-section refinement, ties toward
    the smaller coupler.  With no conversion at all the efficiency is
    identically zero and no optimum exists.
    """
    lo, hi = T_range
    if not (0.0 < lo < hi < 1.0):
        raise ValueError(f"T_range must satisfy 0 < lo < hi < 1, got {T_range}")
    if gamma_sp == 0.0:
        raise ValueError(
            "degenerate optimum: gamma_sp = 0 makes every coupler equally useless"
        )
    if not (p_in > 0.0):
        raise ValueError(f"p_in must be > 0, got {p_in}")
    n_grid = max(201, int(math.ceil((hi - lo) / 0.001)) + 1)

    def eff(t_in: float) -> float:
        return shg_output(p_in, DoublerConfig(T_in=t_in, L_rt=L_rt, gamma_sp=gamma_sp)).efficiency

    return grid_then_refine(eff, lo, hi, n_grid=n_grid)


def fit_round_trip_loss(
    p_in: float, p_sh_target: float, gamma_sp: float, t_in: float
) -> float:
    """Passive loss L_rt that reproduces a measured (p_in, p_sh) point.

    One-dimensional solve at fixed gamma_sp and T_in; p_sh decreases
    monotonically in L_rt, so the root is unique when the target is
    attainable at all (i.e. below the lossless output).
    """
    if not (p_in > 0.0 and p_sh_target > 0.0):
        raise ValueError("p_in and p_sh_target must be > 0")
    lossless = shg_output(p_in, DoublerConfig(T_in=t_in, L_rt=0.0, gamma_sp=gamma_sp))
    if p_sh_target >= lossless.p_sh:
        raise ValueError(
            f"target {p_sh_target} W not attainable: lossless output is "
            f"{lossless.p_sh:.4f} W"
        )

    def gap(l_rt: float) -> float:
        cfg = DoublerConfig(T_in=t_in, L_rt=l_rt, gamma_sp=gamma_sp)
        return shg_output(p_in, cfg).p_sh - p_sh_target

    try:
        return brentq(gap, 0.0, 1.0 - 1e-9, xtol=1e-14, maxiter=200)
    except (ValueError, RuntimeError) as exc:
        raise SolverError(f"round-trip-loss fit failed: {exc}") from exc
