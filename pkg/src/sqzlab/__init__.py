"""sqzlab: design and analysis toolkit for cw squeezed-light sources.

Four model layers and a CLI:

- `nlo`: focused-Gaussian SHG theory (focusing factor, effective
  nonlinearity, cavity eigenmode waist),
- `opo`: below-threshold OPO bookkeeping (loss law, oscillation threshold,
  escape efficiency, parametric gain, bandwidth),
- `squeezing`: quadrature-variance spectra through a lossy, phase-noisy
  detection chain,
- `doubler`: enhancement-cavity frequency doubling,
- `cli`/`config`: the `sqzlab` command and its JSON configuration.
"""
from .config import GridSpec, RunConfig, SweepSettings, load_config
from .doubler import (
    DoublerConfig,
    DoublerOperatingPoint,
    circulating_power,
    efficiency_sweep,
    fit_round_trip_loss,
    optimal_input_coupler,
    shg_output,
)
from .errors import (
    AboveThresholdError,
    ConfigError,
    ModelValidityError,
    NoGainError,
    SolverError,
    SqzlabError,
    StabilityError,
)
from .nlo import (
    CrystalSpec,
    EffectiveNonlinearity,
    FocusingGeometry,
    bk_focus_factor,
    bk_integral,
    cavity_waist,
    deff_from_enl,
    enl_from_deff,
    focusing_parameter,
    optimize_sigma,
)
from .opo import (
    LossModel,
    OpoConfig,
    PumpState,
    cavity_bandwidth,
    escape_efficiency,
    fit_loss_model,
    loss_at_pump,
    optimize_coupler,
    oscillation_threshold,
    parametric_gain,
    pump_power_at_x,
    pump_state,
    reference_threshold,
    threshold_from_gain,
)
from .squeezing import (
    DetectionChain,
    QuadraturePair,
    apply_phase_noise,
    predict_limit,
    quadrature_variance,
    squeezing_vs_pump,
    to_dB,
    total_efficiency,
)

__version__ = "0.1.0"

__all__ = [
    "AboveThresholdError",
    "ConfigError",
    "CrystalSpec",
    "DetectionChain",
    "DoublerConfig",
    "DoublerOperatingPoint",
    "EffectiveNonlinearity",
    "FocusingGeometry",
    "GridSpec",
    "LossModel",
    "ModelValidityError",
    "NoGainError",
    "OpoConfig",
    "PumpState",
    "QuadraturePair",
    "RunConfig",
    "SolverError",
    "SqzlabError",
    "StabilityError",
    "SweepSettings",
    "apply_phase_noise",
    "bk_focus_factor",
    "bk_integral",
    "cavity_bandwidth",
    "cavity_waist",
    "circulating_power",
    "deff_from_enl",
    "efficiency_sweep",
    "enl_from_deff",
    "escape_efficiency",
    "fit_loss_model",
    "fit_round_trip_loss",
    "focusing_parameter",
    "load_config",
    "loss_at_pump",
    "optimal_input_coupler",
    "optimize_coupler",
    "optimize_sigma",
    "oscillation_threshold",
    "parametric_gain",
    "predict_limit",
    "pump_power_at_x",
    "pump_state",
    "quadrature_variance",
    "reference_threshold",
    "shg_output",
    "squeezing_vs_pump",
    "threshold_from_gain",
    "to_dB",
    "total_efficiency",
]
