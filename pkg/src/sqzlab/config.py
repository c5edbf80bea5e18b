"""Structured JSON configuration for the command-line tools.

One file aggregates every model parameter: sections `crystal`, `focusing`,
`opo`, `detection`, `doubler` and `sweeps`.  Keys carry unit suffixes
(length_mm, a_per_W, ...) and are converted to SI on load; unknown keys are
rejected with their field path so unit typos cannot pass silently.  A
bundled default file records the reference instrument constants used by the
tests and the documentation.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .doubler import DoublerConfig
from .errors import ConfigError
from .nlo import CrystalSpec, EffectiveNonlinearity, FocusingGeometry
from .opo import LossModel, OpoConfig
from .squeezing import DetectionChain

__all__ = [
    "GridSpec",
    "SweepSettings",
    "RunConfig",
    "load_config",
    "default_config_path",
]

_TWO_PI = 6.283185307179586


@dataclass(frozen=True)
class GridSpec:
    """A uniform sweep grid: start, stop (inclusive), step."""

    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if not (self.step > 0.0):
            raise ValueError(f"step must be > 0, got {self.step}")
        if self.stop < self.start:
            raise ValueError(f"stop {self.stop} precedes start {self.start}")

    def values(self) -> list[float]:
        # rounding ties each grid point to a clean decimal so CSV output
        # does not pick up float dust like 0.060000000000000005
        n = int((self.stop - self.start) / self.step + 1e-9)
        return [round(self.start + i * self.step, 12) for i in range(n + 1)]


@dataclass(frozen=True)
class SweepSettings:
    """Grids and ranges used by the reproduce/optimize/predict commands."""

    fig2_p_in: GridSpec
    fig3_T: GridSpec
    fig4b_pump: GridSpec
    predict_x: GridSpec
    coupler_x: float
    coupler_T_range: tuple[float, float]
    doubler_T_range: tuple[float, float]
    doubler_p_in: float


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, plus the SHA-256 of its source file."""

    crystal: CrystalSpec
    focusing: FocusingGeometry
    opo: OpoConfig
    opo_alt: OpoConfig | None
    detection: DetectionChain
    doubler: DoublerConfig
    sweeps: SweepSettings
    sha256: str


class _Section:
    """Typed key extraction with field-path error messages."""

    def __init__(self, path: str, table: object) -> None:
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: expected an object, got {type(table).__name__}")
        self._path = path
        self._table = dict(table)

    def number(self, key: str, default: float | None = None, required: bool = True) -> float | None:
        if key not in self._table:
            if required:
                raise ConfigError(f"{self._path}.{key}: missing required key")
            return default
        raw = self._table.pop(key)
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConfigError(
                f"{self._path}.{key}: expected a number, got {type(raw).__name__}"
            )
        return float(raw)

    def sigma_mode(self, key: str) -> float | None:
        """A number, or the string "optimize", or absent (same as optimize)."""
        if key not in self._table:
            return None
        raw = self._table.pop(key)
        if raw == "optimize":
            return None
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConfigError(
                f'{self._path}.{key}: expected a number or "optimize", got {raw!r}'
            )
        return float(raw)

    def has(self, key: str) -> bool:
        return key in self._table

    def subsection(self, key: str) -> "_Section":
        if key not in self._table:
            raise ConfigError(f"{self._path}.{key}: missing required section")
        return _Section(f"{self._path}.{key}", self._table.pop(key))

    def finish(self) -> None:
        if self._table:
            stray = ", ".join(sorted(self._table))
            raise ConfigError(f"{self._path}: unknown key(s): {stray}")

    def grid(self, key: str, default: GridSpec) -> GridSpec:
        if key not in self._table:
            return default
        sub = _Section(f"{self._path}.{key}", self._table.pop(key))
        spec = _build(
            f"{self._path}.{key}",
            GridSpec,
            start=sub.number("start"),
            stop=sub.number("stop"),
            step=sub.number("step"),
        )
        sub.finish()
        return spec

    def pair(self, key: str, default: tuple[float, float]) -> tuple[float, float]:
        if key not in self._table:
            return default
        sub = _Section(f"{self._path}.{key}", self._table.pop(key))
        lo, hi = sub.number("min"), sub.number("max")
        sub.finish()
        if not (lo < hi):
            raise ConfigError(f"{self._path}.{key}: min must be below max")
        return (lo, hi)


def _build(path: str, cls, **kwargs):
    """Construct a domain type, rewording invariant violations as config errors."""
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def default_config_path() -> Path:
    """Location of the bundled default configuration."""
    return Path(str(resources.files("sqzlab").joinpath("data/defaults.json")))


def load_config(path: str | Path | None = None) -> RunConfig:
    """Parse a configuration file; None loads the bundled defaults."""
    source = Path(path) if path is not None else default_config_path()
    try:
        raw = source.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{source}: not valid JSON: {exc}") from exc

    top = _Section("config", doc)

    sec = top.subsection("crystal")
    crystal = _build(
        "config.crystal",
        CrystalSpec,
        d_eff=sec.number("d_eff_pm_per_V") * 1e-12,
        length=sec.number("length_mm") * 1e-3,
        lambda_fund=sec.number("lambda_fund_nm") * 1e-9,
        n_fund=sec.number("n_fund", default=2.18, required=False),
        n_sh=sec.number("n_sh", default=2.29, required=False),
        poling_period=_scale(sec.number("poling_period_um", required=False), 1e-6),
    )
    sec.finish()

    sec = top.subsection("focusing")
    focusing = _build(
        "config.focusing",
        FocusingGeometry,
        waist=sec.number("waist_um") * 1e-6,
        sigma_mode=sec.sigma_mode("sigma_mode"),
    )
    sec.finish()

    sec = top.subsection("opo")
    loss_sec = sec.subsection("loss")
    loss = _build(
        "config.opo.loss",
        LossModel,
        L0=loss_sec.number("L0"),
        a=loss_sec.number("a_per_W"),
    )
    loss_sec.finish()
    enl = _build("config.opo.enl_per_W", EffectiveNonlinearity, value=sec.number("enl_per_W"))
    t_main = sec.number("T")
    round_trip = sec.number("round_trip_mm") * 1e-3
    opo = _build(
        "config.opo",
        OpoConfig,
        T=t_main,
        loss=loss,
        enl=enl,
        round_trip=round_trip,
        measured_threshold=_scale(sec.number("measured_threshold_mW", required=False), 1e-3),
    )
    alt_t = sec.number("alt_T", required=False)
    alt_thresh = _scale(sec.number("alt_measured_threshold_mW", required=False), 1e-3)
    opo_alt = None
    if alt_t is not None:
        opo_alt = _build(
            "config.opo.alt_T",
            OpoConfig,
            T=alt_t,
            loss=loss,
            enl=enl,
            round_trip=round_trip,
            measured_threshold=alt_thresh,
        )
    elif alt_thresh is not None:
        raise ConfigError("config.opo.alt_measured_threshold_mW: requires alt_T")
    sec.finish()

    sec = top.subsection("detection")
    detection = _build(
        "config.detection",
        DetectionChain,
        eta_homodyne=sec.number("eta_homodyne"),
        eta_propagation=sec.number("eta_propagation", default=1.0, required=False),
        phase_noise_deg=sec.number("phase_noise_deg"),
        analysis_omega=_TWO_PI * sec.number("analysis_freq_MHz") * 1e6,
    )
    sec.finish()

    sec = top.subsection("doubler")
    doubler = _build(
        "config.doubler",
        DoublerConfig,
        T_in=sec.number("T_in"),
        L_rt=sec.number("L_rt"),
        gamma_sp=sec.number("gamma_sp_per_W"),
    )
    sec.finish()

    sweeps = _parse_sweeps(top)
    top.finish()

    return RunConfig(
        crystal=crystal,
        focusing=focusing,
        opo=opo,
        opo_alt=opo_alt,
        detection=detection,
        doubler=doubler,
        sweeps=sweeps,
        sha256=hashlib.sha256(raw).hexdigest(),
    )


def _scale(value: float | None, factor: float) -> float | None:
    return None if value is None else value * factor


def _parse_sweeps(top: _Section) -> SweepSettings:
    # the whole section is optional; each entry falls back to the standard grid
    defaults = {
        "fig2_p_in_W": GridSpec(0.0, 0.6, 0.01),
        "fig3_T": GridSpec(0.05, 0.4, 0.005),
        "fig4b_pump_W": GridSpec(0.0, 0.35, 0.01),
        "predict_x": GridSpec(0.0, 0.99, 0.001),
    }
    if not top.has("sweeps"):
        return SweepSettings(
            fig2_p_in=defaults["fig2_p_in_W"],
            fig3_T=defaults["fig3_T"],
            fig4b_pump=defaults["fig4b_pump_W"],
            predict_x=defaults["predict_x"],
            coupler_x=1.0,
            coupler_T_range=(0.05, 0.4),
            doubler_T_range=(0.01, 0.5),
            doubler_p_in=0.57,
        )
    sec = top.subsection("sweeps")
    settings = SweepSettings(
        fig2_p_in=sec.grid("fig2_p_in_W", defaults["fig2_p_in_W"]),
        fig3_T=sec.grid("fig3_T", defaults["fig3_T"]),
        fig4b_pump=sec.grid("fig4b_pump_W", defaults["fig4b_pump_W"]),
        predict_x=sec.grid("predict_x", defaults["predict_x"]),
        coupler_x=sec.number("coupler_x", default=1.0, required=False),
        coupler_T_range=sec.pair("coupler_T_range", (0.05, 0.4)),
        doubler_T_range=sec.pair("doubler_T_range", (0.01, 0.5)),
        doubler_p_in=sec.number("doubler_p_in_W", default=0.57, required=False),
    )
    sec.finish()
    return settings
