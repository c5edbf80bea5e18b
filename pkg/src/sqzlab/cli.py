"""Command-line front end.

Four commands against one JSON config file:

    sqzlab enl        single-pass conversion report (xi, sigma, h, E_NL)
    sqzlab reproduce  standard sweeps as CSV artifacts (fig2, fig3a, fig3b, fig4b)
    sqzlab optimize   coupler / doubler-coupler / sigma optimum with sensitivity
    sqzlab predict    best squeezing over a normalized-pump grid, with overrides

Exit codes: 0 success, 2 configuration or usage error, 3 solver or model
error.  CSV artifacts start with two `#` provenance comments (command and
config SHA-256, never a timestamp), then a header row; identical inputs
produce byte-identical files, written atomically via rename.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import doubler as dbl
from . import nlo, opo, squeezing
from .config import RunConfig, load_config
from .errors import ConfigError, SqzlabError
from .opo import LossModel

FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig4b")
OPTIMIZE_TARGETS = ("coupler", "doubler-coupler", "sigma")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.handler(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SqzlabError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="JSON config file (default: bundled constants)")
    common.add_argument("--out", metavar="DIR", default=None,
                        help="directory for CSV artifacts")
    common.add_argument("--format", choices=("csv",), default="csv",
                        help="artifact format (csv only)")

    parser = argparse.ArgumentParser(
        prog="sqzlab",
        description="Design toolkit for cw squeezed-light sources: OPO "
                    "thresholds, squeezing spectra and cavity-enhanced doubling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enl", parents=[common],
                       help="single-pass conversion report for the configured crystal")
    p.set_defaults(handler=cmd_enl)

    p = sub.add_parser("reproduce", parents=[common],
                       help="write one of the standard sweep artifacts")
    p.add_argument("figure_id", choices=FIGURE_IDS)
    p.set_defaults(handler=cmd_reproduce)

    p = sub.add_parser("optimize", parents=[common],
                       help="locate an optimum and print its +-10%% sensitivity")
    p.add_argument("target", choices=OPTIMIZE_TARGETS)
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("predict", parents=[common],
                       help="best squeezing over the x grid, with loss/phase overrides")
    p.add_argument("--l0", type=float, default=None, metavar="L0",
                   help="override passive intracavity loss (dimensionless)")
    p.add_argument("--a", type=float, default=None, metavar="A_PER_W",
                   help="override pump-induced loss coefficient [1/W]")
    p.add_argument("--theta-deg", type=float, default=None, metavar="DEG",
                   help="override phase-noise angle [degrees]")
    p.set_defaults(handler=cmd_predict)

    return parser


def _write_csv(
    out_dir: str,
    name: str,
    command: str,
    cfg: RunConfig,
    header: tuple[str, ...],
    rows: list[tuple],
) -> Path:
    """Assemble the whole artifact in memory, then write-and-rename."""
    lines = [f"# command: {command}", f"# config_sha256: {cfg.sha256}", ",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    data = ("\n".join(lines) + "\n").encode("utf-8")
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    tmp = directory / (name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, directory / name)
    return directory / name


def _report(pairs: list[tuple[str, object]]) -> None:
    for key, value in pairs:
        print(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")


def _resolved_focus(cfg: RunConfig) -> tuple[float, float, float]:
    xi = nlo.focusing_parameter(cfg.crystal, cfg.focusing)
    if cfg.focusing.sigma_mode is None:
        sigma, h = nlo.optimize_sigma(xi)
    else:
        sigma = cfg.focusing.sigma_mode
        h = nlo.bk_focus_factor(sigma, xi)
    return xi, sigma, h


def cmd_enl(args: argparse.Namespace, cfg: RunConfig) -> int:
    xi, sigma, h = _resolved_focus(cfg)
    enl = nlo.enl_from_deff(cfg.crystal, cfg.focusing)
    d_inv = nlo.deff_from_enl(cfg.opo.enl, cfg.crystal, cfg.focusing)
    _report([
        ("xi", xi),
        ("sigma", sigma),
        ("h", h),
        ("enl_per_W", enl.value),
        ("d_eff_pm_per_V", cfg.crystal.d_eff * 1e12),
        ("d_eff_inverted_pm_per_V", d_inv * 1e12),
        ("enl_measured_per_W", cfg.opo.enl.value),
    ])
    if args.out is not None:
        path = _write_csv(
            args.out, "enl.csv", "sqzlab enl", cfg,
            ("xi", "sigma", "h", "enl_per_W", "d_eff_inverted_pm_per_V"),
            [(xi, sigma, h, enl.value, d_inv * 1e12)],
        )
        print(f"wrote {path}")
    return 0


def _rows_fig2(cfg: RunConfig) -> list[tuple]:
    points = dbl.efficiency_sweep(cfg.sweeps.fig2_p_in.values(), cfg.doubler)
    return [(pt.p_in, pt.p_sh, pt.efficiency) for pt in points]


def _rows_fig3a(cfg: RunConfig) -> list[tuple]:
    rows = []
    for t in cfg.sweeps.fig3_T.values():
        try:
            rows.append((t, opo.oscillation_threshold(t, cfg.opo.enl, cfg.opo.loss)))
        except SqzlabError as exc:
            raise type(exc)(f"sweep row T = {t}: {exc}") from exc
    return rows


def _rows_fig3b(cfg: RunConfig) -> list[tuple]:
    rows = []
    for t in cfg.sweeps.fig3_T.values():
        try:
            p_th = opo.oscillation_threshold(t, cfg.opo.enl, cfg.opo.loss)
            rhos = [
                opo.escape_efficiency(t, x * x * p_th, cfg.opo.loss)
                for x in (0.0, 0.7, 1.0)
            ]
        except SqzlabError as exc:
            raise type(exc)(f"sweep row T = {t}: {exc}") from exc
        rows.append((t, *rhos))
    return rows


def _rows_fig4b(cfg: RunConfig) -> list[tuple]:
    return squeezing.squeezing_vs_pump(
        cfg.opo, cfg.detection, cfg.sweeps.fig4b_pump.values()
    )


_FIGURES = {
    "fig2": (("p_in_W", "p_sh_W", "efficiency"), _rows_fig2),
    "fig3a": (("T", "p_th_W"), _rows_fig3a),
    "fig3b": (("T", "rho_x0", "rho_x07", "rho_x1"), _rows_fig3b),
    "fig4b": (("pump_W", "squeeze_dB", "antisqueeze_dB"), _rows_fig4b),
}


def cmd_reproduce(args: argparse.Namespace, cfg: RunConfig) -> int:
    header, builder = _FIGURES[args.figure_id]
    rows = builder(cfg)
    out_dir = args.out if args.out is not None else "."
    path = _write_csv(
        out_dir, f"{args.figure_id}.csv",
        f"sqzlab reproduce {args.figure_id}", cfg, header, rows,
    )
    print(f"wrote {path}")
    return 0


def cmd_optimize(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.target == "coupler":
        x = cfg.sweeps.coupler_x
        t_opt, best = opo.optimize_coupler(
            x, cfg.opo.enl, cfg.opo.loss, cfg.sweeps.coupler_T_range
        )

        def value_at(t: float) -> float:
            return opo.escape_efficiency(
                t, opo.pump_power_at_x(x, t, cfg.opo.enl, cfg.opo.loss), cfg.opo.loss
            )

        headline = [("target", "coupler"), ("x", x),
                    ("T_opt", t_opt), ("rho_max", best)]
        columns = ("T", "rho")
    elif args.target == "doubler-coupler":
        p_in = cfg.sweeps.doubler_p_in
        t_opt, best = dbl.optimal_input_coupler(
            p_in, cfg.doubler.L_rt, cfg.doubler.gamma_sp, cfg.sweeps.doubler_T_range
        )

        def value_at(t: float) -> float:
            return dbl.shg_output(
                p_in, replace(cfg.doubler, T_in=t)
            ).efficiency

        headline = [("target", "doubler-coupler"), ("p_in_W", p_in),
                    ("T_in_opt", t_opt), ("efficiency_max", best)]
        columns = ("T_in", "efficiency")
    else:  # sigma
        xi = nlo.focusing_parameter(cfg.crystal, cfg.focusing)
        t_opt, best = nlo.optimize_sigma(xi)

        def value_at(s: float) -> float:
            return nlo.bk_focus_factor(s, xi)

        headline = [("target", "sigma"), ("xi", xi),
                    ("sigma_opt", t_opt), ("h_max", best)]
        columns = ("sigma", "h")

    sensitivity = []
    for factor in (0.9, 1.0, 1.1):
        point = t_opt * factor
        if args.target != "sigma" and not (0.0 < point < 1.0):
            continue  # +-10% stepped outside the physical coupler range
        sensitivity.append((point, best if factor == 1.0 else value_at(point)))

    _report(headline)
    print("sensitivity (+-10% around the optimum):")
    for point, value in sensitivity:
        print(f"  {columns[0]} = {point!r}  {columns[1]} = {value!r}")

    if args.out is not None:
        name = f"optimize_{args.target.replace('-', '_')}.csv"
        path = _write_csv(
            args.out, name, f"sqzlab optimize {args.target}", cfg,
            columns, sensitivity,
        )
        print(f"wrote {path}")
    return 0


def cmd_predict(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        opo_variant = cfg.opo
        if args.l0 is not None or args.a is not None:
            loss = LossModel(
                L0=args.l0 if args.l0 is not None else cfg.opo.loss.L0,
                a=args.a if args.a is not None else cfg.opo.loss.a,
            )
            # the measured threshold belongs to the original loss model; with
            # the losses overridden it is stale, so the model threshold takes over
            opo_variant = replace(cfg.opo, loss=loss, measured_threshold=None)
        chain_variant = cfg.detection
        if args.theta_deg is not None:
            chain_variant = replace(cfg.detection, phase_noise_deg=args.theta_deg)
    except ValueError as exc:
        raise ConfigError(f"predict overrides: {exc}") from exc

    x_grid = cfg.sweeps.predict_x.values()
    best_db, x_best = squeezing.predict_limit(opo_variant, chain_variant, x_grid)
    p_th_ref = opo.reference_threshold(opo_variant)
    _report([
        ("best_squeeze_dB", best_db),
        ("x", x_best),
        ("pump_W", x_best * x_best * p_th_ref),
        ("threshold_W", p_th_ref),
        ("threshold_source",
         "measured" if opo_variant.measured_threshold is not None else "model"),
    ])
    if x_best == max(x_grid):
        if _lossless(opo_variant, chain_variant):
            print("warning: lossless chain, squeezing is unbounded at x -> 1; "
                  "reporting the grid minimum")
        else:
            print("note: optimum sits at the grid edge; finer structure may lie "
                  "closer to threshold")

    if args.out is not None:
        pumps = [x * x * p_th_ref for x in x_grid]
        rows = squeezing.squeezing_vs_pump(opo_variant, chain_variant, pumps)
        path = _write_csv(
            args.out, "predict.csv", "sqzlab predict", cfg,
            ("x", "pump_W", "squeeze_dB", "antisqueeze_dB"),
            [(x, *row) for x, row in zip(x_grid, rows)],
        )
        print(f"wrote {path}")
    return 0


def _lossless(opo_variant, chain_variant) -> bool:
    return (
        opo_variant.loss.L0 == 0.0
        and opo_variant.loss.a == 0.0
        and chain_variant.eta_homodyne == 1.0
        and chain_variant.eta_propagation == 1.0
        and chain_variant.phase_noise_deg == 0.0
        and chain_variant.analysis_omega == 0.0
    )


if __name__ == "__main__":
    sys.exit(main())
