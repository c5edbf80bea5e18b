"""Figure assembly for the four artifact types.

All numbers here come from the CSV or are fixed annotation anchors; no
model quantity is ever computed on this side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .schema import FIGURE_IDS, SchemaError, load_columns

__all__ = ["Anchor", "FigureSpec", "default_spec", "build_figure", "render"]


@dataclass(frozen=True)
class Anchor:
    """A reference point drawn on top of the curves."""

    x: float
    y: float
    label: str
    column: str  # which CSV column the point belongs with


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    csv_path: Path
    xlabel: str
    ylabel: str
    anchors: tuple[Anchor, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.figure_id not in FIGURE_IDS:
            raise SchemaError(
                f"unknown figure id {self.figure_id!r}; expected one of "
                f"{', '.join(FIGURE_IDS)}"
            )


_LABELS = {
    "fig2": ("input power [W]", "second-harmonic power [W]"),
    "fig3a": ("output coupler T", "oscillation threshold [W]"),
    "fig3b": ("output coupler T", "escape efficiency"),
    "fig4b": ("pump power [W]", "noise relative to shot noise [dB]"),
}

# quotable reference values, fixed by hand
_ANCHORS = {
    "fig2": (
        Anchor(0.57, 0.40, "0.40 W", "p_sh_W"),
        Anchor(0.57, 0.70, "70%", "efficiency"),
    ),
    "fig3a": (),
    "fig3b": (Anchor(0.21, 0.91, "0.91", "rho_x1"),),
    "fig4b": (
        Anchor(0.20, -7.60, "-7.60 dB", "squeeze_dB"),
        Anchor(0.20, 13.97, "+13.97 dB", "antisqueeze_dB"),
    ),
}


def default_spec(figure_id: str, csv_path: str | Path) -> FigureSpec:
    """The canonical spec for one of the four artifacts."""
    if figure_id not in FIGURE_IDS:
        raise SchemaError(
            f"unknown figure id {figure_id!r}; expected one of {', '.join(FIGURE_IDS)}"
        )
    xlabel, ylabel = _LABELS[figure_id]
    return FigureSpec(
        figure_id=figure_id,
        csv_path=Path(csv_path),
        xlabel=xlabel,
        ylabel=ylabel,
        anchors=_ANCHORS[figure_id],
    )


def _draw_anchors(ax, anchors, column=None):
    for a in anchors:
        if column is not None and a.column != column:
            continue
        ax.plot([a.x], [a.y], marker="o", mfc="none", mec="black", ms=9, ls="none")
        ax.annotate(
            a.label,
            (a.x, a.y),
            textcoords="offset points",
            xytext=(8, 6),
            fontsize=8,
        )


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure for a spec; caller owns closing it."""
    cols = load_columns(spec.figure_id, spec.csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)

    if spec.figure_id == "fig2":
        ax.plot(cols["p_in_W"], cols["p_sh_W"], color="C0", label="output power")
        _draw_anchors(ax, spec.anchors, column="p_sh_W")
        ax2 = ax.twinx()
        ax2.plot(cols["p_in_W"], cols["efficiency"], color="C1", label="efficiency")
        ax2.set_ylabel("conversion efficiency")
        ax2.set_ylim(0.0, 1.0)
        _draw_anchors(ax2, spec.anchors, column="efficiency")
    elif spec.figure_id == "fig3a":
        ax.plot(cols["T"], cols["p_th_W"], color="C0")
        _draw_anchors(ax, spec.anchors)
    elif spec.figure_id == "fig3b":
        for name, label in (
            ("rho_x0", "x = 0"),
            ("rho_x07", "x = 0.7"),
            ("rho_x1", "x = 1"),
        ):
            ax.plot(cols["T"], cols[name], label=label)
        ax.legend(loc="lower right")
        _draw_anchors(ax, spec.anchors)
    else:  # fig4b
        ax.plot(cols["pump_W"], cols["squeeze_dB"], color="C0", label="squeezing")
        ax.plot(
            cols["pump_W"], cols["antisqueeze_dB"], color="C1", label="antisqueezing"
        )
        ax.axhline(0.0, color="gray", lw=0.8)
        ax.legend(loc="upper left")
        _draw_anchors(ax, spec.anchors)

    fig.tight_layout()
    return fig


def render(spec: FigureSpec, out_path: str | Path) -> Path:
    """Render a spec to a .png or .svg file; returns the written path."""
    out = Path(out_path)
    suffix = out.suffix.lower()
    if suffix not in (".png", ".svg"):
        raise SchemaError(f"{out}: output must end in .png or .svg")
    fig = build_figure(spec)
    try:
        if suffix == ".svg":
            # strip the creation date and pin hashed ids, else bytes drift
            with plt.rc_context({"svg.hashsalt": "figviews"}):
                fig.savefig(out, format="svg", metadata={"Date": None})
        else:
            fig.savefig(out, format="png", dpi=120)
    finally:
        plt.close(fig)
    return out
