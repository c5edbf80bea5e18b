"""CSV schemas for the four sqzlab artifacts.

The renderer trusts nothing: headers must match the producing CLI's
contract exactly and every cell must parse as a finite float.  Failures
carry enough context to diagnose a broken or mislabeled file.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path


class SchemaError(Exception):
    """Input CSV does not match the artifact contract."""


HEADERS: dict[str, list[str]] = {
    "fig2": ["p_in_W", "p_sh_W", "efficiency"],
    "fig3a": ["T", "p_th_W"],
    "fig3b": ["T", "rho_x0", "rho_x07", "rho_x1"],
    "fig4b": ["pump_W", "squeeze_dB", "antisqueeze_dB"],
}

FIGURE_IDS = tuple(HEADERS)


def load_columns(figure_id: str, csv_path: str | Path) -> dict[str, list[float]]:
    """Parse an artifact into named columns, validating as we go."""
    if figure_id not in HEADERS:
        raise SchemaError(
            f"unknown figure id {figure_id!r}; expected one of {', '.join(HEADERS)}"
        )
    expected = HEADERS[figure_id]
    path = Path(csv_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read CSV: {exc}") from exc

    lines = text.splitlines()
    body_start = 0
    for line in lines:
        if not line.startswith("#"):
            break
        body_start += 1
    body = lines[body_start:]
    if any(line.startswith("#") for line in body):
        raise SchemaError(f"{path}: comment lines are only allowed before the header")
    if not body:
        raise SchemaError(
            f"{path}: no header row; expected {','.join(expected)}"
        )

    rows = list(csv.reader(body))
    header = rows[0]
    if header != expected:
        raise SchemaError(
            f"{path}: header mismatch for {figure_id}: expected "
            f"{','.join(expected)}, found {','.join(header)}"
        )
    if len(rows) < 2:
        raise SchemaError(f"{path}: no data rows under the header")

    columns: dict[str, list[float]] = {name: [] for name in expected}
    for lineno, row in enumerate(rows[1:], start=body_start + 2):
        if len(row) != len(expected):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(expected)} cells, found {len(row)}"
            )
        for name, cell in zip(expected, row):
            try:
                value = float(cell)
            except ValueError as exc:
                raise SchemaError(
                    f"{path}:{lineno}: column {name}: not a number: {cell!r}"
                ) from exc
            if not math.isfinite(value):
                raise SchemaError(
                    f"{path}:{lineno}: column {name}: non-finite value {cell}"
                )
            columns[name].append(value)
    return columns
