"""Command-line entry point: figviews render --figure <id> --csv <path> --out <path>."""
from __future__ import annotations

import argparse
import sys

from .render import default_spec, render
from .schema import FIGURE_IDS, SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figviews",
        description="Render sqzlab CSV artifacts into annotated figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one artifact to an image")
    p_render.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p_render.add_argument("--csv", required=True, help="input artifact path")
    p_render.add_argument("--out", required=True, help="output .png or .svg path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        out = render(default_spec(args.figure, args.csv), args.out)
    except SchemaError as exc:
        print(f"figviews: schema error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
