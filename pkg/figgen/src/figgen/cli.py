"""Command line for the figure renderer.

Direct mode:   figgen <figure-id> --csv a.csv [b.csv ...] --out figure.png
Manifest mode: figgen from-manifest manifest.json --out-dir figures/

Manifest mode inspects every CSV a run manifest lists, detects its schema,
and renders every figure id those files can feed.  Exit codes: 0 ok,
2 schema/usage error (message names the missing column or file), 3 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .io import SchemaError, detect_kind, load_csv
from .render import FIGURE_IDS, FigureSpec, check_figure, render_figure


def _render_direct(args: argparse.Namespace) -> int:
    spec = FigureSpec(
        figure_id=args.figure_id,
        csv_paths=tuple(args.csv),
        out_path=args.out or f"{args.figure_id}.png",
        options={},
    )
    if args.check_only:
        check_figure(spec)
        print(f"{spec.figure_id}: schema ok")
        return 0
    path = render_figure(spec)
    print(f"wrote {path}")
    return 0


def _figures_from_manifest(manifest_path: str) -> list[tuple[str, tuple[str, ...]]]:
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    base = os.path.dirname(os.path.abspath(manifest_path))
    kinds: dict[str, list[str]] = {}
    for name in manifest.get("outputs", []):
        path = os.path.join(base, name)
        if not name.endswith(".csv") or not os.path.exists(path):
            continue
        columns, rows = load_csv(path)
        kind = detect_kind(columns)
        if kind == "sweep":
            kind = f"sweep-{rows[0]['mode']}"
        if kind:
            kinds.setdefault(kind, []).append(path)
    jobs: list[tuple[str, tuple[str, ...]]] = []
    holevo = kinds.get("sweep-holevo", [])
    exact = kinds.get("exact", [])
    if holevo:
        jobs.append(("fig2", tuple(holevo + exact)))
        jobs.append(("fig3c", tuple(holevo)))
    if kinds.get("sweep-coherent"):
        jobs.append(("fig4", tuple(kinds["sweep-coherent"])))
    if kinds.get("dynamics"):
        jobs.append(("fig3a", tuple(kinds["dynamics"])))
    if kinds.get("rates"):
        jobs.append(("fig3b", tuple(kinds["rates"])))
    if exact and holevo:
        jobs.append(("figA5", tuple(exact + holevo)))
    return jobs


def _render_manifest(args: argparse.Namespace) -> int:
    jobs = _figures_from_manifest(args.manifest)
    if not jobs:
        print("manifest references no renderable CSVs", file=sys.stderr)
        return 2
    os.makedirs(args.out_dir, exist_ok=True)
    for figure_id, paths in jobs:
        out = os.path.join(args.out_dir, f"{figure_id}.png")
        render_figure(FigureSpec(figure_id=figure_id, csv_paths=paths, out_path=out))
        print(f"wrote {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="figgen", description="Render scramlab figures from CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    for figure_id in FIGURE_IDS:
        p = sub.add_parser(figure_id, help=f"render {figure_id}")
        p.add_argument("--csv", nargs="+", required=True)
        p.add_argument("--out", type=str)
        p.add_argument("--check-only", action="store_true")
        p.set_defaults(func=_render_direct, figure_id=figure_id)
    pm = sub.add_parser("from-manifest", help="render everything a run manifest feeds")
    pm.add_argument("manifest")
    pm.add_argument("--out-dir", default="figures")
    pm.set_defaults(func=_render_manifest)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
