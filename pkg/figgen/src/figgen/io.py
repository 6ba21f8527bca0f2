"""CSV loading and schema checks for the figure renderer.

figgen is a read-only consumer of the simulation CLI's CSV files; every
number plotted comes out of a CSV (axis normalization aside).
"""

from __future__ import annotations

import csv
import os

SWEEP_COLUMNS = ["mode", "N", "amount", "t", "n", "samples", "mean_bits", "std_bits", "stderr_bits"]
DYNAMICS_COLUMNS = ["N", "amount", "t", "distance"]
RATES_COLUMNS = ["N", "amount", "t_lo", "t_hi", "rate", "lower", "upper"]
EXACT_COLUMNS = ["N", "H", "n", "chi_exact_bits", "es_nH_bits", "es_n0_bits"]

_NUMERIC_EXEMPT = {"mode"}


class SchemaError(ValueError):
    """A CSV does not match the schema a figure needs."""


def load_csv(path: str) -> tuple[list[str], list[dict]]:
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        rows = []
        for raw in reader:
            row = {}
            for key, val in raw.items():
                row[key] = val if key in _NUMERIC_EXEMPT else float(val)
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return list(columns), rows


def detect_kind(columns: list[str]) -> str | None:
    for kind, schema in (
        ("sweep", SWEEP_COLUMNS),
        ("dynamics", DYNAMICS_COLUMNS),
        ("rates", RATES_COLUMNS),
        ("exact", EXACT_COLUMNS),
    ):
        if columns == schema:
            return kind
    return None


def require_columns(path: str, columns: list[str], needed: list[str]) -> None:
    for col in needed:
        if col not in columns:
            raise SchemaError(f"{path}: missing column '{col}'")


def require_mode(path: str, rows: list[dict], mode: str) -> None:
    modes = {row.get("mode") for row in rows}
    if modes != {mode}:
        raise SchemaError(f"{path}: expected mode '{mode}' rows, found {sorted(modes)}")
