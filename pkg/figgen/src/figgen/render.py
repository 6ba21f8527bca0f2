"""Figure renderers for the six supported layouts.

Rendering is deterministic: fixed style, fixed dpi, Agg backend, no
timestamps in the output metadata, inputs ordered as given on the command
line.  Each figure id declares the CSV schemas it consumes; a check pass
validates schemas without touching matplotlib.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import (
    DYNAMICS_COLUMNS,
    EXACT_COLUMNS,
    RATES_COLUMNS,
    SWEEP_COLUMNS,
    SchemaError,
    load_csv,
    require_columns,
    require_mode,
)

FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig3c", "fig4", "figA5")

_STYLE = {
    "figure.figsize": (6.0, 4.2),
    "figure.dpi": 160,
    "savefig.dpi": 160,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    csv_paths: tuple[str, ...]
    out_path: str
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.figure_id not in FIGURE_IDS:
            raise SchemaError(f"unknown figure id '{self.figure_id}'")
        if not self.csv_paths:
            raise SchemaError(f"{self.figure_id}: needs at least one CSV")


def _split_sweep_and_exact(spec: FigureSpec, mode: str) -> tuple[list, list]:
    sweeps, exacts = [], []
    for path in spec.csv_paths:
        columns, rows = load_csv(path)
        if columns == EXACT_COLUMNS:
            exacts.append((path, rows))
            continue
        require_columns(path, columns, SWEEP_COLUMNS)
        require_mode(path, rows, mode)
        sweeps.append((path, rows))
    return sweeps, exacts


def _thermo_curve(r_h: float) -> tuple[np.ndarray, np.ndarray]:
    xs = np.linspace(0.0, 1.0, 401)
    ys = np.clip((2.0 * xs - 1.0) / r_h, 0.0, 1.0)
    return xs, ys


def _check_fig2(spec: FigureSpec) -> None:
    sweeps, _ = _split_sweep_and_exact(spec, "holevo")
    if not sweeps:
        raise SchemaError(f"{spec.figure_id}: needs at least one holevo sweep CSV")


def _render_fig2(spec: FigureSpec, ax) -> None:
    sweeps, exacts = _split_sweep_and_exact(spec, "holevo")
    if not sweeps:
        raise SchemaError("fig2: needs at least one holevo sweep CSV")
    ratio = None
    for path, rows in sweeps:
        N = rows[0]["N"]
        H = rows[0]["amount"]
        ratio = H / N
        xs = [r["n"] / N for r in rows]
        ys = [r["mean_bits"] / H for r in rows]
        ax.plot(xs, ys, marker="o", ms=3, lw=1.2, label=f"N={int(N)}")
    for path, rows in exacts:
        N = rows[0]["N"]
        H = rows[0]["H"]
        xs = [r["n"] / N for r in rows]
        ys = [r["chi_exact_bits"] / H for r in rows]
        ax.plot(xs, ys, lw=1.0, ls="--", color="black", label=f"exact N={int(N)}")
    xs, ys = _thermo_curve(spec.options.get("ratio", ratio))
    ax.plot(xs, ys, lw=2.0, alpha=0.5, color="crimson", label="thermodynamic limit")
    ax.set_xlabel("n / N")
    ax.set_ylabel("retrieved bits / H")
    ax.legend(fontsize=7)
    if len(sweeps) > 1:
        inset = ax.inset_axes([0.62, 0.12, 0.33, 0.38])
        below, above = [], []
        for path, rows in sweeps:
            N = rows[0]["N"]
            H = rows[0]["amount"]
            r_lo = spec.options.get("r_below", 8 / 19)
            r_hi = spec.options.get("r_above", 14 / 19)
            pick_lo = min(rows, key=lambda r: abs(r["n"] / N - r_lo))
            pick_hi = min(rows, key=lambda r: abs(r["n"] / N - r_hi))
            below.append((N, pick_lo["mean_bits"]))
            above.append((N, H - pick_hi["mean_bits"]))
        for series, marker, label in ((below, "o", "low side"), (above, "x", "high side")):
            pts = [(n, d) for n, d in series if d > 0]
            if pts:
                inset.semilogy([p[0] for p in pts], [p[1] for p in pts],
                               marker=marker, ms=4, lw=1.0, label=label)
        inset.set_xlabel("N", fontsize=6)
        inset.set_ylabel("deviation (bits)", fontsize=6)
        inset.tick_params(labelsize=6)


def _check_fig3a(spec: FigureSpec) -> None:
    for path in spec.csv_paths:
        columns, _ = load_csv(path)
        require_columns(path, columns, DYNAMICS_COLUMNS)


def _render_fig3a(spec: FigureSpec, ax) -> None:
    for path in spec.csv_paths:
        columns, rows = load_csv(path)
        require_columns(path, columns, DYNAMICS_COLUMNS)
        amounts = sorted({r["amount"] for r in rows})
        cmap = plt.get_cmap("coolwarm")
        for i, amount in enumerate(amounts):
            pts = [(r["t"], r["distance"]) for r in rows if r["amount"] == amount and r["distance"] > 0]
            if not pts:
                continue
            color = cmap(i / max(len(amounts) - 1, 1))
            ax.semilogy([p[0] for p in pts], [p[1] for p in pts], color=color,
                        lw=1.2, label=f"H={int(amount)}")
    ax.set_xlabel("depth t (layers)")
    ax.set_ylabel("distance to steady state")
    ax.legend(fontsize=7, ncol=2)


def _check_fig3b(spec: FigureSpec) -> None:
    for path in spec.csv_paths:
        columns, _ = load_csv(path)
        require_columns(path, columns, RATES_COLUMNS)


def _render_fig3b(spec: FigureSpec, ax) -> None:
    for path in spec.csv_paths:
        columns, rows = load_csv(path)
        require_columns(path, columns, RATES_COLUMNS)
        rows = sorted(rows, key=lambda r: r["amount"] / r["N"])
        xs = [r["amount"] / r["N"] for r in rows]
        ax.fill_between(xs, [r["lower"] for r in rows], [r["upper"] for r in rows], alpha=0.25)
        ax.plot(xs, [r["rate"] for r in rows], marker="o", ms=4, lw=1.2)
    ax.set_xlabel("H / N")
    ax.set_ylabel("decay rate (1/layer)")


def _check_fig3c(spec: FigureSpec) -> None:
    sweeps, _ = _split_sweep_and_exact(spec, "holevo")
    if not sweeps:
        raise SchemaError("fig3c: needs at least one holevo sweep CSV")


def _render_fig3c(spec: FigureSpec, ax) -> None:
    sweeps, _ = _split_sweep_and_exact(spec, "holevo")
    if not sweeps:
        raise SchemaError("fig3c: needs at least one holevo sweep CSV")
    for path, rows in sweeps:
        N = rows[0]["N"]
        xs = [r["n"] / N for r in rows]
        ax.plot(xs, [r["std_bits"] for r in rows], marker="o", ms=3, lw=1.2,
                label=f"N={int(N)}")
    ax.set_xlabel("n / N")
    ax.set_ylabel("std dev of retrieved bits")
    ax.legend(fontsize=7)


def _check_fig4(spec: FigureSpec) -> None:
    sweeps, _ = _split_sweep_and_exact(spec, "coherent")
    if not sweeps:
        raise SchemaError("fig4: needs at least one coherent sweep CSV")


def _render_fig4(spec: FigureSpec, ax) -> None:
    sweeps, _ = _split_sweep_and_exact(spec, "coherent")
    if not sweeps:
        raise SchemaError("fig4: needs at least one coherent sweep CSV")
    for path, rows in sweeps:
        N = rows[0]["N"]
        C = rows[0]["amount"]
        xs = [r["n"] / N for r in rows]
        ax.plot(xs, [r["mean_bits"] / C for r in rows], marker="o", ms=3, lw=1.2,
                label=f"N={int(N)}")
    ax.axhline(1.0, color="gray", lw=0.8, ls=":")
    ax.axhline(-1.0, color="gray", lw=0.8, ls=":")
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.set_xlabel("n / N")
    ax.set_ylabel("coherent information / C")
    ax.legend(fontsize=7)


def _check_figA5(spec: FigureSpec) -> None:
    sweeps, exacts = _split_sweep_and_exact(spec, "holevo")
    if not exacts or not sweeps:
        raise SchemaError("figA5: needs one exact CSV and one sweep CSV")


def _render_figA5(spec: FigureSpec, ax) -> None:
    sweeps, exacts = _split_sweep_and_exact(spec, "holevo")
    if not exacts or not sweeps:
        raise SchemaError("figA5: needs one exact CSV and one sweep CSV")
    for path, rows in exacts:
        ax.plot([r["n"] for r in rows], [r["chi_exact_bits"] for r in rows],
                lw=1.4, color="tab:blue", label="analytic")
    for path, rows in sweeps:
        ax.errorbar([r["n"] for r in rows], [r["mean_bits"] for r in rows],
                    yerr=[r["stderr_bits"] for r in rows], fmt="o", ms=3.5,
                    color="tab:red", label="Monte Carlo")
    ax.set_xlabel("subsystem size n")
    ax.set_ylabel("retrieved bits")
    ax.legend(fontsize=8)


_RENDERERS = {
    "fig2": (_render_fig2, _check_fig2),
    "fig3a": (_render_fig3a, _check_fig3a),
    "fig3b": (_render_fig3b, _check_fig3b),
    "fig3c": (_render_fig3c, _check_fig3c),
    "fig4": (_render_fig4, _check_fig4),
    "figA5": (_render_figA5, _check_figA5),
}


def check_figure(spec: FigureSpec) -> None:
    """Validate the input CSV schemas for this figure without rendering."""
    _RENDERERS[spec.figure_id][1](spec)


def render_figure(spec: FigureSpec) -> str:
    """Render the figure to spec.out_path (PNG); returns the path."""
    check_figure(spec)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        try:
            _RENDERERS[spec.figure_id][0](spec, ax)
            fig.savefig(spec.out_path, metadata={"Software": None})
        finally:
            plt.close(fig)
    return spec.out_path
