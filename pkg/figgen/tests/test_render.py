"""End-to-end figgen tests against golden CSVs produced by the scramlab CLI.

The fixtures shell out to the installed `scramlab` command, so figgen is
exercised strictly through the primary component's external interfaces.
"""

import json
import os
import subprocess
import sys

import pytest

from figgen.cli import main
from figgen.io import SchemaError, load_csv
from figgen.render import FIGURE_IDS, FigureSpec, check_figure, render_figure


def run_scramlab(*args: str) -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "scramlab.cli", *args],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    """Golden CSVs from small, seeded scramlab runs (one per schema kind)."""
    root = tmp_path_factory.mktemp("golden")
    sweep_a = root / "sweep_a"
    sweep_b = root / "sweep_b"
    coh = root / "coherent"
    dyn = root / "dynamics"
    exact = root / "exact"
    run_scramlab("sweep", "--mode", "holevo", "--N", "6", "--amount", "2",
                 "--t-mult", "3", "--n", "1..6", "--samples", "400",
                 "--seed", "5", "--out", str(sweep_a))
    run_scramlab("sweep", "--mode", "holevo", "--N", "12", "--amount", "4",
                 "--t-mult", "3", "--n", "1..12", "--samples", "400",
                 "--seed", "5", "--out", str(sweep_b))
    run_scramlab("sweep", "--mode", "coherent", "--N", "6", "--amount", "2",
                 "--t", "18", "--n", "1..6", "--samples", "400",
                 "--seed", "5", "--out", str(coh))
    run_scramlab("dynamics", "--N", "6", "--amount-range", "1..5:2",
                 "--t-schedule", "2..18", "--samples", "300", "--seed", "5",
                 "--out", str(dyn))
    run_scramlab("exact", "--N", "6", "--H", "2", "--n", "1..6", "--out", str(exact))
    return {
        "sweep_a": str(sweep_a / "sweep.csv"),
        "sweep_b": str(sweep_b / "sweep.csv"),
        "sweep_manifest": str(sweep_a / "manifest.json"),
        "coherent": str(coh / "sweep.csv"),
        "dynamics": str(dyn / "dynamics.csv"),
        "rates": str(dyn / "rates.csv"),
        "exact": str(exact / "exact.csv"),
    }


def figure_inputs(golden: dict) -> dict[str, tuple[str, ...]]:
    return {
        "fig2": (golden["sweep_a"], golden["sweep_b"], golden["exact"]),
        "fig3a": (golden["dynamics"],),
        "fig3b": (golden["rates"],),
        "fig3c": (golden["sweep_a"], golden["sweep_b"]),
        "fig4": (golden["coherent"],),
        "figA5": (golden["exact"], golden["sweep_a"]),
    }


class TestAllFigures:
    def test_every_figure_renders_deterministically(self, golden, tmp_path):
        # the [SECONDARY] acceptance criterion: all six ids render from the
        # golden CSVs without error and are byte-identical on re-render
        inputs = figure_inputs(golden)
        assert set(inputs) == set(FIGURE_IDS)
        for figure_id, paths in inputs.items():
            out1 = tmp_path / f"{figure_id}_1.png"
            out2 = tmp_path / f"{figure_id}_2.png"
            render_figure(FigureSpec(figure_id, paths, str(out1)))
            render_figure(FigureSpec(figure_id, paths, str(out2)))
            b1 = out1.read_bytes()
            assert len(b1) > 1000
            assert b1 == out2.read_bytes(), f"{figure_id} render is not deterministic"
        print("[PASS] figgen-renders-all-figures: six ids, byte-identical re-renders")

    def test_check_only_pass_runs_without_rendering(self, golden):
        for figure_id, paths in figure_inputs(golden).items():
            check_figure(FigureSpec(figure_id, paths, "unused.png"))


class TestCli:
    def test_direct_mode(self, golden, tmp_path):
        out = tmp_path / "a5.png"
        rc = main(["figA5", "--csv", golden["exact"], golden["sweep_a"],
                   "--out", str(out)])
        assert rc == 0 and out.exists()

    def test_check_only_flag(self, golden):
        rc = main(["fig3a", "--csv", golden["dynamics"], "--check-only"])
        assert rc == 0

    def test_from_manifest_mode(self, golden, tmp_path):
        rc = main(["from-manifest", golden["sweep_manifest"], "--out-dir", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "fig2.png").exists()
        assert (tmp_path / "fig3c.png").exists()

    def test_missing_file_exits_3(self, tmp_path):
        rc = main(["fig3a", "--csv", str(tmp_path / "nope.csv"), "--out", "x.png"])
        assert rc == 3


class TestSchemaErrors:
    def test_empty_csv_names_file(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("N,amount,t,distance\n")
        with pytest.raises(SchemaError) as err:
            load_csv(str(bad))
        assert "empty.csv" in str(err.value)

    def test_missing_column_named(self, golden, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        with open(golden["dynamics"]) as fh:
            lines = fh.read().strip().split("\n")
        header = lines[0].split(",")
        drop = header.index("distance")
        rows = [",".join(v for i, v in enumerate(l.split(",")) if i != drop) for l in lines]
        bad.write_text("\n".join(rows) + "\n")
        rc = main(["fig3a", "--csv", str(bad), "--out", str(tmp_path / "x.png")])
        assert rc == 2
        assert "distance" in capsys.readouterr().err

    def test_wrong_mode_rejected(self, golden, tmp_path, capsys):
        rc = main(["fig4", "--csv", golden["sweep_a"], "--out", str(tmp_path / "x.png")])
        assert rc == 2
        assert "coherent" in capsys.readouterr().err
