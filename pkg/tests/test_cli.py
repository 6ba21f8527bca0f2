import json
import os

import numpy as np
import pytest

from scramlab.cli import main, parse_int_list


def read(path):
    with open(path) as fh:
        return fh.read()


class TestParsing:
    def test_int_lists(self):
        assert parse_int_list("1..5") == [1, 2, 3, 4, 5]
        assert parse_int_list("1,3,9") == [1, 3, 9]
        assert parse_int_list("2..8:2") == [2, 4, 6, 8]
        assert parse_int_list("1..3,10") == [1, 2, 3, 10]


class TestSweepCommand:
    def test_row_count_matches_n_list(self, tmp_path):
        out = str(tmp_path)
        rc = main(["sweep", "--mode", "holevo", "--N", "19", "--amount", "8",
                   "--t-mult", "3", "--n", "1..19", "--samples", "20",
                   "--seed", "7", "--out", out])
        assert rc == 0
        lines = read(os.path.join(out, "sweep.csv")).strip().split("\n")
        assert lines[0] == "mode,N,amount,t,n,samples,mean_bits,std_bits,stderr_bits"
        assert len(lines) == 1 + 19

    def test_full_system_mean_is_exactly_one(self, tmp_path):
        out = str(tmp_path)
        rc = main(["sweep", "--mode", "holevo", "--N", "2", "--amount", "1",
                   "--n", "2", "--t", "5", "--samples", "100", "--seed", "1",
                   "--out", out])
        assert rc == 0
        row = read(os.path.join(out, "sweep.csv")).strip().split("\n")[1].split(",")
        assert float(row[6]) == 1.0

    def test_missing_amount_exits_2_naming_flag(self, tmp_path, capsys):
        rc = main(["sweep", "--mode", "holevo", "--N", "2", "--n", "2",
                   "--t", "5", "--samples", "10", "--out", str(tmp_path)])
        assert rc == 2
        assert "amount" in capsys.readouterr().err

    def test_byte_identical_reruns(self, tmp_path):
        args = ["sweep", "--mode", "holevo", "--N", "5", "--amount", "2",
                "--n", "1..5", "--t", "6", "--samples", "200", "--seed", "11"]
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(args + ["--out", out1]) == 0
        assert main(args + ["--out", out2, "--threads", "2"]) == 0
        assert read(os.path.join(out1, "sweep.csv")) == read(os.path.join(out2, "sweep.csv"))

    def test_global_mode_writes_t_minus_one(self, tmp_path):
        out = str(tmp_path)
        rc = main(["sweep", "--mode", "holevo", "--N", "4", "--amount", "2",
                   "--global", "--n", "2", "--samples", "50", "--seed", "3",
                   "--out", out])
        assert rc == 0
        row = read(os.path.join(out, "sweep.csv")).strip().split("\n")[1].split(",")
        assert row[3] == "-1"

    def test_manifest_written_and_complete(self, tmp_path):
        out = str(tmp_path)
        main(["sweep", "--mode", "holevo", "--N", "3", "--amount", "1",
              "--n", "1", "--t", "2", "--samples", "10", "--seed", "5", "--out", out])
        manifest = json.loads(read(os.path.join(out, "manifest.json")))
        assert manifest["status"] == "complete"
        assert manifest["master_seed"] == 5
        assert "sweep.csv" in manifest["outputs"]

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mode = holevo\nN = 4\namount = 2\nt = 3\nn = 1..4\n"
                       "samples = 30\nseed = 9\n")
        out = str(tmp_path / "out")
        rc = main(["sweep", "--config", str(cfg), "--samples", "40", "--out", out])
        assert rc == 0
        row = read(os.path.join(out, "sweep.csv")).strip().split("\n")[1].split(",")
        assert row[5] == "40"  # flag beat the file


class TestDynamicsCommand:
    def test_outputs_and_window_default(self, tmp_path):
        out = str(tmp_path)
        rc = main(["dynamics", "--N", "6", "--amount-range", "2", "--t-schedule",
                   "2..18", "--samples", "400", "--seed", "3", "--out", out])
        assert rc == 0
        manifest = json.loads(read(os.path.join(out, "manifest.json")))
        assert manifest["config"]["window"] == [7, 12]
        assert manifest["config"]["log_base"] == "e"
        dyn = read(os.path.join(out, "dynamics.csv")).strip().split("\n")
        assert dyn[0] == "N,amount,t,distance"
        assert len(dyn) == 1 + 17
        rates = read(os.path.join(out, "rates.csv")).strip().split("\n")
        assert rates[0] == "N,amount,t_lo,t_hi,rate,lower,upper"
        assert len(rates) == 2

    def test_reference_in_schedule_gives_zero_distance(self, tmp_path):
        out = str(tmp_path)
        rc = main(["dynamics", "--N", "4", "--amount-range", "2", "--t-schedule",
                   "2,6,12", "--ref-mult", "3", "--samples", "200", "--seed", "2",
                   "--out", out, "--window", "2,6"])
        assert rc == 0
        rows = read(os.path.join(out, "dynamics.csv")).strip().split("\n")[1:]
        last = rows[-1].split(",")
        assert int(last[2]) == 12 and float(last[3]) == 0.0

    def test_zero_distance_in_window_exits_4(self, tmp_path):
        # N=2 equilibrates instantly, so D vanishes inside the default window
        rc = main(["dynamics", "--N", "2", "--amount-range", "1", "--t-schedule",
                   "7..12", "--ref-mult", "7", "--samples", "50", "--seed", "2",
                   "--out", str(tmp_path)])
        assert rc == 4

    def test_byte_identical_reruns(self, tmp_path):
        args = ["dynamics", "--N", "5", "--amount-range", "1,3", "--t-schedule",
                "2..10", "--samples", "150", "--seed", "8", "--window", "4,8"]
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(args + ["--out", out1]) == 0
        assert main(args + ["--out", out2]) == 0
        for name in ("dynamics.csv", "rates.csv"):
            assert read(os.path.join(out1, name)) == read(os.path.join(out2, name))


class TestExactCommand:
    def test_curve_csv(self, tmp_path):
        out = str(tmp_path)
        rc = main(["exact", "--N", "5", "--H", "3", "--n", "1..5", "--out", out])
        assert rc == 0
        lines = read(os.path.join(out, "exact.csv")).strip().split("\n")
        assert lines[0] == "N,H,n,chi_exact_bits,es_nH_bits,es_n0_bits"
        assert len(lines) == 6
        chis = [float(l.split(",")[3]) for l in lines[1:]]
        assert chis[0] < 0.1 and chis[-1] == 3.0
        assert all(b >= a - 1e-12 for a, b in zip(chis, chis[1:]))

    def test_thermo_print(self, capsys):
        assert main(["exact", "--thermo", "0.6,0.421"]) == 0
        assert capsys.readouterr().out.startswith("0.475")

    def test_verify_argmax_small(self, capsys):
        # decomposed verification passes (outer regimes exact, middle vs the
        # continuum exponent); see acceptance notes for the literal clause
        assert main(["exact", "--N", "8", "--H", "3", "--verify-argmax"]) == 0
        assert "pass" in capsys.readouterr().out

    def test_verify_kkt_small(self, capsys):
        assert main(["exact", "--N", "10", "--H", "3", "--verify-kkt"]) == 0
        out = capsys.readouterr().out
        assert "pass" in out and "false=0" in out

    def test_invalid_range_exits_2(self, tmp_path):
        rc = main(["exact", "--N", "5", "--H", "9", "--n", "1..5", "--out", str(tmp_path)])
        assert rc == 2


class TestValidateCommand:
    def test_quick_validate_passes(self):
        assert main(["validate", "--quick"]) == 0

    def test_corrupted_sampler_fails_uniformity(self, capsys, monkeypatch):
        import scramlab.cli as cli_mod

        def biased(rng, count):
            vals = rng.integers(0, 11520, size=count)
            return np.where(vals < 600, 0, vals)  # simulate a corrupted table

        import scramlab.twoqubit as tq

        monkeypatch.setattr(tq, "sample_index_stream", biased)
        rc = main(["validate", "--quick"])
        assert rc == 1
        assert "two-qubit-sampler-uniformity" in capsys.readouterr().out
