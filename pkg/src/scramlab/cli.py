"""Command-line interface: sweeps, dynamics, exact curves, validation.

Exit codes: 0 ok, 1 validation failure, 2 bad configuration (diagnostic names
the offending flag), 3 I/O failure, 4 numeric degeneracy (zero distance in a
slope window).  Every run writes a JSON manifest next to its CSVs; the seed
is recorded in the manifest before any sampling starts and re-running with
the same seed reproduces each CSV byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .harness import (
    CheckpointError,
    ConfigError,
    ExperimentConfig,
    NumericDegeneracyError,
    decay_rate,
    run_dynamics,
    run_sweep,
)
from .orbit import (
    argmax_orbit_weight,
    brute_force_argmax,
    brute_force_argmax_exponent,
    exact_curve,
    holevo_exact,
    thermo_limit,
    verify_kkt,
)

SWEEP_COLUMNS = ["mode", "N", "amount", "t", "n", "samples", "mean_bits", "std_bits", "stderr_bits"]
DYNAMICS_COLUMNS = ["N", "amount", "t", "distance"]
RATES_COLUMNS = ["N", "amount", "t_lo", "t_hi", "rate", "lower", "upper"]
EXACT_COLUMNS = ["N", "H", "n", "chi_exact_bits", "es_nH_bits", "es_n0_bits"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def parse_int_list(text: str) -> list[int]:
    """Parse '1..19', '1,3,7', '2..40:2' or any comma mix of those."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        step = 1
        if ":" in part:
            part, step_s = part.rsplit(":", 1)
            step = int(step_s)
        if ".." in part:
            lo_s, hi_s = part.split("..", 1)
            out.extend(range(int(lo_s), int(hi_s) + 1, step))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty integer list: {text!r}")
    return out


def _write_csv(path: str, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


class Manifest:
    """Run record written before sampling (seed pinned) and after completion."""

    def __init__(self, out_dir: str, command: str, config: dict, master_seed: int):
        self.path = os.path.join(out_dir, "manifest.json")
        self.payload = {
            "command": command,
            "config": config,
            "master_seed": master_seed,
            "version": __version__,
            "status": "running",
            "started_utc": datetime.now(timezone.utc).isoformat(),
            "outputs": [],
        }
        self._t0 = time.monotonic()
        self._write()

    def _write(self) -> None:
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(self.payload, fh, indent=2)
        os.replace(tmp, self.path)

    def add_output(self, path: str) -> None:
        self.payload["outputs"].append(os.path.basename(path))

    def finish(self, **extra) -> None:
        self.payload.update(extra)
        self.payload["status"] = "complete"
        self.payload["ended_utc"] = datetime.now(timezone.utc).isoformat()
        self.payload["wall_seconds"] = time.monotonic() - self._t0
        self._write()


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("config", f"cannot parse config line: {line!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _merged(args: argparse.Namespace, key: str, cast=str, default=None):
    """Flag value, else config-file value, else default (flags win)."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    fileval = getattr(args, "_file_values", {}).get(key)
    if fileval is not None:
        return cast(fileval)
    return default


def _require(args: argparse.Namespace, key: str, cast=str):
    val = _merged(args, key, cast)
    if val is None:
        raise ConfigError(key, f"missing required option --{key.replace('_', '-')}")
    return val


def _prepare_out(args: argparse.Namespace) -> str:
    out = _merged(args, "out", str, ".")
    os.makedirs(out, exist_ok=True)
    return out


def cmd_sweep(args: argparse.Namespace) -> int:
    mode = _require(args, "mode")
    N = _require(args, "N", int)
    amount = _require(args, "amount", int)
    n_values = tuple(parse_int_list(_require(args, "n")))
    samples = _require(args, "samples", int)
    seed = _merged(args, "seed", int, 0)
    threads = _merged(args, "threads", int)
    use_global = bool(_merged(args, "use_global", bool, False))
    t_flag = _merged(args, "t", int)
    t_mult = _merged(args, "t_mult", int)
    if use_global:
        depth_rule: int | str = "global"
    elif t_flag is not None:
        depth_rule = t_flag
    elif t_mult is not None:
        depth_rule = f"{t_mult}N"
    else:
        raise ConfigError("t", "missing depth: give --t, --t-mult, or --global")
    config = ExperimentConfig(
        N=N,
        amount=amount,
        mode=mode,
        depth_rule=depth_rule,
        n_values=n_values,
        samples=samples,
        master_seed=seed,
        checkpoint_interval=_merged(args, "checkpoint_interval", int, 0),
    )
    out = _prepare_out(args)
    manifest = Manifest(out, "sweep", _config_dict(config), seed)
    checkpoint = os.path.join(out, "sweep.checkpoint.json") if config.checkpoint_interval else None
    result = run_sweep(config, threads=threads, checkpoint_path=checkpoint)
    rows = [
        [config.mode, config.N, config.amount, p.t, p.n, p.count, p.mean, p.std, p.stderr]
        for p in result.points
    ]
    csv_path = os.path.join(out, "sweep.csv")
    _write_csv(csv_path, SWEEP_COLUMNS, rows)
    manifest.add_output(csv_path)
    manifest.finish(threads=threads)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def _config_dict(config: ExperimentConfig) -> dict:
    return {
        "N": config.N,
        "amount": config.amount,
        "mode": config.mode,
        "depth_rule": str(config.depth_rule),
        "n_values": list(config.n_values),
        "samples": config.samples,
    }


def cmd_dynamics(args: argparse.Namespace) -> int:
    N = _require(args, "N", int)
    amounts = parse_int_list(_require(args, "amount_range"))
    schedule = parse_int_list(_require(args, "t_schedule"))
    samples = _require(args, "samples", int)
    seed = _merged(args, "seed", int, 0)
    threads = _merged(args, "threads", int)
    ref_mult = _merged(args, "ref_mult", int, 3)
    window = [int(v) for v in str(_merged(args, "window", str, "7,12")).split(",")]
    if len(window) != 2:
        raise ConfigError("window", "window must be 't,t_prime'")
    out = _prepare_out(args)
    manifest = Manifest(
        out,
        "dynamics",
        {
            "N": N,
            "amounts": amounts,
            "t_schedule": schedule,
            "ref_mult": ref_mult,
            "window": window,
            "samples": samples,
            "log_base": "e",
        },
        seed,
    )
    dyn_rows = []
    rate_rows = []
    for amount in amounts:
        config = ExperimentConfig(
            N=N,
            amount=amount,
            mode="holevo",
            depth_rule=f"{ref_mult}N",
            n_values=tuple(range(1, N + 1)),
            samples=samples,
            master_seed=seed,
        )
        dyn = run_dynamics(config, schedule, reference_depth=ref_mult * N, threads=threads)
        for t in dyn.t_schedule:
            dyn_rows.append([N, amount, t, dyn.distance(t)])
        rate, lower, upper = decay_rate(dyn, window[0], window[1])
        rate_rows.append([N, amount, window[0], window[1], rate, lower, upper])
    dyn_path = os.path.join(out, "dynamics.csv")
    _write_csv(dyn_path, DYNAMICS_COLUMNS, dyn_rows)
    rates_path = os.path.join(out, "rates.csv")
    _write_csv(rates_path, RATES_COLUMNS, rate_rows)
    manifest.add_output(dyn_path)
    manifest.add_output(rates_path)
    manifest.finish(threads=threads)
    print(f"wrote {dyn_path} and {rates_path}")
    return 0


def cmd_exact(args: argparse.Namespace) -> int:
    thermo = _merged(args, "thermo", str)
    if thermo is not None:
        r_n, r_h = (float(v) for v in thermo.split(","))
        print(_fmt(thermo_limit(r_n, r_h)))
        if getattr(args, "N", None) is None:
            return 0
    N = _require(args, "N", int)
    H = _require(args, "H", int)
    if N < 1:
        raise ConfigError("N", "N must be >= 1")
    if not 1 <= H <= N:
        raise ConfigError("H", f"need 1 <= H <= N, got H={H}, N={N}")
    failures = 0
    if _merged(args, "verify_argmax", bool, False):
        failures += _verify_argmax_table(N)
    if _merged(args, "verify_kkt", bool, False):
        failures += _verify_kkt_table(N)
    n_arg = _merged(args, "n", str)
    if n_arg is not None:
        n_values = parse_int_list(n_arg)
        out = _prepare_out(args)
        manifest = Manifest(out, "exact", {"N": N, "H": H, "n_values": n_values}, 0)
        curve = exact_curve(N, H, n_values)
        rows = [
            [N, H, n, chi, esh, es0]
            for n, chi, esh, es0 in zip(curve.n_values, curve.chi, curve.es_h, curve.es_0)
        ]
        csv_path = os.path.join(out, "exact.csv")
        _write_csv(csv_path, EXACT_COLUMNS, rows)
        manifest.add_output(csv_path)
        manifest.finish()
        print(f"wrote {csv_path} ({len(rows)} rows)")
    return 1 if failures else 0


def _verify_argmax_table(N: int) -> int:
    """Closed-form maximizer checks across all (n, h) for this N.

    Strictly inside the first and last regimes the exact orbit-weight argmax
    must equal the closed form; in the middle regime the closed form is the
    continuum statement, so it is checked against the lattice maximizer of
    the asymptotic exponent.  Exact regime boundaries are inconclusive and
    skipped (reported as a count).
    """
    checked = mismatches = skipped = 0
    finite_n_deviations = 0
    for h in range(0, N + 1):
        for n in range(1, N + 1):
            if 2 * n == N - h or 2 * n == N + h:
                skipped += 1
                continue
            closed = argmax_orbit_weight(n, N, h)
            tup = (closed.k1, closed.k2, closed.l1, closed.l2)
            if 2 * n < N - h or 2 * n > N + h:
                brute = brute_force_argmax(n, N, h)
                ok = tup == (brute.k1, brute.k2, brute.l1, brute.l2)
            else:
                if (N - h) % 2 == 1:
                    skipped += 1
                    continue
                ok = tup == brute_force_argmax_exponent(n, N, h)
                bt = brute_force_argmax(n, N, h)
                if tup != (bt.k1, bt.k2, bt.l1, bt.l2):
                    finite_n_deviations += 1
            checked += 1
            if not ok:
                mismatches += 1
    status = "pass" if mismatches == 0 else "FAIL"
    print(f"verify-argmax N={N}: {status} ({checked} points, {mismatches} mismatches, "
          f"{skipped} boundary points skipped)")
    if finite_n_deviations:
        print(f"  note: finite-N orbit-weight maximizer departs from the continuum "
              f"closed form at {finite_n_deviations} middle-regime points (O(1) exponent gap)")
    return 0 if mismatches == 0 else 1


def _verify_kkt_table(N: int) -> int:
    rows = {"true": 0, "false": 0, "inconclusive": 0}
    for h in range(0, N + 1):
        for n in range(1, N + 1):
            res = verify_kkt(n, N, h)
            if res is None:
                rows["inconclusive"] += 1
            elif res:
                rows["true"] += 1
            else:
                rows["false"] += 1
    status = "pass" if rows["false"] == 0 else "FAIL"
    print(f"verify-kkt N={N}: {status} (true={rows['true']}, false={rows['false']}, "
          f"inconclusive={rows['inconclusive']})")
    return 0 if rows["false"] == 0 else 1


def cmd_validate(args: argparse.Namespace) -> int:
    quick = bool(getattr(args, "quick", False))
    seed = _merged(args, "seed", int, 20240801)
    threads = _merged(args, "threads", int)
    results: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str) -> None:
        results.append((name, ok, detail))
        print(f"  [{'pass' if ok else 'FAIL'}] {name}: {detail}")

    print("validation suite" + (" (quick)" if quick else ""))

    # 1. stabilizer entropies vs dense von Neumann entropies
    from .stabilizer import (
        QubitSubset,
        dense_reduced_entropy,
        new_basis_state,
        new_mixed_encoding_state,
        subsystem_entropy,
    )
    from .circuits import apply_circuit, build_brick_wall

    rng = np.random.default_rng(seed)
    trials = 200 if quick else 1000
    worst = 0.0
    ok = True
    for _ in range(trials):
        N = int(rng.integers(2, 6))
        h = int(rng.integers(0, N + 1))
        if h:
            state = new_mixed_encoding_state(N, QubitSubset.of(rng.permutation(N)[:h].tolist()))
        else:
            state = new_basis_state(N)
        circ = build_brick_wall(N, int(rng.integers(0, 3 * N + 1)), rng)
        state = apply_circuit(state, circ)
        k = int(rng.integers(1, N + 1))
        region = QubitSubset.of(rng.permutation(N)[:k].tolist())
        s_fast = subsystem_entropy(state, region)
        s_dense = dense_reduced_entropy(state, region)
        worst = max(worst, abs(s_fast - s_dense))
        if abs(s_fast - s_dense) > 1e-9:
            ok = False
            break
    record("dense-entropy-equivalence", ok, f"{trials} instances, worst |diff| {worst:.2e}")

    # 2. two-qubit sampler uniformity
    from scipy import stats

    from .twoqubit import GROUP_ORDER, sample_index_stream

    draws = 10**6 if quick else 10**7
    counts = np.bincount(
        sample_index_stream(np.random.default_rng(seed + 1), draws),
        minlength=GROUP_ORDER,
    )
    chi2, p = stats.chisquare(counts)
    record("two-qubit-sampler-uniformity", p > 1e-3, f"{draws} draws, chi2 p={p:.4f}")

    # 3. steady-state convergence: t=3N vs t=4N
    N, H = 8, 3
    samples = 1500 if quick else 4000
    base = dict(N=N, amount=H, mode="holevo", n_values=tuple(range(1, N + 1)),
                samples=samples, master_seed=seed + 2)
    r3 = run_sweep(ExperimentConfig(depth_rule="3N", **base), threads=threads)
    r4 = run_sweep(ExperimentConfig(depth_rule="4N", **base), threads=threads)
    ok = True
    worst = 0.0
    for p3, p4 in zip(r3.points, r4.points):
        se = (p3.stderr**2 + p4.stderr**2) ** 0.5
        dev = abs(p3.mean - p4.mean) / se if se > 0 else 0.0
        worst = max(worst, dev)
        if dev > 3.0:
            ok = False
    record("depth-3N-vs-4N-convergence", ok, f"N={N} H={H}, worst dev {worst:.2f} sigma")

    # 4. exact-vs-Monte-Carlo overlap (uniform global Clifford sampling)
    N, H = 5, 3
    samples = 10**4 if quick else 10**5
    cfg = ExperimentConfig(N=N, amount=H, mode="holevo", depth_rule="global",
                           n_values=tuple(range(1, N + 1)), samples=samples,
                           master_seed=seed + 3)
    res = run_sweep(cfg, threads=threads)
    ok = True
    worst = 0.0
    for p in res.points:
        exact = holevo_exact(p.n, N, H)
        if p.stderr > 0:
            dev = abs(p.mean - exact) / p.stderr
        else:
            dev = 0.0 if abs(p.mean - exact) < 1e-12 else float("inf")
        worst = max(worst, dev)
        if dev > 3.0:
            ok = False
    record("exact-vs-monte-carlo-overlap", ok, f"N={N} H={H}, worst dev {worst:.2f} sigma")

    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"validation FAILED: {failed[0]}")
        return 1
    print("all validation checks passed")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scramlab",
        description="Stabilizer-circuit information-retrieval laboratory",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sw = sub.add_parser("sweep", help="Monte Carlo sweep over subsystem sizes")
    sw.add_argument("--mode", choices=["holevo", "coherent"])
    sw.add_argument("--N", type=int)
    sw.add_argument("--amount", type=int, help="encoded bits H (holevo) or qubits C (coherent)")
    sw.add_argument("--t", type=int, help="explicit circuit depth")
    sw.add_argument("--t-mult", type=int, dest="t_mult", help="depth as a multiple of N")
    sw.add_argument("--global", action="store_const", const=True, dest="use_global",
                    help="sample uniform global Cliffords instead of circuits")
    sw.add_argument("--n", type=str, help="subsystem sizes, e.g. 1..19 or 2,4,8")
    sw.add_argument("--samples", type=int)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--out", type=str)
    sw.add_argument("--threads", type=int)
    sw.add_argument("--checkpoint-interval", type=int, dest="checkpoint_interval")
    sw.add_argument("--config", type=str, help="key = value config file (flags win)")
    sw.set_defaults(func=cmd_sweep)

    dy = sub.add_parser("dynamics", help="distance-to-steady-state curves and decay rates")
    dy.add_argument("--N", type=int)
    dy.add_argument("--amount-range", type=str, dest="amount_range")
    dy.add_argument("--t-schedule", type=str, dest="t_schedule")
    dy.add_argument("--ref-mult", type=int, dest="ref_mult")
    dy.add_argument("--window", type=str, help="slope window 't,t_prime' (default 7,12)")
    dy.add_argument("--samples", type=int)
    dy.add_argument("--seed", type=int)
    dy.add_argument("--out", type=str)
    dy.add_argument("--threads", type=int)
    dy.add_argument("--config", type=str)
    dy.set_defaults(func=cmd_dynamics)

    ex = sub.add_parser("exact", help="orbit-counting curves and verifications")
    ex.add_argument("--N", type=int)
    ex.add_argument("--H", type=int)
    ex.add_argument("--n", type=str)
    ex.add_argument("--thermo", type=str, help="evaluate the thermodynamic limit at 'rn,rH'")
    ex.add_argument("--verify-argmax", action="store_const", const=True, dest="verify_argmax")
    ex.add_argument("--verify-kkt", action="store_const", const=True, dest="verify_kkt")
    ex.add_argument("--out", type=str)
    ex.add_argument("--config", type=str)
    ex.set_defaults(func=cmd_exact)

    va = sub.add_parser("validate", help="one-shot oracle/property suite")
    va.add_argument("--quick", action="store_true")
    va.add_argument("--seed", type=int)
    va.add_argument("--threads", type=int)
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = getattr(args, "config", None)
        args._file_values = _load_config_file(config_path) if config_path else {}
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error ({exc.fieldname}): {exc}", file=sys.stderr)
        return 2
    except NumericDegeneracyError as exc:
        print(f"numeric degeneracy: {exc}", file=sys.stderr)
        return 4
    except (OSError, CheckpointError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
