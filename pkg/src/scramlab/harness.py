"""Monte Carlo sweeps over subsystem size and depth, with exact reproducibility.

Each sample owns a seed derived from (master_seed, mode, N, amount, n, t,
sample_index) through numpy's SeedSequence, so results are bit-identical
regardless of worker count or execution order.  Per-sample values are exact
integers, so accumulators (count, sum, sum of squares) are integers too and
parallel reduction is associative by construction.

The canonical per-sample draw order is: retrieval subset Q, encoding subset,
then circuit randomness (gate indices, or the word buffer in global mode).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .circuits import pair_template
from .engine import MAX_ROWS, _coherent_brick, _dynamics_brick, _global_holevo, _holevo_brick
from .globalcliff import buffer_words, draw_word_buffer
from .orbit import holevo_exact
from .twoqubit import GROUP_ORDER, gate_tables

_MODE_CODES = {"holevo": 0, "coherent": 1}
_GLOBAL_T_CODE = 2**32 - 1
_DYNAMICS_CODE = 3
_CHUNK = 512


class ConfigError(ValueError):
    """Invalid experiment configuration; carries the offending field name."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(message)
        self.fieldname = fieldname


class CheckpointError(RuntimeError):
    """A checkpoint write failed; `partial` holds the aggregates so far."""

    def __init__(self, message: str, partial: "SweepResult"):
        super().__init__(message)
        self.partial = partial


def resolve_depth(depth_rule: int | str, N: int) -> Optional[int]:
    """Turn a depth rule (int, 'kN' multiple, or 'global') into a layer count."""
    if isinstance(depth_rule, int):
        if depth_rule < 0:
            raise ConfigError("depth_rule", "depth must be >= 0")
        return depth_rule
    rule = str(depth_rule).strip().lower()
    if rule == "global":
        return None
    if rule.endswith("n"):
        try:
            mult = int(rule[:-1])
        except ValueError:
            raise ConfigError("depth_rule", f"cannot parse depth rule {depth_rule!r}") from None
        if mult < 0:
            raise ConfigError("depth_rule", "depth multiple must be >= 0")
        return mult * N
    try:
        return resolve_depth(int(rule), N)
    except ValueError:
        raise ConfigError("depth_rule", f"cannot parse depth rule {depth_rule!r}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one sweep."""

    N: int
    amount: int
    mode: str
    depth_rule: int | str
    n_values: tuple[int, ...]
    samples: int
    master_seed: int
    checkpoint_interval: int = 0

    def __post_init__(self) -> None:
        if self.mode not in _MODE_CODES:
            raise ConfigError("mode", f"mode must be one of {sorted(_MODE_CODES)}")
        if self.N < 2:
            raise ConfigError("N", "N must be >= 2")
        if not 1 <= self.amount <= self.N:
            raise ConfigError("amount", "need 1 <= amount <= N")
        if not self.n_values:
            raise ConfigError("n_values", "need at least one n value")
        for n in self.n_values:
            if not 1 <= n <= self.N:
                raise ConfigError("n_values", f"n={n} outside [1, {self.N}]")
        if self.samples < 1:
            raise ConfigError("samples", "samples must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed", "master_seed must be >= 0")
        if self.checkpoint_interval < 0:
            raise ConfigError("checkpoint_interval", "checkpoint_interval must be >= 0")
        rows = self.N + (self.amount if self.mode == "coherent" else 0)
        if rows > MAX_ROWS:
            raise ConfigError("N", f"engine supports at most {MAX_ROWS} generator rows, got {rows}")
        t = resolve_depth(self.depth_rule, self.N)
        if t is None and self.mode != "holevo":
            raise ConfigError("depth_rule", "global sampling is defined for holevo mode only")

    @property
    def depth(self) -> Optional[int]:
        return resolve_depth(self.depth_rule, self.N)

    @property
    def t_code(self) -> int:
        t = self.depth
        return _GLOBAL_T_CODE if t is None else t


@dataclass
class PointStats:
    """Aggregates for one (n, t) data point; values are exact integers."""

    n: int
    t: int  # -1 denotes the global-Clifford (infinite-depth) mode
    count: int = 0
    vsum: int = 0
    vsumsq: int = 0

    @property
    def mean(self) -> float:
        return self.vsum / self.count

    @property
    def std(self) -> float:
        m = self.mean
        var = self.vsumsq / self.count - m * m
        return math.sqrt(max(var, 0.0))

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.count)

    def merge(self, count: int, vsum: int, vsumsq: int) -> None:
        self.count += count
        self.vsum += vsum
        self.vsumsq += vsumsq


@dataclass
class SweepResult:
    config: ExperimentConfig
    points: list[PointStats]
    samples: Optional[dict[int, list[int]]] = None  # n -> per-sample values

    def point(self, n: int) -> PointStats:
        for p in self.points:
            if p.n == n:
                return p
        raise KeyError(n)


def _seed_for(config: ExperimentConfig, n: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        (
            config.master_seed,
            _MODE_CODES[config.mode],
            config.N,
            config.amount,
            n,
            config.t_code,
            index,
        )
    )


def _subset_mask(perm: np.ndarray, size: int) -> int:
    mask = 0
    for q in perm[:size]:
        mask |= 1 << int(q)
    return mask


def _run_point_chunk(
    config: ExperimentConfig, n: int, start: int, stop: int, keep: bool
) -> tuple[int, int, int, Optional[list[int]]]:
    """Evaluate samples [start, stop) of one point; returns integer aggregates."""
    N = config.N
    amount = config.amount
    t = config.depth
    kmask, anf = gate_tables()
    values: Optional[list[int]] = [] if keep else None
    vsum = 0
    vsumsq = 0
    if t is not None:
        a_arr, b_arr, _ = pair_template(N, t) if t > 0 else (
            np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64))
        ngates = len(a_arr)
    for i in range(start, stop):
        rng = np.random.default_rng(_seed_for(config, n, i))
        qmask = np.uint64(_subset_mask(rng.permutation(N), n))
        enc_perm = rng.permutation(N)
        encmask = np.uint64(_subset_mask(enc_perm, amount))
        if t is None:
            nwords = buffer_words(N)
            while True:
                buf = draw_word_buffer(rng, nwords)
                s_mixed, s_pure, ok = _global_holevo(N, buf, encmask, qmask, n)
                if ok:
                    break
                nwords *= 2
            value = int(s_mixed - s_pure)
        elif config.mode == "holevo":
            gids = rng.integers(0, GROUP_ORDER, size=ngates)
            s_mixed, s_pure = _holevo_brick(N, a_arr, b_arr, gids, encmask, qmask, n, kmask, anf)
            value = int(s_mixed - s_pure)
        else:
            gids = rng.integers(0, GROUP_ORDER, size=ngates)
            enc_sorted = np.sort(enc_perm[:amount]).astype(np.int64)
            s_q, s_qr = _coherent_brick(
                N, amount, enc_sorted, encmask, a_arr, b_arr, gids, qmask, kmask, anf
            )
            value = int(s_q - s_qr)
        vsum += value
        vsumsq += value * value
        if values is not None:
            values.append(value)
    return stop - start, vsum, vsumsq, values


def _atomic_write_json(path: str, payload: dict) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
    except BaseException:
        os.unlink(tmp)
        raise
    os.replace(tmp, path)


def _config_echo(config: ExperimentConfig) -> dict:
    return {
        "N": config.N,
        "amount": config.amount,
        "mode": config.mode,
        "depth_rule": str(config.depth_rule),
        "n_values": list(config.n_values),
        "samples": config.samples,
        "master_seed": config.master_seed,
    }


def run_sweep(
    config: ExperimentConfig,
    threads: Optional[int] = None,
    checkpoint_path: Optional[str] = None,
    keep_samples: bool = False,
) -> SweepResult:
    """Mean / population-std / stderr of the per-sample information values.

    For each n, `samples` independent (circuit, Q, encoded) triples are drawn;
    identical master seeds give bit-identical results at any thread count.
    """
    threads = threads or os.cpu_count() or 1
    t = config.depth
    t_col = -1 if t is None else t
    points = {n: PointStats(n=n, t=t_col) for n in config.n_values}
    kept: dict[int, list[int]] = {n: [] for n in config.n_values} if keep_samples else {}
    done_from_checkpoint: dict[int, int] = {n: 0 for n in config.n_values}

    if checkpoint_path and os.path.exists(checkpoint_path):
        with open(checkpoint_path) as fh:
            saved = json.load(fh)
        if saved.get("config") != _config_echo(config):
            raise ConfigError("checkpoint", "checkpoint was written by a different config")
        if keep_samples:
            raise ConfigError("checkpoint", "cannot resume with sample retention enabled")
        for key, rec in saved.get("points", {}).items():
            n = int(key)
            if n in points:
                points[n].merge(rec["count"], rec["sum"], rec["sumsq"])
                done_from_checkpoint[n] = rec["count"]

    def partial_result() -> SweepResult:
        return SweepResult(config=config, points=[points[n] for n in config.n_values])

    def flush_checkpoint() -> None:
        if not checkpoint_path:
            return
        payload = {
            "config": _config_echo(config),
            "points": {
                str(n): {"count": p.count, "sum": p.vsum, "sumsq": p.vsumsq}
                for n, p in points.items()
            },
        }
        try:
            _atomic_write_json(checkpoint_path, payload)
        except OSError as exc:
            raise CheckpointError(
                f"checkpoint write failed ({exc}); partial aggregates attached",
                partial_result(),
            ) from exc

    stride = config.checkpoint_interval if config.checkpoint_interval else config.samples
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for n in config.n_values:
            start0 = done_from_checkpoint[n]
            pos = start0
            while pos < config.samples:
                block_end = min(pos + stride, config.samples)
                futures = []
                for lo in range(pos, block_end, _CHUNK):
                    hi = min(lo + _CHUNK, block_end)
                    futures.append(
                        (lo, pool.submit(_run_point_chunk, config, n, lo, hi, keep_samples))
                    )
                for lo, fut in sorted(futures, key=lambda x: x[0]):
                    count, vsum, vsumsq, values = fut.result()
                    points[n].merge(count, vsum, vsumsq)
                    if keep_samples and values is not None:
                        kept[n].extend(values)
                pos = block_end
                if config.checkpoint_interval:
                    flush_checkpoint()
    if checkpoint_path:
        flush_checkpoint()
    return SweepResult(
        config=config,
        points=[points[n] for n in config.n_values],
        samples=kept if keep_samples else None,
    )


@dataclass
class DynamicsResult:
    """Distance-to-steady-state series plus the reference curve."""

    N: int
    amount: int
    t_schedule: tuple[int, ...]
    reference_depth: int
    n_values: tuple[int, ...]
    means: np.ndarray  # (len(t_schedule)+ref, len(n_values)) sample means
    sems: np.ndarray
    counts: int

    @property
    def reference_curve(self) -> np.ndarray:
        return self.means[-1]

    def distance(self, t: int) -> float:
        si = self.t_schedule.index(t)
        diff = self.means[si] - self.reference_curve
        return float(np.sum(diff * diff))

    def distances(self) -> list[float]:
        return [self.distance(t) for t in self.t_schedule]

    def distance_stderr(self, t: int) -> float:
        """Delta-method error bar on D(t), treating points as independent."""
        si = self.t_schedule.index(t)
        diff = self.means[si] - self.reference_curve
        var = np.sum((2.0 * diff) ** 2 * (self.sems[si] ** 2 + self.sems[-1] ** 2))
        return float(math.sqrt(var))


def run_dynamics(
    config: ExperimentConfig,
    t_schedule: Sequence[int],
    reference_depth: Optional[int] = None,
    threads: Optional[int] = None,
) -> DynamicsResult:
    """Average information curves along a depth schedule plus a deep reference.

    One circuit realization per sample is grown layer by layer and measured at
    every scheduled depth (including the reference), which leaves every
    per-depth mean unbiased while avoiding a fresh circuit per depth.
    """
    if config.mode != "holevo":
        raise ConfigError("mode", "dynamics measures the holevo mode")
    sched = sorted(set(int(t) for t in t_schedule))
    if not sched:
        raise ConfigError("t_schedule", "schedule is empty")
    if sched[0] < 0:
        raise ConfigError("t_schedule", "depths must be >= 0")
    if reference_depth is None:
        reference_depth = 3 * config.N
    if reference_depth < sched[-1]:
        raise ConfigError("reference_depth", "reference depth must cover the schedule")
    threads = threads or os.cpu_count() or 1
    N = config.N
    amount = config.amount
    kmask, anf = gate_tables()
    all_depths = sched + [reference_depth]
    a_arr, b_arr, layer_prefix = pair_template(N, reference_depth)
    gate_prefix = np.asarray(
        [0 if t == 0 else layer_prefix[t - 1] for t in all_depths], dtype=np.int64
    )
    n_values = config.n_values
    K = len(n_values)
    S = len(all_depths)

    def chunk(start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        vsum = np.zeros((S, K), dtype=np.int64)
        vsumsq = np.zeros((S, K), dtype=np.int64)
        out = np.zeros((S, K), dtype=np.int64)
        sizes = np.asarray(n_values, dtype=np.int64)
        for i in range(start, stop):
            seed = np.random.SeedSequence(
                (config.master_seed, _DYNAMICS_CODE, N, amount, 0, reference_depth, i)
            )
            rng = np.random.default_rng(seed)
            qmasks = np.zeros(K, dtype=np.uint64)
            for ki, n in enumerate(n_values):
                qmasks[ki] = np.uint64(_subset_mask(rng.permutation(N), n))
            encmask = np.uint64(_subset_mask(rng.permutation(N), amount))
            gids = rng.integers(0, GROUP_ORDER, size=len(a_arr))
            _dynamics_brick(
                N, a_arr, b_arr, gids, gate_prefix, encmask, qmasks, sizes, out, kmask, anf
            )
            vsum += out
            vsumsq += out * out
        return vsum, vsumsq

    tot_sum = np.zeros((S, K), dtype=np.int64)
    tot_sq = np.zeros((S, K), dtype=np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(chunk, lo, min(lo + _CHUNK, config.samples))
            for lo in range(0, config.samples, _CHUNK)
        ]
        for fut in futures:
            s, q = fut.result()
            tot_sum += s
            tot_sq += q
    M = config.samples
    means = tot_sum / M
    var = tot_sq / M - means**2
    sems = np.sqrt(np.maximum(var, 0.0) / M)
    return DynamicsResult(
        N=N,
        amount=amount,
        t_schedule=tuple(sched),
        reference_depth=reference_depth,
        n_values=tuple(n_values),
        means=means,
        sems=sems,
        counts=M,
    )


class NumericDegeneracyError(RuntimeError):
    """A distance hit zero inside a slope window (log undefined)."""


def decay_rate(dyn: DynamicsResult, t: int, t_prime: int) -> tuple[float, float, float]:
    """Average |log D| slope between two scheduled depths, with min/max
    per-step slopes over the window as rough confidence bounds."""
    if t == t_prime:
        raise ValueError("need two distinct depths")
    lo, hi = sorted((t, t_prime))
    window = [s for s in dyn.t_schedule if lo <= s <= hi]
    if lo not in dyn.t_schedule or hi not in dyn.t_schedule:
        raise ValueError("window endpoints must be scheduled depths")
    dvals = {s: dyn.distance(s) for s in window}
    if any(v <= 0.0 for v in dvals.values()):
        raise NumericDegeneracyError("distance reached zero inside the slope window")
    rate = abs(math.log(dvals[lo]) - math.log(dvals[hi])) / (hi - lo)
    steps = [
        (math.log(dvals[a]) - math.log(dvals[b])) / (b - a)
        for a, b in zip(window, window[1:])
    ]
    return rate, min(steps), max(steps)


@dataclass
class ScalingRow:
    N: int
    amount: int
    n_below: int
    n_above: int
    delta1: float
    delta1_stderr: float
    delta2: float
    delta2_stderr: float
    exact_delta1: float
    exact_delta2: float


@dataclass
class ScalingResult:
    rows: list[ScalingRow]


def finite_size_scaling(
    ratios: Iterable[tuple[int, int, int, int]],
    template: ExperimentConfig,
    threads: Optional[int] = None,
) -> ScalingResult:
    """Transition-point deviations Delta1 / Delta2 across a fixed-ratio family.

    Each tuple is (N, amount, n_below, n_above) with n_below/N < 1/2 and
    n_above/N > (N+amount)/2N.  Monte Carlo values come from run_sweep under
    the template's depth rule and sample count; the exact columns come from
    the orbit calculator.
    """
    rows = []
    for N, amount, n_below, n_above in ratios:
        if not 2 * n_below < N:
            raise ConfigError("ratios", f"n_below={n_below} is not below N/2 for N={N}")
        if not 2 * n_above > N + amount:
            raise ConfigError("ratios", f"n_above={n_above} is not above (N+amount)/2 for N={N}")
        config = ExperimentConfig(
            N=N,
            amount=amount,
            mode="holevo",
            depth_rule=template.depth_rule,
            n_values=(n_below, n_above),
            samples=template.samples,
            master_seed=template.master_seed,
        )
        sweep = run_sweep(config, threads=threads)
        below = sweep.point(n_below)
        above = sweep.point(n_above)
        rows.append(
            ScalingRow(
                N=N,
                amount=amount,
                n_below=n_below,
                n_above=n_above,
                delta1=below.mean,
                delta1_stderr=below.stderr,
                delta2=amount - above.mean,
                delta2_stderr=above.stderr,
                exact_delta1=holevo_exact(n_below, N, amount),
                exact_delta2=amount - holevo_exact(n_above, N, amount),
            )
        )
    return ScalingResult(rows=rows)
