"""Per-realization Holevo and coherent information from one circuit draw.

A Holevo sample is S_Q(U rho_H U+) - S_Q(U|0..0><0..0|U+) with both terms on
the same realization; the second term uses the single representative |0..0>
because all 2^H computational inputs are Pauli-X frames of each other, which
cannot change any stabilizer entanglement structure (validated by tests, not
assumed).  A coherent sample is S(rho^Q) - S(rho^QR) on the purified state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import BrickWallCircuit
from .engine import MAX_ROWS, _coherent_brick, _holevo_brick
from .stabilizer import QubitSubset
from .twoqubit import gate_tables

MODES = ("holevo", "coherent")


@dataclass(frozen=True)
class SampleSpec:
    """One Monte Carlo draw: sizes plus the retrieval and encoding subsets."""

    N: int
    amount: int
    n: int
    t: int
    mode: str
    Q: QubitSubset
    encoded: QubitSubset

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 1 <= self.n <= self.N:
            raise ValueError("need 1 <= n <= N")
        if not 1 <= self.amount <= self.N:
            raise ValueError("need 1 <= amount <= N")
        if len(self.Q) != self.n:
            raise ValueError("|Q| must equal n")
        if len(self.encoded) != self.amount:
            raise ValueError("|encoded| must equal amount")
        self.Q.check_range(self.N)
        self.encoded.check_range(self.N)
        if self.t < 0:
            raise ValueError("depth must be >= 0")


@dataclass(frozen=True)
class SampleOutcome:
    """value = entropy_mixed - entropy_pure in both modes.

    Holevo: (S of the mixed-input output, S of the pure-input output).
    Coherent: (S(rho^Q), S(rho^QR)); the name then reads positionally.
    """

    value: int
    mode: str
    entropy_mixed: int
    entropy_pure: int


def holevo_sample(spec: SampleSpec, circuit: BrickWallCircuit) -> SampleOutcome:
    """Classical information retrievable from Q for one circuit realization."""
    if spec.mode != "holevo":
        raise ValueError("spec mode must be 'holevo'")
    if circuit.num_qubits != spec.N:
        raise ValueError("circuit size does not match spec")
    if spec.N > MAX_ROWS:
        raise ValueError("sampling engine supports at most 64 qubits")
    kmask, anf = gate_tables()
    s_mixed, s_pure = _holevo_brick(
        spec.N,
        circuit._a,
        circuit._b,
        circuit._gid,
        np.uint64(spec.encoded.mask),
        np.uint64(spec.Q.mask),
        spec.n,
        kmask,
        anf,
    )
    value = int(s_mixed - s_pure)
    assert 0 <= value <= min(2 * spec.n, spec.amount), "Holevo bound violated"
    return SampleOutcome(value, "holevo", int(s_mixed), int(s_pure))


def coherent_sample(spec: SampleSpec, circuit: BrickWallCircuit) -> SampleOutcome:
    """Coherent information of the erasure channel for one realization."""
    if spec.mode != "coherent":
        raise ValueError("spec mode must be 'coherent'")
    if circuit.num_qubits != spec.N:
        raise ValueError("circuit size does not match spec")
    if spec.N + spec.amount > MAX_ROWS:
        raise ValueError("sampling engine supports at most 64 qubits incl. reference")
    kmask, anf = gate_tables()
    s_q, s_qr = _coherent_brick(
        spec.N,
        spec.amount,
        np.asarray(spec.encoded.members, dtype=np.int64),
        np.uint64(spec.encoded.mask),
        circuit._a,
        circuit._b,
        circuit._gid,
        np.uint64(spec.Q.mask),
        kmask,
        anf,
    )
    value = int(s_q - s_qr)
    assert -spec.amount <= value <= spec.amount, "coherent information bound violated"
    return SampleOutcome(value, "coherent", int(s_q), int(s_qr))


def draw_sample_spec(
    N: int, amount: int, n: int, t: int, mode: str, rng: np.random.Generator
) -> SampleSpec:
    """Draw Q uniformly over size-n subsets, then `encoded` over size-amount ones."""
    q = QubitSubset.of(rng.permutation(N)[:n].tolist())
    encoded = QubitSubset.of(rng.permutation(N)[:amount].tolist())
    return SampleSpec(N=N, amount=amount, n=n, t=t, mode=mode, Q=q, encoded=encoded)
