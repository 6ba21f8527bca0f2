"""Brick-wall random circuits on a ring of qubits.

Even layers pair (0,1),(2,3),...; odd layers pair (1,2),(3,4),... plus the
wrap-around (N-1,0) when N is even.  For odd N each layer keeps floor(N/2)
bricks and idles one qubit: N-1 on even layers, 0 on odd layers, so the
layout stays translation-covariant over two layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import MAX_ROWS, _apply_gates, pack_state, unpack_state
from .stabilizer import StabilizerState
from .twoqubit import TwoQubitClifford, gate_tables, lookup_index, sample_two_qubit_clifford

Brick = tuple[tuple[int, int], TwoQubitClifford]


def layer_pairs(num_qubits: int, layer: int) -> list[tuple[int, int]]:
    """Qubit pairs of one brick layer under the ring layout above."""
    if num_qubits < 2:
        raise ValueError("need at least 2 qubits")
    start = layer % 2
    pairs = [(i, i + 1) for i in range(start, num_qubits - 1, 2)]
    if layer % 2 == 1 and num_qubits % 2 == 0:
        pairs.append((num_qubits - 1, 0))
    return pairs


def pair_template(num_qubits: int, depth: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, layer_prefix) arrays for a depth-layer brick wall; shareable."""
    a: list[int] = []
    b: list[int] = []
    prefix = np.zeros(depth, dtype=np.int64)
    for layer in range(depth):
        for pa, pb in layer_pairs(num_qubits, layer):
            a.append(pa)
            b.append(pb)
        prefix[layer] = len(a)
    return np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), prefix


@dataclass(frozen=True)
class BrickWallCircuit:
    """An immutable stack of brick layers with their sampled gates."""

    num_qubits: int
    layers: tuple[tuple[Brick, ...], ...]
    _a: np.ndarray = field(init=False, repr=False, compare=False)
    _b: np.ndarray = field(init=False, repr=False, compare=False)
    _gid: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.num_qubits
        a: list[int] = []
        b: list[int] = []
        gid: list[int] = []
        for layer in self.layers:
            seen: set[int] = set()
            for (pa, pb), gate in layer:
                if not (0 <= pa < n and 0 <= pb < n) or pa == pb:
                    raise ValueError(f"bad pair ({pa}, {pb})")
                if pa in seen or pb in seen:
                    raise ValueError("qubit appears twice in one layer")
                if (pa + 1) % n != pb and (pb + 1) % n != pa:
                    raise ValueError(f"pair ({pa}, {pb}) is not ring-adjacent")
                seen.add(pa)
                seen.add(pb)
                a.append(pa)
                b.append(pb)
                gid.append(gate.index if gate.index is not None else lookup_index(gate))
        object.__setattr__(self, "_a", np.asarray(a, dtype=np.int64))
        object.__setattr__(self, "_b", np.asarray(b, dtype=np.int64))
        object.__setattr__(self, "_gid", np.asarray(gid, dtype=np.int64))

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def num_gates(self) -> int:
        return len(self._gid)


def build_brick_wall(num_qubits: int, depth: int, rng: np.random.Generator) -> BrickWallCircuit:
    """Sample a brick-wall circuit: every brick an independent uniform draw."""
    if num_qubits < 2:
        raise ValueError("need at least 2 qubits")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    layers = []
    for layer in range(depth):
        layers.append(
            tuple((pair, sample_two_qubit_clifford(rng)) for pair in layer_pairs(num_qubits, layer))
        )
    return BrickWallCircuit(num_qubits, tuple(layers))


def apply_circuit(state: StabilizerState, circuit: BrickWallCircuit) -> StabilizerState:
    """Return the state conjugated through all layers (input left untouched).

    States larger than the circuit are allowed: gates act on the first
    circuit.num_qubits qubits and any extra (reference) qubits ride along.
    """
    if state.num_qubits < circuit.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits but circuit needs {circuit.num_qubits}"
        )
    if circuit.num_gates == 0:
        return state.copy()
    if state.g <= MAX_ROWS:
        kmask, anf = gate_tables()
        xcol, zcol, sign, g = pack_state(state)
        signref = np.array([sign], dtype=np.uint64)
        _apply_gates(xcol, zcol, signref, circuit._a, circuit._b, circuit._gid, 0,
                     circuit.num_gates, kmask, anf)
        gens = unpack_state(state.num_qubits, xcol, zcol, int(signref[0]), g)
        return StabilizerState(state.num_qubits, gens)
    from .stabilizer import apply_two_qubit_gate  # pure-Python fallback, no row cap

    out = state.copy()
    for layer in circuit.layers:
        for pair, gate in layer:
            out = apply_two_qubit_gate(out, gate, pair)
    return out


def dump_circuit(circuit: BrickWallCircuit) -> str:
    """Debug dump: one line per brick, `layer qubit_a qubit_b gate_index`."""
    lines = []
    for ell, layer in enumerate(circuit.layers):
        for (pa, pb), gate in layer:
            idx = gate.index if gate.index is not None else lookup_index(gate)
            lines.append(f"{ell} {pa} {pb} {idx}")
    return "\n".join(lines) + ("\n" if lines else "")
