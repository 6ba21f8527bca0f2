"""Stabilizer states: pure and uniformly mixed, with GF(2)-rank entropies.

A state is a list of g independent, mutually commuting Pauli generators on N
qubits; g = N is pure, g < N is the uniform mixture over the 2^(N-g)
dimensional stabilized subspace.  Subsystem entropies are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .paulis import PauliString


@dataclass(frozen=True)
class QubitSubset:
    """A sorted, duplicate-free set of qubit indices."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and distinct")
        if self.members and self.members[0] < 0:
            raise ValueError("negative qubit index")

    @classmethod
    def of(cls, members: Iterable[int]) -> "QubitSubset":
        return cls(tuple(sorted(set(int(q) for q in members))))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, q: int) -> bool:
        return q in self.members

    def __iter__(self):
        return iter(self.members)

    @property
    def mask(self) -> int:
        m = 0
        for q in self.members:
            m |= 1 << q
        return m

    def check_range(self, num_qubits: int) -> None:
        if self.members and self.members[-1] >= num_qubits:
            raise ValueError(f"qubit index {self.members[-1]} out of range [0, {num_qubits})")

    def complement(self, num_qubits: int) -> "QubitSubset":
        self.check_range(num_qubits)
        return QubitSubset(tuple(q for q in range(num_qubits) if q not in self.members))


def gf2_rank(rows: Sequence[int], width: int) -> int:
    """Rank over GF(2) of int-packed bit rows, each of the given bit width."""
    for r in rows:
        if r < 0 or r >> width:
            raise ValueError("row has bits outside the stated width")
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        w = row
        while w:
            top = w.bit_length() - 1
            if top in pivots:
                w ^= pivots[top]
            else:
                pivots[top] = w
                rank += 1
                break
    return rank


@dataclass
class StabilizerState:
    """g commuting, independent Pauli generators on num_qubits qubits."""

    num_qubits: int
    generators: list[PauliString]

    @property
    def g(self) -> int:
        return len(self.generators)

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.num_qubits, list(self.generators))

    def validate(self) -> None:
        """Check commutation, independence, and mask ranges; raises on violation."""
        n = self.num_qubits
        for p in self.generators:
            if p.num_qubits != n:
                raise ValueError("generator qubit count mismatch")
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not gens[i].commutes_with(gens[j]):
                    raise ValueError(f"generators {i} and {j} anticommute")
        rows = [p.x_mask | (p.z_mask << n) for p in gens]
        if gf2_rank(rows, 2 * n) != len(gens):
            raise ValueError("generators are GF(2)-dependent")


def new_basis_state(num_qubits: int) -> StabilizerState:
    """|0...0> on num_qubits qubits: generator i is Z on qubit i."""
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    gens = [PauliString(num_qubits, 0, 1 << q, 1) for q in range(num_qubits)]
    return StabilizerState(num_qubits, gens)


def new_mixed_encoding_state(num_qubits: int, encoded: QubitSubset) -> StabilizerState:
    """Equal mixture of all computational inputs on `encoded`, |0> elsewhere.

    Generators are Z_j for every j outside `encoded`, so g = N - |encoded|.
    """
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    encoded.check_range(num_qubits)
    gens = [
        PauliString(num_qubits, 0, 1 << q, 1)
        for q in range(num_qubits)
        if q not in encoded
    ]
    return StabilizerState(num_qubits, gens)


def new_purified_state(num_qubits: int, amount: int, encoded: QubitSubset) -> StabilizerState:
    """Purification of the mixed encoding state by `amount` reference qubits.

    Acts on num_qubits + amount qubits; reference qubit i (index num_qubits+i)
    forms a Bell pair with encoded[i].  The result is pure.
    """
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    if len(encoded) != amount:
        raise ValueError(f"|encoded| = {len(encoded)} but amount = {amount}")
    encoded.check_range(num_qubits)
    total = num_qubits + amount
    gens: list[PauliString] = []
    for i, e in enumerate(encoded):
        r = num_qubits + i
        gens.append(PauliString(total, (1 << e) | (1 << r), 0, 1))
        gens.append(PauliString(total, 0, (1 << e) | (1 << r), 1))
    for q in range(num_qubits):
        if q not in encoded:
            gens.append(PauliString(total, 0, 1 << q, 1))
    return StabilizerState(total, gens)


def apply_two_qubit_gate(state: StabilizerState, gate, pair: tuple[int, int]) -> StabilizerState:
    """Conjugate every generator through a two-qubit Clifford on `pair`.

    Gate qubit 0 maps to pair[0], qubit 1 to pair[1]; returns a new state.
    """
    a, b = pair
    n = state.num_qubits
    if a == b:
        raise ValueError("pair qubits must be distinct")
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"pair ({a}, {b}) out of range [0, {n})")
    gens = []
    for p in state.generators:
        v = (
            ((p.x_mask >> a) & 1)
            | (((p.z_mask >> a) & 1) << 1)
            | (((p.x_mask >> b) & 1) << 2)
            | (((p.z_mask >> b) & 1) << 3)
        )
        out, flip = gate.conjugate_pattern(v)
        clear = ~((1 << a) | (1 << b))
        x = (p.x_mask & clear) | ((out & 1) << a) | (((out >> 2) & 1) << b)
        z = (p.z_mask & clear) | (((out >> 1) & 1) << a) | (((out >> 3) & 1) << b)
        gens.append(PauliString(n, x, z, -p.sign if flip else p.sign))
    result = StabilizerState(n, gens)
    if __debug__:
        result.validate()
    return result


def subsystem_entropy(state: StabilizerState, region: QubitSubset | Iterable[int]) -> int:
    """Von Neumann entropy in bits of the reduced state on `region`.

    Equals |region| - (g - r) where r is the GF(2) rank of the generators
    restricted to the complement of the region (X and Z columns).
    """
    if not isinstance(region, QubitSubset):
        region = QubitSubset.of(region)
    region.check_range(state.num_qubits)
    comp = [q for q in range(state.num_qubits) if q not in region]
    rows = []
    for p in state.generators:
        r = 0
        for idx, q in enumerate(comp):
            r |= ((p.x_mask >> q) & 1) << (2 * idx)
            r |= ((p.z_mask >> q) & 1) << (2 * idx + 1)
        rows.append(r)
    rank = gf2_rank(rows, 2 * len(comp))
    return len(region) - (state.g - rank)


def dense_density_matrix(state: StabilizerState) -> np.ndarray:
    """Exact density matrix (1/2^N) * prod_i (I + G_i); test oracle, N <= 8."""
    n = state.num_qubits
    if n > 8:
        raise ValueError("dense oracle limited to 8 qubits")
    dim = 1 << n
    rho = np.eye(dim, dtype=complex) / dim
    for p in state.generators:
        rho = rho + rho @ p.matrix()
    return rho


def dense_reduced_entropy(state: StabilizerState, region: Iterable[int]) -> float:
    """Base-2 von Neumann entropy of the reduced dense matrix; test oracle."""
    region = sorted(set(region))
    n = state.num_qubits
    rho = dense_density_matrix(state)
    tensor = rho.reshape((2,) * (2 * n))
    keep = region
    trace_out = [q for q in range(n) if q not in keep]
    for q in sorted(trace_out, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=n + q)
        n -= 1
        keep = [k if k < q else k - 1 for k in keep]
    dim = 1 << len(region)
    reduced = tensor.reshape((dim, dim))
    # Reorder kept axes to ascending original order (trace preserves order, so no-op).
    evals = np.linalg.eigvalsh(reduced)
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))
