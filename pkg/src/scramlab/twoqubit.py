"""The two-qubit Clifford group: enumeration, uniform sampling, gate tables.

The group has exactly 11520 elements (720 symplectic actions x 16 sign
choices).  Bricks in the random circuits are drawn by indexing a lazily built
canonical enumeration, which also provides the bit-parallel tables used by
the packed evolution engine:

- a 4x4 GF(2) action on the (x_a, z_a, x_b, z_b) bits of each generator, and
- a 16-entry sign-flip truth table stored in algebraic normal form.

Pattern encoding throughout: bit 0 = x_a, bit 1 = z_a, bit 2 = x_b, bit 3 = z_b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .paulis import PauliString, product_phase_exponent

GROUP_ORDER = 11520

# Per-pattern 2-qubit masks: pattern p -> (x_mask, z_mask) on qubits {0, 1}.
_PX = tuple((p & 1) | (((p >> 2) & 1) << 1) for p in range(16))
_PZ = tuple(((p >> 1) & 1) | (((p >> 3) & 1) << 1) for p in range(16))


def _sp4(v: int, w: int) -> int:
    """Symplectic product of two 4-bit Pauli patterns."""
    return (
        (v & 1) * ((w >> 1) & 1)
        ^ ((v >> 1) & 1) * (w & 1)
        ^ ((v >> 2) & 1) * ((w >> 3) & 1)
        ^ ((v >> 3) & 1) * ((w >> 2) & 1)
    )


def _rank_bits(rows) -> int:
    rank = 0
    pivots: dict[int, int] = {}
    for w in rows:
        while w:
            top = w.bit_length() - 1
            if top in pivots:
                w ^= pivots[top]
            else:
                pivots[top] = w
                rank += 1
                break
    return rank


def _pattern_from_pauli(p: PauliString) -> int:
    return (
        (p.x_mask & 1)
        | ((p.z_mask & 1) << 1)
        | (((p.x_mask >> 1) & 1) << 2)
        | (((p.z_mask >> 1) & 1) << 3)
    )


def _pauli_from_pattern(v: int, sign: int = 1) -> PauliString:
    return PauliString(2, _PX[v], _PZ[v], sign)


@lru_cache(maxsize=None)
def _conjugation_flip_table(imgbits: tuple[int, int, int, int], sign_bits: int) -> int:
    """Truth table (bit v) of the sign flip when conjugating pattern v.

    The image of pattern v is the ordered product of the signed basis images
    selected by the bits of v; the i-exponent bookkeeping must come out even
    (Hermitian in, Hermitian out) and its half is the flip bit.
    """
    table = 0
    for v in range(16):
        cur_x = cur_z = 0
        phase = (v & (v >> 1) & 1) + ((v >> 2) & (v >> 3) & 1)  # Y-convention factors
        for k in range(4):
            if (v >> k) & 1:
                b = imgbits[k]
                phase += product_phase_exponent(cur_x, cur_z, _PX[b], _PZ[b])
                cur_x ^= _PX[b]
                cur_z ^= _PZ[b]
                if (sign_bits >> k) & 1:
                    phase += 2
        phase &= 3
        if phase & 1:
            raise AssertionError("odd i-power in Clifford conjugation")
        if phase == 2:
            table |= 1 << v
    return table


def _anf_from_table(table: int) -> int:
    """Moebius transform: truth table -> algebraic normal form coefficients."""
    coeffs = [(table >> v) & 1 for v in range(16)]
    for i in range(4):
        for m in range(16):
            if (m >> i) & 1:
                coeffs[m] ^= coeffs[m ^ (1 << i)]
    out = 0
    for m in range(16):
        out |= coeffs[m] << m
    return out


@dataclass(frozen=True)
class TwoQubitClifford:
    """Conjugation images of X0, Z0, X1, Z1 under a two-qubit Clifford."""

    images: tuple[PauliString, PauliString, PauliString, PauliString]
    index: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.images) != 4 or any(p.num_qubits != 2 for p in self.images):
            raise ValueError("need four images on two qubits")
        bits = self.imgbits
        # Preimages X0,Z0,X1,Z1 pair up symplectically as (0,1) and (2,3).
        want = {(0, 1): 1, (2, 3): 1, (0, 2): 0, (0, 3): 0, (1, 2): 0, (1, 3): 0}
        for (i, j), sp in want.items():
            if _sp4(bits[i], bits[j]) != sp:
                raise ValueError("images violate the symplectic condition")
        if _rank_bits(bits) != 4:
            raise ValueError("images are GF(2)-dependent")

    @property
    def imgbits(self) -> tuple[int, int, int, int]:
        return tuple(_pattern_from_pauli(p) for p in self.images)  # type: ignore[return-value]

    @property
    def sign_bits(self) -> int:
        s = 0
        for k, p in enumerate(self.images):
            if p.sign < 0:
                s |= 1 << k
        return s

    @property
    def key(self) -> tuple[tuple[int, int, int, int], int]:
        return (self.imgbits, self.sign_bits)

    @property
    def flip_table(self) -> int:
        return _conjugation_flip_table(self.imgbits, self.sign_bits)

    @classmethod
    def identity(cls) -> "TwoQubitClifford":
        return cls(tuple(_pauli_from_pattern(1 << k) for k in range(4)))  # type: ignore[arg-type]

    @classmethod
    def from_images(cls, images) -> "TwoQubitClifford":
        return cls(tuple(images))  # type: ignore[arg-type]

    def conjugate_pattern(self, v: int) -> tuple[int, int]:
        """Map an input 4-bit pattern to (output pattern, sign-flip bit)."""
        bits = self.imgbits
        out = 0
        for k in range(4):
            if (v >> k) & 1:
                out ^= bits[k]
        return out, (self.flip_table >> v) & 1

    def inverse(self) -> "TwoQubitClifford":
        # Reduce [M | I] to [I | M^-1]; row k of M^-1 is the inverse image of
        # basis pattern k, and its sign is the forward flip at that pattern.
        bits = self.imgbits
        aug = [bits[k] | (1 << (4 + k)) for k in range(4)]
        for col in range(4):
            piv = next(r for r in range(col, 4) if (aug[r] >> col) & 1)
            aug[col], aug[piv] = aug[piv], aug[col]
            for r in range(4):
                if r != col and (aug[r] >> col) & 1:
                    aug[r] ^= aug[col]
        flips = self.flip_table
        images = []
        for k in range(4):
            v = aug[k] >> 4
            sign = -1 if (flips >> v) & 1 else 1
            images.append(_pauli_from_pattern(v, sign))
        return TwoQubitClifford(tuple(images))  # type: ignore[arg-type]


_CACHE: dict[str, object] = {}


def _build_enumeration() -> None:
    nonzero = list(range(1, 16))
    sym_tuples: list[tuple[int, int, int, int]] = []
    for v1 in nonzero:
        partners1 = [w for w in range(16) if _sp4(v1, w) == 1]
        for w1 in partners1:
            comp = [u for u in nonzero if _sp4(u, v1) == 0 and _sp4(u, w1) == 0]
            for v2 in comp:
                for w2 in comp:
                    if _sp4(v2, w2) == 1:
                        sym_tuples.append((v1, w1, v2, w2))
    assert len(sym_tuples) == 720
    gates: list[TwoQubitClifford] = []
    kmask = np.zeros((GROUP_ORDER, 4), dtype=np.uint8)
    anf = np.zeros(GROUP_ORDER, dtype=np.uint16)
    key_index: dict[tuple, int] = {}
    for si, bits in enumerate(sym_tuples):
        flip0 = _conjugation_flip_table(bits, 0)
        km = [0, 0, 0, 0]
        for j in range(4):
            for k in range(4):
                if (bits[k] >> j) & 1:
                    km[j] |= 1 << k
        for s in range(16):
            idx = si * 16 + s
            images = tuple(
                _pauli_from_pattern(bits[k], -1 if (s >> k) & 1 else 1) for k in range(4)
            )
            gates.append(TwoQubitClifford(images, index=idx))
            key_index[(bits, s)] = idx
            table = flip0
            for v in range(16):
                if bin(v & s).count("1") & 1:
                    table ^= 1 << v
            anf[idx] = _anf_from_table(table)
            kmask[idx] = km
    _CACHE["gates"] = gates
    _CACHE["kmask"] = kmask
    _CACHE["anf"] = anf
    _CACHE["key_index"] = key_index


def enumerate_two_qubit_cliffords() -> list[TwoQubitClifford]:
    """All 11520 two-qubit Clifford elements in canonical order (cached)."""
    if "gates" not in _CACHE:
        _build_enumeration()
    return _CACHE["gates"]  # type: ignore[return-value]


def gate_tables() -> tuple[np.ndarray, np.ndarray]:
    """(kmask, anf) arrays for the packed engine, indexed by gate index."""
    if "gates" not in _CACHE:
        _build_enumeration()
    return _CACHE["kmask"], _CACHE["anf"]  # type: ignore[return-value]


def lookup_index(gate: TwoQubitClifford) -> int:
    """Canonical enumeration index of an arbitrary (possibly hand-built) gate."""
    if "gates" not in _CACHE:
        _build_enumeration()
    key_index: dict = _CACHE["key_index"]  # type: ignore[assignment]
    return key_index[gate.key]


def sample_index_stream(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform gate indices into the canonical enumeration (the sampling path)."""
    return rng.integers(0, GROUP_ORDER, size=count)


def sample_two_qubit_clifford(rng: np.random.Generator) -> TwoQubitClifford:
    """Uniform draw over the full 11520-element group."""
    gates = enumerate_two_qubit_cliffords()
    return gates[int(sample_index_stream(rng, 1)[0])]
