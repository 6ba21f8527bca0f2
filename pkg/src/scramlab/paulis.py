"""Pauli strings as bit-packed X/Z masks with exact sign algebra.

Masks are plain Python ints used as bit vectors (bit q = qubit q), so a
PauliString works for any qubit count; the Monte Carlo engine keeps its own
word-packed representation and is cross-checked against this one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# i-exponent picked up when multiplying two single-qubit Paulis, indexed by
# [x1 + 2*z1][x2 + 2*z2] with the Hermitian convention Y = i*X*Z.
# Encoding: 0=I, 1=X, 2=Z, 3=Y.
_PHASE_TABLE = (
    (0, 0, 0, 0),
    (0, 0, 3, 1),
    (0, 1, 0, 3),
    (0, 3, 1, 0),
)

_SINGLE_QUBIT_MATRICES = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[1, 0], [0, -1]], dtype=complex),
    3: np.array([[0, -1j], [1j, 0]], dtype=complex),
}

_LABEL_FOR_BITS = ("I", "X", "Z", "Y")
_BITS_FOR_LABEL = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


def symplectic_parity(x1: int, z1: int, x2: int, z2: int) -> int:
    """Symplectic inner product of two mask pairs: 0 if they commute, 1 if not."""
    return (bin(x1 & z2).count("1") + bin(z1 & x2).count("1")) & 1


def product_phase_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    """i-exponent (mod 4) of W(x1,z1)·W(x2,z2) relative to W(x1^x2, z1^z2).

    W is the Hermitian convention where the (1,1) bit pattern denotes Y.
    Only qubits where both factors are non-identity can contribute.
    """
    phase = 0
    overlap = (x1 | z1) & (x2 | z2)
    while overlap:
        q = overlap & -overlap
        p1 = ((x1 & q) and 1) + 2 * ((z1 & q) and 1)
        p2 = ((x2 & q) and 1) + 2 * ((z2 & q) and 1)
        phase += _PHASE_TABLE[p1][p2]
        overlap ^= q
    return phase & 3


@dataclass(frozen=True)
class PauliString:
    """A signed N-qubit Pauli operator; sign is +1 or -1 (never +/-i)."""

    num_qubits: int
    x_mask: int
    z_mask: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        full = (1 << self.num_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the qubit range")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls(num_qubits, 0, 0, 1)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        """Build from a label like "XZY" (qubit 0 is the leftmost character)."""
        x = z = 0
        for q, ch in enumerate(label):
            xb, zb = _BITS_FOR_LABEL[ch]
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z, sign)

    def to_label(self) -> str:
        body = "".join(
            _LABEL_FOR_BITS[((self.x_mask >> q) & 1) + 2 * ((self.z_mask >> q) & 1)]
            for q in range(self.num_qubits)
        )
        return ("+" if self.sign > 0 else "-") + body

    def commutes_with(self, other: "PauliString") -> bool:
        return not symplectic_parity(self.x_mask, self.z_mask, other.x_mask, other.z_mask)

    def mul_with_phase(self, other: "PauliString") -> tuple["PauliString", int]:
        """Return (P, k) with self*other = i^k * P and P carrying sign +1."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("qubit counts differ")
        k = product_phase_exponent(self.x_mask, self.z_mask, other.x_mask, other.z_mask)
        if self.sign < 0:
            k += 2
        if other.sign < 0:
            k += 2
        return (
            PauliString(self.num_qubits, self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask, 1),
            k & 3,
        )

    def __mul__(self, other: "PauliString") -> "PauliString":
        prod, k = self.mul_with_phase(other)
        if k & 1:
            raise ValueError("product is anti-Hermitian (odd i power); not a signed Pauli")
        return PauliString(prod.num_qubits, prod.x_mask, prod.z_mask, 1 if k == 0 else -1)

    def matrix(self) -> np.ndarray:
        """Dense matrix (qubit 0 = most significant tensor factor); test-oracle scale."""
        if self.num_qubits > 10:
            raise ValueError("dense matrix limited to 10 qubits")
        out = np.array([[complex(self.sign)]])
        for q in range(self.num_qubits):
            p = ((self.x_mask >> q) & 1) + 2 * ((self.z_mask >> q) & 1)
            out = np.kron(out, _SINGLE_QUBIT_MATRICES[p])
        return out
