"""Uniform sampling over the full N-qubit Clifford group.

The sampler builds a uniformly random symplectic basis (image of X_1 uniform
among nonidentity Paulis, image of Z_1 uniform among its anticommuting
partners, recurse on the centralizer) and then draws all 2N image signs
uniformly.  This is exactly uniform over the group, which the orbit-counting
oracle assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import _sample_symplectic
from .paulis import PauliString, product_phase_exponent, symplectic_parity
from .stabilizer import StabilizerState, gf2_rank

_UINFO = np.iinfo(np.uint64)


@dataclass(frozen=True)
class GlobalCliffordTableau:
    """Signed images of X_0, Z_0, X_1, Z_1, ... under conjugation."""

    num_qubits: int
    images: tuple[PauliString, ...]

    def __post_init__(self) -> None:
        n = self.num_qubits
        if len(self.images) != 2 * n or any(p.num_qubits != n for p in self.images):
            raise ValueError("need 2N images on N qubits")
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                want = 1 if (i // 2 == j // 2) else 0
                a, b = self.images[i], self.images[j]
                if symplectic_parity(a.x_mask, a.z_mask, b.x_mask, b.z_mask) != want:
                    raise ValueError("images violate the symplectic condition")
        rows = [p.x_mask | (p.z_mask << n) for p in self.images]
        if gf2_rank(rows, 2 * n) != 2 * n:
            raise ValueError("images are GF(2)-dependent")

    @property
    def key(self) -> tuple:
        return tuple((p.x_mask, p.z_mask, p.sign) for p in self.images)

    @classmethod
    def identity(cls, num_qubits: int) -> "GlobalCliffordTableau":
        images = []
        for q in range(num_qubits):
            images.append(PauliString(num_qubits, 1 << q, 0, 1))
            images.append(PauliString(num_qubits, 0, 1 << q, 1))
        return cls(num_qubits, tuple(images))

    def conjugate_pauli(self, p: PauliString) -> PauliString:
        """Image of an arbitrary signed Pauli under this tableau."""
        n = self.num_qubits
        if p.num_qubits != n:
            raise ValueError("qubit count mismatch")
        phase = bin(p.x_mask & p.z_mask).count("1")  # Y-convention factors
        if p.sign < 0:
            phase += 2
        cur_x = cur_z = 0
        for q in range(n):
            for local, bit in ((self.images[2 * q], (p.x_mask >> q) & 1),
                               (self.images[2 * q + 1], (p.z_mask >> q) & 1)):
                if bit:
                    phase += product_phase_exponent(cur_x, cur_z, local.x_mask, local.z_mask)
                    cur_x ^= local.x_mask
                    cur_z ^= local.z_mask
                    if local.sign < 0:
                        phase += 2
        phase &= 3
        if phase & 1:
            raise AssertionError("odd i-power in Clifford conjugation")
        return PauliString(n, cur_x, cur_z, 1 if phase == 0 else -1)


def compose(second: GlobalCliffordTableau, first: GlobalCliffordTableau) -> GlobalCliffordTableau:
    """Tableau of `first` followed by `second` (so images of first, conjugated)."""
    if second.num_qubits != first.num_qubits:
        raise ValueError("qubit count mismatch")
    return GlobalCliffordTableau(
        first.num_qubits, tuple(second.conjugate_pauli(p) for p in first.images)
    )


def draw_word_buffer(rng: np.random.Generator, nwords: int) -> np.ndarray:
    return rng.integers(_UINFO.min, _UINFO.max, size=nwords, dtype=np.uint64, endpoint=True)


def buffer_words(num_qubits: int) -> int:
    """Initial random-word budget for one symplectic draw plus signs."""
    per_round = 2 if num_qubits <= 32 else 4
    return per_round * num_qubits + (2 * num_qubits + 63) // 64 + 16


def sample_symplectic_rows(num_qubits: int, rng: np.random.Generator):
    """(vx, vz, wx, wz, sign_bits) arrays for a uniform Clifford draw."""
    if not 1 <= num_qubits <= 64:
        raise ValueError("sampler supports 1..64 qubits")
    n = num_qubits
    nwords = buffer_words(n)
    while True:
        buf = draw_word_buffer(rng, nwords)
        vx = np.zeros(n, np.uint64)
        vz = np.zeros(n, np.uint64)
        wx = np.zeros(n, np.uint64)
        wz = np.zeros(n, np.uint64)
        cur, ok = _sample_symplectic(n, buf, vx, vz, wx, wz)
        sign_words = (2 * n + 63) // 64
        if ok and cur + sign_words <= nwords:
            signs = buf[cur:cur + sign_words]
            return vx, vz, wx, wz, signs
        nwords *= 2  # buffer ran dry (astronomically rare); retry deterministically


def sample_global_clifford(num_qubits: int, rng: np.random.Generator) -> GlobalCliffordTableau:
    """Uniform draw over the N-qubit Clifford group (deterministic per stream)."""
    n = num_qubits
    vx, vz, wx, wz, signs = sample_symplectic_rows(n, rng)
    images = []
    for i in range(n):
        for kind, (xm, zm) in enumerate(((int(vx[i]), int(vz[i])), (int(wx[i]), int(wz[i])))):
            bit_index = 2 * i + kind
            word = int(signs[bit_index // 64])
            sign = -1 if (word >> (bit_index % 64)) & 1 else 1
            images.append(PauliString(n, xm, zm, sign))
    return GlobalCliffordTableau(n, tuple(images))


def apply_global_clifford(state: StabilizerState, tableau: GlobalCliffordTableau) -> StabilizerState:
    """Conjugate every generator through the tableau; returns a new state."""
    if state.num_qubits != tableau.num_qubits:
        raise ValueError("qubit count mismatch")
    gens = [tableau.conjugate_pauli(p) for p in state.generators]
    result = StabilizerState(state.num_qubits, gens)
    if __debug__:
        result.validate()
    return result
