"""Word-packed stabilizer evolution kernels (numba).

Generators are stored column-major: for each qubit q, ``xcol[q]`` / ``zcol[q]``
are uint64 words whose bit r is generator r's X/Z bit on q, so a two-qubit
brick updates four words regardless of how many generators there are.  Signs
live in one word (bit r = minus sign on generator r) and are updated through
each gate's ANF truth table, though entropies never read them.

Everything here supports at most 64 generator rows; the Monte Carlo sweeps in
this artifact stay well below that.  The pure-Python layer in
:mod:`scramlab.stabilizer` has no such cap and doubles as the oracle.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U0 = np.uint64(0)
_U1 = np.uint64(1)

MAX_ROWS = 64


@njit(cache=True, nogil=True, inline="always")
def _popcount64(w):
    w = w - ((w >> _U1) & np.uint64(0x5555555555555555))
    w = (w & np.uint64(0x3333333333333333)) + ((w >> np.uint64(2)) & np.uint64(0x3333333333333333))
    w = (w + (w >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((w * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, nogil=True, inline="always")
def _msb64(w):
    r = np.int64(0)
    if w >> np.uint64(32):
        w >>= np.uint64(32)
        r += 32
    if w >> np.uint64(16):
        w >>= np.uint64(16)
        r += 16
    if w >> np.uint64(8):
        w >>= np.uint64(8)
        r += 8
    if w >> np.uint64(4):
        w >>= np.uint64(4)
        r += 4
    if w >> np.uint64(2):
        w >>= np.uint64(2)
        r += 2
    if w >> np.uint64(1):
        r += 1
    return r


@njit(cache=True, nogil=True)
def _apply_gates(xcol, zcol, signref, a_arr, b_arr, gid_arr, lo, hi, kmask, anf):
    """Conjugate all generators through gates lo..hi (column update + signs)."""
    for i in range(lo, hi):
        a = a_arr[i]
        b = b_arr[i]
        gid = gid_arr[i]
        xa = xcol[a]
        za = zcol[a]
        xb = xcol[b]
        zb = zcol[b]
        t = np.int64(anf[gid])
        flip = _U0
        for m in range(1, 16):
            if (t >> m) & 1:
                w = ~_U0
                if m & 1:
                    w &= xa
                if m & 2:
                    w &= za
                if m & 4:
                    w &= xb
                if m & 8:
                    w &= zb
                flip ^= w
        signref[0] ^= flip
        for j in range(4):
            km = np.int64(kmask[gid, j])
            acc = _U0
            if km & 1:
                acc ^= xa
            if km & 2:
                acc ^= za
            if km & 4:
                acc ^= xb
            if km & 8:
                acc ^= zb
            if j == 0:
                xcol[a] = acc
            elif j == 1:
                zcol[a] = acc
            elif j == 2:
                xcol[b] = acc
            else:
                zcol[b] = acc


@njit(cache=True, nogil=True)
def _rank_cols(xcol, zcol, row_mask, region_qmask, ncols):
    """GF(2) rank of the selected rows restricted to qubits outside the region."""
    pivots = np.zeros(64, np.uint64)
    rank = np.int64(0)
    for q in range(ncols):
        if (region_qmask >> np.uint64(q)) & _U1:
            continue
        for which in range(2):
            if which == 0:
                w = xcol[q] & row_mask
            else:
                w = zcol[q] & row_mask
            while w != _U0:
                p = _msb64(w)
                if pivots[p] != _U0:
                    w ^= pivots[p]
                else:
                    pivots[p] = w
                    rank += 1
                    break
    return rank


@njit(cache=True, nogil=True)
def _holevo_brick(N, a_arr, b_arr, gid_arr, encoded_rowmask, region_qmask, nregion, kmask, anf):
    """One Holevo sample: entropies of the mixed and pure terms, same circuit.

    Rows track the circuit images of Z_j; the mixed-input state is the row
    subset outside `encoded`, the pure |0...0> input is all rows.
    """
    xcol = np.zeros(N, np.uint64)
    zcol = np.zeros(N, np.uint64)
    for q in range(N):
        zcol[q] = _U1 << np.uint64(q)
    signref = np.zeros(1, np.uint64)
    _apply_gates(xcol, zcol, signref, a_arr, b_arr, gid_arr, 0, len(gid_arr), kmask, anf)
    full = (~_U0) >> np.uint64(64 - N)
    mixed = full & ~encoded_rowmask
    r_pure = _rank_cols(xcol, zcol, full, region_qmask, N)
    r_mixed = _rank_cols(xcol, zcol, mixed, region_qmask, N)
    g_mixed = N - _popcount64(encoded_rowmask & full)
    s_pure = nregion - (N - r_pure)
    s_mixed = nregion - (g_mixed - r_mixed)
    return s_mixed, s_pure


@njit(cache=True, nogil=True)
def _coherent_brick(N, C, encoded_arr, encoded_qmask, a_arr, b_arr, gid_arr, region_qmask, kmask, anf):
    """One coherent sample on the purified (N+C)-qubit state.

    Returns (S_Q, S_QR); the coherent information is their difference.
    """
    ncols = N + C
    g = N + C
    xcol = np.zeros(ncols, np.uint64)
    zcol = np.zeros(ncols, np.uint64)
    row = 0
    for i in range(C):
        e = encoded_arr[i]
        rb = _U1 << np.uint64(row)
        xcol[e] |= rb
        xcol[N + i] |= rb
        rb = _U1 << np.uint64(row + 1)
        zcol[e] |= rb
        zcol[N + i] |= rb
        row += 2
    for q in range(N):
        if not ((encoded_qmask >> np.uint64(q)) & _U1):
            zcol[q] |= _U1 << np.uint64(row)
            row += 1
    signref = np.zeros(1, np.uint64)
    _apply_gates(xcol, zcol, signref, a_arr, b_arr, gid_arr, 0, len(gid_arr), kmask, anf)
    full = (~_U0) >> np.uint64(64 - g)
    refmask = ((~_U0) >> np.uint64(64 - C)) << np.uint64(N)
    nq = _popcount64(region_qmask)
    r_q = _rank_cols(xcol, zcol, full, region_qmask, ncols)
    r_qr = _rank_cols(xcol, zcol, full, region_qmask | refmask, ncols)
    s_q = nq - (g - r_q)
    s_qr = (nq + C) - (g - r_qr)
    return s_q, s_qr


@njit(cache=True, nogil=True)
def _dynamics_brick(N, a_arr, b_arr, gid_arr, sched_prefix, encoded_rowmask, region_qmasks, region_sizes, out, kmask, anf):
    """Grow one circuit realization, recording chi for every region at each
    scheduled depth (sched_prefix holds cumulative gate counts)."""
    xcol = np.zeros(N, np.uint64)
    zcol = np.zeros(N, np.uint64)
    for q in range(N):
        zcol[q] = _U1 << np.uint64(q)
    signref = np.zeros(1, np.uint64)
    full = (~_U0) >> np.uint64(64 - N)
    mixed = full & ~encoded_rowmask
    g_mixed = N - _popcount64(encoded_rowmask & full)
    pos = np.int64(0)
    for si in range(len(sched_prefix)):
        _apply_gates(xcol, zcol, signref, a_arr, b_arr, gid_arr, pos, sched_prefix[si], kmask, anf)
        pos = sched_prefix[si]
        for ki in range(len(region_qmasks)):
            qm = region_qmasks[ki]
            n = region_sizes[ki]
            r_pure = _rank_cols(xcol, zcol, full, qm, N)
            r_mixed = _rank_cols(xcol, zcol, mixed, qm, N)
            out[si, ki] = (n - (g_mixed - r_mixed)) - (n - (N - r_pure))


@njit(cache=True, nogil=True, inline="always")
def _sp_words(x1, z1, x2, z2):
    return (_popcount64(x1 & z2) ^ _popcount64(z1 & x2)) & 1


@njit(cache=True, nogil=True)
def _sample_symplectic(N, buf, vx, vz, wx, wz):
    """Uniform symplectic image rows from the random word buffer.

    Pairs (vx[i], vz[i]) / (wx[i], wz[i]) are the images of X_i / Z_i: each v
    is drawn uniformly among nonzero elements of the running centralizer,
    each w uniformly among its anticommuting partners, then the centralizer
    basis is rebuilt.  Returns (words consumed, ok flag); ok is False when
    the buffer runs dry (caller retries with a longer one).
    """
    two_n = 2 * N
    cbx = np.zeros(two_n, np.uint64)
    cbz = np.zeros(two_n, np.uint64)
    for i in range(N):
        cbx[i] = _U1 << np.uint64(i)
        cbz[N + i] = _U1 << np.uint64(i)
    nbx = np.zeros(two_n, np.uint64)
    nbz = np.zeros(two_n, np.uint64)
    count = two_n
    cur = np.int64(0)
    nwords = len(buf)
    for i in range(N):
        dim = count
        hi_bits = dim - 64 if dim > 64 else 0
        # uniform nonzero selector over dim bits
        sel0 = _U0
        sel1 = _U0
        while True:
            if cur + 2 > nwords:
                return cur, False
            sel0 = buf[cur]
            cur += 1
            if dim < 64:
                sel0 &= (_U1 << np.uint64(dim)) - _U1
            if hi_bits > 0:
                sel1 = buf[cur]
                cur += 1
                if hi_bits < 64:
                    sel1 &= (_U1 << np.uint64(hi_bits)) - _U1
            if sel0 != _U0 or sel1 != _U0:
                break
        vxw = _U0
        vzw = _U0
        for j in range(dim):
            if j < 64:
                bit = (sel0 >> np.uint64(j)) & _U1
            else:
                bit = (sel1 >> np.uint64(j - 64)) & _U1
            if bit:
                vxw ^= cbx[j]
                vzw ^= cbz[j]
        # anticommuting partner u always exists inside the centralizer
        ux = _U0
        uz = _U0
        for j in range(dim):
            if _sp_words(vxw, vzw, cbx[j], cbz[j]) == 1:
                ux = cbx[j]
                uz = cbz[j]
                break
        # uniform w with <v, w> = 1
        if cur + 2 > nwords:
            return cur, False
        sel0 = buf[cur]
        cur += 1
        if dim < 64:
            sel0 &= (_U1 << np.uint64(dim)) - _U1
        sel1 = _U0
        if hi_bits > 0:
            sel1 = buf[cur]
            cur += 1
            if hi_bits < 64:
                sel1 &= (_U1 << np.uint64(hi_bits)) - _U1
        wxw = _U0
        wzw = _U0
        for j in range(dim):
            if j < 64:
                bit = (sel0 >> np.uint64(j)) & _U1
            else:
                bit = (sel1 >> np.uint64(j - 64)) & _U1
            if bit:
                wxw ^= cbx[j]
                wzw ^= cbz[j]
        if _sp_words(vxw, vzw, wxw, wzw) == 0:
            wxw ^= ux
            wzw ^= uz
        vx[i] = vxw
        vz[i] = vzw
        wx[i] = wxw
        wz[i] = wzw
        # project the old basis off (v, w) and keep an independent subset
        newcount = 0
        pivx = np.zeros(128, np.uint64)
        pivz = np.zeros(128, np.uint64)
        pivused = np.zeros(128, np.uint8)
        for j in range(dim):
            fx = cbx[j]
            fz = cbz[j]
            if _sp_words(fx, fz, wxw, wzw) == 1:
                fx ^= vxw
                fz ^= vzw
            if _sp_words(fx, fz, vxw, vzw) == 1:
                fx ^= wxw
                fz ^= wzw
            gx = fx
            gz = fz
            while gx != _U0 or gz != _U0:
                if gx != _U0:
                    p = 64 + _msb64(gx)
                else:
                    p = _msb64(gz)
                if pivused[p]:
                    gx ^= pivx[p]
                    gz ^= pivz[p]
                else:
                    pivx[p] = gx
                    pivz[p] = gz
                    pivused[p] = 1
                    nbx[newcount] = fx
                    nbz[newcount] = fz
                    newcount += 1
                    break
            if newcount == dim - 2:
                break
        for j in range(newcount):
            cbx[j] = nbx[j]
            cbz[j] = nbz[j]
        count = newcount
    return cur, True


@njit(cache=True, nogil=True)
def _rank_rows_masked(rx, rz, row_mask, colmask):
    """GF(2) rank of selected Pauli rows with qubit columns masked."""
    pivx = np.zeros(128, np.uint64)
    pivz = np.zeros(128, np.uint64)
    pivused = np.zeros(128, np.uint8)
    rank = np.int64(0)
    for j in range(len(rx)):
        if not ((row_mask >> np.uint64(j)) & _U1):
            continue
        gx = rx[j] & colmask
        gz = rz[j] & colmask
        while gx != _U0 or gz != _U0:
            if gx != _U0:
                p = 64 + _msb64(gx)
            else:
                p = _msb64(gz)
            if pivused[p]:
                gx ^= pivx[p]
                gz ^= pivz[p]
            else:
                pivx[p] = gx
                pivz[p] = gz
                pivused[p] = 1
                rank += 1
                break
    return rank


@njit(cache=True, nogil=True)
def _global_holevo(N, buf, encoded_rowmask, region_qmask, nregion):
    """One Holevo sample with a uniform global Clifford instead of a circuit.

    The state rows are just the sampled Z-images; sign words are consumed to
    keep the stream aligned with the public tableau sampler.
    """
    vx = np.zeros(N, np.uint64)
    vz = np.zeros(N, np.uint64)
    wx = np.zeros(N, np.uint64)
    wz = np.zeros(N, np.uint64)
    cur, ok = _sample_symplectic(N, buf, vx, vz, wx, wz)
    if not ok:
        return np.int64(0), np.int64(0), False
    sign_words = (2 * N + 63) // 64
    if cur + sign_words > len(buf):
        return np.int64(0), np.int64(0), False
    full = (~_U0) >> np.uint64(64 - N)
    mixed = full & ~encoded_rowmask
    colmask = full & ~region_qmask
    r_pure = _rank_rows_masked(wx, wz, full, colmask)
    r_mixed = _rank_rows_masked(wx, wz, mixed, colmask)
    g_mixed = N - _popcount64(encoded_rowmask & full)
    s_pure = nregion - (N - r_pure)
    s_mixed = nregion - (g_mixed - r_mixed)
    return s_mixed, s_pure, True


def pack_state(state) -> tuple[np.ndarray, np.ndarray, np.uint64, int]:
    """Column-pack a StabilizerState (requires g <= 64)."""
    g = state.g
    if g > MAX_ROWS:
        raise ValueError("packed engine supports at most 64 generators")
    n = state.num_qubits
    xcol = np.zeros(n, np.uint64)
    zcol = np.zeros(n, np.uint64)
    sign = 0
    for r, p in enumerate(state.generators):
        x = p.x_mask
        z = p.z_mask
        for q in range(n):
            if (x >> q) & 1:
                xcol[q] |= np.uint64(1 << r)
            if (z >> q) & 1:
                zcol[q] |= np.uint64(1 << r)
        if p.sign < 0:
            sign |= 1 << r
    return xcol, zcol, np.uint64(sign), g


def unpack_state(num_qubits: int, xcol, zcol, sign: int, g: int):
    """Inverse of pack_state; returns a list of PauliStrings."""
    from .paulis import PauliString

    gens = []
    for r in range(g):
        x = z = 0
        for q in range(num_qubits):
            if (int(xcol[q]) >> r) & 1:
                x |= 1 << q
            if (int(zcol[q]) >> r) & 1:
                z |= 1 << q
        gens.append(PauliString(num_qubits, x, z, -1 if (int(sign) >> r) & 1 else 1))
    return gens
