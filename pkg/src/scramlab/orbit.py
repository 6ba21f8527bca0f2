"""Exact orbit counting for the steady-state entropy and Holevo averages.

A deep uniform Clifford circuit sends the encoding state rho_h to a uniform
distribution over its orbit under the N-qubit Clifford group.  Restricting to
local unitaries on the n|m bipartition (m = N - n), the orbit splits into
classes labelled by (k1, k2, l1, l2): k1 cross-cut anticommuting pairs, k2
cross-cut commuting rows, and l1/l2 rows local to either side, subject to

    2*k1 + k2 + l1 + l2 = N - h,     k1 + k2 + l1 <= n,    k1 + k2 + l2 <= m.

Each class has weight t = |G| / |Stab|, with |G| = Cl(n) * Cl(m) and |Stab| a
five-block combinatorial product; the subsystem entropy inside a class is
x = n - l1.  The expected entropy is the weight-averaged x, and the average
Holevo information is E S(n, H) - E S(n, 0).

Arithmetic: exact big-integer / Fraction path for N <= 30, log2-domain
float path (prefix-sum factor tables plus log-sum-exp) beyond, where weights
span thousands of orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

EXACT_LIMIT = 30  # largest N handled with exact big-integer weights

HESSIAN = np.array([[-8.0, -4.0, -6.0], [-4.0, -7.0, -3.0], [-6.0, -3.0, -6.0]])


def clifford_group_order(num_qubits: int) -> int:
    """|Cl(N)| = prod_{j=1..N} 2 (4^j - 1) 4^j, with Cl(0) = 1."""
    if num_qubits < 0:
        raise ValueError("num_qubits must be >= 0")
    out = 1
    for j in range(1, num_qubits + 1):
        out *= 2 * (4**j - 1) * 4**j
    return out


@lru_cache(maxsize=None)
def _log_tables(size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Prefix sums up to `size`: A[k] = sum log2(4^j-1), C[k] = sum log2(2^i-1),
    and log2 Cl(k) = k + k(k+1) + A[k]."""
    a = np.zeros(size + 1)
    c = np.zeros(size + 1)
    for k in range(1, size + 1):
        a[k] = a[k - 1] + math.log2(4**k - 1)  # exact int argument keeps full precision
        c[k] = c[k - 1] + math.log2(2**k - 1)
    ks = np.arange(size + 1, dtype=float)
    logcl = ks + ks * (ks + 1) + a
    return a, c, logcl


def _log2_b(k: np.ndarray | int, c: np.ndarray) -> np.ndarray | float:
    """log2 prod_{j=0..k-1} (2^k - 2^j) = k(k-1)/2 + C[k]."""
    if isinstance(k, np.ndarray):
        return k * (k - 1) / 2.0 + c[k]
    return k * (k - 1) / 2.0 + float(c[k])


@dataclass(frozen=True)
class OrbitTerm:
    """One (k1, k2, l1, l2) class with its orbit weight."""

    k1: int
    k2: int
    l1: int
    l2: int
    log2_weight: float
    exact_weight: Optional[int] = None

    def check(self, n: int, m: int, h: int) -> None:
        k1, k2, l1, l2 = self.k1, self.k2, self.l1, self.l2
        if min(k1, k2, l1, l2) < 0:
            raise ValueError("negative block size")
        if 2 * k1 + k2 + l1 + l2 != n + m - h:
            raise ValueError("row count constraint violated")
        if k1 + k2 + l1 > n or k1 + k2 + l2 > m:
            raise ValueError("block sizes exceed the bipartition")


def _exact_b(k: int) -> int:
    out = 1
    for j in range(k):
        out *= 2**k - 2**j
    return out


def stabilizer_subgroup_order(term: OrbitTerm, n: int, m: int, h: int) -> int:
    """Exact order of the local-unitary stabilizer subgroup of one class."""
    term.check(n, m, h)
    k1, k2, l1, l2 = term.k1, term.k2, term.l1, term.l2
    h1 = n - k1 - k2 - l1
    h2 = m - k1 - k2 - l2
    pair = 1
    for j in range(1, k1 + 1):
        pair *= (4**j - 1) * 4**j * 2
    pair <<= 2 * k1 * (k2 + l1) + 2 * k1 * l2
    k2blk = (
        2 ** (3 * k2)
        * 2 ** (k2 * (k2 + 2 * l1 + 1) // 2 + k2 * (k2 + 2 * l2 + 1) // 2)
        * 4 ** (h1 * k2 + h2 * k2)
        * _exact_b(k2)
        * 2 ** (l1 * k2 + l2 * k2)
    )
    l1blk = 2 ** (l1 + l1 * (l1 + 1) // 2) * _exact_b(l1) * 4 ** (h1 * l1)
    l2blk = 2 ** (l2 + l2 * (l2 + 1) // 2) * _exact_b(l2) * 4 ** (h2 * l2)
    return pair * k2blk * l1blk * l2blk * clifford_group_order(h1) * clifford_group_order(h2)


def stabilizer_subgroup_log2(
    k1: np.ndarray, k2: np.ndarray, l1: np.ndarray, l2: np.ndarray, n: int, m: int
) -> np.ndarray:
    """Vectorized log2 of the stabilizer order (same five blocks)."""
    a, c, logcl = _log_tables(max(n, m))
    h1 = n - k1 - k2 - l1
    h2 = m - k1 - k2 - l2
    pair = a[k1] + k1 * (k1 + 1.0) + k1 + 2.0 * k1 * (k2 + l1) + 2.0 * k1 * l2
    k2f = k2.astype(float)
    k2blk = (
        3.0 * k2f
        + (k2f * (k2f + 2 * l1 + 1) + k2f * (k2f + 2 * l2 + 1)) / 2.0
        + 2.0 * (h1 + h2) * k2f
        + _log2_b(k2, c)
        + (l1 + l2) * k2f
    )
    l1blk = l1 + l1 * (l1 + 1) / 2.0 + _log2_b(l1, c) + 2.0 * h1 * l1
    l2blk = l2 + l2 * (l2 + 1) / 2.0 + _log2_b(l2, c) + 2.0 * h2 * l2
    return pair + k2blk + l1blk + l2blk + logcl[h1] + logcl[h2]


def _term_grid(n: int, N: int, h: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All (k1, k2, l1, l2) satisfying the constraints, as flat arrays."""
    m = N - n
    rows = N - h
    k1v, k2v, l1v = np.meshgrid(
        np.arange(rows // 2 + 1),
        np.arange(rows + 1),
        np.arange(min(n, rows) + 1),
        indexing="ij",
    )
    k1v = k1v.ravel()
    k2v = k2v.ravel()
    l1v = l1v.ravel()
    l2v = rows - 2 * k1v - k2v - l1v
    ok = (
        (l2v >= 0)
        & (k1v + k2v + l1v <= n)
        & (k1v + k2v + l2v <= m)
    )
    return k1v[ok], k2v[ok], l1v[ok], l2v[ok]


def enumerate_orbit_terms(n: int, N: int, h: int, with_exact: Optional[bool] = None) -> list[OrbitTerm]:
    """All orbit classes for (n, N, h) with their log2 (and exact) weights."""
    if not 0 <= h <= N:
        raise ValueError("need 0 <= h <= N")
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    m = N - n
    if with_exact is None:
        with_exact = N <= EXACT_LIMIT
    k1v, k2v, l1v, l2v = _term_grid(n, N, h)
    a, c, logcl = _log_tables(max(n, m, 1))
    log_g = float(logcl[n] + logcl[m])
    log_w = log_g - stabilizer_subgroup_log2(k1v, k2v, l1v, l2v, n, m)
    terms = []
    order_g = clifford_group_order(n) * clifford_group_order(m) if with_exact else None
    for i in range(len(k1v)):
        exact = None
        if with_exact:
            tup = OrbitTerm(int(k1v[i]), int(k2v[i]), int(l1v[i]), int(l2v[i]), 0.0)
            stab = stabilizer_subgroup_order(tup, n, m, h)
            if order_g % stab:
                raise AssertionError("stabilizer order does not divide the group order")
            exact = order_g // stab
        terms.append(
            OrbitTerm(int(k1v[i]), int(k2v[i]), int(l1v[i]), int(l2v[i]), float(log_w[i]), exact)
        )
    return terms


def expected_entropy_fraction(n: int, N: int, h: int) -> Fraction:
    """Exact E S(n, h) as a Fraction (N <= 30)."""
    if N > EXACT_LIMIT:
        raise ValueError(f"exact path limited to N <= {EXACT_LIMIT}")
    num = 0
    den = 0
    for term in enumerate_orbit_terms(n, N, h, with_exact=True):
        t = term.exact_weight
        num += (n - term.l1) * t
        den += t
    return Fraction(num, den)


def _log_sum_exp2(values: np.ndarray) -> float:
    top = float(np.max(values))
    return top + math.log2(float(np.sum(np.exp2(values - top))))


def expected_entropy_exact(n: int, N: int, h: int) -> float:
    """E S(n, h): exact rational for N <= 30, stable log-domain beyond."""
    if N <= EXACT_LIMIT:
        return float(expected_entropy_fraction(n, N, h))
    m = N - n
    k1v, k2v, l1v, l2v = _term_grid(n, N, h)
    a, c, logcl = _log_tables(max(n, m, 1))
    log_w = float(logcl[n] + logcl[m]) - stabilizer_subgroup_log2(k1v, k2v, l1v, l2v, n, m)
    xs = (n - l1v).astype(float)
    den = _log_sum_exp2(log_w)
    pos = xs > 0
    if not np.any(pos):
        return 0.0
    num = _log_sum_exp2(log_w[pos] + np.log2(xs[pos]))
    return float(2.0 ** (num - den))


def holevo_exact(n: int, N: int, H: int) -> float:
    """Steady-state average Holevo information E S(n,H) - E S(n,0), in bits."""
    if not 1 <= H <= N:
        raise ValueError("need 1 <= H <= N")
    if N <= EXACT_LIMIT:
        chi = expected_entropy_fraction(n, N, H) - expected_entropy_fraction(n, N, 0)
        return float(chi)
    chi = expected_entropy_exact(n, N, H) - expected_entropy_exact(n, N, 0)
    if -1e-9 < chi < 0.0:
        chi = 0.0  # clamp log-domain round-off on the flat region
    return chi


@dataclass(frozen=True)
class ExactCurve:
    """holevo_exact over a set of subsystem sizes at fixed (N, H)."""

    N: int
    H: int
    n_values: tuple[int, ...]
    chi: tuple[float, ...]
    es_h: tuple[float, ...]
    es_0: tuple[float, ...]


def exact_curve(N: int, H: int, n_values: Iterable[int]) -> ExactCurve:
    ns = tuple(int(n) for n in n_values)
    es_h = tuple(expected_entropy_exact(n, N, H) for n in ns)
    es_0 = tuple(expected_entropy_exact(n, N, 0) for n in ns)
    chi = tuple(holevo_exact(n, N, H) for n in ns)
    return ExactCurve(N, H, ns, chi, es_h, es_0)


def thermo_limit(r_n: float, r_h: float) -> float:
    """Thermodynamic limit of chi/H at subsystem ratio r_n, encoding ratio r_h."""
    if not 0.0 < r_n <= 1.0 or not 0.0 < r_h <= 1.0:
        raise ValueError("ratios must lie in (0, 1]")
    if r_n <= 0.5:
        return 0.0
    if r_n <= 0.5 * (1.0 + r_h):
        return (2.0 * r_n - 1.0) / r_h
    return 1.0


def critical_exponent_estimate(side: str, r_h: float, tau_values: Sequence[float]) -> float:
    """Least-squares slope of log|f| against log|tau| approaching a transition."""
    taus = [float(t) for t in tau_values]
    if len(taus) < 2:
        raise ValueError("need at least two tau values")
    if any(t <= 0 for t in taus) or any(a <= b for a, b in zip(taus, taus[1:])):
        raise ValueError("tau values must be positive and strictly decreasing")
    if side not in ("first", "second"):
        raise ValueError("side must be 'first' or 'second'")
    fs = []
    for tau in taus:
        if tau >= r_h / 2.0:
            raise ValueError("tau crosses a branch boundary")
        if side == "first":
            f = thermo_limit(0.5 + tau, r_h)
        else:
            f = 1.0 - thermo_limit(0.5 * (1.0 + r_h) - tau, r_h)
        fs.append(f)
    xs = np.log(np.abs(taus))
    ys = np.log(np.abs(fs))
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


def _term_for(n: int, N: int, h: int, k1: int, k2: int, l1: int, l2: int) -> OrbitTerm:
    m = N - n
    a, c, logcl = _log_tables(max(n, m, 1))
    lw = float(
        logcl[n]
        + logcl[m]
        - stabilizer_subgroup_log2(
            np.array([k1]), np.array([k2]), np.array([l1]), np.array([l2]), n, m
        )[0]
    )
    term = OrbitTerm(k1, k2, l1, l2, lw)
    term.check(n, m, h)
    return term


def brute_force_argmax(n: int, N: int, h: int) -> OrbitTerm:
    """Largest-weight class by direct enumeration; lexicographic tie-break.

    Scans in the log domain and resolves near-ties (within 1e-6, far above
    the float error of the prefix sums) with exact integer weights when the
    exact path is available.
    """
    terms = enumerate_orbit_terms(n, N, h, with_exact=False)
    top = max(t.log2_weight for t in terms)
    near = sorted(
        (t for t in terms if t.log2_weight >= top - 1e-6),
        key=lambda t: (t.k1, t.k2, t.l1, t.l2),
    )
    if len(near) == 1 or N > EXACT_LIMIT:
        return near[0]
    m = N - n
    weights = [
        clifford_group_order(n) * clifford_group_order(m) // stabilizer_subgroup_order(t, n, m, h)
        for t in near
    ]
    best = max(range(len(near)), key=lambda i: (weights[i], -1 * i))
    return near[best]


def asymptotic_exponent(
    k1: np.ndarray, k2: np.ndarray, l1: np.ndarray, l2: np.ndarray, n: int, m: int, h: int
) -> np.ndarray:
    """The continuum weight exponent whose maximizer the closed form describes.

    This is log2 of the orbit weight with all bounded factors dropped; the
    KKT multiplier vectors are gradients of exactly this function.  At finite
    N the true weight's argmax can sit an O(1) step away in the middle
    regime, so maximizer checks against the closed form use this exponent.
    """
    N = n + m
    neg = (
        2.0 * k1 * (N - h - k1)
        + 3.0 * k1
        + 3.0 * k2
        + 2.0 * k2 * (k2 + l1 + l2 + h)
        + l1 * (1.5 * l1 + 0.5)
        + l2 * (1.5 * l2 + 0.5)
        + 2.0 * (n - k1 - k2 - l1) * (n - k1 - k2 + 1)
        + 2.0 * (m - k1 - k2 - l2) * (m - k1 - k2 + 1)
    )
    return -neg


def brute_force_argmax_exponent(n: int, N: int, h: int) -> tuple[int, int, int, int]:
    """Lattice argmax of the continuum exponent; lexicographic tie-break."""
    m = N - n
    k1v, k2v, l1v, l2v = _term_grid(n, N, h)
    f = asymptotic_exponent(
        k1v.astype(float), k2v.astype(float), l1v.astype(float), l2v.astype(float), n, m, h
    )
    sel = np.flatnonzero(f >= f.max() - 1e-9)
    cands = sorted((int(k1v[i]), int(k2v[i]), int(l1v[i]), int(l2v[i])) for i in sel)
    return cands[0]


def argmax_orbit_weight(n: int, N: int, h: int) -> OrbitTerm:
    """The closed-form maximizing class, by regime of n.

    Below (N-h)/2: (n, 0, 0, N-h-2n).  Between (N-h)/2 and (N+h)/2:
    ((N-h)/2, 0, 0, 0).  Above: (N-n, 0, 2n-N-h, 0).  When the closed form is
    not lattice-realizable (odd N-h in the middle regime) the brute-force
    maximizer is returned instead.
    """
    if not 0 <= h <= N or not 1 <= n <= N:
        raise ValueError("invalid (n, N, h)")
    if 2 * n < N - h:
        return _term_for(n, N, h, n, 0, 0, N - h - 2 * n)
    if 2 * n <= N + h:
        if (N - h) % 2 == 0:
            return _term_for(n, N, h, (N - h) // 2, 0, 0, 0)
        return brute_force_argmax(n, N, h)
    return _term_for(n, N, h, N - n, 0, 2 * n - N - h, 0)


def hessian_negative_definite() -> bool:
    """Static concavity check of the continuum weight exponent."""
    return bool(np.all(np.linalg.eigvalsh(HESSIAN) < 0))


def kkt_multipliers(n: int, N: int, h: int) -> tuple[str, tuple[float, float, float]]:
    """Literal closed-form multiplier vector for the regime containing n."""
    if 2 * n == N - h or 2 * n == N + h:
        raise ValueError("n sits exactly on a regime boundary")
    if 2 * n < N - h:
        return "first", (
            2.0 * (N - h - 2 * n - 1),
            N - h - 2 * n - 1.5,
            N + h - 2 * n - 2.0,
        )
    if 2 * n < N + h:
        return "middle", (2.0 * n + h - N - 1.0, -0.5, N + h - 2.0 * n - 1.0)
    return "last", (
        -2.0 + h + 2.0 * n - N,
        -1.5 - h + 2.0 * n - N,
        -2.0 * (1.0 + h - 2.0 * n + N),
    )


def verify_kkt(n: int, N: int, h: int) -> Optional[bool]:
    """Check the maximizer's first-order conditions for (n, N, h).

    True when the Hessian is negative definite and either every literal
    multiplier is nonnegative or, despite a negative literal entry (the
    middle regime carries a -1/2 from the continuum relaxation), the
    brute-force lattice maximizer of the exponent those multipliers are
    derived from confirms the closed form.  None means n sits on a regime
    boundary, where the strict-inequality formulas do not apply.
    """
    if not hessian_negative_definite():
        return False
    try:
        regime, mu = kkt_multipliers(n, N, h)
    except ValueError:
        return None
    if all(v >= 0 for v in mu):
        return True
    if regime == "middle" and (N - h) % 2 == 1:
        return None  # closed form not lattice-realizable; nothing to confirm
    closed = argmax_orbit_weight(n, N, h)
    brute = brute_force_argmax_exponent(n, N, h)
    same = (closed.k1, closed.k2, closed.l1, closed.l2) == brute
    return True if same else False
