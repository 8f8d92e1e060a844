"""Integer lattices of unit divisors: LLL, short vectors, class groups.

The lattice of a level ``N`` is spanned by the rows ``div(f_k)`` of the
divisor table.  The degree of the unit with divisor ``v`` is the weighted
sum of the positive entries of ``v``, the weights being the orbit degrees.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import EnumerationBudgetExceeded, RankDeficient
from .exactalg import IntMatrix, smith_normal_form, solve_left
from .exactalg.intmat import rank as _rank

__all__ = [
    "UnitLattice",
    "ShortVector",
    "lll_reduce",
    "lll_reduce_with_transform",
    "enumerate_short",
    "units_up_to_degree",
    "search_min_degree",
    "class_group_quotient",
    "divisor_degree",
    "is_lll_reduced",
]

DEFAULT_DELTA = Fraction(99, 100)


def divisor_degree(v, weights):
    """Degree of a function with divisor ``v``: weighted sum of positive entries."""
    return sum(w * a for a, w in zip(v, weights) if a > 0)


@dataclass
class UnitLattice:
    """Rows ``div(f_2) .. div(f_{N/2+1})`` with the orbit degrees as weights."""

    N: int
    basis: IntMatrix
    weights: tuple

    @classmethod
    def from_table(cls, table):
        return cls(table.N, table.matrix(), tuple(table.degrees()))

    @classmethod
    def for_level(cls, N):
        from .cusps import divisor_table

        return cls.from_table(divisor_table(N))

    @property
    def rank(self):
        return _rank(self.basis.rows)

    def vector(self, exponents):
        """Divisor of ``prod f_k^{n_k}``."""
        rows = self.basis.rows
        m = len(rows[0])
        return [sum(n * r[j] for n, r in zip(exponents, rows)) for j in range(m)]

    def degree(self, exponents):
        return divisor_degree(self.vector(exponents), self.weights)


# ---------------------------------------------------------------------------
# LLL


def lll_reduce(B, delta=DEFAULT_DELTA, weights=None):
    """LLL-reduce the rows of ``B`` (exact integral algorithm).

    Parameters
    ----------
    B : IntMatrix or list of rows
        Linearly independent rows.
    delta : Fraction
        Lovasz parameter in ``(1/4, 1]``.
    weights : sequence of positive ints, optional
        Diagonal inner product ``<u, v> = sum w_i u_i v_i``.

    Returns
    -------
    IntMatrix
    """
    return lll_reduce_with_transform(B, delta, weights)[0]


def lll_reduce_with_transform(B, delta=DEFAULT_DELTA, weights=None):
    """As :func:`lll_reduce`, also returning ``U`` with ``U * B == reduced``."""
    rows = [list(r) for r in (B.rows if isinstance(B, IntMatrix) else B)]
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1]")
    n = len(rows)
    m = len(rows[0])
    w = list(weights) if weights is not None else [1] * m
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntMatrix(rows), IntMatrix(H)

    def ip(u, v):
        return sum(a * b * c for a, b, c in zip(u, v, w))

    da, db = delta.numerator, delta.denominator
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = ip(rows[0], rows[0])
    if d[1] == 0:
        raise RankDeficient("zero row")
    k = 1
    kmax = 0

    def red(k, l):
        # size-reduce row k against row l
        dl = d[l + 1]
        if 2 * abs(lam[k][l]) > dl:
            q = (2 * lam[k][l] + dl) // (2 * dl)
            rk, rl = rows[k], rows[l]
            rows[k] = [a - q * b for a, b in zip(rk, rl)]
            H[k] = [a - q * b for a, b in zip(H[k], H[l])]
            lam[k][l] -= q * dl
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        rows[k], rows[k - 1] = rows[k - 1], rows[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        Bv = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (Bv * t + lk * lam[i][k]) // d[k + 1]
        d[k] = Bv

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = ip(rows[k], rows[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise RankDeficient("rows are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        lk = lam[k][k - 1]
        if db * d[k + 1] * d[k - 1] < da * d[k] * d[k] - db * lk * lk:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return IntMatrix(rows), IntMatrix(H)


def _gram_schmidt(rows, w):
    """Exact ``mu`` and squared norms ``B_i`` for the weighted inner product."""
    n = len(rows)
    bstar = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    Bn = []

    def ip(u, v):
        return sum(Fraction(a) * b * c for a, b, c in zip(u, v, w))

    for i in range(n):
        v = [Fraction(a) for a in rows[i]]
        for j in range(i):
            mu[i][j] = ip(rows[i], bstar[j]) / Bn[j]
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        bstar.append(v)
        Bn.append(ip(v, v))
    return mu, Bn


def is_lll_reduced(B, delta=DEFAULT_DELTA, weights=None):
    """Check size reduction and the Lovasz condition exactly."""
    rows = B.rows if isinstance(B, IntMatrix) else B
    w = list(weights) if weights is not None else [1] * len(rows[0])
    mu, Bn = _gram_schmidt(rows, w)
    n = len(rows)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if Bn[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * Bn[k - 1]:
            return False
    return True


# ---------------------------------------------------------------------------
# Fincke-Pohst


@dataclass(frozen=True)
class ShortVector:
    """A lattice vector with its coordinates in the given basis."""

    exponents: tuple
    vector: tuple
    norm2: int
    degree: int


NORMS = ("euclidean", "weighted", "degree")


def _form_weights(L, norm):
    if norm == "euclidean":
        return [1] * len(L.weights)
    if norm == "weighted":
        return list(L.weights)
    if norm == "degree":
        return [w * w for w in L.weights]
    raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")


def _fp_python(muf, Bf, A, R, wt, dmax, cap):
    """Reference enumeration; returns (coordinate list, nodes)."""
    n = len(Bf)
    m = len(R[0])
    x = [0] * n
    c = [0.0] * n
    l = [0.0] * (n + 1)
    cur = [0] * n
    hiv = [0] * n
    vpart = [[0] * m for _ in range(n + 1)]
    out = []
    nodes = 0

    def bounds(i):
        r = math.sqrt(max(A - l[i + 1], 0.0) / Bf[i])
        return math.ceil(c[i] - r - 1e-9), math.floor(c[i] + r + 1e-9)

    i = n - 1
    lo, hi = bounds(i)
    cur[i], hiv[i] = lo - 1, hi
    while True:
        cur[i] += 1
        if cur[i] > hiv[i]:
            i += 1
            if i >= n:
                break
            continue
        nodes += 1
        if nodes > cap:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {cap} nodes")
        x[i] = cur[i]
        diff = x[i] - c[i]
        l[i] = l[i + 1] + diff * diff * Bf[i]
        if l[i] > A:
            continue
        vpart[i] = [a + x[i] * b for a, b in zip(vpart[i + 1], R[i])]
        if i == 0:
            last = next((v for v in reversed(x) if v), 0)
            if last > 0 and (dmax < 0 or divisor_degree(vpart[0], wt) <= dmax):
                out.append(list(x))
            continue
        i -= 1
        c[i] = -sum(x[j] * muf[j][i] for j in range(i + 1, n))
        lo, hi = bounds(i)
        cur[i], hiv[i] = lo - 1, hi
    return out, nodes


try:  # optional JIT for the inner loop
    import numba
    import numpy as np

    @numba.njit(cache=False)
    def _fp_kernel(muf, Bf, A, R, wt, dmax, cap, out):  # pragma: no cover - jitted
        n = Bf.shape[0]
        m = R.shape[1]
        x = np.zeros(n, np.int64)
        c = np.zeros(n)
        l = np.zeros(n + 1)
        cur = np.zeros(n, np.int64)
        hiv = np.zeros(n, np.int64)
        vpart = np.zeros((n + 1, m), np.int64)
        count = 0
        nodes = 0
        i = n - 1
        r = math.sqrt(max(A, 0.0) / Bf[i])
        cur[i] = math.ceil(-r - 1e-9) - 1
        hiv[i] = math.floor(r + 1e-9)
        while True:
            cur[i] += 1
            if cur[i] > hiv[i]:
                i += 1
                if i >= n:
                    break
                continue
            nodes += 1
            if nodes > cap:
                return count, nodes, 1
            x[i] = cur[i]
            diff = x[i] - c[i]
            l[i] = l[i + 1] + diff * diff * Bf[i]
            if l[i] > A:
                continue
            for j in range(m):
                vpart[i, j] = vpart[i + 1, j] + x[i] * R[i, j]
            if i == 0:
                last = 0
                for j in range(n - 1, -1, -1):
                    if x[j] != 0:
                        last = x[j]
                        break
                if last > 0:
                    keep = True
                    if dmax >= 0:
                        deg = 0
                        for j in range(m):
                            if vpart[0, j] > 0:
                                deg += wt[j] * vpart[0, j]
                        keep = deg <= dmax
                    if keep:
                        if count >= out.shape[0]:
                            return count, nodes, 2
                        for j in range(n):
                            out[count, j] = x[j]
                        count += 1
                continue
            i -= 1
            s = 0.0
            for j in range(i + 1, n):
                s += x[j] * muf[j, i]
            c[i] = -s
            r = math.sqrt(max(A - l[i + 1], 0.0) / Bf[i])
            cur[i] = math.ceil(c[i] - r - 1e-9) - 1
            hiv[i] = math.floor(c[i] + r + 1e-9)
        return count, nodes, 0

    HAVE_JIT = True
except ImportError:  # pragma: no cover
    HAVE_JIT = False


def _fp_coords(rows, mu, Bn, bound2, wt, dmax, cap, jit):
    muf = [[float(v) for v in r] for r in mu]
    Bf = [float(v) for v in Bn]
    # floating point with a relative slack; leaves are re-checked exactly
    A = float(bound2) * (1 + 1e-9) + 1e-9
    if not (jit and HAVE_JIT):
        return _fp_python(muf, Bf, A, rows, wt, dmax, cap)[0]
    size = 1024
    while True:
        out = np.zeros((size, len(Bf)), np.int64)
        count, nodes, status = _fp_kernel(
            np.array(muf), np.array(Bf), A, np.array(rows, np.int64),
            np.array(wt, np.int64), dmax, cap, out)
        if status == 1:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {cap} nodes")
        if status == 0:
            return [list(map(int, r)) for r in out[:count]]
        size *= 8


def enumerate_short(L, bound2, norm="euclidean", max_degree=None, cap=10**10, jit=True):
    """All nonzero lattice vectors (up to sign) of squared norm at most ``bound2``.

    Parameters
    ----------
    L : UnitLattice
    bound2 : int
        Bound on the quadratic form selected by ``norm``.
    norm : {"euclidean", "weighted", "degree"}
        ``sum v_i^2``, ``sum w_i v_i^2`` or ``sum w_i^2 v_i^2`` where ``w``
        are the orbit degrees.
    max_degree : int, optional
        Keep only vectors whose divisor degree is at most this.
    cap : int
        Maximum number of enumeration nodes before giving up.
    jit : bool
        Use the compiled inner loop when numba is available.

    Returns
    -------
    list of ShortVector sorted by ``(degree, norm2, exponents)``.

    Raises
    ------
    EnumerationBudgetExceeded
        When the enumeration tree exceeds ``cap`` nodes.
    """
    if bound2 < 1:
        return []
    u = _form_weights(L, norm)
    R, U = lll_reduce_with_transform(L.basis, weights=u)
    rows = R.rows
    n = len(rows)
    mu, Bn = _gram_schmidt(rows, u)
    dmax = -1 if max_degree is None else int(max_degree)
    coords = _fp_coords(rows, mu, Bn, bound2, list(L.weights), dmax, cap, jit)
    res = []
    for x in coords:
        v = [sum(a * r[j] for a, r in zip(x, rows)) for j in range(len(rows[0]))]
        norm2 = sum(ui * a * a for a, ui in zip(v, u))
        if norm2 > bound2 or norm2 == 0:
            continue
        deg = divisor_degree(v, L.weights)
        if max_degree is not None and deg > max_degree:
            continue
        expo = [sum(a * U.rows[t][j] for t, a in enumerate(x)) for j in range(n)]
        res.append(ShortVector(tuple(expo), tuple(v), norm2, deg))
    res.sort(key=lambda s: (s.degree, s.norm2, s.exponents))
    return res


def units_up_to_degree(L, d, cap=10**10, jit=True):
    """Every unit divisor (up to sign) of degree at most ``d``.

    A degree-zero divisor with positive part of degree ``d`` has
    ``|v_i| <= d / w_i``, hence ``sum w_i^2 v_i^2 <= d * sum w_i |v_i| = 2 d^2``;
    the enumeration in that form is therefore complete.
    """
    return enumerate_short(L, 2 * d * d, norm="degree", max_degree=d, cap=cap, jit=jit)


# ---------------------------------------------------------------------------
# randomized 1-norm search


@dataclass
class SearchResult:
    exponents: tuple
    degree: int
    vector: tuple
    restarts: int
    exhaustive: bool = False


def _canonical(expo):
    # fix the sign: first nonzero exponent positive
    for a in expo:
        if a:
            return tuple(expo) if a > 0 else tuple(-b for b in expo)
    return tuple(expo)


def search_min_degree(L, budget=200, seed=0, delta=DEFAULT_DELTA, combos=True):
    """Randomized search for a unit of small degree.

    Each restart scales the columns by random integers drawn log-uniformly
    from ``[1, 64]``, LLL-reduces, and scores the reduced rows together with
    sums and differences of pairs of them by the weighted degree.

    Returns
    -------
    SearchResult
        Ties are broken by the lexicographically smallest sign-normalized
        exponent vector.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = random.Random(seed)
    B = L.basis.rows
    n = len(B)
    m = len(B[0])
    weights = L.weights
    best = None

    def consider(expo, v):
        nonlocal best
        if not any(v):
            return
        deg = divisor_degree(v, weights)
        key = (deg, _canonical(expo))
        if best is None or key < best[0]:
            best = (key, tuple(v))

    for r in range(budget):
        if r == 0:
            scale = [1] * m
        else:
            scale = [max(1, int(round(math.exp(rng.uniform(0.0, math.log(64)))))) for _ in range(m)]
        scaled = [[a * s for a, s in zip(row, scale)] for row in B]
        _, U = lll_reduce_with_transform(scaled, delta, weights)
        red = [[sum(u * row[j] for u, row in zip(urow, B)) for j in range(m)] for urow in U.rows]
        for urow, v in zip(U.rows, red):
            consider(urow, v)
        if combos:
            for a in range(n):
                for b in range(a + 1, n):
                    for sgn in (1, -1):
                        v = [x + sgn * y for x, y in zip(red[a], red[b])]
                        e = [x + sgn * y for x, y in zip(U.rows[a], U.rows[b])]
                        consider(e, v)
    (deg, expo), vec = best
    return SearchResult(expo, deg, vec, budget)


# ---------------------------------------------------------------------------
# class group


def degree_zero_basis(weights):
    """A basis of ``{v : sum w_i v_i = 0}`` as rows."""
    m = len(weights)
    _, _, V = smith_normal_form(IntMatrix([list(weights)]))
    # w * V = (g, 0, ..., 0): the remaining columns of V span the kernel
    return [list(V.column(j)) for j in range(1, m)]


def class_group_quotient(L):
    """Invariant factors of the degree-zero cuspidal divisors modulo ``L``.

    Returns
    -------
    (factors, free_rank)
        Invariant factors greater than one, and the rank of the free part
        (nonzero only when the unit rows do not have full rank).
    """
    K = degree_zero_basis(L.weights)
    coords = []
    for row in L.basis.rows:
        coords.append(solve_left(IntMatrix(K), row))
    _, S, _ = smith_normal_form(IntMatrix(coords))
    diag = S.diagonal()
    m = len(K)
    nz = [d for d in diag if d]
    free_rank = m - len(nz)
    return [d for d in nz if d != 1], free_rank
