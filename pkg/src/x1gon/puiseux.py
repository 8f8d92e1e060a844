"""Rational Puiseux expansions of plane curves and valuations at places.

A place of the smooth model of ``f(x, y) = 0`` above a point ``x0`` of the
x-line is described by a parametrization

    x = x0 + gamma * t^e        (or x = 1/(gamma * t^e) above infinity)
    y = y0 + Y(t)               (or y = 1/W(t) when y tends to infinity)

with ``gamma`` and the coefficients of ``Y`` in a finite extension ``L`` of
the base field.  The expansions follow Duval's rational Newton-Puiseux
algorithm: conjugate branches are never separated, so every returned place
is a closed point over the base field and ``L`` is its residue field.

Series are truncated Laurent series with an absolute precision; they are
extended lazily when a valuation is not yet determined.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from math import comb, gcd

import numpy as np

from .errors import NotAFunction, NotSquarefree, WildRamification
from .exactalg import upoly
from .exactalg.factor import factor_poly
from .exactalg.fields import ExtensionField, PrimeField, is_prime
from .exactalg.multipoly import MultiPoly
from .exactalg.ratfunc import RationalFunction

__all__ = [
    "INF",
    "Laurent",
    "Place",
    "places_above",
    "valuation",
    "dump_places",
]


class _Infinity:
    """The point at infinity of the x-line (or of the y-line)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


# ---------------------------------------------------------------------------
# coefficient arrays


class _Coeffs:
    """Truncated coefficient arithmetic over a field.

    Prime fields of moderate size use numpy ``int64`` arrays; everything
    else uses Python lists of raw elements.
    """

    def __init__(self, K):
        self.K = K
        self.fast = isinstance(K, PrimeField) and K.p < (1 << 24)
        self.p = K.p if self.fast else None

    def zeros(self, n):
        if self.fast:
            return np.zeros(n, dtype=np.int64)
        return [self.K.zero] * n

    def from_list(self, vals):
        if self.fast:
            return np.array([int(v) for v in vals], dtype=np.int64)
        return list(vals)

    def to_list(self, a):
        return [int(v) for v in a] if self.fast else list(a)

    def is_zero_at(self, a, i):
        return (a[i] == 0) if self.fast else self.K.is_zero(a[i])

    def first_nonzero(self, a):
        if self.fast:
            nz = np.flatnonzero(a)
            return int(nz[0]) if len(nz) else None
        K = self.K
        for i, c in enumerate(a):
            if not K.is_zero(c):
                return i
        return None

    def add(self, a, b, n):
        """``a + b`` truncated to ``n`` terms (inputs may be shorter)."""
        if self.fast:
            out = np.zeros(n, dtype=np.int64)
            la, lb = min(len(a), n), min(len(b), n)
            out[:la] += a[:la]
            out[:lb] += b[:lb]
            return out % self.p
        K = self.K
        out = [K.zero] * n
        for i in range(min(len(a), n)):
            out[i] = a[i]
        for i in range(min(len(b), n)):
            out[i] = K.add(out[i], b[i])
        return out

    def neg(self, a):
        if self.fast:
            return (-a) % self.p
        return [self.K.neg(c) for c in a]

    def scale(self, a, c):
        if self.fast:
            return (a * int(c)) % self.p
        K = self.K
        return [K.mul(c, v) for v in a]

    def mul(self, a, b, n):
        """Product truncated to ``n`` terms."""
        a = a[:n]
        b = b[:n]
        if len(a) == 0 or len(b) == 0:
            return self.zeros(n)
        if self.fast:
            p = self.p
            if p * p * min(len(a), len(b)) < (1 << 62):
                c = np.convolve(a, b)[:n] % p
            else:
                # split one factor into 12-bit halves to stay inside int64
                lo = a & 0xFFF
                hi = a >> 12
                c = (np.convolve(lo, b)[:n] % p + (np.convolve(hi, b)[:n] % p) * 4096) % p
            if len(c) < n:
                c = np.concatenate([c, np.zeros(n - len(c), dtype=np.int64)])
            return c
        K = self.K
        out = [K.zero] * n
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j in range(min(len(b), n - i)):
                y = b[j]
                if not K.is_zero(y):
                    out[i + j] = K.add(out[i + j], K.mul(x, y))
        return out

    def inv(self, a, n):
        """Power series inverse of ``a`` (``a[0] != 0``) to ``n`` terms."""
        K = self.K
        c0 = K.inv(int(a[0]) if self.fast else a[0])
        out = self.from_list([c0] + [K.zero] * (n - 1))
        k = 1
        while k < n:
            k = min(2 * k, n)
            # out <- out * (2 - a*out)
            e = self.mul(a, out, k)
            e = self.neg(e)
            if self.fast:
                e[0] = (e[0] + 2) % self.p
            else:
                e[0] = K.add(e[0], K.from_int(2))
            out = self.mul(out, e, k)
        return out[:n] if not self.fast else out[:n].copy()


_coeff_cache = {}
_coeff_lock = threading.Lock()


def _coeffs_for(K):
    with _coeff_lock:
        c = _coeff_cache.get(K)
        if c is None:
            c = _Coeffs(K)
            _coeff_cache[K] = c
        return c


class Laurent:
    """Truncated Laurent series ``sum_{k >= val} c_k t^k + O(t^prec)``.

    ``prec`` is ``None`` for an exact (finite) series.  The coefficient
    array starts at ``val``; its first entry is nonzero unless the series
    is an unknown zero ``O(t^prec)``.
    """

    __slots__ = ("K", "ar", "val", "coeffs", "prec")

    def __init__(self, K, val, coeffs, prec=None):
        self.K = K
        self.ar = _coeffs_for(K)
        i = self.ar.first_nonzero(coeffs)
        if i is None:
            coeffs = self.ar.zeros(0)
            if prec is None:
                val = 0
        else:
            val += i
            coeffs = coeffs[i:]
        if prec is not None:
            keep = max(prec - val, 0)
            coeffs = coeffs[:keep]
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, K, c):
        ar = _coeffs_for(K)
        return cls(K, 0, ar.from_list([c]))

    @classmethod
    def monomial(cls, K, c, k):
        ar = _coeffs_for(K)
        return cls(K, k, ar.from_list([c]))

    # -- inspection -----------------------------------------------------------
    def is_exact(self):
        return self.prec is None

    def is_known_zero(self):
        return self.prec is None and len(self.coeffs) == 0

    def valuation(self):
        """Order in ``t``; ``None`` if not determined by the precision."""
        if len(self.coeffs) == 0:
            return None
        return self.val

    @property
    def relprec(self):
        if self.prec is None:
            return None
        return self.prec - self.val

    def leading_coefficient(self):
        if len(self.coeffs) == 0:
            raise ValueError("leading coefficient of an undetermined series")
        c = self.coeffs[0]
        return int(c) if self.ar.fast else c

    def coefficient(self, k):
        if self.prec is not None and k >= self.prec:
            raise ValueError("coefficient beyond the precision")
        i = k - self.val
        if i < 0 or i >= len(self.coeffs):
            return self.K.zero
        c = self.coeffs[i]
        return int(c) if self.ar.fast else c

    def head(self, n=6):
        return [(self.val + i, self.coefficient(self.val + i))
                for i in range(min(n, len(self.coeffs)))]

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Laurent):
            return other
        return Laurent.constant(self.K, self.K.convert(other))

    def __add__(self, other):
        o = self._lift(other)
        if len(o.coeffs) == 0 and o.prec is None:
            return self
        if len(self.coeffs) == 0 and self.prec is None:
            return o
        precs = [p for p in (self.prec, o.prec) if p is not None]
        prec = min(precs) if precs else None
        lo = min(self._low(), o._low())
        hi = prec if prec is not None else max(self.val + len(self.coeffs), o.val + len(o.coeffs))
        n = max(hi - lo, 0)
        ar = self.ar
        sa = self._shifted(lo, n)
        sb = o._shifted(lo, n)
        return Laurent(self.K, lo, ar.add(sa, sb, n), prec)

    __radd__ = __add__

    def _low(self):
        if len(self.coeffs) == 0:
            return self.prec if self.prec is not None else 0
        return self.val

    def _shifted(self, lo, n):
        """Coefficient array starting at exponent ``lo`` with ``n`` entries."""
        ar = self.ar
        if len(self.coeffs) == 0:
            return ar.zeros(n)
        pad = self.val - lo
        if ar.fast:
            out = np.zeros(n, dtype=np.int64)
            if pad < n:
                m = min(len(self.coeffs), n - pad)
                out[pad:pad + m] = self.coeffs[:m]
            return out
        out = [self.K.zero] * n
        for i in range(min(len(self.coeffs), max(n - pad, 0))):
            out[pad + i] = self.coeffs[i]
        return out

    def __neg__(self):
        return Laurent(self.K, self.val, self.ar.neg(self.coeffs), self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            c = self.K.convert(other)
            if self.K.is_zero(c):
                return Laurent(self.K, 0, self.ar.zeros(0))
            return Laurent(self.K, self.val, self.ar.scale(self.coeffs, c),
                           self.prec)
        o = other
        K = self.K
        ar = self.ar
        if self.is_known_zero() or o.is_known_zero():
            return Laurent(K, 0, ar.zeros(0))
        val = self._low() + o._low()
        if self.prec is None and o.prec is None:
            n = len(self.coeffs) + len(o.coeffs) - 1
            return Laurent(K, val, ar.mul(self.coeffs, o.coeffs, n))
        rps = [r for r in (self._relprec_eff(), o._relprec_eff()) if r is not None]
        rp = min(rps)
        if len(self.coeffs) == 0 or len(o.coeffs) == 0:
            # one factor is an unknown zero
            return Laurent(K, val, ar.zeros(0), val + rp)
        return Laurent(K, val, ar.mul(self.coeffs, o.coeffs, rp), val + rp)

    __rmul__ = __mul__

    def _relprec_eff(self):
        if self.prec is None:
            return None
        return self.prec - self._low()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = Laurent.constant(self.K, self.K.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        if len(self.coeffs) == 0:
            raise ZeroDivisionError("inverse of a series with undetermined valuation")
        K = self.K
        if self.prec is None and len(self.coeffs) == 1:
            c = self.coeffs[0]
            c = int(c) if self.ar.fast else c
            return Laurent.monomial(K, K.inv(c), -self.val)
        rp = self.relprec
        if rp is None:
            raise ValueError("exact non-monomial series has no finite inverse; truncate first")
        inv = self.ar.inv(self.coeffs, rp)
        return Laurent(K, -self.val, inv, -self.val + rp)

    def truncate(self, prec):
        """Same series with absolute precision at most ``prec``."""
        if self.prec is not None and self.prec <= prec:
            return self
        return Laurent(self.K, self.val, self.coeffs, prec)

    def shift(self, k):
        """Multiply by ``t^k``."""
        return Laurent(self.K, self.val + k, self.coeffs,
                       None if self.prec is None else self.prec + k)

    def __repr__(self):
        terms = [f"{self.K.to_str(c)}*t^{k}" for k, c in self.head(4)]
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return " + ".join(terms) + tail if terms else ("0" if self.prec is None else f"O(t^{self.prec})")


# ---------------------------------------------------------------------------
# bivariate polynomials as {(i, j): c} with i the X exponent, j the Y exponent


def _embed_dict(G, L_from, L_to):
    if L_from == L_to:
        return G
    return {e: L_to.embed(L_from, c) for e, c in G.items()}


def _y_column(G, i):
    return {j: c for (a, j), c in G.items() if a == i}


def _x_order(G):
    return min(i for i, _ in G)


def _chart_poly(f, K, x0):
    """``H(X, Y)`` with ``X`` the local coordinate at ``x0`` (or at infinity)."""
    xi = f.vars.index("x") if "x" in f.vars else 0
    yi = 1 - xi
    dx = f.degree(f.vars[xi])
    cols = {}
    for e, c in f.terms.items():
        cols.setdefault(e[yi], {})[e[xi]] = _convert(K, c)
    H = {}
    for j, col in cols.items():
        if x0 is INF:
            for i, c in col.items():
                if not K.is_zero(c):
                    H[(dx - i, j)] = c
        else:
            n = max(col)
            dense = [col.get(i, K.zero) for i in range(n + 1)]
            shifted = upoly.taylor_shift(K, dense, x0)
            for i, c in enumerate(shifted):
                if not K.is_zero(c):
                    H[(i, j)] = c
    return H


def _convert(K, c):
    try:
        return K.convert(c)
    except TypeError:
        return c


def _shift_y(G, L, theta):
    """``G(X, theta + Y)``."""
    rows = {}
    for (i, j), c in G.items():
        rows.setdefault(i, {})[j] = c
    out = {}
    for i, row in rows.items():
        n = max(row)
        dense = [row.get(j, L.zero) for j in range(n + 1)]
        for j, c in enumerate(upoly.taylor_shift(L, dense, theta)):
            if not L.is_zero(c):
                out[(i, j)] = c
    return out


def _reverse_y(G, n):
    """``W^n G(X, 1/W)``."""
    return {(i, n - j): c for (i, j), c in G.items()}


def _lower_hull(points):
    """Lower convex hull of ``(j, i)`` points sorted by ``j``."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is not strictly below the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _bezout_uv(q, m):
    """Nonnegative ``u, v`` with ``u*q - v*m = 1``."""
    if m == 1:
        return 1, q - 1
    u = pow(q, -1, m)
    return u, (u * q - 1) // m


@dataclass(frozen=True)
class _Step:
    q: int
    m: int
    u: int
    v: int
    theta: object
    field: object


# ---------------------------------------------------------------------------
# places


@dataclass(eq=False)
class Place:
    """A place of the smooth model above a point of the x-line.

    Attributes
    ----------
    base_field : Field
        Field of definition of the x-center.
    field : Field
        Residue field (an extension tower over ``base_field``).
    center : raw element of ``base_field`` or :data:`INF`
    y_center : raw element of ``field`` or :data:`INF`
    e : int
        Ramification index over the x-line.
    residue_degree : int
        Degree of ``field`` over ``base_field``.
    """

    base_field: object
    field: object
    center: object
    y_center: object
    e: int
    residue_degree: int
    gamma: object = None
    steps: tuple = ()
    _final: dict = dc_field(default=None, repr=False)
    _ycache: dict = dc_field(default_factory=dict, repr=False)
    _lock: object = dc_field(default_factory=threading.Lock, repr=False)

    @property
    def degree(self):
        return self.residue_degree

    # -- series -------------------------------------------------------------
    def x_series(self):
        L = self.field
        X = Laurent.monomial(L, self.gamma, self.e)
        if self.center is INF:
            return X.inverse()
        return X + L.embed(self.base_field, self.center)

    def y_series(self, relprec):
        """``y(t)`` with relative precision at least ``relprec`` (where finite)."""
        with self._lock:
            hit = self._ycache.get("y")
            if hit is not None and hit[0] >= relprec:
                return hit[1]
            Y = self._local_y(relprec)
            L = self.field
            if self.y_center is INF:
                y = Y.inverse()
            else:
                y = Y + self.y_center
            self._ycache["y"] = (relprec, y)
            return y

    def _local_y(self, relprec):
        """Series of the chart coordinate ``Y`` (or ``W``) in ``t``."""
        L = self.field
        # extra terms absorb the valuation of the local coordinate
        prec = relprec + self._local_valuation_bound()
        Yn = _regular_root(self._final, L, prec)
        # undo the chain from the last step back to the first
        e_after = 1
        for st in reversed(self.steps):
            theta = L.embed(st.field, st.theta)
            # X_s = theta^v X_{s+1}^q with X_{s+1} = c * t^{e_after}
            c_next = self._x_coeff_after(st)
            lead = L.mul(L.pow(c_next, st.m), L.one)
            Yn = (Yn + L.pow(theta, st.u)) * lead
            Yn = Yn.shift(st.m * e_after)
            e_after *= st.q
        return Yn

    def _x_coeff_after(self, step):
        """Coefficient ``c`` with ``X_{s+1} = c * t^(...)`` just after ``step``."""
        L = self.field
        c = L.one
        idx = self.steps.index(step)
        for st in reversed(self.steps[idx + 1:]):
            theta = L.embed(st.field, st.theta)
            c = L.mul(L.pow(theta, st.v), L.pow(c, st.q))
        return c

    def _local_valuation_bound(self):
        return sum(st.m for st in self.steps) * self.e + 2

    def dump(self):
        L = self.field
        center = "oo" if self.center is INF else self.base_field.to_str(self.center)
        y = self.y_series(8)
        head = " + ".join(f"({L.to_str(c)})*t^{k}" for k, c in y.head(4))
        return f"{center} | {self.e} | {self.residue_degree} | {head}"


def _regular_root(G, L, prec):
    """Power series ``Y(t)`` with ``G(t, Y(t)) = 0`` and ``Y(0) = 0``.

    ``G(0, Y)`` must have a simple root at ``Y = 0``.
    """
    cols = {}
    for (i, j), c in G.items():
        if i < prec:
            cols.setdefault(j, {})[i] = c
    ar = _coeffs_for(L)
    n = max(cols) if cols else 0
    A = []
    for j in range(n + 1):
        col = cols.get(j, {})
        arr = [L.zero] * prec
        for i, c in col.items():
            arr[i] = c
        A.append(ar.from_list(arr))
    dA = [ar.scale(A[j], L.from_int(j)) for j in range(1, n + 1)]
    Y = ar.zeros(prec)
    k = 1
    while True:
        k = min(2 * k, prec)
        g = _horner(ar, A, Y, k)
        dg = _horner(ar, dA, Y, k) if dA else ar.zeros(k)
        if ar.is_zero_at(dg, 0):
            raise NotSquarefree("branch is not regular after the Newton polygon steps")
        corr = ar.mul(g, ar.inv(dg, k), k)
        Y = ar.add(Y[:k], ar.neg(corr), k)
        if k >= prec:
            break
    # one more pass to settle the top coefficients
    g = _horner(ar, A, Y, prec)
    dg = _horner(ar, dA, Y, prec)
    Y = ar.add(Y, ar.neg(ar.mul(g, ar.inv(dg, prec), prec)), prec)
    return Laurent(L, 0, Y, prec)


def _horner(ar, A, Y, k):
    acc = ar.zeros(k)
    for a in reversed(A):
        acc = ar.add(ar.mul(acc, Y, k), a, k)
    return acc


def places_above(f, x0, field=None, y_filter=None, max_depth=64, allow_wild=False):
    """All places of ``f(x, y) = 0`` above ``x = x0``.

    Parameters
    ----------
    f : MultiPoly
        Polynomial in ``x, y`` squarefree in ``y``.
    x0 : raw element of ``field`` or :data:`INF`
    field : Field, optional
        Field containing ``x0``; the coefficients of ``f`` are converted
        into it.  Defaults to ``f.field``.
    y_filter : callable, optional
        ``y_filter(L, y0)`` decides whether to expand branches with
        y-center ``y0`` (a raw element of ``L``, or :data:`INF`).
    allow_wild : bool
        Continue through Newton polygon edges whose denominator is
        divisible by the characteristic.  The monomial substitutions stay
        valid, but termination is only guarded by ``max_depth``; callers
        should check the fundamental identity ``sum e*f = deg_y f``.

    Returns
    -------
    list of Place
    """
    K = field if field is not None else f.field
    if x0 is not INF:
        x0 = K.convert(x0)
    H = _chart_poly(f, K, x0)
    if not H:
        raise NotAFunction("polynomial vanishes identically")
    n = max(j for _, j in H)
    if n <= 0:
        raise ValueError("f must have positive degree in y")
    H0 = [K.zero] * (n + 1)
    for (i, j), c in H.items():
        if i == 0:
            H0[j] = c
    H0 = upoly.trim(K, H0)
    if not H0:
        raise NotSquarefree("x - x0 divides f")
    out = []
    _, facs = factor_poly(K, H0)
    for phi, k in facs:
        if len(phi) == 2:
            L = K
            theta = K.neg(phi[0])
        else:
            L = ExtensionField(K, phi, name=f"a{len(phi) - 1}")
            theta = L.gen
        if y_filter is not None and not y_filter(L, theta):
            continue
        G = _shift_y(_embed_dict(H, K, L), L, theta)
        _expand(G, L, k, (), K, x0, theta, L, out, max_depth, allow_wild)
    k_inf = n - (len(H0) - 1)
    if k_inf > 0 and (y_filter is None or y_filter(K, INF)):
        G = _reverse_y(H, n)
        _expand(G, K, k_inf, (), K, x0, INF, K, out, max_depth, allow_wild)
    return out


def _expand(G, L, k, steps, K, x0, y0, yfield, out, depth, allow_wild=False):
    if depth <= 0:
        raise NotSquarefree("Puiseux expansion does not terminate; f is not squarefree")
    if k == 1:
        e = 1
        for st in steps:
            e *= st.q
        yc = y0 if y0 is INF else L.embed(yfield, y0)
        out.append(Place(K, L, x0, yc, e, L.degree // K.degree, _gamma(steps, L),
                         tuple(steps), G))
        return
    p = L.characteristic
    # Newton polygon of the part with j <= k
    best = {}
    for (i, j), c in G.items():
        if j <= k and (j not in best or i < best[j]):
            best[j] = i
    if 0 not in best:
        raise NotSquarefree("Y divides the local equation; f is not squarefree")
    pts = sorted(best.items())
    hull = _lower_hull(pts)
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        g = gcd(i1 - i2, j2 - j1)
        m, q = (i1 - i2) // g, (j2 - j1) // g
        if p and q % p == 0 and not allow_wild:
            raise WildRamification(
                f"ramification divisible by the characteristic {p}",
                suggested_q=_suggest_prime(p))
        deg_phi = (j2 - j1) // q
        phi = [G.get((i1 - s * m, j1 + s * q), L.zero) for s in range(deg_phi + 1)]
        _, facs = factor_poly(L, phi)
        u, v = _bezout_uv(q, m)
        ell = q * i1 + m * j1
        for psi, r in facs:
            if len(psi) == 2:
                L2 = L
                theta = L.neg(psi[0])
            else:
                L2 = ExtensionField(L, psi, name=f"b{len(steps)}")
                theta = L2.gen
            G2 = _embed_dict(G, L, L2)
            G1 = _substitute_step(G2, L2, q, m, u, v, theta, ell)
            step = _Step(q, m, u, v, theta, L2)
            _expand(G1, L2, r, steps + (step,), K, x0, y0, yfield, out, depth - 1,
                    allow_wild)


def _gamma(steps, L):
    c = L.one
    for st in reversed(steps):
        theta = L.embed(st.field, st.theta)
        c = L.mul(L.pow(theta, st.v), L.pow(c, st.q))
    return c


def _suggest_prime(p):
    q = p + 1
    while not is_prime(q):
        q += 1
    return q


def _substitute_step(G, L, q, m, u, v, theta, ell):
    """``G(theta^v X^q, X^m (theta^u + Y)) / X^ell``."""
    tu = L.pow(theta, u)
    tv = L.pow(theta, v)
    out = {}
    tv_pows = {}
    tu_pows = {}
    for (i, j), c in G.items():
        ex = q * i + m * j - ell
        if ex < 0:
            raise ArithmeticError("Newton polygon edge is not a lower edge")
        if i not in tv_pows:
            tv_pows[i] = L.pow(tv, i)
        c1 = L.mul(c, tv_pows[i])
        for s in range(j + 1):
            w = j - s
            if w not in tu_pows:
                tu_pows[w] = L.pow(tu, w)
            t = L.mul(c1, L.mul(L.from_int(comb(j, s)), tu_pows[w]))
            if L.is_zero(t):
                continue
            key = (ex, s)
            out[key] = L.add(out[key], t) if key in out else t
    return {e: c for e, c in out.items() if not L.is_zero(c)}


# ---------------------------------------------------------------------------
# valuations


def _poly_series(g, P, relprec):
    """Evaluate a polynomial in ``x, y`` along the place ``P``."""
    L = P.field
    xs = P.x_series()
    ys = P.y_series(relprec)
    xi = g.vars.index("x")
    yi = g.vars.index("y")
    by_y = {}
    for e, c in g.terms.items():
        by_y.setdefault(e[yi], {})[e[xi]] = c
    acc = None
    for j in range(max(by_y), -1, -1):
        col = by_y.get(j)
        cx = None
        if col:
            cx = _univariate_series(col, xs, L, P.base_field)
        if acc is None:
            acc = cx if cx is not None else Laurent(L, 0, _coeffs_for(L).zeros(0))
        else:
            acc = acc * ys
            if cx is not None:
                acc = acc + cx
    return acc


def _univariate_series(col, xs, L, K):
    n = max(col)
    acc = None
    for i in range(n, -1, -1):
        c = col.get(i)
        term = None if c is None else L.embed(K, _convert(K, c))
        if acc is None:
            acc = Laurent.constant(L, term if term is not None else L.zero)
        else:
            acc = acc * xs
            if term is not None:
                acc = acc + Laurent.constant(L, term)
    return acc


def _poly_valuation(P, g, start=16):
    if g.is_zero():
        raise NotAFunction("the zero function has no valuation")
    relprec = start
    total_deg = max(sum(e) for e in g.terms) + 1
    cap = max(64, 8 * P.e * total_deg * (P._local_valuation_bound() + 1))
    while True:
        s = _poly_series(g, P, relprec)
        v = s.valuation()
        if v is not None:
            return v
        if relprec > cap:
            raise NotAFunction("function vanishes identically on the curve")
        relprec *= 2


def valuation(P, g):
    """Order of vanishing of ``g`` (polynomial or rational function) at ``P``."""
    if isinstance(g, RationalFunction):
        return _poly_valuation(P, g.num) - _poly_valuation(P, g.den)
    if isinstance(g, MultiPoly):
        return _poly_valuation(P, g)
    raise TypeError("valuation needs a MultiPoly or RationalFunction")


def dump_places(places):
    """Debug dump: one place per line, ``center | e | resdeg | y-series head``."""
    return "\n".join(P.dump() for P in places)


def residual_order(f, P, relprec=32):
    """Valuation of ``f(x(t), y(t))`` up to the precision (``None`` when vanishing)."""
    s = _poly_series(f, P, relprec)
    return s.valuation(), s.prec
