"""Univariate factorization over finite fields, QQ and number fields.

* finite fields: squarefree split, distinct-degree split, then
  Cantor-Zassenhaus equal-degree splitting (trace map in characteristic 2);
* QQ: reduction modulo a small prime, quadratic Hensel lifting and
  Zassenhaus recombination;
* number fields (extensions of QQ, possibly stacked): Trager's norm method.

Polynomials are raw coefficient lists as in :mod:`.upoly`.
"""

from __future__ import annotations

import itertools
import math
import random

import gmpy2

from . import upoly
from .errors import ZeroPolynomial
from .fields import ExtensionField, PrimeField, RationalField, is_prime

__all__ = ["factor_poly", "roots", "factor_ff", "factor_qq", "factor_nf"]


def factor_poly(K, f, rng=None):
    """Factor ``f`` over ``K``.

    Returns
    -------
    (lc, factors)
        ``lc`` is the leading coefficient and ``factors`` a list of
        ``(monic irreducible, multiplicity)`` sorted by degree then
        coefficients, with ``f = lc * prod g**m``.
    """
    f = upoly.trim(K, list(f))
    if not f:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    lc = f[-1]
    if len(f) == 1:
        return lc, []
    if K.is_finite:
        facs = factor_ff(K, f, rng)
    elif isinstance(K, RationalField):
        facs = factor_qq(f)
    elif isinstance(K, ExtensionField) and K.characteristic == 0:
        facs = factor_nf(K, f)
    else:
        raise TypeError(f"factorization over {K} is not supported")
    facs.sort(key=lambda t: (len(t[0]), t[1], _sort_key(K, t[0])))
    return lc, facs


def _sort_key(K, g):
    return tuple(K.to_str(c) for c in g)


def roots(K, f, rng=None):
    """Roots of ``f`` in ``K`` with multiplicities."""
    _, facs = factor_poly(K, f, rng)
    return [(K.neg(g[0]), m) for g, m in facs if len(g) == 2]


# ---------------------------------------------------------------------------
# finite fields


def factor_ff(K, f, rng=None):
    rng = rng or random.Random(0x5EED)
    out = []
    for g, m in upoly.squarefree_decomposition(K, f):
        for d, part in _ddf(K, g):
            for h in _edf(K, part, d, rng):
                out.append((upoly.monic(K, h), m))
    return out


def _ddf(K, f):
    q = K.order
    out = []
    f = upoly.monic(K, f)
    x = [K.zero, K.one]
    h = x
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = upoly.pow_mod(K, h, q, f)
        d = upoly.gcd(K, f, upoly.sub(K, h, x))
        if len(d) > 1:
            out.append((i, d))
            f = upoly.quo(K, f, d)
            h = upoly.rem(K, h, f)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _edf(K, f, d, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    q = K.order
    p = K.characteristic
    while True:
        a = upoly.trim(K, [K.random_element(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            k = (q.bit_length() - 1) * d
            t = a
            acc = a
            for _ in range(k - 1):
                t = upoly.rem(K, upoly.mul(K, t, t), f)
                acc = upoly.add(K, acc, t)
            b = acc
        else:
            e = (q ** d - 1) // 2
            b = upoly.sub(K, upoly.pow_mod(K, a, e, f), [K.one])
        g = upoly.gcd(K, f, b)
        if 1 < len(g) < len(f):
            return _edf(K, g, d, rng) + _edf(K, upoly.quo(K, f, g), d, rng)


# ---------------------------------------------------------------------------
# integers / rationals


def _int_content(f):
    g = 0
    for c in f:
        g = math.gcd(g, c)
    return g


def _to_primitive_int(f):
    """Scale a rational coefficient list to a primitive integer list."""
    den = 1
    for c in f:
        den = den * int(c.denominator) // math.gcd(den, int(c.denominator))
    ints = [int(c * den) for c in f]
    g = _int_content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _zp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _zp_mul(f, g, m):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _zp_trim([c % m for c in out])


def _zp_add(f, g, m):
    n = max(len(f), len(g))
    return _zp_trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % m
                     for i in range(n)])


def _zp_sub(f, g, m):
    n = max(len(f), len(g))
    return _zp_trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % m
                     for i in range(n)])


def _zp_divmod_monic(f, g, m):
    """Divide by a monic ``g`` modulo ``m``."""
    f = [c % m for c in f]
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], _zp_trim(f)
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg] % m
        if not c:
            continue
        q[k] = c
        for j in range(dg + 1):
            f[k + j] = (f[k + j] - c * g[j]) % m
    return _zp_trim(q), _zp_trim(f[:dg])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step from ``m`` to ``m*m``; ``h`` monic."""
    m2 = m * m
    e = _zp_sub(f, _zp_mul(g, h, m2), m2)
    q, r = _zp_divmod_monic(_zp_mul(s, e, m2), h, m2)
    g1 = _zp_add(_zp_add(g, _zp_mul(t, e, m2), m2), _zp_mul(q, g, m2), m2)
    h1 = _zp_add(h, r, m2)
    b = _zp_sub(_zp_add(_zp_mul(s, g1, m2), _zp_mul(t, h1, m2), m2), [1], m2)
    c, d = _zp_divmod_monic(_zp_mul(s, b, m2), h1, m2)
    s1 = _zp_sub(s, d, m2)
    t1 = _zp_sub(_zp_sub(t, _zp_mul(t, b, m2), m2), _zp_mul(c, g1, m2), m2)
    return g1, h1, s1, t1


def _multi_lift(f, factors, p, k):
    """Lift a mod-p factorization ``f = lc * prod factors`` to modulus ``p**k``."""
    if len(factors) == 1:
        M = p ** k
        inv = pow(f[-1] % M, -1, M)
        return [_zp_trim([c * inv % M for c in f])]
    Fp = PrimeField(p)
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    lc = f[-1] % p
    g = [lc]
    for u in left:
        g = _zp_mul(g, u, p)
    h = [1]
    for u in right:
        h = _zp_mul(h, u, p)
    d, s, t = upoly.xgcd(Fp, g, h)
    inv = pow(d[0], -1, p)
    s = [c * inv % p for c in s]
    t = [c * inv % p for c in t]
    m = p
    target = p ** k
    while m < target:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    g = [c % target for c in g]
    h = [c % target for c in h]
    return _multi_lift(g, left, p, k) + _multi_lift(h, right, p, k)


def _symmetric(f, m):
    half = m // 2
    return [c - m if c > half else c for c in f]


def _int_divides(f, g):
    """Exact division of integer polynomials; returns quotient or None."""
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return None
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c, r = divmod(f[k + dg], g[-1])
        if r:
            return None
        q[k] = c
        if c:
            for j in range(dg + 1):
                f[k + j] -= c * g[j]
    if any(f[:dg]):
        return None
    return q


def _factor_squarefree_int(F):
    n = len(F) - 1
    if n == 1:
        return [F]
    # choose a good prime: lc not divisible, squarefree reduction, few factors
    best = None
    p = 3
    tried = 0
    while tried < 6:
        p = int(gmpy2.next_prime(p))
        if F[-1] % p == 0:
            continue
        Fp = PrimeField(p)
        fp = upoly.trim(Fp, [c % p for c in F])
        if len(upoly.gcd(Fp, fp, upoly.derivative(Fp, fp))) != 1:
            continue
        tried += 1
        facs = factor_ff(Fp, fp)
        if best is None or len(facs) < len(best[1]):
            best = (p, [g for g, _ in facs])
        if len(facs) == 1:
            return [F]
    p, modfacs = best
    norm2 = math.isqrt(sum(c * c for c in F)) + 1
    bound = 2 * abs(F[-1]) * (2 ** n) * norm2
    k = 1
    while p ** k <= bound:
        k += 1
    M = p ** k
    lifted = _multi_lift(F, modfacs, p, k)
    result = []
    remaining = list(range(len(lifted)))
    size = 1
    G = list(F)
    while 2 * size <= len(remaining):
        found = False
        for combo in itertools.combinations(remaining, size):
            lcG = G[-1]
            cand = [lcG % M]
            for i in combo:
                cand = _zp_mul(cand, lifted[i], M)
            cand = _symmetric(cand, M)
            cont = _int_content(cand)
            cand = [c // cont for c in cand]
            q = _int_divides(G, cand)
            if q is not None:
                if cand[-1] < 0:
                    cand = [-c for c in cand]
                result.append(cand)
                G = q
                remaining = [i for i in remaining if i not in combo]
                found = True
                break
        if not found:
            size += 1
    if len(G) > 1:
        if G[-1] < 0:
            G = [-c for c in G]
        result.append(G)
    return result


def factor_qq(f):
    from .fields import QQ

    out = []
    for g, m in upoly.squarefree_decomposition(QQ, f):
        G = _to_primitive_int(g)
        for h in _factor_squarefree_int(G):
            out.append((upoly.monic(QQ, [QQ.from_int(c) for c in h]), m))
    return out


# ---------------------------------------------------------------------------
# number fields (Trager)


def _interpolate(K, xs, ys):
    """Newton interpolation through ``(xs[i], ys[i])``."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = K.div(K.sub(coef[i], coef[i - 1]), K.sub(xs[i], xs[i - j]))
    poly = []
    for i in range(n - 1, -1, -1):
        poly = upoly.add(K, upoly.mul(K, poly, [K.neg(xs[i]), K.one]), upoly.const(K, coef[i]))
    return poly


def norm_poly(L, g):
    """Norm from ``L = K[a]/m(a)`` down to ``K`` of ``g`` in ``L[z]``."""
    K = L.base
    m = list(L.modulus)
    d = (len(g) - 1) * L.n
    xs, ys = [], []
    for j in range(d + 1):
        z0 = K.from_int(j)
        # g(z0) as a polynomial in a over K
        acc = L.zero
        zp = L.one
        for c in g:
            acc = L.add(acc, L.mul(c, zp))
            zp = L.scalar(z0, zp)
        xs.append(z0)
        ys.append(upoly.resultant(K, m, upoly.trim(K, list(acc))))
    return _interpolate(K, xs, ys)


def factor_nf(L, f):
    out = []
    for g, m in upoly.squarefree_decomposition(L, f):
        for h in _trager(L, g):
            out.append((upoly.monic(L, h), m))
    return out


def _trager(L, f):
    K = L.base
    if len(f) == 2:
        return [f]
    a = L.gen
    for s in itertools.chain([0], itertools.count(1)):
        for shift in ([s] if s == 0 else [s, -s]):
            sa = L.scalar(K.from_int(shift), a)
            # g(z) = f(z - s*a)
            g = upoly.taylor_shift(L, f, L.neg(sa))
            N = norm_poly(L, g)
            if len(upoly.gcd(K, N, upoly.derivative(K, N))) != 1:
                continue
            _, nfacs = factor_poly(K, N)
            if len(nfacs) == 1:
                return [f]
            factors = []
            for h, _m in nfacs:
                hl = [L.from_base(c) for c in h]
                cand = upoly.gcd(L, g, hl)
                factors.append(upoly.taylor_shift(L, cand, sa))
            return factors
    raise RuntimeError("unreachable")
