"""Dense univariate polynomials over a :class:`~x1gon.exactalg.fields.Field`.

Polynomials are Python lists of raw field elements, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).  Every function
takes the field as its first argument.
"""

from __future__ import annotations

from .errors import DivisionError, ZeroPolynomial


def trim(K, f):
    while f and K.is_zero(f[-1]):
        f.pop()
    return f


def deg(f):
    return len(f) - 1


def const(K, c):
    return [] if K.is_zero(c) else [c]


def add(K, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return trim(K, out)


def sub(K, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else K.zero
        b = g[i] if i < len(g) else K.zero
        out.append(K.sub(a, b))
    return trim(K, out)


def neg(K, f):
    return [K.neg(c) for c in f]


def scale(K, c, f):
    if K.is_zero(c):
        return []
    return trim(K, [K.mul(c, a) for a in f])


def shift_up(K, f, k):
    """Multiply by ``x^k``."""
    return [K.zero] * k + list(f) if f else []


def mul(K, f, g):
    if not f or not g:
        return []
    out = [K.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if K.is_zero(a):
            continue
        for j, b in enumerate(g):
            if K.is_zero(b):
                continue
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return trim(K, out)


def divmod_(K, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], f
    inv_lead = K.inv(g[-1])
    q = [K.zero] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg]
        if K.is_zero(c):
            continue
        c = K.mul(c, inv_lead)
        q[k] = c
        for j in range(dg + 1):
            if not K.is_zero(g[j]):
                f[k + j] = K.sub(f[k + j], K.mul(c, g[j]))
    return trim(K, q), trim(K, f[:dg])


def rem(K, f, g):
    return divmod_(K, f, g)[1]


def quo(K, f, g):
    return divmod_(K, f, g)[0]


def exact_quo(K, f, g):
    q, r = divmod_(K, f, g)
    if r:
        raise DivisionError("inexact univariate division")
    return q


def monic(K, f):
    if not f:
        return []
    if K.eq(f[-1], K.one):
        return list(f)
    inv = K.inv(f[-1])
    return [K.mul(inv, c) for c in f]


def gcd(K, f, g):
    """Monic greatest common divisor."""
    while g:
        f, g = g, rem(K, f, g)
    return monic(K, f)


def xgcd(K, f, g):
    """Return ``(d, s, t)`` with ``s*f + t*g = d`` (``d`` not normalized)."""
    r0, r1 = list(f), list(g)
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        q, r = divmod_(K, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(K, s0, mul(K, q, s1))
        t0, t1 = t1, sub(K, t0, mul(K, q, t1))
    return r0, s0, t0


def derivative(K, f):
    return trim(K, [K.mul(K.from_int(i), f[i]) for i in range(1, len(f))])


def evaluate(K, f, a):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, a), c)
    return acc


def compose(K, f, g):
    """Return ``f(g(x))``."""
    acc = []
    for c in reversed(f):
        acc = add(K, mul(K, acc, g), const(K, c))
    return acc


def taylor_shift(K, f, a):
    """Return ``f(x + a)``."""
    return compose(K, f, trim(K, [a, K.one]))


def pow_mod(K, f, n, m):
    result = [K.one]
    base = rem(K, f, m)
    while n:
        if n & 1:
            result = rem(K, mul(K, result, base), m)
        n >>= 1
        if n:
            base = rem(K, mul(K, base, base), m)
    return result


def power(K, f, n):
    result = [K.one]
    base = list(f)
    while n:
        if n & 1:
            result = mul(K, result, base)
        n >>= 1
        if n:
            base = mul(K, base, base)
    return result


def resultant(K, f, g):
    """Resultant by the Euclidean algorithm over a field."""
    if not f or not g:
        return K.zero
    res = K.one
    f, g = list(f), list(g)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return K.mul(res, K.pow(g[0], df))
        r = rem(K, f, g)
        if not r:
            return K.zero
        dr = len(r) - 1
        # Res(f, g) = (-1)^(df*dg) lc(g)^(df-dr) Res(g, r)
        factor = K.pow(g[-1], df - dr)
        if (df * dg) % 2:
            factor = K.neg(factor)
        res = K.mul(res, factor)
        f, g = g, r


def squarefree_decomposition(K, f):
    """Return ``[(g_i, i)]`` with ``f = lc * prod g_i^i`` and ``g_i`` squarefree.

    Works in any characteristic; in characteristic ``p`` the field must be
    finite (``p``-th roots are taken via the Frobenius inverse).
    """
    if not f:
        raise ZeroPolynomial("squarefree decomposition of zero")
    f = monic(K, f)
    p = K.characteristic
    if p == 0:
        return _yun(K, f)
    out = {}
    _sqf_charp(K, f, 1, out)
    return sorted(((g, m) for m, g in out.items()), key=lambda t: t[1])


def _yun(K, f):
    out = []
    fp = derivative(K, f)
    a = gcd(K, f, fp)
    b = quo(K, f, a)
    c = quo(K, fp, a)
    d = sub(K, c, derivative(K, b))
    i = 1
    while len(b) > 1:
        a = gcd(K, b, d)
        b = quo(K, b, a)
        c = quo(K, d, a)
        d = sub(K, c, derivative(K, b))
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _sqf_charp(K, f, mult, out):
    p = K.characteristic
    if len(f) <= 1:
        return
    fp = derivative(K, f)
    if not fp:
        # f = g(x^p); take the p-th root coefficientwise
        _sqf_charp(K, _pth_root(K, f), mult * p, out)
        return
    c = gcd(K, f, fp)
    w = quo(K, f, c)
    i = 1
    while len(w) > 1:
        y = gcd(K, w, c)
        z = quo(K, w, y)
        if len(z) > 1:
            key = i * mult
            out[key] = monic(K, mul(K, out[key], z)) if key in out else z
        i += 1
        w = y
        c = quo(K, c, y)
    if len(c) > 1:
        _sqf_charp(K, _pth_root(K, c), mult * p, out)


def _pth_root(K, f):
    p = K.characteristic
    q = K.order
    if q is None:
        raise ValueError("p-th roots need a finite field")
    e = q // p
    return [K.pow(f[i], e) for i in range(0, len(f), p)]


def is_squarefree(K, f):
    return len(gcd(K, f, derivative(K, f))) == 1 and bool(derivative(K, f))


def is_irreducible_ff(K, f):
    """Rabin's irreducibility test over a finite field."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(K, f)
    q = K.order
    x = [K.zero, K.one]
    primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))]
    for r in primes:
        h = _frobenius_power(K, x, n // r, f, q)
        if len(gcd(K, f, sub(K, h, x))) != 1:
            return False
    h = _frobenius_power(K, x, n, f, q)
    return not rem(K, sub(K, h, x), f)


def _frobenius_power(K, g, k, f, q):
    for _ in range(k):
        g = pow_mod(K, g, q, f)
    return g


def to_str(K, f, var="x"):
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if K.is_zero(c):
            continue
        cs = K.to_str(c)
        if i == 0:
            terms.append(cs)
            continue
        mon = var if i == 1 else f"{var}^{i}"
        if K.eq(c, K.one):
            terms.append(mon)
        elif K.eq(c, K.neg(K.one)):
            terms.append("-" + mon)
        else:
            terms.append(f"({cs})*{mon}" if ("+" in cs or "-" in cs[1:]) else f"{cs}*{mon}")
    s = "+".join(terms)
    return s.replace("+-", "-")
