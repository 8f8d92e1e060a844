"""Cusps of X1(N), their Galois orbits, and divisors of the units f_k.

Cusps are found and labelled through the Tate curve.  The cusp
``C_{d,i,j}`` corresponds to the point ``u = zeta^j t^i`` on the Tate curve
with ``q = t^d``; reducing the q-expansions modulo a prime ``p = 1 mod N``
gives the coordinates ``(x(t), y(t))`` of the cusp as Laurent series over
``F_p`` in a uniformizer ``t``.  Each cusp is then matched with the exact
place returned by the Puiseux engine, and the valuations of the units are
read off there.  Every cusp is ``F_p``-rational for such ``p``, so the
size of a Galois orbit over ``Q`` is the number of places sharing a label.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass, field as dc_field
from math import gcd

from . import cache, modeq
from .errors import (
    BadPrime,
    LabelingAmbiguous,
    NotADiamond,
    NotAFunction,
    OrbitInconsistency,
    ParseError,
    UnsupportedLevel,
)
from .exactalg import IntMatrix, PrimeField, parse_poly, solve_left
from .exactalg.factor import roots
from .exactalg.fields import is_prime
from .exactalg.intmat import rank
from .puiseux import INF, Laurent, places_above, valuation

__all__ = [
    "CuspOrbit",
    "CuspPlace",
    "DivisorVec",
    "DivisorTable",
    "orbit_degree",
    "orbit_degrees",
    "cusp_count",
    "cusp_classes",
    "label_of",
    "cusp_places",
    "cusp_orbits",
    "assign_labels",
    "divisor_table",
    "unit_divisor",
    "diamond_permute",
    "express_in_lattice",
    "choose_prime",
    "format_rowvec",
    "parse_rowvec",
]


# ---------------------------------------------------------------------------
# combinatorics of labels


def _phi(n):
    result = n
    m = n
    k = 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def orbit_degree(N, n):
    """Degree of the orbit ``C_n``: ``ceil(phi(d)/2)`` for ``n`` in {0, N/2}, else ``phi(d)``."""
    d = gcd(n, N)
    if n % N == 0 or 2 * n == N:
        return (_phi(d) + 1) // 2
    return _phi(d)


def orbit_degrees(N):
    return [orbit_degree(N, n) for n in range(N // 2 + 1)]


def cusp_count(N):
    """Number of cusps of X1(N) for ``N > 4``: half of the sum of phi(d)phi(N/d)."""
    return sum(_phi(d) * _phi(N // d) for d in range(1, N + 1) if N % d == 0) // 2


def canonical_label(N, m):
    """Representative of ``+-m mod N`` in ``[0, N/2]``."""
    m %= N
    return min(m, N - m)


def label_of(N, d, i):
    """Label ``n = +-i*N/d mod N`` of the cusp ``C_{d,i,j}``."""
    return canonical_label(N, i * (N // d))


def cusp_classes(N):
    """Representatives ``(d, i, j)`` of the cusps of X1(N) modulo ``+-``.

    ``d | N`` is the size of the Neron polygon, ``0 <= i < d`` with
    ``gcd(i, d) = 1`` and ``j`` modulo ``N/d`` such that ``(i, zeta^j)``
    has order ``N``.
    """
    out = []
    seen = set()
    for d in range(1, N + 1):
        if N % d:
            continue
        w = N // d
        for i in range(d):
            if gcd(i, d) != 1:
                continue
            for j in range(w):
                # order of zeta_N^j times the order of i in Z/d must give N
                ordz = N // gcd(j, N)
                if _lcm(ordz, d // gcd(i, d)) != N:
                    continue
                key = (d, i, j)
                neg = (d, (-i) % d, (-j) % w)
                if neg in seen:
                    continue
                seen.add(key)
                out.append(key)
    return out


def _lcm(a, b):
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Tate curve expansions over F_p


def choose_prime(N, start=10007, skip=()):
    """Smallest prime ``p >= start`` with ``p = 1 mod N`` not in ``skip``."""
    p = start + ((1 - start) % N)
    while not is_prime(p) or p in skip:
        p += N
    return p


def _primitive_root_of_unity(F, N):
    p = F.p
    if (p - 1) % N:
        raise BadPrime(f"p = {p} is not 1 mod {N}")
    fac = _prime_factors(N)
    for g in range(2, p):
        z = pow(g, (p - 1) // N, p)
        if all(pow(z, N // r, p) != 1 for r in fac):
            return z
    raise BadPrime("no primitive root of unity found")


def _prime_factors(n):
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _tate_xy(F, c, k, d, prec):
    """Coordinates ``(X(u), Y(u))`` of ``u = c t^k`` on the Tate curve ``q = t^d``."""
    p = F.p
    k %= d
    X = [0] * prec
    Y = [0] * prec
    cinv = pow(c, p - 2, p)

    def add_F(coef, E):
        # z/(1-z)^2 = sum r z^r with z = coef t^E
        r = 1
        cp = coef
        while r * E < prec:
            X[r * E] = (X[r * E] + r * cp) % p
            r += 1
            cp = cp * coef % p

    def add_G(coef, E):
        # z^2/(1-z)^3 = sum r(r-1)/2 z^r
        r = 1
        cp = coef
        while r * E < prec:
            Y[r * E] = (Y[r * E] + (r * (r - 1) // 2) * cp) % p
            r += 1
            cp = cp * coef % p

    def add_Ginv(coef, E):
        # G(1/w) = -w/(1-w)^3 = -sum r(r+1)/2 w^r
        r = 1
        cp = coef
        while r * E < prec:
            Y[r * E] = (Y[r * E] - (r * (r + 1) // 2) * cp) % p
            r += 1
            cp = cp * coef % p

    n = 0
    while n * d + k < prec:
        E = n * d + k
        if E == 0:
            if c == 1:
                raise ValueError("u is the identity")
            one_minus = (1 - c) % p
            inv = pow(one_minus, p - 2, p)
            X[0] = (X[0] + c * inv * inv) % p
            Y[0] = (Y[0] + c * c * inv * inv * inv) % p
        else:
            add_F(c, E)
            add_G(c, E)
        n += 1
    m = 1
    while m * d - k < prec:
        E = m * d - k
        add_F(cinv, E)
        add_Ginv(cinv, E)
        m += 1
    # s1(q) = sum sigma(n) q^n
    for n in range(1, prec):
        if n * d >= prec:
            break
        sig = sum(t for t in range(1, n + 1) if n % t == 0)
        X[n * d] = (X[n * d] - 2 * sig) % p
        Y[n * d] = (Y[n * d] + sig) % p
    return (Laurent(F, 0, _arr(F, X), prec), Laurent(F, 0, _arr(F, Y), prec))


def _arr(F, vals):
    from .puiseux import _coeffs_for

    return _coeffs_for(F).from_list(vals)


def tate_bc(F, N, zeta, d, i, j, prec):
    """Tate normal form parameters ``(b(t), c(t))`` of the cusp ``C_{d,i,j}``."""
    p = F.p
    u1 = pow(zeta, j, p)
    X1, Y1 = _tate_xy(F, u1, i, d, prec)
    X2, _ = _tate_xy(F, pow(u1, 2, p), 2 * i, d, prec)
    X3, _ = _tate_xy(F, pow(u1, 3, p), 3 * i, d, prec)
    w = Y1 * 2 + X1
    w2 = (w * w).inverse()
    dx2 = X2 - X1
    dx3 = X3 - X1
    b = dx2 * dx2 * dx2 * w2
    c = dx3 * dx2 * dx2 * w2
    return b, c


def tate_xy(F, N, zeta, d, i, j, prec):
    """Model coordinates ``(x(t), y(t))`` of the cusp ``C_{d,i,j}``."""
    b, c = tate_bc(F, N, zeta, d, i, j, prec)
    r = b * c.inverse()
    s = c * c * (b - c).inverse()
    w = r * s - r * 2 + 1
    x = (s - r) * w.inverse()
    y = w * (s * s - s - r + 1).inverse()
    return x, y


def _center(series):
    v = series.valuation()
    if v is None:
        raise BadPrime("series precision exhausted while locating a cusp")
    if v < 0:
        return INF
    if v > 0:
        return 0
    return series.coefficient(0)


# ---------------------------------------------------------------------------
# places and matching


@dataclass(eq=False)
class CuspPlace:
    """A cusp ``C_{d,i,j}`` (one of a ``+-`` pair) with its Puiseux place."""

    N: int
    d: int
    i: int
    j: int
    place: object
    label: int


@dataclass
class CuspOrbit:
    """A Galois orbit ``C_n`` of cusps over ``Q``."""

    label: int
    degree: int
    places: list = dc_field(default_factory=list)
    gcd_class: int = 0


def _local_param(series, center):
    """``x - x0`` (or ``1/x`` above infinity) along the Tate parametrization."""
    if center is INF:
        return series.inverse()
    return series - center


def _e_th_root_series(s, e):
    """Power series ``r`` with ``r^e = s`` and ``r(0) = 1`` (``s(0) = 1``)."""
    F = s.K
    r = Laurent.constant(F, 1).truncate(s.prec)
    k = 1
    while k < s.prec:
        k = min(2 * k, s.prec)
        # treat the current iterate as exact so the step can gain precision
        rk = Laurent(F, r.val, r.coeffs).truncate(k)
        # Newton step for r^e - s
        num = rk ** e - s.truncate(k)
        den = (rk ** (e - 1)) * F.from_int(e)
        r = (rk - num * den.inverse()).truncate(k)
    return r


def _compose(series, s):
    """``series(s(t))`` for a Laurent series and ``s`` of valuation one."""
    acc = None
    vals = list(range(series.val, series.val + len(series.coeffs)))
    for k in reversed(vals):
        c = series.coefficient(k)
        if acc is None:
            acc = Laurent.constant(series.K, c)
            continue
        acc = acc * s + Laurent.constant(series.K, c)
    if acc is None:
        raise ValueError("empty series")
    acc = acc * (s ** series.val) if series.val else acc
    prec = series.prec if series.prec is not None else acc.prec
    return acc.truncate(prec) if prec is not None else acc


def _matches(P, x_t, y_t, prec):
    """Whether the Tate parametrization ``(x(t), y(t))`` runs through ``P``."""
    F = P.field
    xi = _local_param(x_t, P.center)
    if xi.valuation() != P.e:
        return False
    alpha = F.div(xi.leading_coefficient(), P.gamma)
    unit = xi.shift(-P.e) * F.inv(xi.leading_coefficient())
    root = _e_th_root_series(unit, P.e)
    poly = [F.neg(alpha)] + [F.zero] * (P.e - 1) + [F.one]
    local = P._local_y(prec)
    for lam, _ in roots(F, poly):
        s = (root * lam).shift(1)
        yl = _compose(local, s)
        if P.y_center is INF:
            target = y_t.inverse()
        else:
            target = y_t - P.y_center
        diff = yl - target
        if diff.valuation() is None:
            return True
    return False


def _tate_cusps(N, F, prec):
    zeta = _primitive_root_of_unity(F, N)
    out = []
    for d, i, j in cusp_classes(N):
        out.append((d, i, j, tate_xy(F, N, zeta, d, i, j, prec)))
    return out


def _reduced_model(N, p):
    f = modeq.f_poly(N).numerator
    F = PrimeField(p)
    for e, c in f.terms.items():
        if c.denominator % p == 0:
            raise BadPrime(f"p = {p} divides a denominator")
    fp = f.map_coefficients(F)
    if fp.degree("x") != f.degree("x") or fp.degree("y") != f.degree("y"):
        raise BadPrime(f"degree drop modulo {p}")
    return F, fp


_places_lock = threading.Lock()
_places_mem = {}


def cusp_places(N, p=None, prec=None):
    """All cusps of X1(N) for ``N >= 10`` as matched :class:`CuspPlace` records.

    Raises
    ------
    UnsupportedLevel
        For ``N < 10``.
    LabelingAmbiguous
        When a Tate cusp matches no place or several places.
    """
    N = int(N)
    if N < 10:
        raise UnsupportedLevel("the x,y model is used for N >= 10")
    key = (N, p)
    with _places_lock:
        if key in _places_mem:
            return _places_mem[key]
    tried = []
    last = None
    for _ in range(4):
        q = p if p is not None else choose_prime(N, skip=tried)
        try:
            result = _cusp_places_at(N, q, prec)
        except BadPrime as exc:
            if p is not None:
                raise
            tried.append(q)
            last = exc
            continue
        with _places_lock:
            _places_mem.setdefault(key, result)
        return result
    raise last


def _cusp_places_at(N, p, prec):
    F, fp = _reduced_model(N, p)
    if prec is None:
        prec = 4 * N + 48
    relprec = 24
    tate = _tate_cusps(N, F, prec)
    by_center = {}
    out = []
    for d, i, j, (x_t, y_t) in tate:
        x0 = _center(x_t)
        y0 = _center(y_t)
        key = (x0 if x0 is INF else int(x0))
        if key not in by_center:
            by_center[key] = places_above(fp, x0, field=F)
        cands = [P for P in by_center[key] if _same_center(P, y0)]
        hits = []
        for P in cands:
            if P.residue_degree != 1:
                continue
            if len(cands) == 1 and _local_param(x_t, P.center).valuation() == P.e:
                hits.append(P)
            elif _matches(P, x_t, y_t, relprec):
                hits.append(P)
        if len(hits) != 1:
            raise LabelingAmbiguous(
                f"N={N}: cusp C_({d},{i},{j}) matched {len(hits)} places at x={x0}")
        out.append(CuspPlace(N, d, i, j, hits[0], label_of(N, d, i)))
    used = {id(c.place) for c in out}
    if len(used) != len(out):
        raise LabelingAmbiguous(f"N={N}: two cusps matched the same place")
    if len(out) != cusp_count(N):
        raise LabelingAmbiguous(f"N={N}: found {len(out)} cusps, expected {cusp_count(N)}")
    return out


def _same_center(P, y0):
    if y0 is INF or P.y_center is INF:
        return y0 is P.y_center
    return P.field.eq(P.y_center, P.field.convert(y0))


def assign_labels(N, places):
    """Group matched cusp places into labelled orbits.

    Returns ``{label: CuspOrbit}``; raises :class:`LabelingAmbiguous` when
    the orbit sizes disagree with :func:`orbit_degree`.
    """
    orbits = {}
    for cp in places:
        orb = orbits.setdefault(cp.label, CuspOrbit(cp.label, 0, [], gcd(cp.label, N)))
        orb.places.append(cp)
        orb.degree += 1
    for n in range(N // 2 + 1):
        got = orbits.get(n)
        if got is None or got.degree != orbit_degree(N, n):
            raise LabelingAmbiguous(
                f"N={N}: orbit C_{n} has {0 if got is None else got.degree} places,"
                f" expected {orbit_degree(N, n)}")
    return dict(sorted(orbits.items()))


def cusp_orbits(N, p=None):
    """Labelled orbits ``C_0 .. C_{N/2}`` for ``N >= 10``."""
    return assign_labels(N, cusp_places(N, p))


# ---------------------------------------------------------------------------
# divisors


class DivisorVec:
    """A rational cuspidal divisor ``sum n_i C_i`` of level ``N``."""

    __slots__ = ("N", "coefficients")

    def __init__(self, N, coefficients):
        coefficients = tuple(int(c) for c in coefficients)
        if len(coefficients) != N // 2 + 1:
            raise ValueError(f"level {N} divisors have {N // 2 + 1} coefficients")
        self.N = int(N)
        self.coefficients = coefficients

    def degree(self):
        return sum(c * d for c, d in zip(self.coefficients, orbit_degrees(self.N)))

    def l1_degree(self):
        """Half the weighted 1-norm: the degree of the function with this divisor."""
        return sum(abs(c) * d for c, d in zip(self.coefficients, orbit_degrees(self.N))) // 2

    def __add__(self, other):
        return DivisorVec(self.N, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other):
        return DivisorVec(self.N, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __neg__(self):
        return DivisorVec(self.N, [-a for a in self.coefficients])

    def __mul__(self, k):
        return DivisorVec(self.N, [k * a for a in self.coefficients])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, DivisorVec):
            return self.N == other.N and self.coefficients == other.coefficients
        return tuple(other) == self.coefficients

    def __hash__(self):
        return hash((self.N, self.coefficients))

    def __iter__(self):
        return iter(self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __repr__(self):
        return f"DivisorVec({self.N}, {list(self.coefficients)})"


@dataclass
class DivisorTable:
    """Divisors of ``f_2 .. f_{N/2+1}`` in the basis ``C_0 .. C_{N/2}``."""

    N: int
    rows: list
    prime: int = None
    free: bool = True

    @property
    def units(self):
        return list(range(2, 2 + len(self.rows)))

    def row(self, k):
        return DivisorVec(self.N, self.rows[k - 2])

    def matrix(self):
        return IntMatrix(self.rows)

    def degrees(self):
        return orbit_degrees(self.N)

    def to_text(self):
        return format_rowvec(self.N, self.rows)


def format_rowvec(N, rows):
    lines = [f"# X1 N={N} orbits={N // 2 + 1} format=rowvec-v1"]
    lines += [" ".join(str(int(v)) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def parse_rowvec(text):
    """Inverse of :func:`format_rowvec`; returns ``(N, rows)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# X1 "):
        raise ParseError("missing rowvec header")
    fields = dict(tok.split("=", 1) for tok in lines[0][2:].split()[1:])
    if fields.get("format") != "rowvec-v1":
        raise ParseError("unknown rowvec format")
    N = int(fields["N"])
    m = int(fields["orbits"])
    rows = []
    for ln in lines[1:]:
        vals = [int(v) for v in ln.split()]
        if len(vals) != m:
            raise ParseError(f"row of length {len(vals)}, expected {m}")
        rows.append(vals)
    return N, rows


def _unit_valuations(P, k):
    """Valuation of ``f_k`` at a place of the x,y model."""
    if k <= 9:
        _, exps = modeq.atom_factorization(k)
        return sum(e * valuation(P, modeq.atom_poly(i)) for i, e in enumerate(exps) if e)
    return valuation(P, modeq.f_poly(k).numerator)


def divisor_table(N, p=None, use_cache=True):
    """Divisors of the units ``f_2 .. f_{N/2+1}`` on X1(N).

    Levels ``4 <= N <= 9`` come from built-in data; ``N >= 10`` are computed
    through :func:`cusp_places` and cached on disk.
    """
    N = int(N)
    if N < 4:
        raise UnsupportedLevel("divisor tables start at level 4")
    if N <= 9:
        return DivisorTable(N, [list(r) for r in SMALL_LEVEL_TABLES[N]])
    if use_cache and p is None:
        hit = cache.load("divtable", f"N{N}")
        if hit is not None:
            return DivisorTable(N, hit["rows"], hit["prime"], hit["free"])
    places = cusp_places(N, p)
    orbits = assign_labels(N, places)
    rows = []
    for k in range(2, N // 2 + 2):
        row = []
        for n, orb in orbits.items():
            vals = {_unit_valuations(cp.place, k) for cp in orb.places}
            if len(vals) != 1:
                raise OrbitInconsistency(
                    f"N={N}: f_{k} has valuations {sorted(vals)} on orbit C_{n}")
            row.append(vals.pop())
        rows.append(row)
    degs = orbit_degrees(N)
    for k, r in enumerate(rows, start=2):
        if sum(a * b for a, b in zip(r, degs)):
            raise OrbitInconsistency(f"N={N}: div(f_{k}) has nonzero degree")
    free = rank(rows) == len(rows)
    table = DivisorTable(N, rows, places[0].place.field.p, free)
    if use_cache and p is None:
        cache.store("divtable", f"N{N}", {"rows": rows, "prime": table.prime, "free": free})
    return table


def unit_divisor(N, k):
    """``div(f_k)`` on X1(N) for any ``k >= 2`` with ``k != N``.

    Rows of the divisor table are reused; larger ``k`` are evaluated at the
    cusp places directly and cached.
    """
    N, k = int(N), int(k)
    if k < 2:
        raise UnsupportedLevel("f_k is defined for k >= 2")
    table = divisor_table(N)
    if k <= N // 2 + 1:
        return DivisorVec(N, table.row(k))
    if N <= 9:
        raise UnsupportedLevel("levels below 10 only carry the built-in rows")
    if k == N:
        raise NotAFunction(f"f_{N} vanishes on X1({N})")
    hit = cache.load("unitdiv", f"N{N}k{k}")
    if hit is not None:
        return DivisorVec(N, hit)
    orbits = assign_labels(N, cusp_places(N))
    row = []
    for n, orb in orbits.items():
        vals = {_unit_valuations(cp.place, k) for cp in orb.places}
        if len(vals) != 1:
            raise OrbitInconsistency(f"N={N}: f_{k} has valuations {sorted(vals)} on orbit C_{n}")
        row.append(vals.pop())
    cache.store("unitdiv", f"N{N}k{k}", row)
    return DivisorVec(N, row)


def diamond_permute(N, i, D):
    """Apply the diamond operator ``<i>``: ``C_n -> C_{+-n*i mod N}``."""
    if gcd(i, N) != 1:
        raise NotADiamond(f"gcd({i}, {N}) != 1")
    coeffs = list(D)
    out = [0] * (N // 2 + 1)
    for n, c in enumerate(coeffs):
        out[canonical_label(N, n * i)] += c
    return DivisorVec(N, out)


def express_in_lattice(T, D):
    """Integer exponents ``n_k`` with ``sum n_k div(f_k) = D``.

    Returns a list indexed like ``T.units``.  Raises ``NotInLattice``.
    """
    return solve_left(T.matrix(), list(D))


# ---------------------------------------------------------------------------
# levels 4..9: genus zero parametrizations


def _small_param(N):
    """``(b(tau), c(tau), tau(b, c))`` for the genus zero levels."""
    T = ("t",)
    P = functools.partial(parse_poly, variables=T)
    from .exactalg.ratfunc import RationalFunction as RF

    if N == 4:
        return RF(P("t")), RF(P("0")), lambda b, c, r, s: b
    if N == 5:
        return RF(P("t")), RF(P("t")), lambda b, c, r, s: c
    if N == 6:
        return RF(P("t^2+t")), RF(P("t")), lambda b, c, r, s: c
    if N == 7:
        return RF(P("t^2*(t-1)")), RF(P("t*(t-1)")), lambda b, c, r, s: r
    if N == 8:
        return (RF(P("(2*t-1)*(t-1)")), RF(P("(2*t-1)*(t-1)"), P("t")),
                lambda b, c, r, s: r)
    if N == 9:
        return (RF(P("(t^2-t+1)*t*(t^2-t)")), RF(P("t*(t^2-t)")),
                lambda b, c, r, s: s)
    raise UnsupportedLevel("genus zero parametrizations cover 4 <= N <= 9")


def small_level_table(N, p=None):
    """Recompute the divisor table of a level ``4 <= N <= 9`` from scratch.

    The curve is parametrized by ``tau``; cusps are labelled by evaluating
    ``tau`` on the Tate curve modulo ``p``.
    """
    from .exactalg import MultiPoly
    from .exactalg.ratfunc import RationalFunction as RF

    bt, ct, tau_of = _small_param(N)
    p = p or choose_prime(N)
    F = PrimeField(p)
    zeta = _primitive_root_of_unity(F, N)
    prec = 4 * N + 32
    labels = {}
    for d, i, j in cusp_classes(N):
        b, c = tate_bc(F, N, zeta, d, i, j, prec)
        r = None if c.valuation() is None else b * c.inverse()
        s = None
        if c.valuation() is not None and (b - c).valuation() is not None:
            s = c * c * (b - c).inverse()
        tau = tau_of(b, c, r, s)
        labels.setdefault(_center(tau), []).append(label_of(N, d, i))
    # units as rational functions of tau
    T = ("t",)
    units = []
    for k in range(2, N // 2 + 2):
        g = modeq.F_symbol(k)
        units.append(g.substitute({"b": bt, "c": ct}, T))
    rows = [[None] * (N // 2 + 1) for _ in units]
    for center, labs in labels.items():
        if len(labs) != 1:
            raise LabelingAmbiguous(f"N={N}: several cusps share tau = {center}")
        n = labs[0]
        for k, g in enumerate(units):
            v = _tau_valuation(g, center, F)
            if rows[k][n] is not None and rows[k][n] != v:
                raise OrbitInconsistency(f"N={N}: f_{k + 2} differs on orbit C_{n}")
            rows[k][n] = v
    return rows


def _tau_valuation(g, center, F):
    def order(poly):
        coeffs = [F.convert(c) for c in poly.to_univariate("t")] if not poly.is_zero() else []
        if center is INF:
            return -(len(coeffs) - 1)
        v = 0
        while True:
            # synthetic division by (t - center)
            acc = F.zero
            quo = []
            for c in reversed(coeffs):
                acc = F.add(F.mul(acc, center), c)
                quo.append(acc)
            rem = quo.pop()
            if not F.is_zero(rem):
                return v
            coeffs = list(reversed(quo))
            v += 1

    return order(g.num) - order(g.den)


# Built-in tables for the genus zero levels (rows f_2 .. f_{N/2+1}).
SMALL_LEVEL_TABLES = {
    4: ((-1, 0, 1), (0, 1, -1)),
    5: ((-1, -1, 3), (0, 1, -1)),
    6: ((-1, -2, 1, 2), (0, 1, 1, -2), (0, 1, 0, -1)),
    7: ((-1, -3, 1, 5), (0, 1, 2, -3), (0, 1, 1, -2)),
    8: ((-1, -4, 0, 4, 2), (0, 1, 1, 0, -2), (0, 1, 1, -1, -1), (0, 2, 1, -1, -2)),
    9: ((-1, -5, -1, 1, 7), (0, 1, 2, 1, -5), (0, 1, 2, 0, -3), (0, 2, 3, 0, -5)),
}
