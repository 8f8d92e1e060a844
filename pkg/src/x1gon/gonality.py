"""Gonality bounds for X1(N): upper bounds from units, lower bounds, planning.

Upper bounds come from the lattice search over modular units.  Lower
bounds come from the spectral bound on the index of Gamma1(N) and from
counting rational places over a finite field.  The planner turns the
subdivision argument for a lower bound over ``F_q`` into a list of
divisor families and type tables that an external Riemann-Roch engine
can check.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import modeq
from .cusps import DivisorVec, orbit_degree, unit_divisor
from .errors import (
    BadPrime,
    EmptyTarget,
    EnumerationBudgetExceeded,
    Inconsistency,
    MalformedDivisor,
    NotSquarefree,
    RoundingTie,
    Undecided,
    UnsupportedLevel,
    WildRamification,
)
from .exactalg import GF, upoly
from .exactalg.fields import ExtensionField, is_prime
from .lattice import UnitLattice, search_min_degree, units_up_to_degree
from .puiseux import INF, places_above

__all__ = [
    "ABRAMOVICH_LAMBDA",
    "KIM_SARNAK_LAMBDA",
    "MINIMAL_FUNCTIONS",
    "NAMED_UNITS",
    "BoundReport",
    "FqCensus",
    "LowerBoundPlan",
    "TypeSignature",
    "abramovich_bound",
    "bounds",
    "count_places_fq",
    "cusp_place_degrees",
    "degree_d_unit_census",
    "dominating_family",
    "improvement_factor",
    "index_gamma1",
    "level_class",
    "named_unit_divisor",
    "pigeonhole_bound",
    "plan_lower_bound",
    "sutherland_prime_bound",
    "table1",
    "type_of",
]

ABRAMOVICH_LAMBDA = Fraction(21, 100)
KIM_SARNAK_LAMBDA = Fraction(975, 4096)


# ---------------------------------------------------------------------------
# published gonality values and minimal functions


@lru_cache(maxsize=None)
def _table1_data():
    text = resources.files("x1gon").joinpath("data/table1.json").read_text(encoding="utf-8")
    raw = json.loads(text)
    return raw["exact_upto"], {int(k): v for k, v in raw["gonality"].items()}


def table1(N):
    """Published gonality (``N <= 40``) or upper bound (``N <= 250``).

    Returns ``(value, exact)``.
    """
    exact_upto, values = _table1_data()
    if N not in values:
        raise UnsupportedLevel(f"no published value for N={N}")
    return values[N], N <= exact_upto


# units as exponent maps {k: n_k} of prod f_k^{n_k}; x = f7/f8, y = f8/f9,
# 1-x = f5 f6/(f4 f8), 1-y = f6 f7/f9, f10 = x-y+1, f11 = x^2y-xy^2+y-1,
# f12 = x-y, f14 = x^2y-xy^2-xy+y^2-1
NAMED_UNITS = {
    "x": {7: 1, 8: -1},
    "y": {8: 1, 9: -1},
    "h1": {7: -2, 8: 1, 9: 1, 11: 1, 12: -1},
    "h2": {6: 1, 7: 2, 8: -1, 9: -1, 10: -1, 11: -1, 14: 1},
    "h3": {4: -1, 5: 1, 6: 1, 8: -1, 11: -1, 12: -1, 14: 1},
    "h4": {4: -1, 5: 1, 7: -2, 9: 1, 11: 1},
    "h5": {6: 1, 7: 1, 8: -1, 10: -1, 12: -1, 14: 1},
    "h6": {10: 1, 11: 1, 12: 1, 17: -1},
    "h7": {17: 1, 18: -1},
    "h8": {14: 1, 17: 2, 19: -2},
    "h9": {12: 1, 13: 1, 14: 1, 19: -1},
}

# the minimal-degree function per level in x, y and h notation
MINIMAL_FUNCTIONS = {
    11: "x", 12: "x", 13: "x", 14: "x", 15: "x", 16: "y", 17: "x", 18: "h1",
    19: "x", 20: "x", 21: "h1", 22: "x", 23: "x", 24: "h1", 25: "h2", 26: "y",
    27: "h3", 28: "h3", 29: "x", 30: "h5", 31: "h1", 32: "h4", 33: "h6", 34: "h1",
    35: "h7", 36: "h8", 37: "x", 38: "h2", 39: "h9", 40: "h5",
}


def named_unit_divisor(N, name):
    """Divisor on X1(N) of a named unit (``x``, ``y``, ``h1`` .. ``h9``)."""
    if name not in NAMED_UNITS:
        raise KeyError(f"unknown unit {name!r}")
    total = DivisorVec(N, [0] * (N // 2 + 1))
    for k, e in NAMED_UNITS[name].items():
        total = total + e * unit_divisor(N, k)
    return total


def named_unit_xy(name):
    """The named unit as a rational function in ``x, y``."""
    out = 1
    for k, e in sorted(NAMED_UNITS[name].items()):
        out = modeq.f_xy(k) ** e * out
    return out


# ---------------------------------------------------------------------------
# index and unconditional bounds


def _prime_divisors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def index_gamma1(N):
    """Index of the image of Gamma1(N) in PSL2(Z)."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return 1
    if N == 2:
        return 3
    idx = Fraction(N * N, 2)
    for p in _prime_divisors(N):
        idx *= 1 - Fraction(1, p * p)
    assert idx.denominator == 1
    return int(idx)


def abramovich_bound(N, lam=KIM_SARNAK_LAMBDA):
    """Lower bound ``ceil(lam/24 * index)`` on the complex gonality."""
    lam = Fraction(lam)
    if lam not in (ABRAMOVICH_LAMBDA, KIM_SARNAK_LAMBDA):
        raise ValueError("lambda must be 21/100 or 975/4096")
    v = lam / 24 * index_gamma1(N)
    return -((-v.numerator) // v.denominator)


def sutherland_prime_bound(N):
    """Nearest integer to ``11 N^2 / 840``."""
    if N <= 6:
        raise ValueError("defined for N > 6")
    v = Fraction(11 * N * N, 840)
    if v.denominator == 2:
        raise RoundingTie(f"11*{N}^2/840 is a half-integer")
    return math.floor(v + Fraction(1, 2))


def level_class(N):
    """One of ``prime``, ``2xprime``, ``big-square``, ``other``."""
    ps = _prime_divisors(N)
    if any(p > 3 and N % (p * p) == 0 for p in ps):
        return "big-square"
    if is_prime(N):
        return "prime"
    if N % 2 == 0 and is_prime(N // 2) and N // 2 > 2:
        return "2xprime"
    return "other"


def improvement_factor(N, degree):
    """``index_gamma1(N) / degree`` as an exact rational."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    return Fraction(index_gamma1(N), degree)


def pigeonhole_bound(q, n_places):
    """``ceil(n_places / (q + 1))``: a lower bound on the ``F_q`` gonality."""
    if n_places < 1:
        raise ValueError("n_places must be at least 1")
    return -((-n_places) // (q + 1))


# ---------------------------------------------------------------------------
# upper bounds


@dataclass
class BoundReport:
    """Upper and lower gonality bounds for one level."""

    N: int
    upper: int
    exponents: tuple
    lower_abramovich: int
    lower_pigeonhole: tuple = None
    status: str = "bounded"
    improvement: Fraction = None

    def to_dict(self):
        d = asdict(self)
        d["exponents"] = list(self.exponents)
        d["improvement"] = str(self.improvement) if self.improvement is not None else None
        d["lower_pigeonhole"] = list(self.lower_pigeonhole) if self.lower_pigeonhole else None
        return d


def bounds(N, budget=200, seed=0, q=None, upper=None):
    """Bound report: lattice search upper bound and the lower bounds.

    Parameters
    ----------
    upper : (degree, exponents), optional
        A search result computed elsewhere; skips the search.

    Raises
    ------
    Inconsistency
        When a lower bound exceeds the upper bound.
    """
    N = int(N)
    if upper is not None:
        upper, expo = upper
    elif N <= 3:
        upper, expo = 1, ()
    else:
        res = search_min_degree(UnitLattice.for_level(N), budget=budget, seed=seed)
        upper, expo = res.degree, res.exponents
    lower = abramovich_bound(N)
    pig = None
    if q is not None:
        census = count_places_fq(N, q, 1)
        pig = (q, pigeonhole_bound(q, census.count(1)))
    status = "bounded"
    try:
        value, exact = table1(N)
        if exact and value == upper:
            status = "exact"
    except UnsupportedLevel:
        pass
    if lower > upper or (pig is not None and pig[1] > upper):
        raise Inconsistency(f"N={N}: lower bound exceeds upper bound {upper}")
    return BoundReport(N, upper, tuple(expo or ()), lower, pig, status, improvement_factor(N, upper))


# ---------------------------------------------------------------------------
# census of units of a given degree


@dataclass
class UnitCensus:
    """Whether X1(N) carries a modular unit of degree exactly ``d``."""

    N: int
    d: int
    exists: bool
    witness: tuple = None
    certificate: dict = field(default_factory=dict)


def degree_d_unit_census(N, d, cap=10**10):
    """Decide by complete enumeration whether a unit of degree ``d`` exists.

    Every unit divisor of degree at most ``d`` lies in the ellipsoid
    ``sum w_i^2 v_i^2 <= 2 d^2``; all lattice vectors there are listed.

    Raises
    ------
    Undecided
        When the enumeration exceeds ``cap`` nodes.
    """
    L = UnitLattice.for_level(N)
    try:
        vecs = units_up_to_degree(L, d, cap=cap)
    except EnumerationBudgetExceeded as exc:
        raise Undecided(f"N={N}, d={d}: {exc}") from exc
    hits = [v for v in vecs if v.degree == d]
    cert = {
        "method": "fincke-pohst",
        "form": "sum w_i^2 v_i^2",
        "bound": 2 * d * d,
        "units_up_to_degree": len(vecs),
        "degrees_found": sorted({v.degree for v in vecs}),
    }
    if hits:
        best = min(hits, key=lambda v: (v.norm2, v.exponents))
        return UnitCensus(N, d, True, best.exponents, cert)
    return UnitCensus(N, d, False, None, cert)


# ---------------------------------------------------------------------------
# places over finite fields


@dataclass
class FqCensus:
    """Number of places of each degree of X1(N) over ``F_q``."""

    N: int
    q: int
    max_degree: int
    degree_counts: dict
    cusp_counts: dict = field(default_factory=dict)

    def count(self, k):
        if k > self.max_degree:
            raise ValueError(f"degree {k} is beyond the census cap {self.max_degree}")
        return self.degree_counts.get(k, 0)

    def available(self, k):
        """Whether places of degree ``k`` exist (assumed beyond the cap)."""
        return k > self.max_degree or self.count(k) > 0

    def to_dict(self):
        return {
            "N": self.N,
            "q": self.q,
            "max_degree": self.max_degree,
            "degree_counts": {str(k): self.degree_counts.get(k, 0) for k in range(1, self.max_degree + 1)},
            "cusp_counts": {str(k): v for k, v in sorted(self.cusp_counts.items())},
        }


def _order(q, g, pm):
    # order of q in (Z/g)^*, or in (Z/g)^* / {+-1} when pm is set
    if g <= 2:
        return 1
    k, a = 1, q % g
    while a != 1 and not (pm and a == g - 1):
        a = a * q % g
        k += 1
    return k


def cusp_place_degrees(N, q):
    """Degrees over ``F_q`` of the cusp places: ``{degree: count}``.

    With ``g = gcd(n, N)`` the orbit ``C_n`` has residue field ``Q(zeta_g)``,
    or its real subfield when ``n`` is 0 or ``N/2``.
    """
    out = Counter()
    for n in range(N // 2 + 1):
        g = math.gcd(n, N)
        k = _order(q, g, n == 0 or 2 * n == N)
        out[k] += orbit_degree(N, n) // k
    return dict(out)


def _irreducibles(K, e):
    q = K.order
    for idx in range(q ** e):
        c, t = [], idx
        for _ in range(e):
            c.append(K.from_int(t % q))
            t //= q
        f = c + [K.one]
        if e == 1 or upoly.is_irreducible_ff(K, f):
            yield f


def _specialize(f, L, x0, dy):
    h = [L.zero] * (dy + 1)
    pw = {}
    for (i, j), c in f.terms.items():
        if i not in pw:
            pw[i] = L.pow(x0, i)
        h[j] = L.add(h[j], L.mul(L.convert(c), pw[i]))
    return upoly.trim(L, h)


def _count_factor_degrees(L, h, kmax):
    """Number of monic irreducible factors of squarefree ``h`` of degree ``<= kmax``."""
    Q = L.order
    out = Counter()
    f = upoly.monic(L, h)
    Y = [L.zero, L.one]
    g = Y
    for i in range(1, kmax + 1):
        if len(f) - 1 < i:
            break
        g = upoly.pow_mod(L, g, Q, f)
        d = upoly.gcd(L, f, upoly.sub(L, g, Y))
        if len(d) > 1:
            out[i] += (len(d) - 1) // i
            f = upoly.quo(L, f, d)
            g = upoly.rem(L, g, f)
    return out


def _places_checked(f, x0, L, dy, q):
    try:
        P = places_above(f, x0, field=L, allow_wild=True)
    except NotSquarefree as exc:
        raise WildRamification(f"expansion above a wild point did not terminate: {exc}",
                               suggested_q=_next_prime_not_dividing(q, 1)) from exc
    if sum(p.e * p.residue_degree for p in P) != dy:
        raise WildRamification("places above a wild point fail the fundamental identity",
                               suggested_q=_next_prime_not_dividing(q, 1))
    return P


def _next_prime_not_dividing(q, N):
    p = q + 1
    while not is_prime(p) or N % p == 0:
        p += 1
    return p


def count_places_fq(N, q, max_degree):
    """Count places of degree ``1 .. max_degree`` of X1(N) over ``F_q``.

    Every closed point of the x-line of degree ``e <= max_degree`` is visited.
    Above a point where ``f_N(x0, Y)`` is squarefree of full degree the
    places are the irreducible factors; elsewhere (and at infinity) they
    come from the Puiseux engine over ``F_{q^e}``.

    Raises
    ------
    BadPrime
        When ``q`` divides ``N``.
    WildRamification
        When an expansion above a wild point cannot be completed.
    """
    N, q, max_degree = int(N), int(q), int(max_degree)
    if not is_prime(q):
        raise ValueError("q must be prime")
    if N % q == 0:
        raise BadPrime(f"{q} divides {N}")
    if N < 10:
        raise UnsupportedLevel("the census uses the x,y model (N >= 10)")
    F = GF(q)
    f0 = modeq.f_poly(N).numerator
    f = f0.reduce_mod(q)
    if f.degree("x") != f0.degree("x") or f.degree("y") != f0.degree("y"):
        raise BadPrime(f"the model of X1({N}) drops degree modulo {q}")
    dy = f.degree("y")
    counts = Counter()
    for e in range(1, max_degree + 1):
        kmax = max_degree // e
        for g in _irreducibles(F, e):
            if e == 1:
                L, x0 = F, F.neg(g[0])
            else:
                L = ExtensionField(F, g, name="w")
                x0 = L.gen
            h = _specialize(f, L, x0, dy)
            good = len(h) == dy + 1 and len(upoly.gcd(L, h, upoly.derivative(L, h))) == 1
            if good:
                for k, c in _count_factor_degrees(L, h, kmax).items():
                    counts[e * k] += c
            else:
                for P in _places_checked(f, x0, L, dy, q):
                    if e * P.residue_degree <= max_degree:
                        counts[e * P.residue_degree] += 1
    for P in _places_checked(f, INF, F, dy, q):
        if P.residue_degree <= max_degree:
            counts[P.residue_degree] += 1
    cusps = {k: v for k, v in cusp_place_degrees(N, q).items() if k <= max_degree}
    for k, v in cusps.items():
        if counts[k] < v:
            raise Inconsistency(f"only {counts[k]} places of degree {k} but {v} cusps")
    return FqCensus(N, q, max_degree, dict(counts), cusps)


# ---------------------------------------------------------------------------
# types of divisors


class TypeSignature(tuple):
    """Ordered ``((place degree, multiplicity), ...)``, lexicographically non-increasing."""

    def __new__(cls, pairs):
        pairs = [tuple(int(a) for a in p) for p in pairs]
        for dg, m in pairs:
            if m == 0:
                raise MalformedDivisor("zero coefficient in a divisor")
            if dg < 1:
                raise MalformedDivisor("place degrees are positive")
        return super().__new__(cls, sorted(pairs, reverse=True))

    @property
    def degree(self):
        return sum(d * m for d, m in self)

    def rational_part(self):
        return tuple(m for d, m in self if d == 1)

    def nonrational_part(self):
        return tuple((d, m) for d, m in self if d > 1)

    def short(self):
        """Partition notation when every place is rational, else the full form."""
        if all(d == 1 for d, _ in self):
            return "(" + ", ".join(str(m) for _, m in self) + ")"
        return "(" + ", ".join(f"({d},{m})" for d, m in self) + ")"


def type_of(D):
    """Type of ``D`` given as ``[(place_degree, coefficient), ...]`` with distinct places."""
    return TypeSignature(D)


def _partitions(n, max_part=None, max_len=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k, None if max_len is None else max_len - 1):
            yield (k,) + rest


def _effective_types(budget, census, min_nonrational=0, rational_limit=None):
    """All types of effective divisors of the given degree.

    A type lists places as ``(degree, multiplicity)``; several distinct
    places of one degree may occur up to the census count.
    """
    degs = [k for k in range(budget, 0, -1) if census.available(k)]
    out = set()

    def avail(k):
        return math.inf if k > census.max_degree else census.count(k)

    def rec(i, remaining, acc):
        if remaining == 0:
            t = TypeSignature(acc)
            nonrat = sum(1 for d, _ in t if d > 1)
            if nonrat >= min_nonrational:
                out.add(t)
            return
        if i == len(degs):
            return
        k = degs[i]
        # choose a multiset of multiplicities for places of degree k
        for used in range(remaining // k, -1, -1):
            if used == 0:
                rec(i + 1, remaining, acc)
                continue
            for parts in _partitions(used):
                if len(parts) > avail(k):
                    continue
                if k == 1 and rational_limit is not None and len(parts) > rational_limit:
                    continue
                rec(i + 1, remaining - k * used, acc + [(k, m) for m in parts])

    rec(0, budget, [])
    return sorted(out, reverse=True)


@dataclass
class DivisorPattern:
    """A divisor family ``k * cuspsum + D`` with ``D`` of a given type."""

    type: TypeSignature
    pattern: str


def _describe(t, k=1):
    head = "cuspsum" if k == 1 else f"{k}*cuspsum"
    if not t:
        return head
    terms = []
    for i, (d, m) in enumerate(t):
        terms.append(f"{m}*P{i + 1}[deg {d}]" if m != 1 else f"P{i + 1}[deg {d}]")
    return head + " + " + " + ".join(terms)


def dominating_family(census, d, n=None):
    """Divisor families ``cuspsum + D`` with ``D >= 0`` of degree ``d - n``.

    ``n`` defaults to the pigeonhole bound from the rational places.

    Raises
    ------
    EmptyTarget
        When ``d < n``.
    """
    r = census.count(1)
    if n is None:
        n = pigeonhole_bound(census.q, r)
    if d < n:
        raise EmptyTarget(f"target {d} is below the bound {n}")
    budget = d - n
    if budget == 0:
        return [DivisorPattern(TypeSignature(()), "cuspsum")]
    return [DivisorPattern(t, _describe(t)) for t in _effective_types(budget, census)]


# ---------------------------------------------------------------------------
# lower-bound planner


@dataclass
class Template:
    """A Riemann-Roch computation covering rational-part types.

    ``caps`` bound the rational part of ``D`` at named points (which may
    coincide when ``merge`` is set); other rational points allow
    ``default_cap``.  ``count`` is the number of divisors to examine after
    using the diamond action, ``degree`` their degree; the planner tries
    cheaper templates first.
    """

    calc: int
    divisor: str
    caps: tuple
    default_cap: int
    merge: bool
    count: int
    degree: int
    note: str = ""

    def covers(self, partition, r):
        options = [list(self.caps) + [self.default_cap] * (r - len(self.caps))]
        if self.merge and len(self.caps) >= 2:
            options.append([sum(self.caps)] + [self.default_cap] * (r - 1))
        parts = sorted(partition, reverse=True)
        for caps in options:
            caps = sorted(caps, reverse=True)
            if len(parts) <= len(caps) and all(p <= c for p, c in zip(parts, caps)):
                return True
        return False


def _published_case2_templates(r):
    """The four computations used for N=37, q=2, target 17 (diamonds fix ``p``)."""
    return [
        Template(1, "cuspsum + 6p + 2P", (6, 2), 0, True, r, r + 8),
        Template(2, "2*cuspsum + 4p + 2P", (5, 3), 1, True, r, 2 * r + 6),
        Template(3, "cuspsum + 3p + 2(Q + R)", (3, 2, 2), 0, False, (r - 1) * (r - 2) // 2, r + 7),
        Template(4, "3*cuspsum - 4p", (), 2, False, 1, 3 * r - 4,
                 "one of f, f+1 has a rational zero when deg f < #rational places"),
    ]


def _ts(*pairs):
    return TypeSignature(pairs)


def _rat(*ms):
    return [(1, m) for m in ms]


# calculation groups for the case with a non-rational pole at N=37, q=2,
# target 17; the computations themselves are not printed, only the grouping
_PUBLISHED_CASE3_GROUPS = {
    1: [_ts((12, 1)), _ts((11, 1), (1, 1))],
    2: [_ts((10, 1), (1, 2)), _ts((10, 1), (1, 1), (1, 1))],
    3: [_ts((9, 1), (1, 3))],
    4: [_ts((9, 1), (1, 2), (1, 1)), _ts((9, 1), *_rat(1, 1, 1))],
    5: [_ts((7, 1), (1, 5)), _ts((7, 1), *_rat(4, 1)), _ts((7, 1), *_rat(3, 2))],
    6: [_ts((7, 1), *_rat(3, 1, 1)), _ts((7, 1), *_rat(2, 2, 1))],
    7: [_ts((7, 1), *_rat(2, 1, 1, 1)), _ts((7, 1), *_rat(1, 1, 1, 1, 1))],
    8: [_ts((6, 2)), _ts((6, 1), (6, 1))],
    9: [_ts((6, 1), *_rat(6)), _ts((6, 1), *_rat(5, 1)), _ts((6, 1), *_rat(4, 2)),
        _ts((6, 1), *_rat(3, 3))],
    10: [_ts((6, 1), *_rat(4, 1, 1)), _ts((6, 1), *_rat(3, 2, 1)), _ts((6, 1), *_rat(2, 2, 2))],
    11: [_ts((6, 1), *_rat(2, 2, 1, 1)), _ts((6, 1), *_rat(3, 1, 1, 1)),
         _ts((6, 1), *_rat(2, 1, 1, 1, 1)), _ts((6, 1), *_rat(1, 1, 1, 1, 1, 1))],
}


@dataclass
class CalcGroup:
    calc: int
    divisor: str
    types: list

    def to_dict(self):
        return {"calc": self.calc, "divisor": self.divisor,
                "types": [[list(p) for p in t] for t in self.types],
                "short": [t.short() for t in self.types]}


@dataclass
class PlanCase:
    index: int
    condition: str
    status: str
    family: str = ""
    groups: list = field(default_factory=list)

    def types(self):
        return [t for g in self.groups for t in g.types]

    def to_dict(self):
        return {"index": self.index, "condition": self.condition, "status": self.status,
                "family": self.family, "groups": [g.to_dict() for g in self.groups]}


@dataclass
class LowerBoundPlan:
    """Proof obligations for ``gon_{F_q}(X1(N)) > d``."""

    N: int
    q: int
    d: int
    rational_places: int
    pigeonhole: int
    thresholds: dict
    cases: list
    notes: list = field(default_factory=list)
    census: dict = field(default_factory=dict)

    @property
    def obligations(self):
        return sum(len(g.types) for c in self.cases for g in c.groups) + sum(
            1 for c in self.cases if c.status == "external")

    def case(self, index):
        return next(c for c in self.cases if c.index == index)

    def groups(self, index):
        """``{calc: frozenset of TypeSignature}`` for one case."""
        return {g.calc: frozenset(g.types) for g in self.case(index).groups}

    def table_rows(self, index):
        """Rows ``(calc, types)``: runs of one calculation in decreasing type order."""
        owner = {t: g.calc for g in self.case(index).groups for t in g.types}
        rows = []
        for t in sorted(owner, reverse=True):
            if rows and rows[-1][0] == owner[t]:
                rows[-1][1].append(t)
            else:
                rows.append((owner[t], [t]))
        return [(c, tuple(ts)) for c, ts in rows]

    def to_dict(self):
        return {
            "schema": "x1gon-plan-v1",
            "N": self.N, "q": self.q, "target": self.d,
            "rational_places": self.rational_places,
            "pigeonhole": self.pigeonhole,
            "thresholds": self.thresholds,
            "notes": list(self.notes),
            "census": self.census,
            "cases": [c.to_dict() for c in self.cases],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _thresholds(r, q, n):
    # case 3 asks for more than n - 1 rational poles; case 2 takes the largest
    # pole count t2 whose complement still forces n - 1 rational cusps in one
    # of the other q fibres
    t3 = max(n - 1, 1)
    t2 = r
    while t2 > 1 and -(-(r - t2 + 1) // q) < t3:
        t2 -= 1
    return t2, t3


def _group_generic(types, key):
    groups = {}
    for t in types:
        groups.setdefault(key(t), []).append(t)
    return [sorted(v, reverse=True) for _, v in sorted(groups.items(), reverse=True)]


def _s_bin(t):
    s = len(t.rational_part())
    return 0 if s <= 2 else (1 if s == 3 else 2)


def _diamond_transitive(N, census):
    # the rational places are exactly the cusps C_n with gcd(n, N) = 1,
    # which the diamond operators permute transitively
    units = sum(1 for n in range(1, N // 2 + 1) if math.gcd(n, N) == 1)
    cusps1 = cusp_place_degrees(N, census.q).get(1, 0)
    return census.count(1) == units == cusps1


def plan_lower_bound(N, q, d, census=None, census_degree=8):
    """Subdivide ``gon_{F_q}(X1(N)) > d`` into checkable obligations.

    Case 1 (every zero and pole rational) is an external class-group
    obligation.  Case 2 (all poles rational, at least ``t2`` of them) and
    case 3 (at least ``t3`` rational poles and a non-rational one) are
    expanded into dominating divisor families with type tables.
    """
    if math.gcd(N, q) != 1:
        raise BadPrime(f"gcd({q}, {N}) != 1")
    if census is None:
        census = count_places_fq(N, q, census_degree)
    r = census.count(1)
    n = pigeonhole_bound(q, r)
    notes = []
    if d < n:
        notes.append(f"pigeonhole bound {n} already exceeds the target {d}")
        return LowerBoundPlan(N, q, d, r, n, {}, [], notes, census.to_dict())
    t2, t3 = _thresholds(r, q, n)
    transitive = _diamond_transitive(N, census)
    if transitive:
        notes.append("diamond operators act transitively on the rational places; "
                     "one rational place p may be fixed")
    notes.append(f"if all {q + 1} fibres over P1(F_{q}) meet a non-rational place, one holds "
                 f">= {n} > {t3} rational places")
    notes.append(f"a pole divisor on <= {t2 - 1} rational places leaves >= {r - t2 + 1} rational "
                 f"places for the other {q} fibres, so one of them holds >= {t3}")
    missing = [k for k in range(2, census.max_degree + 1) if census.count(k) == 0]
    if missing:
        notes.append("no places of degree " + ", ".join(map(str, missing)))
    cases = [PlanCase(1, "mdeg(f) = 1", "external",
                      "principal divisors supported on the rational places with "
                      f"half 1-norm <= {d} (rational-place kernel lattice)")]

    # case 2
    b2 = d - t2
    cond2 = f"all poles rational, >= {t2} distinct poles"
    if b2 < 0:
        cases.append(PlanCase(2, cond2, "vacuous"))
    else:
        types2 = [TypeSignature([(1, m) for m in p]) for p in _partitions(b2) if len(p) <= r]
        templates = _published_case2_templates(r) if (N, q, d) == (37, 2, 17) and transitive else []
        groups = []
        if templates:
            order = sorted(templates, key=lambda t: (t.count, t.degree))
            assign = {}
            for t in types2:
                tpl = next((tp for tp in order if tp.covers(t.rational_part(), r)), None)
                if tpl is None:
                    raise Inconsistency(f"type {t.short()} is not covered")
                assign.setdefault(tpl.calc, []).append(t)
            for tp in sorted(templates, key=lambda t: t.calc):
                if tp.calc in assign:
                    groups.append(CalcGroup(tp.calc, tp.divisor, sorted(assign[tp.calc], reverse=True)))
        else:
            for i, g in enumerate(_group_generic(types2, _s_bin), start=1):
                groups.append(CalcGroup(i, "cuspsum + D, D of the listed types", g))
        cases.append(PlanCase(2, cond2, "dominated", f"cuspsum + D, D >= 0 rational, deg D = {b2}",
                              groups))

    # case 3
    b3 = d - t3
    cond3 = f">= {t3} rational poles and a non-rational pole"
    types3 = _effective_types(b3, census, min_nonrational=1) if b3 > 0 else []
    if not types3:
        cases.append(PlanCase(3, cond3, "vacuous"))
    else:
        if (N, q, d) == (37, 2, 17):
            groups = [CalcGroup(c, "cuspsum + D, D of the listed types", sorted(ts, reverse=True))
                      for c, ts in _PUBLISHED_CASE3_GROUPS.items()]
        else:
            groups = [CalcGroup(i, "cuspsum + D, D of the listed types", g) for i, g in
                      enumerate(_group_generic(types3, lambda t: (t.nonrational_part(), -_s_bin(t))),
                                start=1)]
        covered = [t for g in groups for t in g.types]
        if sorted(covered) != sorted(types3):
            raise Inconsistency("case 3 groups do not partition the derived types")
        cases.append(PlanCase(3, cond3, "dominated",
                              f"cuspsum + D, D >= 0, deg D = {b3}, >= 1 non-rational place", groups))
    return LowerBoundPlan(N, q, d, r, n, {"t2": t2, "t3": t3}, cases, notes, census.to_dict())
