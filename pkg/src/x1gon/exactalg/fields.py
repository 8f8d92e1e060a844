"""Coefficient fields.

A field object carries the arithmetic; elements are plain Python values
("raw" elements) so that the inner loops of the polynomial and series code
stay cheap.  :class:`FieldElem` wraps a raw value together with its field
for the public API.

Three concrete families are provided:

* :data:`QQ`, the rationals, with ``gmpy2.mpq`` raw elements;
* :class:`PrimeField`, ``F_p`` with ``int`` raw elements in ``[0, p)``;
* :class:`ExtensionField`, ``K[z]/(m(z))`` for a monic irreducible ``m``
  over any field ``K``.  Over a prime field this gives ``F_{p^k}``, over
  ``QQ`` a number field.  Extensions may be stacked.
"""

from __future__ import annotations

import random
from fractions import Fraction

import gmpy2

from .errors import FieldMismatch

__all__ = [
    "Field",
    "RationalField",
    "PrimeField",
    "ExtensionField",
    "FieldElem",
    "QQ",
    "GF",
    "is_prime",
]

_mpq = gmpy2.mpq
_mpq_type = type(_mpq(0))
_mpz_type = type(gmpy2.mpz(0))


def is_prime(n):
    """Deterministic primality test for the sizes used here."""
    return n >= 2 and bool(gmpy2.is_prime(n, 50))


class Field:
    """Abstract field.  Subclasses implement the raw-element arithmetic."""

    characteristic = 0
    order = None  # number of elements, None when infinite
    degree = 1  # degree over the prime field

    zero = None
    one = None

    # -- arithmetic on raw values -----------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero

    def eq(self, a, b):
        return a == b

    def pow(self, a, n):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def from_int(self, n):
        raise NotImplementedError

    def convert(self, value):
        """Coerce an int, Fraction, mpq or FieldElem into a raw element."""
        if isinstance(value, FieldElem):
            if value.field != self:
                return self.embed(value.field, value.value)
            return value.value
        if isinstance(value, (int, _mpz_type)):
            return self.from_int(int(value))
        if isinstance(value, (Fraction, _mpq_type)):
            return self.div(self.from_int(int(value.numerator)),
                            self.from_int(int(value.denominator)))
        raise TypeError(f"cannot convert {value!r} into {self}")

    def embed(self, other, a):
        """Map a raw element of a subfield ``other`` into this field."""
        if other == self:
            return a
        raise FieldMismatch(f"no embedding of {other} into {self}")

    def random_element(self, rng):
        raise NotImplementedError

    def to_str(self, a):
        return str(a)

    def __call__(self, value):
        return FieldElem(self, self.convert(value))

    @property
    def prime_field(self):
        return self

    @property
    def is_finite(self):
        return self.order is not None


class RationalField(Field):
    """The field of rational numbers."""

    characteristic = 0
    order = None
    degree = 1

    def __init__(self):
        self.zero = _mpq(0)
        self.one = _mpq(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in QQ")
        return _mpq(1) / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero in QQ")
        return _mpq(a) / b

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return _mpq(n)

    def convert(self, value):
        if isinstance(value, FieldElem):
            return super().convert(value)
        if isinstance(value, str):
            return _mpq(Fraction(value))
        return _mpq(value)

    def random_element(self, rng, bound=10):
        return _mpq(rng.randint(-bound, bound), rng.randint(1, bound))

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


class PrimeField(Field):
    """The prime field ``F_p``; raw elements are ints in ``[0, p)``."""

    degree = 1

    def __init__(self, p):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a, b):
        s = a - b
        return s + self.p if s < 0 else s

    def neg(self, a):
        return self.p - a if a else 0

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, -1, self.p)

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return int(n) % self.p

    def random_element(self, rng):
        return rng.randrange(self.p)

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class ExtensionField(Field):
    """Simple algebraic extension ``base[z]/(modulus)``.

    Parameters
    ----------
    base : Field
        Coefficient field.
    modulus : sequence
        Raw coefficients (low degree first) of a monic irreducible
        polynomial over ``base``.  Irreducibility is the caller's
        responsibility.
    name : str
        Printing name of the generator.
    """

    def __init__(self, base, modulus, name="a"):
        modulus = [base.convert(c) if not _is_raw(base, c) else c for c in modulus]
        while modulus and base.is_zero(modulus[-1]):
            modulus.pop()
        n = len(modulus) - 1
        if n < 1:
            raise ValueError("modulus must have positive degree")
        if not base.eq(modulus[-1], base.one):
            lead = base.inv(modulus[-1])
            modulus = [base.mul(c, lead) for c in modulus]
        self.base = base
        self.modulus = tuple(modulus)
        self.n = n
        self.name = name
        self.characteristic = base.characteristic
        self.order = None if base.order is None else base.order ** n
        self.degree = base.degree * n
        bz = base.zero
        self.zero = (bz,) * n
        self.one = (base.one,) + (bz,) * (n - 1)
        # reduction table: z^(n+i) expressed in the basis 1..z^(n-1)
        self._red = self._reduction_table()

    def _reduction_table(self):
        K = self.base
        n = self.n
        m = self.modulus
        row = [K.neg(c) for c in m[:n]]  # z^n
        table = [tuple(row)]
        for _ in range(n - 2):
            top = row[-1]
            new = [K.zero] + row[:-1]
            if not K.is_zero(top):
                new = [K.add(new[i], K.mul(top, table[0][i])) for i in range(n)]
            row = new
            table.append(tuple(row))
        return table

    @property
    def prime_field(self):
        return self.base.prime_field

    @property
    def gen(self):
        K = self.base
        if self.n == 1:
            return (K.neg(self.modulus[0]),)
        return (K.zero, K.one) + (K.zero,) * (self.n - 2)

    def add(self, a, b):
        K = self.base
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        K = self.base
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        K = self.base
        return tuple(K.neg(x) for x in a)

    def mul(self, a, b):
        K = self.base
        n = self.n
        prod = [K.zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j, y in enumerate(b):
                if K.is_zero(y):
                    continue
                prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        res = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if K.is_zero(c):
                continue
            row = self._red[k - n]
            for i in range(n):
                if not K.is_zero(row[i]):
                    res[i] = K.add(res[i], K.mul(c, row[i]))
        return tuple(res)

    def scalar(self, c, a):
        """Multiply by a raw element of the base field."""
        K = self.base
        return tuple(K.mul(c, x) for x in a)

    def inv(self, a):
        from . import upoly

        K = self.base
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in extension field")
        g, s, _ = upoly.xgcd(K, upoly.trim(K, list(a)), list(self.modulus))
        # g is a nonzero constant since the modulus is irreducible
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible: modulus is reducible")
        ginv = K.inv(g[0])
        s = [K.mul(ginv, c) for c in s]
        return self.from_poly(s)

    def from_poly(self, coeffs):
        """Reduce a base-field polynomial (low degree first) into the field."""
        K = self.base
        n = self.n
        coeffs = list(coeffs)
        if len(coeffs) <= n:
            return tuple(coeffs) + (K.zero,) * (n - len(coeffs))
        from . import upoly

        r = upoly.rem(K, coeffs, list(self.modulus))
        return tuple(r) + (K.zero,) * (n - len(r))

    def is_zero(self, a):
        K = self.base
        return all(K.is_zero(x) for x in a)

    def eq(self, a, b):
        K = self.base
        return all(K.eq(x, y) for x, y in zip(a, b))

    def from_int(self, n):
        K = self.base
        return (K.from_int(n),) + (K.zero,) * (self.n - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.n - 1)

    def embed(self, other, a):
        if other == self:
            return a
        if other == self.base:
            return self.from_base(a)
        return self.from_base(self.base.embed(other, a))

    def convert(self, value):
        if isinstance(value, tuple) and len(value) == self.n:
            return value
        if isinstance(value, FieldElem):
            return super().convert(value)
        return self.from_base(self.base.convert(value))

    def random_element(self, rng):
        return tuple(self.base.random_element(rng) for _ in range(self.n))

    def to_str(self, a):
        terms = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.to_str(c)
            if i == 0:
                terms.append(cs)
            else:
                mon = self.name if i == 1 else f"{self.name}^{i}"
                if self.base.eq(c, self.base.one):
                    terms.append(mon)
                else:
                    terms.append(f"({cs})*{mon}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"Extension({self.base!r}, {list(self.modulus)!r})"

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ext", self.base, self.modulus))


def _is_raw(base, c):
    if isinstance(base, PrimeField):
        return isinstance(c, int) and 0 <= c < base.p
    if isinstance(base, RationalField):
        return isinstance(c, _mpq_type)
    if isinstance(base, ExtensionField):
        return isinstance(c, tuple) and len(c) == base.n
    return False


_GF_CACHE = {}


def GF(q, name="a"):
    """Return the finite field with ``q`` elements.

    For a prime power ``q = p^k`` with ``k > 1`` the defining polynomial is
    the lexicographically first monic irreducible of degree ``k`` over
    ``F_p``, so the construction is deterministic.
    """
    q = int(q)
    if q in _GF_CACHE:
        return _GF_CACHE[q]
    if is_prime(q):
        F = PrimeField(q)
    else:
        p, k = _prime_power(q)
        Fp = PrimeField(p)
        F = ExtensionField(Fp, first_irreducible(Fp, k), name=name)
    _GF_CACHE[q] = F
    return F


def _prime_power(q):
    for p in range(2, int(q ** 0.5) + 2):
        if q % p == 0:
            k = 0
            r = q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return p, k
    raise ValueError(f"{q} is not a prime power")


def first_irreducible(K, k):
    """Lexicographically first monic irreducible polynomial of degree ``k``."""
    from . import upoly

    p = K.order
    for idx in range(p ** k):
        coeffs = []
        t = idx
        for _ in range(k):
            coeffs.append(K.from_int(t % p))
            t //= p
        f = coeffs + [K.one]
        if upoly.is_irreducible_ff(K, f):
            return f
    raise RuntimeError("no irreducible polynomial found")


class FieldElem:
    """A raw field value paired with its field, with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, n):
        return FieldElem(self.field, self.field.pow(self.value, int(n)))

    def __eq__(self, other):
        try:
            return self.field.eq(self.value, self._coerce(other))
        except (TypeError, FieldMismatch):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __repr__(self):
        return self.field.to_str(self.value)


def random_rng(seed=None):
    return random.Random(seed)
