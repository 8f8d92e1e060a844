"""Sparse multivariate polynomials with exact coefficients.

A :class:`MultiPoly` is a map from exponent tuples to nonzero raw field
elements, together with the field and an ordered tuple of variable names.
The monomial order is graded lexicographic in the declared variable order;
it is used for printing and for sign normalization only.

Over ``QQ`` and prime fields the heavy operations (products of large
polynomials, exact division, gcd) are delegated to python-flint when it is
importable; every operation also has a pure-Python path.
"""

from __future__ import annotations

import re
from fractions import Fraction

import gmpy2

from . import upoly
from .errors import DivisionError, FieldMismatch, ParseError, ZeroPolynomial
from .fields import QQ, PrimeField, RationalField

try:  # optional accelerator
    import flint as _flint
except ImportError:  # pragma: no cover - exercised only without flint
    _flint = None

__all__ = ["MultiPoly", "parse_poly", "grlex_key"]

_FLINT_MIN_TERMS = 24


def grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Immutable sparse polynomial.

    Parameters
    ----------
    field : Field
    variables : sequence of str
    terms : dict, optional
        ``{exponent tuple: raw coefficient}``; zero coefficients are dropped.
    """

    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field, variables, terms=None, _clean=False):
        self.field = field
        self.vars = tuple(variables)
        if terms is None:
            terms = {}
        elif not _clean:
            K = field
            terms = {tuple(e): c for e, c in terms.items() if not K.is_zero(c)}
        self.terms = terms
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, field, variables, c):
        c = field.convert(c)
        n = len(variables)
        return cls(field, variables, {(0,) * n: c})

    @classmethod
    def gen(cls, field, variables, name):
        variables = tuple(variables)
        i = variables.index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(field, variables, {tuple(e): field.one}, _clean=True)

    @classmethod
    def from_string(cls, text, variables, field=QQ):
        return parse_poly(text, variables, field)

    @classmethod
    def from_univariate(cls, field, variables, name, coeffs):
        variables = tuple(variables)
        i = variables.index(name)
        n = len(variables)
        terms = {}
        for k, c in enumerate(coeffs):
            c = field.convert(c)
            if not field.is_zero(c):
                e = [0] * n
                e[i] = k
                terms[tuple(e)] = c
        return cls(field, variables, terms, _clean=True)

    def _new(self, terms):
        return MultiPoly(self.field, self.vars, terms, _clean=True)

    def zero_like(self):
        return self._new({})

    def one_like(self):
        return self._new({(0,) * len(self.vars): self.field.one})

    # -- basic predicates -------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return self.field.zero
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def __len__(self):
        return len(self.terms)

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            return self.constant(self.field, self.vars, other)
        if other.field != self.field or other.vars != self.vars:
            raise FieldMismatch(
                f"operands over {self.field}{self.vars} and {other.field}{other.vars}")
        return other

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        K = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = K.add(out[e], c)
                if K.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        K = self.field
        return self._new({e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(self.field.convert(other))
        other = self._check(other)
        if not self.terms or not other.terms:
            return self.zero_like()
        if (_flint_ok(self.field) and len(self.terms) * len(other.terms)
                > _FLINT_MIN_TERMS * _FLINT_MIN_TERMS):
            return _from_flint(self, _to_flint(self) * _to_flint(other))
        K = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = K.mul(c1, c2)
                if e in out:
                    out[e] = K.add(out[e], p)
                else:
                    out[e] = p
        return self._new({e: c for e, c in out.items() if not K.is_zero(c)})

    __rmul__ = __mul__

    def scale(self, c):
        K = self.field
        if K.is_zero(c):
            return self.zero_like()
        return self._new({e: K.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = self._check(other)
            except (TypeError, FieldMismatch):
                return NotImplemented
        if other.field != self.field or other.vars != self.vars:
            return False
        if len(self.terms) != len(other.terms):
            return False
        K = self.field
        for e, c in self.terms.items():
            d = other.terms.get(e)
            if d is None or not K.eq(c, d):
                return False
        return True

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset((e, str(c)) for e, c in self.terms.items())))
        return self._hash

    # -- division ---------------------------------------------------------
    def exact_div(self, other):
        """Exact quotient; raises :class:`DivisionError` if not divisible."""
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(self.field.inv(other.constant_value()))
        if self.is_zero():
            return self.zero_like()
        if _flint_ok(self.field):
            a, b = _to_flint(self), _to_flint(other)
            q, r = divmod(a, b)
            if r != 0:
                raise DivisionError("polynomial division is not exact")
            return _from_flint(self, q)
        q, r = self.divmod_grlex(other)
        if not r.is_zero():
            raise DivisionError("polynomial division is not exact")
        return q

    def divmod_grlex(self, other):
        """Multivariate division with respect to graded-lex leading terms."""
        K = self.field
        lead_e, lead_c = other.leading_term()
        inv = K.inv(lead_c)
        rem_terms = dict(self.terms)
        quo = {}
        remainder = {}
        while rem_terms:
            e = max(rem_terms, key=grlex_key)
            c = rem_terms[e]
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(a - b for a, b in zip(e, lead_e))
                qc = K.mul(c, inv)
                quo[qe] = qc
                for e2, c2 in other.terms.items():
                    t = tuple(a + b for a, b in zip(qe, e2))
                    v = K.sub(rem_terms.get(t, K.zero), K.mul(qc, c2))
                    if K.is_zero(v):
                        rem_terms.pop(t, None)
                    else:
                        rem_terms[t] = v
            else:
                remainder[e] = c
                del rem_terms[e]
        return self._new(quo), self._new(remainder)

    def divides(self, other):
        """True when ``self`` divides ``other``."""
        try:
            other.exact_div(self)
            return True
        except DivisionError:
            return False

    # -- gcd and normalization -------------------------------------------
    def leading_term(self):
        if not self.terms:
            raise ZeroPolynomial("leading term of zero")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def content(self):
        """Scalar content: ``self == content * primitive_part``.

        Over ``QQ`` the primitive part has coprime integer coefficients and
        a positive graded-lex leading coefficient; over other fields it is
        monic.
        """
        if not self.terms:
            return self.field.zero
        K = self.field
        if isinstance(K, RationalField):
            num = 0
            den = 1
            for c in self.terms.values():
                num = gmpy2.gcd(num, c.numerator)
                den = gmpy2.lcm(den, c.denominator)
            g = gmpy2.mpq(num, den)
            if self.leading_coefficient() < 0:
                g = -g
            return g
        return self.leading_coefficient()

    def primitive_part(self):
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.content()))

    def gcd(self, other):
        """Greatest common divisor, normalized like :meth:`primitive_part`."""
        other = self._check(other)
        if self.is_zero():
            return other.primitive_part()
        if other.is_zero():
            return self.primitive_part()
        if _flint_ok(self.field):
            g = _from_flint(self, _to_flint(self).gcd(_to_flint(other)))
            return g.primitive_part()
        return _generic_gcd(self, other).primitive_part()

    # -- structure --------------------------------------------------------
    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def degrees(self):
        return tuple(max((e[i] for e in self.terms), default=-1) for i in range(len(self.vars)))

    def used_variables(self):
        return [v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)]

    def coefficients_in(self, var):
        """Return ``{k: coefficient of var^k}`` as polynomials."""
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e2] = c
        return {k: self._new(t) for k, t in out.items()}

    def to_univariate(self, var=None):
        """Dense coefficient list in ``var`` (the polynomial must be univariate)."""
        used = self.used_variables()
        if var is None:
            if len(used) > 1:
                raise ValueError("polynomial is not univariate")
            var = used[0] if used else self.vars[0]
        if any(v != var for v in used):
            raise ValueError("polynomial is not univariate in " + var)
        i = self.vars.index(var)
        K = self.field
        n = self.degree(var)
        out = [K.zero] * (n + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    def derivative(self, var):
        i = self.vars.index(var)
        K = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = K.mul(K.from_int(e[i]), c)
                if not K.is_zero(v):
                    out[e[:i] + (e[i] - 1,) + e[i + 1:]] = v
        return self._new(out)

    def evaluate(self, values):
        """Evaluate at raw field values for every variable (list or dict)."""
        if isinstance(values, dict):
            values = [values[v] for v in self.vars]
        K = self.field
        values = [K.convert(v) for v in values]
        powers = [dict() for _ in values]
        acc = K.zero
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = K.pow(values[i], k)
                        powers[i][k] = pw
                    t = K.mul(t, pw)
            acc = K.add(acc, t)
        return acc

    def partial_evaluate(self, var, value):
        """Substitute a field value for one variable (variable set unchanged)."""
        i = self.vars.index(var)
        K = self.field
        value = K.convert(value)
        out = {}
        cache = {}
        for e, c in self.terms.items():
            k = e[i]
            if k not in cache:
                cache[k] = K.pow(value, k)
            v = K.mul(c, cache[k])
            e2 = e[:i] + (0,) + e[i + 1:]
            out[e2] = K.add(out[e2], v) if e2 in out else v
        return self._new({e: c for e, c in out.items() if not K.is_zero(c)})

    def substitute(self, mapping, target_vars=None):
        """Compose with polynomials: ``mapping[var]`` replaces ``var``.

        Variables absent from ``mapping`` must exist in ``target_vars``
        (default: the same variable tuple) and are kept.
        """
        target_vars = tuple(target_vars) if target_vars is not None else self.vars
        K = self.field
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MultiPoly):
                    img = MultiPoly.constant(K, target_vars, img)
                images.append(img)
            else:
                images.append(MultiPoly.gen(K, target_vars, v))
        cache = [dict() for _ in images]

        def power(i, k):
            d = cache[i]
            if k not in d:
                d[k] = images[i] ** k
            return d[k]

        acc = MultiPoly(K, target_vars)
        for e, c in self.terms.items():
            t = MultiPoly.constant(K, target_vars, K.one).scale(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            acc = acc + t
        return acc

    def map_coefficients(self, field, func=None):
        """Image under a ring map into ``field`` (default: ``field.convert``)."""
        func = func or field.convert
        out = {}
        for e, c in self.terms.items():
            v = func(c)
            if not field.is_zero(v):
                out[e] = v
        return MultiPoly(field, self.vars, out, _clean=True)

    def reduce_mod(self, p):
        """Reduce an integer-coefficient polynomial modulo ``p``."""
        F = PrimeField(p)

        def red(c):
            num, den = int(c.numerator), int(c.denominator)
            return num * pow(den, -1, p) % p

        return self.map_coefficients(F, red)

    def rename(self, variables):
        return MultiPoly(self.field, variables, self.terms, _clean=True)

    def reorder(self, variables):
        """Same polynomial written in a different variable tuple."""
        variables = tuple(variables)
        idx = [self.vars.index(v) if v in self.vars else None for v in variables]
        for i, v in enumerate(self.vars):
            if v not in variables and any(e[i] for e in self.terms):
                raise ValueError(f"variable {v} is in use")
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[j] if j is not None else 0 for j in idx)] = c
        return MultiPoly(self.field, variables, out, _clean=True)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- printing ---------------------------------------------------------
    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r}, vars={self.vars})"

    def to_string(self):
        if not self.terms:
            return "0"
        K = self.field
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k)
            cs = K.to_str(c)
            neg = False
            if isinstance(K, RationalField):
                neg = c < 0
                cs = K.to_str(-c) if neg else cs
            elif isinstance(K, PrimeField):
                pass
            else:
                if any(ch in cs for ch in "+-*^") and mon:
                    cs = f"({cs})"
            if not mon:
                term = cs
            elif cs == "1":
                term = mon
            else:
                term = f"{cs}*{mon}"
            parts.append(("-" if neg else "+") + term)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _flint_ok(K):
    return _flint is not None and isinstance(K, (RationalField, PrimeField))


def _flint_ctx(K, variables):
    if isinstance(K, RationalField):
        return _flint.fmpq_mpoly_ctx.get(tuple(variables), ordering="deglex")
    return _flint.nmod_mpoly_ctx.get(tuple(variables), modulus=K.p, ordering="deglex")


def _to_flint(f):
    ctx = _flint_ctx(f.field, f.vars)
    if isinstance(f.field, RationalField):
        d = {e: _flint.fmpq(int(c.numerator), int(c.denominator)) for e, c in f.terms.items()}
    else:
        d = dict(f.terms)
    return ctx.from_dict(d)


def _from_flint(like, g):
    d = g.to_dict()
    if isinstance(like.field, RationalField):
        terms = {tuple(map(int, e)): gmpy2.mpq(int(c.p), int(c.q)) for e, c in d.items()}
    else:
        terms = {tuple(map(int, e)): int(c) for e, c in d.items()}
    return MultiPoly(like.field, like.vars, terms, _clean=True)


# ---------------------------------------------------------------------------
# generic gcd by recursion on the last used variable


def _generic_gcd(a, b):
    used = sorted(set(a.used_variables()) | set(b.used_variables()), key=a.vars.index)
    K = a.field
    if not used:
        return a.one_like()
    if len(used) == 1:
        v = used[0]
        g = upoly.gcd(K, a.to_univariate(v), b.to_univariate(v))
        return MultiPoly.from_univariate(K, a.vars, v, g)
    v = used[-1]
    ca, pa = _split_content(a, v)
    cb, pb = _split_content(b, v)
    c = _generic_gcd(ca, cb)
    # primitive pseudo-remainder sequence in v
    r0, r1 = (pa, pb) if pa.degree(v) >= pb.degree(v) else (pb, pa)
    while not r1.is_zero():
        r = _prem(r0, r1, v)
        r0 = r1
        if r.is_zero():
            r1 = r
        else:
            r1 = _split_content(r, v)[1]
    g = _split_content(r0, v)[1]
    return c * g


def _split_content(f, v):
    coeffs = f.coefficients_in(v)
    c = None
    for h in coeffs.values():
        c = h if c is None else _generic_gcd(c, h)
        if c.is_constant():
            break
    c = c.primitive_part() if not c.is_constant() else c.one_like()
    return c, f.exact_div(c) if not c.is_constant() else f


def _prem(a, b, v):
    db = b.degree(v)
    lb = b.coefficients_in(v)[db]
    i = a.vars.index(v)
    r = a
    while not r.is_zero() and r.degree(v) >= db:
        dr = r.degree(v)
        lr = r.coefficients_in(v)[dr]
        e = [0] * len(a.vars)
        e[i] = dr - db
        mono = MultiPoly(a.field, a.vars, {tuple(e): a.field.one})
        r = r * lb - lr * mono * b
    return r


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("var", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_poly(text, variables, field=QQ):
    """Parse ``c*x^i*y^j`` style text into a :class:`MultiPoly`.

    Accepts ``+ - * ^ **``, parentheses, integer literals and division by a
    nonzero constant expression (e.g. ``3/2*x`` or ``(x+1)/2``).
    """
    variables = tuple(variables)
    toks = _tokenize(text)
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else (None, None)

    def take():
        t = peek()
        pos[0] += 1
        return t

    def expr():
        kind, val = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                take()
                t = term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term():
        acc = factor()
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                take()
                acc = acc * factor()
            elif kind == "op" and val == "/":
                take()
                d = factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division by a non-constant or zero")
                acc = acc.scale(field.inv(d.constant_value()))
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                acc = acc * factor()  # implicit multiplication
            else:
                return acc

    def factor():
        base = atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            take()
            k, e = take()
            if k != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return base ** e
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return MultiPoly.constant(field, variables, val)
        if kind == "var":
            if val not in variables:
                raise ParseError(f"unknown variable {val!r}")
            return MultiPoly.gen(field, variables, val)
        if kind == "op" and val == "(":
            e = expr()
            k, v = take()
            if v != ")":
                raise ParseError("missing closing parenthesis")
            return e
        if kind == "op" and val == "-":
            return -factor()
        raise ParseError(f"unexpected token {val!r}")

    if not toks:
        raise ParseError("empty polynomial text")
    result = expr()
    if pos[0] != len(toks):
        raise ParseError(f"trailing input at token {pos[0]}")
    return result


def as_fraction(c):
    """mpq -> Fraction (for serialization)."""
    return Fraction(int(c.numerator), int(c.denominator))
