"""Rational functions as reduced numerator/denominator pairs of MultiPoly."""

from __future__ import annotations

from .errors import FieldMismatch
from .multipoly import MultiPoly

__all__ = ["RationalFunction"]


class RationalFunction:
    """``num/den`` kept in lowest terms with a normalized denominator.

    Over ``QQ`` the denominator is primitive with positive graded-lex
    leading coefficient; over other fields it is monic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = num.one_like()
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.field != den.field or num.vars != den.vars:
            raise FieldMismatch("numerator and denominator differ in ring")
        if reduce:
            if num.is_zero():
                den = den.one_like()
            else:
                g = num.gcd(den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            c = den.content()
            inv = den.field.inv(c)
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p, p.one_like(), reduce=False)

    @property
    def field(self):
        return self.num.field

    @property
    def vars(self):
        return self.num.vars

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        return RationalFunction.from_poly(MultiPoly.constant(self.field, self.vars, other))

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, FieldMismatch):
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def evaluate(self, values):
        K = self.field
        d = self.den.evaluate(values)
        if K.is_zero(d):
            raise ZeroDivisionError("denominator vanishes at the point")
        return K.div(self.num.evaluate(values), d)

    def substitute(self, mapping, target_vars):
        """Compose with rational functions given for every variable."""
        K = self.field
        target_vars = tuple(target_vars)
        imgs = {}
        for v in self.vars:
            img = mapping[v]
            if isinstance(img, MultiPoly):
                img = RationalFunction.from_poly(img)
            imgs[v] = img
        return _compose(self.num, imgs, K, target_vars) / _compose(self.den, imgs, K, target_vars)

    def __str__(self):
        if self.den.is_constant() and self.field.eq(self.den.constant_value(), self.field.one):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _compose(p, imgs, K, target_vars):
    """Substitute rational functions into a polynomial with one common denominator."""
    if p.is_zero():
        return RationalFunction.from_poly(MultiPoly(K, target_vars))
    degs = p.degrees()
    nums = [imgs[v].num for v in p.vars]
    dens = [imgs[v].den for v in p.vars]
    one = MultiPoly.constant(K, target_vars, 1)
    pcache = [dict() for _ in nums]

    def pw(lst, i, k, tag):
        key = (tag, k)
        d = pcache[i]
        if key not in d:
            d[key] = lst[i] ** k
        return d[key]

    acc = MultiPoly(K, target_vars)
    for e, c in p.terms.items():
        t = one.scale(c)
        for i, k in enumerate(e):
            if k:
                t = t * pw(nums, i, k, "n")
            if degs[i] - k:
                t = t * pw(dens, i, degs[i] - k, "d")
        acc = acc + t
    den = one
    for i, dg in enumerate(degs):
        if dg > 0:
            den = den * pw(dens, i, dg, "d")
    return RationalFunction(acc, den)
