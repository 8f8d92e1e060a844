"""Exact arithmetic: fields, polynomials, factorization, integer matrices."""

from .errors import DivisionError, FieldMismatch, ParseError, ZeroPolynomial
from .factor import factor_poly, roots
from .fields import GF, QQ, ExtensionField, Field, FieldElem, PrimeField, RationalField
from .intmat import IntMatrix, hermite_normal_form, smith_normal_form, solve_left
from .multipoly import MultiPoly, parse_poly

__all__ = [
    "DivisionError",
    "ExtensionField",
    "Field",
    "FieldElem",
    "FieldMismatch",
    "GF",
    "IntMatrix",
    "MultiPoly",
    "ParseError",
    "PrimeField",
    "QQ",
    "RationalField",
    "ZeroPolynomial",
    "factor_poly",
    "factor_univariate",
    "hermite_normal_form",
    "parse_poly",
    "poly_arith",
    "roots",
    "smith_normal_form",
    "solve_left",
]


def factor_univariate(f):
    """Factor a univariate :class:`MultiPoly` over its coefficient field.

    Returns a list of ``(monic irreducible MultiPoly, multiplicity)``; the
    product of the factors times the leading coefficient of ``f`` is ``f``.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    used = f.used_variables()
    if len(used) > 1:
        raise ValueError("factor_univariate needs a univariate polynomial")
    var = used[0] if used else f.vars[0]
    _, facs = factor_poly(f.field, f.to_univariate(var))
    return [(MultiPoly.from_univariate(f.field, f.vars, var, g), m) for g, m in facs]


def poly_arith(a, b, op):
    """Dispatch ``op`` in {add, mul, exact_div, gcd, content, primitive_part}.

    ``content`` and ``primitive_part`` only look at ``a``.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "exact_div":
        return a.exact_div(b)
    if op == "gcd":
        return a.gcd(b)
    if op == "content":
        return MultiPoly.constant(a.field, a.vars, a.content())
    if op == "primitive_part":
        return a.primitive_part()
    raise ValueError(f"unknown operation {op!r}")
