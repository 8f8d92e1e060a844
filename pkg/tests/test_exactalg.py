"""Exact arithmetic: fields, polynomials, factorization, integer matrices."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x1gon.exactalg import (
    GF,
    QQ,
    DivisionError,
    ExtensionField,
    FieldMismatch,
    IntMatrix,
    MultiPoly,
    ZeroPolynomial,
    factor_univariate,
    parse_poly,
    poly_arith,
    smith_normal_form,
    solve_left,
)
from x1gon.exactalg import upoly
from x1gon.errors import NotInLattice

X = ("x",)
XY = ("x", "y")
BC = ("b", "c")


def P(text, variables=XY, field=QQ):
    return parse_poly(text, variables, field)


# ---------------------------------------------------------------------------
# fields


@pytest.mark.parametrize("q", [2, 3, 7, 101])
def test_prime_field_inverses(q):
    F = GF(q)
    for a in range(1, q):
        assert F.mul(F.from_int(a), F.inv(F.from_int(a))) == F.one


@pytest.mark.parametrize("q,k", [(2, 3), (3, 2), (5, 2)])
def test_extension_field_multiplicative_group(q, k):
    F = GF(q ** k)
    g = F.gen
    # the multiplicative group has order q^k - 1, so g^(q^k - 1) = 1
    assert F.pow(g, q ** k - 1) == F.one


def test_extension_by_explicit_modulus():
    F = GF(2)
    L = ExtensionField(F, [F.one, F.one, F.one])  # z^2 + z + 1
    z = L.gen
    assert L.add(L.mul(z, z), L.add(z, L.one)) == L.zero


def test_rationals_lowest_terms():
    a = QQ.convert("6/4")
    assert (a.numerator, a.denominator) == (3, 2)
    b = QQ.div(QQ.from_int(3), QQ.from_int(-6))
    assert (b.numerator, b.denominator) == (-1, 2)


# ---------------------------------------------------------------------------
# polynomial arithmetic


def test_parse_printed_forms():
    f = P("x^2*y-x*y^2+y-1")
    assert f.terms == {(2, 1): 1, (1, 2): -1, (0, 1): 1, (0, 0): -1}
    assert str(P("b^2-b*c-c^3", BC)) in {"-c^3+b^2-b*c", "b^2-b*c-c^3"}


def test_zero_has_empty_terms():
    f = P("x-y") - P("x-y")
    assert f.is_zero() and f.terms == {}


def test_gcd_example():
    assert poly_arith(P("x^2-1", X), P("x-1", X), "gcd") == P("x-1", X)


def test_content_and_primitive_part():
    f = P("2*x+4", X)
    assert poly_arith(f, None, "content") == P("2", X)
    assert poly_arith(f, None, "primitive_part") == P("x+2", X)


def test_primitive_part_sign_normalized():
    assert P("-2*x^2+4*y").primitive_part() == P("x^2-2*y")


def test_exact_div_identity():
    f = P("b^2-b*c-c^3", BC)
    assert poly_arith(f, P("1", BC), "exact_div") == f


def test_inexact_division_raises():
    with pytest.raises(DivisionError):
        P("x^2+1").exact_div(P("x-1"))


def test_field_mismatch_raises():
    with pytest.raises(FieldMismatch):
        P("x+1") + P("x+1", field=GF(5))


def test_reduce_mod():
    assert P("3*x^2+5*y-7").reduce_mod(3) == P("2*y+2", field=GF(3))


small_poly = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-6, 6), max_size=5
).map(lambda d: MultiPoly(QQ, XY, {k: v for k, v in d.items() if v}))
nonzero_poly = small_poly.filter(lambda f: not f.is_zero())


@settings(max_examples=60, deadline=None)
@given(small_poly, nonzero_poly)
def test_product_then_exact_div(a, b):
    assert (a * b).exact_div(b) == a


@settings(max_examples=60, deadline=None)
@given(nonzero_poly, nonzero_poly)
def test_gcd_divides_both(a, b):
    g = a.gcd(b)
    assert g.divides(a) and g.divides(b)


@settings(max_examples=60, deadline=None)
@given(nonzero_poly)
def test_primitive_part_idempotent(f):
    pp = f.primitive_part()
    assert (pp.scale(f.content())).primitive_part() == pp


# ---------------------------------------------------------------------------
# factorization


def _factor_strings(f):
    return sorted((str(g), m) for g, m in factor_univariate(f))


def test_factor_difference_of_squares():
    assert _factor_strings(P("x^2-1", X)) == sorted([("x-1", 1), ("x+1", 1)])


def test_factor_irreducible_over_f2():
    f = P("x^2+x+1", X, GF(2))
    assert _factor_strings(f) == [(str(f), 1)]


def test_factor_cube_root_of_two():
    f = P("x^3-2", X)
    assert _factor_strings(f) == [(str(f), 1)]


def test_factor_zero_raises():
    with pytest.raises(ZeroPolynomial):
        factor_univariate(P("0", X))


def _expand(f):
    out = MultiPoly.constant(f.field, f.vars, f.leading_coefficient())
    for g, m in factor_univariate(f):
        out = out * g ** m
    return out


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_factorization_expands_back_over_q(coeffs):
    f = MultiPoly.from_univariate(QQ, X, "x", coeffs)
    assert _expand(f) == f


@pytest.mark.parametrize("q", [2, 3, 5])
def test_factorization_expands_back_over_fq(q):
    rng = random.Random(q)
    F = GF(q)
    for _ in range(30):
        coeffs = [rng.randrange(q) for _ in range(rng.randint(1, 8))] + [1]
        f = MultiPoly.from_univariate(F, X, "x", coeffs)
        assert _expand(f) == f
        for g, _ in factor_univariate(f):
            assert upoly.is_irreducible_ff(F, g.to_univariate("x"))


# ---------------------------------------------------------------------------
# integer matrices


def _is_unimodular(M):
    return abs(M.det()) == 1


@pytest.mark.parametrize(
    "A,diag",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
        ([[2, 0], [0, 3]], [1, 6]),
        ([[0, 0], [0, 0]], [0, 0]),
    ],
)
def test_smith_examples(A, diag):
    U, S, V = smith_normal_form(IntMatrix(A))
    assert S.diagonal() == diag
    assert U * IntMatrix(A) * V == S


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda m: st.integers(1, 4).flatmap(
            lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )
)
def test_smith_properties(rows):
    A = IntMatrix(rows)
    U, S, V = smith_normal_form(A)
    assert U * A * V == S
    assert S.is_diagonal()
    assert _is_unimodular(U) and _is_unimodular(V)
    d = S.diagonal()
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)


def test_solve_left_integral():
    A = IntMatrix([[1, 2, 3], [0, 2, 4]])
    assert solve_left(A, [2, 6, 10]) == [2, 1]


def test_solve_left_rational_only():
    with pytest.raises(NotInLattice) as info:
        solve_left(IntMatrix([[2, 0], [0, 2]]), [1, 0])
    assert info.value.rational_solution is not None


def test_solve_left_outside_span():
    with pytest.raises(NotInLattice) as info:
        solve_left(IntMatrix([[1, 0, 0]]), [0, 1, 0])
    assert info.value.rational_solution is None
