"""Rational Puiseux expansions, places and valuations."""


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x1gon import modeq
from x1gon.errors import NotAFunction, NotSquarefree, WildRamification
from x1gon.exactalg import GF, QQ, parse_poly
from x1gon.exactalg.ratfunc import RationalFunction
from x1gon.puiseux import INF, _poly_valuation, dump_places, places_above, valuation

XY = ("x", "y")


def xy(text, field=QQ):
    return parse_poly(text, XY, field)


def census(places):
    return sorted((P.e, P.residue_degree) for P in places)


def test_node_splits():
    places = places_above(xy("y^2-x^2*(x+1)"), QQ.zero)
    assert census(places) == [(1, 1), (1, 1)]


def test_cusp_is_ramified():
    places = places_above(xy("y^2-x^3"), QQ.zero)
    assert census(places) == [(2, 1)]
    assert valuation(places[0], xy("x")) == 2
    assert valuation(places[0], xy("y")) == 3


def test_constant_has_valuation_zero():
    P = places_above(xy("y^2-x^3"), QQ.zero)[0]
    assert valuation(P, xy("5")) == 0


def test_curve_equation_is_not_a_function():
    f = xy("y^2-x^3")
    P = places_above(f, QQ.zero)[0]
    with pytest.raises(NotAFunction):
        valuation(P, f)


def test_non_squarefree_rejected():
    with pytest.raises(NotSquarefree):
        places_above(xy("(y-x)^2"), QQ.from_int(1))


def test_f11_above_infinity():
    f = modeq.f_poly(11).numerator
    places = places_above(f, INF)
    assert sum(e * d for e, d in census(places)) == f.degree("y") == 2


@pytest.mark.parametrize("p,expected", [(5, [(1, 2)]), (11, [(1, 1), (1, 1)])])
def test_residue_degree_depends_on_the_prime(p, expected):
    # y^2 = 3 x^2: sqrt(3) is in F_11 but not in F_5
    places = places_above(xy("y^2-3*x^2", GF(p)), 0)
    assert census(places) == expected


def test_residue_degree_over_q():
    places = places_above(xy("y^2-3*x^2"), QQ.zero)
    assert census(places) == [(1, 2)]


def test_char_zero_and_char_p_agree():
    # a good prime keeps the (e, f) multiset of every rational center
    f = xy("y^3-x^2*y+x^5-2*x^4")
    for x0 in (0, 1, 2):
        over_q = census(places_above(f, QQ.from_int(x0)))
        over_p = census(places_above(f.reduce_mod(10007), x0))
        assert sum(e * d for e, d in over_q) == 3
        if all(d == 1 for _, d in over_q):
            assert over_p == over_q


def test_wild_ramification_reported():
    f = xy("y^2+x", GF(2))
    with pytest.raises(WildRamification) as info:
        places_above(f, 0)
    assert info.value.suggested_q not in (None, 2)


def test_wild_ramification_allowed():
    f = xy("y^2+x", GF(2))
    places = places_above(f, 0, allow_wild=True)
    assert census(places) == [(2, 1)]


@pytest.mark.parametrize("k", [11, 12, 13])
def test_completeness_over_fp(k):
    f = modeq.f_poly(k).numerator.reduce_mod(101)
    dy = f.degree("y")
    for x0 in list(range(101)) + [INF]:
        places = places_above(f, x0)
        assert sum(P.e * P.residue_degree for P in places) == dy


def test_dump_format():
    text = dump_places(places_above(xy("y^2-x^3"), QQ.zero))
    assert text.count(" | ") == 3


# ---------------------------------------------------------------------------
# valuations of units at the cusps of X1(13)


@pytest.fixture(scope="module")
def cusp_places_13():
    from x1gon.cusps import cusp_places

    return [cp.place for cp in cusp_places(13)]


@pytest.fixture(scope="module")
def units_13():
    return {k: modeq.f_xy(k) for k in range(2, 8)}


def test_principal_divisor_degree_zero(cusp_places_13, units_13):
    # all cusps are rational over the chosen prime, so the degree is a plain sum
    for g in units_13.values():
        assert sum(valuation(P, g) * P.residue_degree for P in cusp_places_13) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(2, 7), st.integers(-2, 2), st.integers(-2, 2))
def test_product_rule(cusp_places_13, units_13, i, j, a, b):
    g, h = units_13[i], units_13[j]
    for P in cusp_places_13[:6]:
        assert valuation(P, g ** a * h ** b) == a * valuation(P, g) + b * valuation(P, h)


def test_ultrametric_inequality(cusp_places_13):
    x = RationalFunction.from_poly(xy("x"))
    y = RationalFunction.from_poly(xy("y"))
    for P in cusp_places_13:
        vx, vy = valuation(P, x), valuation(P, y)
        assert valuation(P, x * y) == vx + vy
        try:
            vs = valuation(P, x + y)
        except NotAFunction:
            continue
        assert vs >= min(vx, vy)


def test_valuation_stable_under_more_precision(cusp_places_13):
    g = modeq.f_poly(12).numerator * modeq.f_poly(10).numerator
    for P in cusp_places_13:
        assert _poly_valuation(P, g, start=8) == _poly_valuation(P, g, start=64)
