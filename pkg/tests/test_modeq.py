"""Modular equations, coordinate transforms and the units f_k."""

import random

import pytest

from x1gon import modeq
from x1gon.errors import UnsupportedLevel
from x1gon.exactalg import GF, QQ, parse_poly
from x1gon.exactalg.ratfunc import RationalFunction

BC = ("b", "c")
XY = ("x", "y")


def bc(text):
    return parse_poly(text, BC)


def xy(text):
    return parse_poly(text, XY)


@pytest.mark.parametrize(
    "N,printed",
    [(4, "c"), (5, "b-c"), (6, "c^2+c-b"), (7, "b^2-b*c-c^3")],
)
def test_small_modular_equations_literal(N, printed):
    assert modeq.modular_equation_F(N) == bc(printed)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_modular_equation_below_four(N):
    with pytest.raises(UnsupportedLevel):
        modeq.modular_equation_F(N)


def _random_root(F, p, rng):
    """A point (b, c) over F_p on F(b, c) = 0, found by solving for b."""
    from x1gon.exactalg import roots

    while True:
        c0 = rng.randrange(1, p)
        g = F.reduce_mod(p).partial_evaluate("c", c0).to_univariate("b")
        rs = roots(GF(p), g)
        if rs:
            return rs[0][0], c0


@pytest.mark.parametrize("N", [8, 9, 10, 11, 12, 13])
def test_order_oracle(N):
    # points of F_N over large prime fields carry (0,0) of exact order N
    F = modeq.modular_equation_F(N)
    rng = random.Random(N)
    hits = 0
    for p in (10007, 10009, 10037):
        K = GF(p)
        for _ in range(8):
            b, c = _random_root(F, p, rng)
            order = modeq.base_point_order(b, c, K, bound=4 * N)
            if order is None:
                continue
            assert order == N
            hits += 1
    assert hits >= 10


@pytest.mark.parametrize(
    "k,printed",
    [
        (10, "x-y+1"),
        (11, "x^2*y-x*y^2+y-1"),
        (12, "x-y"),
        (13, "x^3*y-x^2*y^2-x^2*y+x*y^2-y+1"),
    ],
)
def test_f_literal(k, printed):
    f = modeq.f_poly(k)
    assert f.is_polynomial
    assert f.numerator == xy(printed)


def test_f6_is_s_minus_one():
    # s - 1 with s written in x, y through the inverse maps
    f6 = modeq.f_xy(6)
    s = modeq.transform_to_xy(RationalFunction.from_poly(parse_poly("c^2", BC)) /
                              RationalFunction.from_poly(bc("b-c")))
    assert f6 == s - 1


def test_tate_multiple_small():
    zero = RationalFunction.from_poly(bc("0"))
    assert modeq.tate_multiple(1) == (zero, zero)
    X2, Y2 = modeq.tate_multiple(2)
    assert X2 == RationalFunction.from_poly(bc("b"))
    assert Y2 == RationalFunction.from_poly(bc("b*c"))


def test_negation_of_base_point():
    P = modeq.tate_multiple(1)
    ainv = modeq._ainv_rf()
    X, Y = modeq.group_negate(P, ainv)
    assert Y == RationalFunction.from_poly(bc("b"))


def test_double_lies_on_curve():
    X, Y = modeq.tate_multiple(2)
    b = RationalFunction.from_poly(bc("b"))
    c = RationalFunction.from_poly(bc("c"))
    lhs = Y * Y + (1 - c) * X * Y - b * Y
    rhs = X * X * X - b * X * X
    assert lhs == rhs


def test_transform_identity():
    one = RationalFunction.from_poly(bc("1"))
    assert modeq.transform_to_xy(one) == 1


@pytest.mark.parametrize("name", ["x = f7/f8", "y = f8/f9", "1-x = f5*f6/(f4*f8)",
                                  "1-y = f6*f7/f9", "1-x*y = f6^2/f9"])
def test_unit_relations(name):
    rel = {n: (lhs, rhs) for n, lhs, rhs in modeq.unit_relations()}
    lhs, rhs = rel[name]
    assert lhs == rhs


@pytest.mark.parametrize("k", range(10, 21))
def test_f_is_primitive_and_normalized(k):
    f = modeq.f_poly(k).numerator
    assert f.primitive_part() == f


@pytest.mark.parametrize("k", [10, 11, 12, 13, 14])
def test_F_over_f_is_supported_on_atoms(k):
    # F_k / f_k is a constant times a product of x, y, x-1, y-1, xy-1, xy-y+1
    const, exps = modeq.f_poly(k).cofactor
    assert const in (1, -1)
    assert len(exps) == len(modeq.ATOMS)
