"""Cusp orbits, labels, divisor tables and diamond operators."""

from math import gcd

import pytest

from x1gon import modeq
from x1gon.cusps import (
    DivisorVec,
    SMALL_LEVEL_TABLES,
    cusp_classes,
    cusp_count,
    cusp_orbits,
    diamond_permute,
    divisor_table,
    express_in_lattice,
    format_rowvec,
    orbit_degree,
    orbit_degrees,
    parse_rowvec,
    small_level_table,
    unit_divisor,
)
from x1gon.errors import NotADiamond, NotAFunction, NotInLattice, ParseError, UnsupportedLevel
from x1gon.exactalg import parse_poly
from x1gon.exactalg.ratfunc import RationalFunction
from x1gon.puiseux import valuation

DIV_X_29 = (0, -1, -2, -3, -1, 0, 0, 0, 3, 2, -1, -3, 2, 3, 1)
# printed as 2C_1 - C_4 - 2C_5 + C_6 - 3C_7 + 2C_8 + 3C_9 - C_10 + 3C_11 - C_12 - 3C_13
_XT_TERMS = {1: 2, 4: -1, 5: -2, 6: 1, 7: -3, 8: 2, 9: 3, 10: -1, 11: 3, 12: -1, 13: -3}
DIV_XT_29 = tuple(_XT_TERMS.get(i, 0) for i in range(15))
G_29 = (
    "(x^2*y-x*y+y-1)*(x-1)^2*(x-y+1)*(x^2*y-x*y^2-x^2+x*y-x+y-1)^4*y^3",
    "(y-1)^2*(x*y-1)*(x-y)*(x^2*y-x*y^2-x*y+y^2-1)^4*x^4",
)


def _phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# combinatorics


@pytest.mark.parametrize("N", range(5, 60))
def test_orbit_degrees_sum_to_cusp_count(N):
    total = sum(_phi(d) * _phi(N // d) for d in range(1, N + 1) if N % d == 0) // 2
    assert sum(orbit_degrees(N)) == cusp_count(N) == total
    assert len(cusp_classes(N)) == total


def test_orbit_degree_examples():
    assert orbit_degrees(29) == [14] + [1] * 14
    assert orbit_degrees(25)[0] == 10
    assert orbit_degree(25, 5) == orbit_degree(25, 10) == 4
    assert orbit_degrees(37) == [18] + [1] * 18


# ---------------------------------------------------------------------------
# places and labels


@pytest.mark.parametrize("N", [25, 29, 37])
def test_orbits_carry_the_phi_degrees(N):
    orbits = cusp_orbits(N)
    assert sorted(orbits) == list(range(N // 2 + 1))
    for n, orb in orbits.items():
        assert orb.degree == orbit_degree(N, n)


def test_cusp_places_need_the_xy_model():
    from x1gon.cusps import cusp_places

    with pytest.raises(UnsupportedLevel):
        cusp_places(9)


def test_f12_principal_on_29():
    f12 = modeq.f_poly(12).numerator
    total = 0
    for orb in cusp_orbits(29).values():
        for cp in orb.places:
            total += valuation(cp.place, f12) * cp.place.residue_degree
    assert total == 0


# ---------------------------------------------------------------------------
# divisor tables


def test_div_x_on_29(tables):
    T = tables(29)
    assert len(T.rows) == 14 and all(len(r) == 15 for r in T.rows)
    assert tuple(T.row(7) - T.row(8)) == DIV_X_29


def test_diamond_12_on_29(tables):
    T = tables(29)
    assert tuple(diamond_permute(29, 12, T.row(7) - T.row(8))) == DIV_XT_29


def test_express_div_xt_recovers_g(tables):
    T = tables(29)
    n = express_in_lattice(T, DivisorVec(29, DIV_XT_29))
    g = 1
    for k, e in zip(T.units, n):
        if e:
            g = modeq.f_xy(k) ** e * g
    num, den = (RationalFunction.from_poly(parse_poly(s, ("x", "y"))) for s in G_29)
    ratio = g / (num / den)
    assert ratio.num.is_constant() and ratio.den.is_constant()


@pytest.mark.parametrize("k", [2, 5, 9])
def test_express_unit_row(tables, k):
    T = tables(29)
    n = express_in_lattice(T, T.row(k))
    assert n == [int(j == k) for j in T.units]


def test_express_zero(tables):
    T = tables(29)
    assert express_in_lattice(T, DivisorVec(29, [0] * 15)) == [0] * 14


def test_express_outside_lattice(tables):
    T = tables(11)
    with pytest.raises(NotInLattice):
        express_in_lattice(T, DivisorVec(11, [1, -1, 0, 0, 0, 0]))


@pytest.mark.parametrize("N", [11, 13, 16, 18, 20, 25])
def test_rows_have_degree_zero_and_full_rank(tables, N):
    T = tables(N)
    assert all(T.row(k).degree() == 0 for k in T.units)
    assert T.free


@pytest.mark.parametrize("N", [13, 18, 25])
def test_diamond_stability(tables, N):
    T = tables(N)
    for i in range(2, N):
        if gcd(i, N) != 1:
            continue
        for k in T.units:
            express_in_lattice(T, diamond_permute(N, i, T.row(k)))


@pytest.mark.parametrize("N", [11, 29])
def test_trivial_diamonds(tables, N):
    D = tables(N).row(3) - tables(N).row(5)
    assert diamond_permute(N, 1, D) == D
    assert diamond_permute(N, N - 1, D) == D


def test_diamond_needs_a_unit():
    with pytest.raises(NotADiamond):
        diamond_permute(12, 2, DivisorVec(12, [0] * 7))


def test_diamond_preserves_degree(tables):
    T = tables(25)
    for i in (2, 3, 7):
        for k in T.units:
            assert diamond_permute(25, i, T.row(k)).degree() == 0


# ---------------------------------------------------------------------------
# units beyond the table


def test_unit_divisor_reuses_rows(tables):
    assert unit_divisor(29, 9) == tables(29).row(9)


def test_unit_divisor_beyond_table(tables):
    D = unit_divisor(18, 14)
    assert D.degree() == 0
    assert len(D) == 10


def test_unit_divisor_of_the_curve_itself():
    with pytest.raises(NotAFunction):
        unit_divisor(20, 20)


# ---------------------------------------------------------------------------
# small levels and file format


@pytest.mark.parametrize("N", range(4, 10))
def test_small_level_tables_match_recomputation(N):
    assert small_level_table(N) == [list(r) for r in SMALL_LEVEL_TABLES[N]]


@pytest.mark.parametrize("N", range(4, 10))
def test_small_level_rows_degree_zero(N):
    T = divisor_table(N)
    assert all(T.row(k).degree() == 0 for k in T.units)


def test_rowvec_round_trip(tables):
    T = tables(13)
    text = format_rowvec(13, T.rows)
    assert text.splitlines()[0] == "# X1 N=13 orbits=7 format=rowvec-v1"
    assert parse_rowvec(text) == (13, T.rows)


@pytest.mark.parametrize(
    "text",
    ["1 2 3\n", "# X1 N=5 orbits=3 format=rowvec-v2\n0 0 0\n", "# X1 N=5 orbits=3 format=rowvec-v1\n1 2\n"],
)
def test_rowvec_rejects_bad_input(text):
    with pytest.raises(ParseError):
        parse_rowvec(text)
