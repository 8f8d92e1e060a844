"""Gonality bounds, unit and place censuses, and the lower-bound planner."""

import json
from fractions import Fraction

import pytest

from x1gon.errors import BadPrime, EmptyTarget, MalformedDivisor, UnsupportedLevel
from x1gon.exactalg import parse_poly
from x1gon.lattice import UnitLattice
from x1gon.exactalg.ratfunc import RationalFunction
from x1gon.gonality import (
    ABRAMOVICH_LAMBDA,
    KIM_SARNAK_LAMBDA,
    MINIMAL_FUNCTIONS,
    FqCensus,
    TypeSignature,
    abramovich_bound,
    bounds,
    count_places_fq,
    cusp_place_degrees,
    degree_d_unit_census,
    dominating_family,
    improvement_factor,
    index_gamma1,
    level_class,
    named_unit_divisor,
    named_unit_xy,
    pigeonhole_bound,
    plan_lower_bound,
    sutherland_prime_bound,
    table1,
    type_of,
)


def rat(*ms):
    return TypeSignature([(1, m) for m in ms])


@pytest.fixture(scope="module")
def census_37():
    return count_places_fq(37, 2, 8)


@pytest.fixture(scope="module")
def plan_37(census_37):
    return plan_lower_bound(37, 2, 17, census=census_37)


# ---------------------------------------------------------------------------
# index and closed-form bounds


@pytest.mark.parametrize("N,index", [(1, 1), (2, 3), (25, 300), (37, 684)])
def test_index_gamma1(N, index):
    assert index_gamma1(N) == index


def test_abramovich_level_37():
    assert abramovich_bound(37, KIM_SARNAK_LAMBDA) == 7
    assert abramovich_bound(1) == 1


def test_weaker_constant_gives_weaker_bound():
    for N in range(1, 251):
        assert abramovich_bound(N, ABRAMOVICH_LAMBDA) <= abramovich_bound(N, KIM_SARNAK_LAMBDA)


@pytest.mark.parametrize("N", range(1, 251))
def test_published_bounds_respect_abramovich(N):
    value, _ = table1(N)
    assert abramovich_bound(N) <= value
    assert improvement_factor(N, value) <= 24 / KIM_SARNAK_LAMBDA


@pytest.mark.parametrize("N,expected", [(23, 7), (29, 11), (37, 18)])
def test_sutherland_prime_bound(N, expected):
    assert sutherland_prime_bound(N) == expected


@pytest.mark.parametrize("N", [N for N, f in MINIMAL_FUNCTIONS.items() if f == "x"
                               and all(N % p for p in range(2, N))])
def test_degree_of_x_is_the_prime_formula(N):
    assert named_unit_divisor(N, "x").l1_degree() == sutherland_prime_bound(N)


@pytest.mark.parametrize("N,degree,factor", [(25, 5, 60), (49, 21, 56), (37, 18, 38),
                                             (26, 6, 42), (38, 12, 45)])
def test_improvement_factor(N, degree, factor):
    assert improvement_factor(N, degree) == Fraction(factor)


@pytest.mark.parametrize("N,cls", [(37, "prime"), (26, "2xprime"), (25, "big-square"),
                                   (49, "big-square"), (36, "other")])
def test_level_class(N, cls):
    assert level_class(N) == cls


@pytest.mark.parametrize("q,n,bound", [(2, 18, 6), (2, 3, 1), (3, 9, 3)])
def test_pigeonhole(q, n, bound):
    assert pigeonhole_bound(q, n) == bound


def test_table1_outside_range():
    with pytest.raises(UnsupportedLevel):
        table1(251)


# ---------------------------------------------------------------------------
# named units


@pytest.mark.parametrize("N,name", sorted(MINIMAL_FUNCTIONS.items()))
def test_minimal_functions_reach_table1(N, name):
    assert named_unit_divisor(N, name).l1_degree() == table1(N)[0]


def _xy(text):
    return RationalFunction.from_poly(parse_poly(text, ("x", "y")))


H_CLOSED = {
    "h1": ("x^2*y-x*y^2+y-1", "(x-y)*x^2*y"),
    "h2": ("x*(1-y)*(x^2*y-x*y^2-x*y+y^2-1)", "(x-y+1)*(x^2*y-x*y^2+y-1)"),
    "h3": ("(1-x)*(x^2*y-x*y^2-x*y+y^2-1)", "(x-y)*(x^2*y-x*y^2+y-1)"),
    "h4": ("(1-x)*(x^2*y-x*y^2+y-1)", "x*(1-y)"),
    "h5": ("(1-y)*(x^2*y-x*y^2-x*y+y^2-1)", "(x-y)*y*(x-y+1)"),
}


@pytest.mark.parametrize("name", sorted(H_CLOSED))
def test_h_closed_forms(name):
    num, den = H_CLOSED[name]
    ratio = named_unit_xy(name) / (_xy(num) / _xy(den))
    assert ratio.num.is_constant() and ratio.den.is_constant()


# ---------------------------------------------------------------------------
# bounds reports


def test_bounds_level_37():
    rep = bounds(37)
    assert (rep.upper, rep.lower_abramovich, rep.status) == (18, 7, "exact")
    assert rep.improvement == 38


def test_bounds_with_given_upper():
    rep = bounds(29, upper=(11, None))
    assert rep.upper == 11 and rep.status == "exact"


def test_bounds_pigeonhole():
    rep = bounds(37, q=2)
    assert rep.lower_pigeonhole == (2, 6)


# ---------------------------------------------------------------------------
# unit census


def test_unit_census_25():
    assert degree_d_unit_census(25, 5).exists
    for d in (6, 7):
        res = degree_d_unit_census(25, d)
        assert not res.exists and res.certificate


def test_unit_census_36_degree_8():
    res = degree_d_unit_census(36, 8)
    assert res.exists
    assert UnitLattice.for_level(36).degree(res.witness) == 8


# ---------------------------------------------------------------------------
# place census over finite fields


def test_census_37(census_37):
    assert census_37.count(1) == 18
    assert all(census_37.count(k) == 0 for k in (2, 3, 4, 5, 8))


def test_census_25():
    c = count_places_fq(25, 2, 2)
    assert c.count(1) == 10 and c.count(2) == 0


@pytest.mark.parametrize("q,n1,n2", [(2, 5, 0), (3, 5, 5), (5, 5, 15), (7, 10, 25), (13, 10, 85)])
def test_census_elliptic_level_11(q, n1, n2):
    # X1(11) is y^2 + y = x^3 - x^2; counts from brute-force point counting
    # on that model over F_q and F_{q^2}
    c = count_places_fq(11, q, 2)
    assert (c.count(1), c.count(2)) == (n1, n2)


def _brute_counts(q):
    # points of y^2 + y = x^3 - x^2 over F_q (q prime), plus infinity
    return 1 + sum(1 for x in range(q) for y in range(q) if (y * y + y - x ** 3 + x * x) % q == 0)


@pytest.mark.parametrize("q", [2, 3, 5, 7, 13])
def test_level_11_oracle_agrees_with_weierstrass(q):
    assert count_places_fq(11, q, 1).count(1) == _brute_counts(q)


@pytest.mark.parametrize("N,q", [(13, 3), (16, 3), (25, 2), (29, 3)])
def test_census_dominates_rational_cusps(N, q):
    assert count_places_fq(N, q, 1).count(1) >= cusp_place_degrees(N, q).get(1, 0)


def test_census_bad_prime():
    with pytest.raises(BadPrime):
        count_places_fq(22, 2, 1)


def test_cusp_residue_fields_25():
    # only C_0 and C_{N/2} have real residue fields; none of the cusps of
    # X1(25) give places of degree 2 over F_2
    assert 2 not in cusp_place_degrees(25, 2)


# ---------------------------------------------------------------------------
# types and dominating families


@pytest.mark.parametrize(
    "D,expected",
    [
        ([(5, 1), (1, 3)], ((5, 1), (1, 3))),
        ([(1, 3), (5, 1)], ((5, 1), (1, 3))),
        ([(1, 1)], ((1, 1),)),
        ([(1, 2), (1, 2)], ((1, 2), (1, 2))),
    ],
)
def test_type_of(D, expected):
    t = type_of(D)
    assert tuple(t) == expected
    assert t.degree == sum(d * m for d, m in D)


def test_type_of_zero_coefficient():
    with pytest.raises(MalformedDivisor):
        type_of([(1, 0)])


def _rational_census(r, q=2, maxd=4):
    return FqCensus(0, q, maxd, {1: r}, {})


def test_dominating_family_rational_only():
    fam = dominating_family(_rational_census(18), 8)
    assert sorted(p.type for p in fam) == sorted([rat(2), rat(1, 1)])


def test_dominating_family_at_the_bound():
    fam = dominating_family(_rational_census(18), 6)
    assert [p.pattern for p in fam] == ["cuspsum"]


def test_dominating_family_below_the_bound():
    with pytest.raises(EmptyTarget):
        dominating_family(_rational_census(18), 5)


def test_dominating_family_37(census_37):
    fam = dominating_family(census_37, 17)
    types = {p.type for p in fam}
    assert all(t.degree == 11 for t in types)
    assert all(d in (1, 6, 7, 9, 10, 11) for t in types for d, _ in t)
    assert sum(1 for t in types if not t.nonrational_part()) == 56  # partitions of 11


# ---------------------------------------------------------------------------
# the level-37 plan


A1_ROWS = [
    (1, [rat(7), rat(6, 1), rat(5, 2)]),
    (2, [rat(5, 1, 1), rat(4, 3), rat(4, 2, 1), rat(4, 1, 1, 1), rat(3, 3, 1)]),
    (3, [rat(3, 2, 2)]),
    (2, [rat(3, 2, 1, 1), rat(3, 1, 1, 1, 1)]),
    (4, [rat(2, 2, 2, 1), rat(2, 2, 1, 1, 1), rat(2, 1, 1, 1, 1, 1), rat(1, 1, 1, 1, 1, 1, 1)]),
]


def test_plan_thresholds(plan_37):
    assert plan_37.thresholds == {"t2": 10, "t3": 5}
    assert plan_37.pigeonhole == 6
    assert [c.index for c in plan_37.cases] == [1, 2, 3]
    assert plan_37.case(1).status == "external"


def test_plan_case2_rows(plan_37):
    assert plan_37.table_rows(2) == [(c, tuple(ts)) for c, ts in A1_ROWS]


def test_plan_case2_covers_partitions_of_7(plan_37):
    types = plan_37.case(2).types()
    assert len(types) == len(set(types)) == 15


def test_plan_case3_groups(plan_37):
    groups = plan_37.groups(3)
    assert sorted(groups) == list(range(1, 12))
    assert groups[1] == {TypeSignature([(12, 1)]), TypeSignature([(11, 1), (1, 1)])}
    assert groups[8] == {TypeSignature([(6, 2)]), TypeSignature([(6, 1), (6, 1)])}
    assert len(groups[11]) == 4
    # every group needs a non-rational place
    assert all(t.nonrational_part() for ts in groups.values() for t in ts)


def test_plan_diamond_note(plan_37):
    assert any("transitively" in n for n in plan_37.notes)
    assert any("no places of degree 2, 3, 4, 5, 8" in n for n in plan_37.notes)


def test_plan_json_schema(plan_37):
    data = json.loads(plan_37.to_json())
    assert data["schema"] == "x1gon-plan-v1"
    assert (data["N"], data["q"], data["target"]) == (37, 2, 17)
    assert len(data["cases"]) == 3


def test_plan_below_pigeonhole(census_37):
    plan = plan_lower_bound(37, 2, 5, census=census_37)
    assert plan.obligations == 0 and plan.cases == []


def test_plan_bad_prime():
    with pytest.raises(BadPrime):
        plan_lower_bound(38, 2, 11)


def test_generic_plan_partitions_types():
    plan = plan_lower_bound(29, 3, 10, census_degree=4)
    assert plan.obligations > 0
    for c in plan.cases[1:]:
        types = c.types()
        assert len(types) == len(set(types))
