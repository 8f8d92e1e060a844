"""LLL reduction, short-vector enumeration, degree search and class groups."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import brute_force_short, up_to_sign
from x1gon.errors import EnumerationBudgetExceeded, RankDeficient
from x1gon.exactalg import IntMatrix, solve_left
from x1gon.exactalg.intmat import rank
from x1gon.lattice import (
    UnitLattice,
    class_group_quotient,
    divisor_degree,
    enumerate_short,
    is_lll_reduced,
    lll_reduce,
    lll_reduce_with_transform,
    search_min_degree,
    units_up_to_degree,
)


def lattice_of(rows):
    return UnitLattice(0, IntMatrix(rows), tuple([1] * len(rows[0])))


random_basis = st.integers(1, 4).flatmap(
    lambda n: st.integers(n, n + 2).flatmap(
        lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


# ---------------------------------------------------------------------------
# LLL


def test_lll_two_dimensional_example():
    R = lll_reduce(IntMatrix([[1, 0], [4, 1]]))
    assert min(sum(a * a for a in r) for r in R.rows) == 1


def test_lll_orthogonal_basis_unchanged():
    B = [[2, 0, 0], [0, 3, 0], [0, 0, 5]]
    assert sorted(map(tuple, lll_reduce(IntMatrix(B)).rows)) == sorted(map(tuple, B))


def test_lll_dependent_rows():
    with pytest.raises(RankDeficient):
        lll_reduce(IntMatrix([[1, 2], [2, 4]]))


def test_lll_rejects_bad_delta():
    with pytest.raises(ValueError):
        lll_reduce(IntMatrix([[1, 0]]), delta=Fraction(1, 5))


@settings(max_examples=80, deadline=None)
@given(random_basis)
def test_lll_preserves_the_lattice(rows):
    assume(rank(rows) == len(rows))
    R, U = lll_reduce_with_transform(rows)
    assert abs(U.det()) == 1
    assert U * IntMatrix(rows) == R
    assert is_lll_reduced(R)
    for r in R.rows:
        solve_left(IntMatrix(rows), r)
    for r in rows:
        solve_left(R, r)


def test_weighted_lll_is_reduced_in_its_form(lattices):
    L = lattices(25)
    R = lll_reduce(L.basis, weights=L.weights)
    assert is_lll_reduced(R, weights=L.weights)


# ---------------------------------------------------------------------------
# enumeration


@settings(max_examples=100, deadline=None)
@given(random_basis, st.integers(1, 60))
def test_enumeration_matches_brute_force(rows, bound2):
    assume(rank(rows) == len(rows))
    got = {up_to_sign(s.vector) for s in enumerate_short(lattice_of(rows), bound2)}
    assert got == brute_force_short(rows, bound2)


@settings(max_examples=40, deadline=None)
@given(random_basis, st.integers(1, 60))
def test_compiled_and_reference_enumeration_agree(rows, bound2):
    assume(rank(rows) == len(rows))
    L = lattice_of(rows)
    assert enumerate_short(L, bound2, jit=True) == enumerate_short(L, bound2, jit=False)


def test_bound_below_minimum_is_empty():
    L = lattice_of([[3, 0], [0, 3]])
    assert enumerate_short(L, 8) == []
    assert enumerate_short(L, 0) == []


def test_unknown_norm():
    with pytest.raises(ValueError):
        enumerate_short(lattice_of([[1, 0]]), 4, norm="sup")


def test_enumeration_budget(lattices):
    with pytest.raises(EnumerationBudgetExceeded):
        enumerate_short(lattices(25), 10**6, cap=1000)


def test_level_25_has_nothing_of_degree_6_or_7(lattices):
    found = units_up_to_degree(lattices(25), 7)
    degrees = {s.degree for s in found}
    assert min(degrees) == 5
    assert not degrees & {6, 7}


def test_reported_degree_matches_divisor(lattices):
    L = lattices(25)
    for s in units_up_to_degree(L, 5):
        assert tuple(L.vector(s.exponents)) == s.vector
        assert s.degree == divisor_degree(s.vector, L.weights) == L.degree(s.exponents)


# ---------------------------------------------------------------------------
# search


@pytest.mark.parametrize("N,expected", [(25, 5), (29, 11), (37, 18)])
def test_search_reaches_table_value(lattices, N, expected):
    res = search_min_degree(lattices(N))
    assert res.degree == expected
    assert lattices(N).degree(res.exponents) == expected


def test_search_level_40(lattices):
    assert search_min_degree(lattices(40)).degree <= 12


def test_search_is_deterministic(lattices):
    L = lattices(23)
    a = search_min_degree(L, budget=20, seed=3)
    b = search_min_degree(L, budget=20, seed=3)
    assert (a.exponents, a.degree) == (b.exponents, b.degree)


@pytest.mark.parametrize("N", [13, 16, 18, 20])
def test_search_never_below_certified_minimum(lattices, N):
    L = lattices(N)
    res = search_min_degree(L, budget=10)
    floor = min(s.degree for s in units_up_to_degree(L, res.degree))
    assert res.degree >= floor


def test_search_needs_a_budget(lattices):
    with pytest.raises(ValueError):
        search_min_degree(lattices(13), budget=0)


@pytest.mark.parametrize("N", [13, 17, 22, 25])
def test_degree_zero_symmetry(lattices, N):
    L = lattices(N)
    res = search_min_degree(L, budget=5)
    v = res.vector
    pos = sum(w * a for a, w in zip(v, L.weights) if a > 0)
    neg = -sum(w * a for a, w in zip(v, L.weights) if a < 0)
    assert pos == neg == res.degree


# ---------------------------------------------------------------------------
# class groups


def test_class_group_level_11(lattices):
    assert class_group_quotient(lattices(11)) == ([5], 0)


@pytest.mark.parametrize("N", [13, 18, 25])
def test_class_group_order_is_index(lattices, N):
    from x1gon.lattice import degree_zero_basis

    L = lattices(N)
    factors, free_rank = class_group_quotient(L)
    assert free_rank == 0
    K = IntMatrix(degree_zero_basis(L.weights))
    coords = IntMatrix([solve_left(K, r) for r in L.basis.rows])
    assert math.prod(factors) == abs(coords.det())
