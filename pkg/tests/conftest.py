"""Shared fixtures.

Divisor tables and search results are cached on disk.  Tests use a fresh
session directory unless ``X1GON_TEST_CACHE`` points at a warm one.
"""

import os

import pytest

from oracles import ACCEPTANCE
from x1gon import cache


@pytest.fixture(scope="session", autouse=True)
def cache_dir(tmp_path_factory):
    path = os.environ.get("X1GON_TEST_CACHE") or str(tmp_path_factory.mktemp("x1cache"))
    old = os.environ.get("X1GON_CACHE")
    os.environ["X1GON_CACHE"] = path
    cache.set_cache_dir(None)
    yield path
    if old is None:
        os.environ.pop("X1GON_CACHE", None)
    else:
        os.environ["X1GON_CACHE"] = old


@pytest.fixture(scope="session")
def tables():
    """Memoized divisor tables by level."""
    from x1gon.cusps import divisor_table

    memo = {}

    def get(N):
        if N not in memo:
            memo[N] = divisor_table(N)
        return memo[N]

    return get


@pytest.fixture(scope="session")
def lattices(tables):
    from x1gon.lattice import UnitLattice

    memo = {}

    def get(N):
        if N not in memo:
            memo[N] = UnitLattice.from_table(tables(N))
        return memo[N]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
