"""
Searching for functions of small degree
=======================================

Reproduce the gonality values of X1(N) for 10 <= N <= 40 with the randomized
LLL search over the unit lattice, and compare with the unconditional lower
bound from the spectral gap.
"""

import sys

from x1gon.gonality import abramovich_bound, improvement_factor, table1
from x1gon.lattice import UnitLattice, search_min_degree

upto = int(sys.argv[1]) if len(sys.argv) > 1 else 30

print(f"{'N':>3} {'found':>5} {'table':>5} {'lower':>5} {'index/deg':>9}")
for N in range(10, upto + 1):
    L = UnitLattice.for_level(N)
    res = search_min_degree(L, budget=200, seed=0)
    value, _ = table1(N)
    print(f"{N:>3} {res.degree:>5} {value:>5} {abramovich_bound(N):>5} "
          f"{float(improvement_factor(N, res.degree)):>9.1f}")
