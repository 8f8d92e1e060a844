"""Independent oracles shared by several test modules."""

import math
from fractions import Fraction

import numpy as np


def up_to_sign(v):
    """Normalize a vector so its first nonzero entry is positive."""
    v = tuple(v)
    for a in v:
        if a:
            return v if a > 0 else tuple(-b for b in v)
    return v


def brute_force_short(rows, bound2):
    """Nonzero lattice vectors of squared norm <= bound2, by a complete box search.

    ``x^T G x <= b`` forces ``|x_i| <= sqrt(b * (G^-1)_ii)``.
    """
    n = len(rows)
    G = [[Fraction(sum(a * b for a, b in zip(r, s))) for s in rows] for r in rows]
    # Gauss-Jordan inverse over the rationals
    A = [g[:] + [Fraction(int(i == j)) for j in range(n)] for i, g in enumerate(G)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        A[c] = [a / A[c][c] for a in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                A[r] = [a - A[r][c] * b for a, b in zip(A[r], A[c])]
    box = [math.isqrt(int(bound2 * A[i][n + i]) + 1) + 1 for i in range(n)]
    X = np.stack(np.meshgrid(*(np.arange(-b, b + 1) for b in box), indexing="ij"), -1).reshape(-1, n)
    V = X @ np.array(rows, dtype=np.int64)
    keep = (V * V).sum(1) <= bound2
    return {up_to_sign(v) for v in V[keep].tolist() if any(v)}


# criterion number -> (passed, detail); printed by the terminal summary hook
ACCEPTANCE = {}
