"""Integer matrices: Smith and Hermite normal forms, determinants, solving."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotInLattice

__all__ = ["IntMatrix", "smith_normal_form", "hermite_normal_form", "solve_left"]


class IntMatrix:
    """Dense matrix of Python integers (immutable by convention)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [[int(v) for v in r] for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m, n):
        return cls([[0] * n for _ in range(m)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def column(self, j):
        return [r[j] for r in self.rows]

    def tolist(self):
        return [list(r) for r in self.rows]

    def transpose(self):
        return IntMatrix([list(c) for c in zip(*self.rows)])

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch")
            cols = list(zip(*other.rows))
            return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        return IntMatrix([[v * int(other) for v in r] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"IntMatrix({self.rows})"

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self.rows])

    def rank(self):
        return rank([list(r) for r in self.rows])

    def is_diagonal(self):
        return all(v == 0 for i, r in enumerate(self.rows) for j, v in enumerate(r) if i != j)

    def diagonal(self):
        return [self.rows[i][i] for i in range(min(self.shape))]


def bareiss_det(a):
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(a):
    """Rank by fraction-free elimination."""
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            if a[i][c]:
                f, g = a[i][c], a[r][c]
                a[i] = [x * g - y * f for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def smith_normal_form(A):
    """Return ``(U, S, V)`` with ``U*A*V == S`` diagonal, ``d1 | d2 | ...``.

    ``U`` and ``V`` are unimodular.  Diagonal entries are nonnegative.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    m, n = A.shape
    S = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f*row_src
        S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in S:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % S[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move a smaller remainder into the pivot position
            best = None
            for i in range(t, m):
                if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                    best = (abs(S[i][t]), i, "r")
            for j in range(t, n):
                if S[t][j] and (best is None or abs(S[t][j]) < best[0]):
                    best = (abs(S[t][j]), j, "c")
            if best[2] == "r":
                swap_rows(t, best[1])
            else:
                swap_cols(t, best[1])
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    return IntMatrix(U), IntMatrix(S), IntMatrix(V)


def hermite_normal_form(A):
    """Row-style Hermite normal form ``H = W*A`` (returns ``(H, W)``).

    Zero rows are moved to the bottom; pivots are positive and entries
    above a pivot are reduced into ``[0, pivot)``.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    m, n = A.shape
    H = [list(r) for r in A.rows]
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            W[r], W[p] = W[p], W[r]
            cleared = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    W[i] = [a - q * b for a, b in zip(W[i], W[r])]
                    if H[i][c]:
                        cleared = False
            if cleared:
                break
        if not any(H[i][c] for i in range(r, m)):
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            W[r] = [-v for v in W[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                W[i] = [a - q * b for a, b in zip(W[i], W[r])]
        r += 1
    return IntMatrix(H), IntMatrix(W)


def solve_left(A, v):
    """Integer ``x`` with ``x * A == v`` (rows of ``A`` are generators).

    Raises
    ------
    NotInLattice
        When no integer solution exists; ``rational_solution`` carries a
        rational solution if one exists, else ``None``.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    m, n = A.shape
    U, S, V = smith_normal_form(A)
    w = [sum(v[k] * V.rows[k][j] for k in range(n)) for j in range(n)]
    d = S.diagonal()
    r = sum(1 for x in d if x)
    if any(w[j] for j in range(r, n)):
        raise NotInLattice("vector is outside the rational span", None)
    y = [Fraction(w[i], d[i]) for i in range(r)] + [Fraction(0)] * (m - r)
    x = [sum(y[i] * U.rows[i][j] for i in range(m)) for j in range(m)]
    if any(f.denominator != 1 for f in y):
        raise NotInLattice("rational but not integral combination", x)
    return [int(f) for f in x]


def unimodular_inverse(U):
    """Inverse of a unimodular integer matrix (exact)."""
    n = U.nrows
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(U.rows)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return IntMatrix([[int(x) for x in r[n:]] for r in a])
