"""Integer row reduction: Hermite and Smith normal forms over exact ints.

Matrices are lists of rows of Python ints.  The lattice of a matrix is the
integer span of its rows.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _copy(rows: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in rows]


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form, zero rows dropped.

    Pivots are positive, pivot columns strictly increase, and entries above a
    pivot lie in ``[0, pivot)``.
    """
    a = _copy(rows)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    out: Matrix = []
    r = 0
    for col in range(ncols):
        # Euclid on column `col` among rows r.. until one nonzero remains.
        while True:
            nz = [i for i in range(r, len(a)) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][col] != 0:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
            p = a[r][col]
            for i in range(r):
                q = a[i][col] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    out = [row for row in a[:r]]
    return out


def reduce_mod_rows(v: Sequence[int], hnf: Matrix) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the lattice of ``hnf``."""
    w = list(v)
    for row in hnf:
        col = next(j for j, x in enumerate(row) if x)
        q = w[col] // row[col]
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return tuple(w)


def smith(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form ``L @ A @ R = D``.

    Returns ``(diagonal, L, R)`` with unimodular ``L`` and ``R``; the diagonal
    holds the nonzero invariant factors, each dividing the next.
    """
    a = _copy(rows)
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    left = [[int(i == j) for j in range(m)] for i in range(m)]
    right = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):  # col dst += k * col src
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # Divisibility: fold in any entry the pivot does not divide.
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        diag.append(a[t][t])
        t += 1
    return diag, left, right


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]
