"""Exact integer Smith normal form and abelian-quotient arithmetic.

Everything runs on Python's arbitrary-precision integers; surgery
coefficients can be large and overflow must be impossible.
"""

from __future__ import annotations

Matrix = list[list[int]]


def smith_normal_form(matrix: Matrix) -> tuple[list[int], Matrix]:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (diag, V) where diag is the list of nonzero diagonal entries
    d1 | d2 | ... (positive, divisibility chain) and V is the accumulated
    column transform: row-vector classes modulo the row lattice of the
    input are read off from x @ V with coordinate i taken mod diag[i].
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_add(dst, src, q):
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]

    def col_add(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_add(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_add(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, m):
                if any(A[i][j] % A[t][t] for j in range(t + 1, n)):
                    offender = i
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        t += 1

    diag = [abs(A[i][i]) for i in range(min(m, n)) if A[i][i]]
    return diag, V


def abelian_invariants(matrix: Matrix, n_generators: int) -> tuple[int, ...]:
    """Invariant factors of Z^n / rowspace(matrix); 0 encodes a Z factor."""
    diag, _ = smith_normal_form(matrix)
    finite = [d for d in diag if d > 1]
    free = n_generators - len(diag)
    return tuple(finite + [0] * free)


def quotient_class(vector: list[int], matrix: Matrix) -> tuple[int, ...]:
    """Canonical form of a vector in Z^n modulo the row lattice of matrix.

    Coordinates are expressed in the Smith basis; finite coordinates are
    reduced into [0, d) and torsion-free coordinates are kept exact.
    """
    if not matrix:
        return tuple(vector)
    diag, V = smith_normal_form(matrix)
    n = len(vector)
    y = [sum(vector[i] * V[i][j] for i in range(n)) for j in range(n)]
    for i, d in enumerate(diag):
        y[i] %= d
    return tuple(y)


def group_order(invariants: tuple[int, ...]) -> int:
    """Order of the abelian group with these factors; 0 means infinite."""
    order = 1
    for d in invariants:
        if d == 0:
            return 0
        order *= d
    return order
