"""Exact integer matrix algorithms (Hermite/Smith forms, kernels, ranks).

Matrices are lists of row lists of Python ints.  Nothing here overflows;
callers apply the range checks of :mod:`latpoly.core` where the fixed
precision contract demands it.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _elim_coeffs(a: int, b: int) -> tuple[int, int, int]:
    # like xgcd, but keeps the pivot untouched when it already divides b
    if b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    return xgcd(a, b)


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def hnf(m: Sequence[Sequence[int]], with_transform: bool = True):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ m == H``, ``U`` unimodular and ``H`` in
    row echelon form: pivots positive, entries above a pivot reduced into
    ``[0, pivot)``, zero rows at the bottom.
    """
    h = [list(r) for r in m]
    nr = len(h)
    nc = len(h[0]) if nr else 0
    u = identity(nr) if with_transform else None
    r = 0
    for j in range(nc):
        if r == nr:
            break
        # collapse column j below row r into a single gcd entry at row r
        for i in range(r + 1, nr):
            b = h[i][j]
            if b == 0:
                continue
            a = h[r][j]
            if a == 0:
                h[r], h[i] = h[i], h[r]
                if u is not None:
                    u[r], u[i] = u[i], u[r]
                continue
            g, x, y = _elim_coeffs(a, b)
            pa, pb = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [pa * t - pb * s for s, t in zip(hr, hi)]
            if u is not None:
                ur, ui = u[r], u[i]
                u[r] = [x * s + y * t for s, t in zip(ur, ui)]
                u[i] = [pa * t - pb * s for s, t in zip(ur, ui)]
        p = h[r][j]
        if p == 0:
            continue
        if p < 0:
            h[r] = [-x for x in h[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
            p = -p
        for i in range(r):
            q = h[i][j] // p
            if q:
                hr = h[r]
                h[i] = [s - q * t for s, t in zip(h[i], hr)]
                if u is not None:
                    ur = u[r]
                    u[i] = [s - q * t for s, t in zip(u[i], ur)]
        r += 1
    return (h, u) if with_transform else h


def rank(m: Sequence[Sequence[int]]) -> int:
    if not m:
        return 0
    return len(_bareiss_echelon([list(r) for r in m]))


def _bareiss_echelon(a: Matrix) -> Matrix:
    """Fraction-free elimination; returns the nonzero echelon rows."""
    rows = [r for r in a if any(r)]
    if not rows:
        return []
    nc = len(rows[0])
    out = []
    prev = 1
    col = 0
    while rows and col < nc:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        p = rows.pop(piv)
        pv = p[col]
        new = []
        for r in rows:
            f = r[col]
            nr = [(pv * x - f * y) // prev for x, y in zip(r, p)]
            if any(nr):
                new.append(nr)
        rows = new
        prev = pv
        out.append(p)
        col += 1
    return out


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def kernel_basis(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Rows forming a basis of the (saturated) integer kernel ``{x : m x = 0}``."""
    if not m:
        return identity(ncols or 0)
    mt = transpose(m)
    h, u = hnf(mt)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def saturated_coords(basis: Sequence[Sequence[int]]) -> Matrix:
    """Integer ``L`` with ``L @ basis^T == I`` for a saturated row basis.

    ``L @ y`` gives the coordinates of a lattice vector ``y`` in ``basis``.
    """
    r = len(basis)
    h, u = hnf(transpose(basis))
    top = [row[:r] for row in h[:r]]
    if top != identity(r):
        raise ValueError("basis does not span a saturated sublattice")
    return [u[i] for i in range(r)]


def smith(m: Sequence[Sequence[int]]):
    """Smith normal form ``U @ m @ V == D`` (``D`` as full matrix).

    Returns ``(diag, U, V)`` where ``diag`` lists the nonzero invariant
    factors in divisibility order.
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def col_op(j1, j2, x, y, p, q):
        # new col j1 = x*c1 + y*c2, new col j2 = p*c1 + q*c2
        for mat in (a, v):
            for row in mat:
                c1, c2 = row[j1], row[j2]
                row[j1] = x * c1 + y * c2
                row[j2] = p * c1 + q * c2

    def row_op(i1, i2, x, y, p, q):
        for mat in (a, u):
            r1, r2 = mat[i1], mat[i2]
            mat[i1] = [x * s + y * t for s, t in zip(r1, r2)]
            mat[i2] = [p * s + q * t for s, t in zip(r1, r2)]

    t = 0
    while t < min(nr, nc):
        # choose pivot with smallest nonzero abs value in the submatrix
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for mat in (a, v):
                for row in mat:
                    row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    g, x, y = _elim_coeffs(a[t][t], a[i][t])
                    pa, pb = a[t][t] // g, a[i][t] // g
                    row_op(t, i, x, y, -pb, pa)
            for j in range(t + 1, nc):
                if a[t][j]:
                    g, x, y = _elim_coeffs(a[t][t], a[t][j])
                    pa, pb = a[t][t] // g, a[t][j] // g
                    col_op(t, j, x, y, -pb, pa)
                    done = False
            if any(a[i][t] for i in range(t + 1, nr)):
                done = False
                continue
            # divisibility condition
            p = a[t][t]
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                row_op(t, bad, 1, 1, 0, 1)
                done = False
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nr, nc)) if a[i][i]]
    return diag, u, v


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Solve ``a x = b`` over the rationals (any solution), or ``None``."""
    nr = len(a)
    nc = len(a[0]) if nr else 0
    m = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    piv_cols = []
    r = 0
    for j in range(nc):
        p = next((i for i in range(r, nr) if m[i][j]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][j]
        m[r] = [x / pv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][j]:
                f = m[i][j]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(j)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if m[i][nc]:
            return None
    x = [Fraction(0)] * nc
    for i, j in enumerate(piv_cols):
        x[j] = m[i][nc]
    return x


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """An integer solution of ``a x = b``, or ``None`` if there is none."""
    nc = len(a[0])
    diag, U, V = smith(a)
    ub = matvec(U, b)
    y = [0] * nc
    for i, x in enumerate(ub):
        if i < len(diag):
            if x % diag[i]:
                return None
            y[i] = x // diag[i]
        elif x:
            return None
    return matvec(V, y)


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    n = len(m)
    h, u = hnf(m)
    if h != identity(n):
        raise ValueError("matrix is not unimodular")
    return u


def affine_hull_equations(points: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], int]]:
    """Integer equations ``(a, c)`` with ``a.x + c == 0`` cutting out the affine hull."""
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    n = len(p0)
    if not diffs or not any(any(r) for r in diffs):
        ker = identity(n)
    else:
        ker = kernel_basis(diffs, n)
    out = []
    for a in ker:
        g = gcd_list(a)
        a = tuple(x // g for x in a)
        out.append((a, -sum(x * y for x, y in zip(a, p0))))
    return out
