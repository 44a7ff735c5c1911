"""Input parsing (coordinate matrices and (combined) weight systems) and
the text renderers used by the command line tools."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, TextIO

from .core import CapacityError, LatpolyError, check_dim, check_int, get_limits
from .intmat import (
    hnf,
    identity,
    kernel_basis,
    matmul,
    matvec,
    rank,
    saturated_coords,
    transpose,
    xgcd,
)

__all__ = [
    "ParseError",
    "WeightSystem",
    "QuotientAction",
    "CWS",
    "CwsEmbedding",
    "PolyInput",
    "parse_cws",
    "parse_input",
    "read_inputs",
    "cws_to_points",
    "format_matrix",
    "format_cws",
]


class ParseError(LatpolyError):
    exit_code = 2


@dataclass(frozen=True)
class WeightSystem:
    d: int
    w: tuple[int, ...]


@dataclass(frozen=True)
class QuotientAction:
    order: int
    residues: tuple[int, ...]

    def __str__(self):
        return f"/Z{self.order}: " + " ".join(str(a) for a in self.residues)


@dataclass(frozen=True)
class CWS:
    systems: tuple[WeightSystem, ...]
    quotients: tuple[QuotientAction, ...] = ()

    @property
    def k(self) -> int:
        return len(self.systems)

    @property
    def N(self) -> int:
        return len(self.systems[0].w)

    @property
    def dim(self) -> int:
        return self.N - self.k

    def is_cy(self) -> bool:
        return all(sum(s.w) == s.d for s in self.systems)

    def __str__(self):
        return format_cws(self)


def format_cws(cws: CWS, lg: bool = False) -> str:
    if lg:
        s = cws.systems[0]
        txt = " ".join(str(x) for x in s.w) + f" {s.d}=d"
    else:
        txt = "  ".join(
            " ".join(str(x) for x in (s.d,) + s.w) for s in cws.systems
        )
    for q in cws.quotients:
        txt += " " + str(q)
    return txt


@dataclass
class PolyInput:
    """One parsed input record.  Exactly one of ``points`` / ``cws`` is set."""

    points: list[tuple[int, ...]] | None = None
    cws: CWS | None = None
    echo: str = ""

    @property
    def is_cws(self) -> bool:
        return self.cws is not None


_QUOT = re.compile(r"/Z(\d+)\s*:")


def parse_cws(text: str, lg: bool = False) -> CWS:
    """Parse ``d1 w11 .. w1N d2 w21 ..`` with optional ``/Zm: a1 .. aN`` suffixes."""
    parts = _QUOT.split(text)
    main = parts[0]
    try:
        nums = [int(t) for t in main.split()]
    except ValueError as exc:
        raise ParseError(f"malformed weight system: {text.strip()!r}") from exc
    if len(nums) < 3:
        raise ParseError("weight system needs a degree and at least two weights")
    if lg:
        systems = (_parse_lg(nums),)
    else:
        systems = _segment(nums)
    N = len(systems[0].w)
    quots = []
    for j in range(1, len(parts), 2):
        m = int(parts[j])
        try:
            res = tuple(int(t) for t in parts[j + 1].split())
        except ValueError as exc:
            raise ParseError("malformed quotient action") from exc
        if m < 1 or len(res) != N:
            raise ParseError(f"quotient action /Z{m} needs {N} residues")
        if any(not 0 <= a < m for a in res):
            raise ParseError(f"quotient residue out of range [0, {m})")
        quots.append(QuotientAction(m, res))
    for i in range(N):
        if all(s.w[i] == 0 for s in systems):
            raise ParseError(f"coordinate {i} has zero weight in every system")
    return CWS(systems, tuple(quots))


def _parse_lg(nums: list[int]) -> WeightSystem:
    d, w = nums[0], nums[1:]
    if d > max(w):
        return WeightSystem(d, tuple(w))
    d, w = nums[-1], nums[:-1]
    if d > max(w):
        return WeightSystem(d, tuple(w))
    raise ParseError("LG weight system: degree must exceed all weights")


def _segment(nums: list[int]) -> tuple[WeightSystem, ...]:
    # candidate lengths: the running sum first reaches d, optionally followed by zeros
    d = nums[0]
    s = 0
    first = None
    for i, x in enumerate(nums[1:], 1):
        if x < 0:
            raise ParseError(f"negative weight at offset {i}")
        s += x
        if s == d:
            first = i
            break
        if s > d:
            break
    if first is None:
        raise ParseError(f"weights never sum to the degree {d} (offset 0)")
    cands = [first]
    j = first + 1
    while j < len(nums) and nums[j] == 0:
        cands.append(j)
        j += 1
    for last in cands:
        N = last
        if len(nums) % (N + 1):
            continue
        blocks = [nums[k:k + N + 1] for k in range(0, len(nums), N + 1)]
        if all(b[0] > 0 and sum(b[1:]) == b[0] and min(b[1:]) >= 0 for b in blocks):
            return tuple(WeightSystem(b[0], tuple(b[1:])) for b in blocks)
    raise ParseError("cannot split input into weight systems with a common length")


def _tokens(stream: TextIO) -> Iterator[tuple[str, list[str]]]:
    for line in stream:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        yield s, s.split()


def read_inputs(stream: TextIO, lg: bool = False, prompt=None) -> Iterator[PolyInput]:
    """Iterate over all records of ``stream`` (matrix or (C)WS).

    ``prompt`` is called with ``None`` before each record and with the
    ``(rows, cols)`` header before the coordinates of a matrix are read.
    """
    lines = _tokens(stream)
    while True:
        if prompt:
            prompt(None)
        try:
            text, toks = next(lines)
        except StopIteration:
            return
        if len(toks) == 2 and "/" not in text:
            try:
                r, c = int(toks[0]), int(toks[1])
            except ValueError as exc:
                raise ParseError(f"bad header {text!r}") from exc
            if r < 1 or c < 1:
                raise ParseError(f"bad header {text!r}")
            check_dim(min(r, c))
            if prompt:
                prompt((r, c))
            vals: list[int] = []
            while len(vals) < r * c:
                try:
                    _, more = next(lines)
                except StopIteration:
                    raise ParseError(f"expected {r * c} coordinates, got {len(vals)}")
                try:
                    vals.extend(int(t) for t in more)
                except ValueError as exc:
                    raise ParseError("non-integer coordinate") from exc
            if len(vals) != r * c:
                raise ParseError(f"expected {r * c} coordinates, got {len(vals)}")
            rows = [vals[i * c:(i + 1) * c] for i in range(r)]
            if r <= c:
                # r coordinate lines with c points as columns
                pts = [tuple(rows[i][j] for i in range(r)) for j in range(c)]
                n = r
            else:
                pts = [tuple(row) for row in rows]
                n = c
            check_dim(n)
            for p in pts:
                for x in p:
                    check_int(x, "input coordinate")
            yield PolyInput(points=pts, echo="")
        else:
            cws = parse_cws(text, lg=lg)
            check_dim(cws.dim)
            yield PolyInput(cws=cws, echo=format_cws(cws, lg=lg))


def parse_input(stream: TextIO, lg: bool = False) -> PolyInput | None:
    """Read one record; ``None`` at end of stream."""
    for rec in read_inputs(stream, lg=lg):
        return rec
    return None


# ---------------------------------------------------------------------------
# CWS -> lattice points


class CwsEmbedding:
    """Lattice embedding of a (C)WS polytope.

    ``basis`` has rows b_l in Z^N spanning the (possibly refined by quotient
    actions) lattice of shifted solutions ``X - 1``; a solution maps to the
    coordinates x with ``X - 1 = sum_l x_l b_l``.
    """

    def __init__(self, cws: CWS):
        self.cws = cws
        W = [list(s.w) for s in cws.systems]
        if rank(W) != cws.k:
            raise LatpolyError("degree equations are linearly dependent")
        K = kernel_basis(W, cws.N)
        L = saturated_coords(K)  # z = L y for y in ker W
        for q in cws.quotients:
            K, L = _refine(K, L, q)
        self.basis = K
        self.coords = L

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_coords(self, X) -> tuple[int, ...]:
        y = [x - 1 for x in X]
        return tuple(matvec(self.coords, y))

    def from_coords(self, x) -> tuple[int, ...]:
        return tuple(sum(xl * b[i] for xl, b in zip(x, self.basis)) + 1
                     for i in range(self.cws.N))

    def coordinate_equations(self) -> list[tuple[tuple[int, ...], int]]:
        """Pullbacks of X_i >= 0 as inequalities ``a.x + 1 >= 0``."""
        return [(tuple(b[i] for b in self.basis), 1) for i in range(self.cws.N)]


def _refine(K, L, q: QuotientAction):
    """Sublattice of span(K) where sum a_i y_i = 0 mod m."""
    m = q.order
    b = [sum(k[i] * q.residues[i] for i in range(len(k))) % m for k in K]
    r = len(K)
    ker = kernel_basis([b + [m]], r + 1)
    Bz = [row[:r] for row in ker]
    newK = matmul(Bz, K)
    # coordinates: z = Bz^T w  =>  w = (Bz^T)^{-1} z
    inv = _rational_inverse(transpose(Bz))
    newL_frac = [[sum(inv[i][j] * L[j][c] for j in range(r)) for c in range(len(L[0]))]
                 for i in range(r)]
    return newK, newL_frac


def _rational_inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def _solutions(cws: CWS) -> list[tuple[int, ...]]:
    """All X in Z_{>=0}^N with w_j . X = d_j for every system j."""
    W = [s.w for s in cws.systems]
    D = [s.d for s in cws.systems]
    N = cws.N
    k = cws.k
    lim = get_limits()
    out: list[tuple[int, ...]] = []
    if k == 1:
        w = W[0]
        order = sorted(range(N), key=lambda i: -w[i])
        ws = [w[i] for i in order]
        X = [0] * N

        def rec(pos, r):
            if pos == N - 2:
                for a, b in _two_var(ws[pos], ws[pos + 1], r):
                    X[order[pos]] = a
                    X[order[pos + 1]] = b
                    out.append(tuple(X))
                    if len(out) > lim.point_nmax:
                        raise CapacityError("POINT_Nmax", len(out))
                X[order[pos]] = X[order[pos + 1]] = 0
                return
            wi = ws[pos]
            for x in range(r // wi + 1):
                X[order[pos]] = x
                rec(pos + 1, r - x * wi)
            X[order[pos]] = 0

        if N == 1:
            if D[0] % w[0] == 0:
                out.append((D[0] // w[0],))
        else:
            rec(0, D[0])
    else:
        X = [0] * N
        # suffix maxima so we can prune when remaining degrees cannot be reached
        suf = [[0] * (N + 1) for _ in range(k)]
        for j in range(k):
            for i in range(N - 1, -1, -1):
                suf[j][i] = max(suf[j][i + 1], W[j][i])

        def rec(i, r):
            if i == N:
                if not any(r):
                    out.append(tuple(X))
                    if len(out) > lim.point_nmax:
                        raise CapacityError("POINT_Nmax", len(out))
                return
            for j in range(k):
                if r[j] and suf[j][i] == 0:
                    return
            bound = min((r[j] // W[j][i] for j in range(k) if W[j][i]), default=0)
            for x in range(bound + 1):
                X[i] = x
                rec(i + 1, [r[j] - x * W[j][i] for j in range(k)])
            X[i] = 0

        rec(0, list(D))
    return out


def _two_var(wa: int, wb: int, r: int):
    """Nonnegative solutions of wa*a + wb*b = r."""
    if wa == 0 and wb == 0:
        return [(0, 0)] if r == 0 else []
    if wb == 0:
        return [(r // wa, 0)] if r % wa == 0 else []
    if wa == 0:
        return [(0, r // wb)] if r % wb == 0 else []
    g, x, y = xgcd(wa, wb)
    if r % g:
        return []
    sa, sb = wb // g, wa // g
    a0 = (x * (r // g)) % sa  # smallest nonnegative a
    res = []
    a = a0
    while a * wa <= r:
        rem = r - a * wa
        res.append((a, rem // wb))
        a += sa
    return res


def cws_to_points(cws: CWS) -> tuple[list[tuple[int, ...]], CwsEmbedding]:
    """Lattice points of the (C)WS polytope in coordinates of its lattice."""
    emb = CwsEmbedding(cws)
    sols = _solutions(cws)
    if not sols:
        raise LatpolyError("weight system has no nonnegative solutions")
    pts = []
    for X in sols:
        ok = True
        for q in cws.quotients:
            if sum(a * (x - 1) for a, x in zip(q.residues, X)) % q.order:
                ok = False
                break
        if not ok:
            continue
        x = emb.to_coords(X)
        for v in x:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise LatpolyError("quotient lattice coordinate is not integral")
        pts.append(tuple(int(v) for v in x))
    return pts, emb


# ---------------------------------------------------------------------------
# rendering


def format_matrix(rows, caption: str, width: int = 5, first_width: int | None = None,
                  header_dims: tuple[int, int] | None = None) -> str:
    """``"<r> <c>  <caption>"`` followed by the rows."""
    rows = [list(r) for r in rows]
    if header_dims is None:
        header_dims = (len(rows), len(rows[0]) if rows else 0)
    out = [f"{header_dims[0]} {header_dims[1]}  {caption}"]
    fw = width if first_width is None else first_width
    for r in rows:
        if not r:
            out.append("")
            continue
        out.append(f"{r[0]:{fw}d}" + "".join(f"{x:{width}d}" for x in r[1:]))
    return "\n".join(out)
