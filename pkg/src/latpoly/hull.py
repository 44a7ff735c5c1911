"""Vertex and facet enumeration, IP/reflexivity tests, duals and point completion.

The hull is built by incremental insertion (a double description scheme):
the facets of a seed simplex are refined by inserting the remaining points
one at a time.  Adjacency of facets is decided combinatorially from the
bit masks of inserted points lying on each facet.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from .core import (
    ArithmeticOverflow,
    CapacityError,
    ConsistencyError,
    HyperplaneEq,
    LatpolyError,
    ReflexivityError,
    SpanError,
    check_dim,
    check_int,
    check_wide,
    get_limits,
)
from .intmat import affine_hull_equations, det, rank

__all__ = [
    "Hull",
    "find_hull",
    "ip_check",
    "is_reflexive",
    "dual_poly",
    "complete_points",
    "polytope_points",
    "span_check",
    "facet_masks",
]


class Hull:
    """Result of :func:`find_hull`.

    ``vertices`` are indices into the input point list (first occurrence of
    duplicates), in increasing order; ``eqs`` are the facet equations.
    """

    __slots__ = ("points", "vertices", "eqs")

    def __init__(self, points, vertices, eqs):
        self.points = points
        self.vertices = vertices
        self.eqs = eqs

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def vertex_coords(self) -> list[tuple[int, ...]]:
        return [self.points[i] for i in self.vertices]

    def __iter__(self):
        yield self.vertices
        yield self.eqs

    def __repr__(self):
        return f"Hull(nv={len(self.vertices)}, ne={len(self.eqs)})"


def _as_tuples(points) -> list[tuple[int, ...]]:
    if isinstance(points, np.ndarray):
        return [tuple(int(x) for x in row) for row in points.tolist()]
    return [tuple(int(x) for x in p) for p in points]


def _gram_det(diffs: list[list[int]]) -> int:
    g = [[sum(x * y for x, y in zip(u, v)) for v in diffs] for u in diffs]
    return det(g)


def _seed_simplex(pts: list[tuple[int, ...]], n: int) -> list[int]:
    """Greedy maximal-volume simplex: start at point 0, repeatedly add the
    point maximizing the Gram determinant of the edge vectors."""
    p0 = pts[0]
    chosen = [0]
    diffs: list[list[int]] = []
    for _ in range(n):
        best, best_val = -1, 0
        for i, p in enumerate(pts):
            d = [x - y for x, y in zip(p, p0)]
            if not any(d):
                continue
            val = _gram_det(diffs + [d])
            if val > best_val:
                best, best_val = i, val
        if best < 0:
            break
        chosen.append(best)
        diffs.append([x - y for x, y in zip(pts[best], p0)])
    return chosen


def _simplex_facets(pts, idx: list[int], n: int):
    """Facets of the simplex spanned by ``pts[idx]``; facet k is opposite idx[k]."""
    out = []
    for k in range(n + 1):
        on = [pts[idx[j]] for j in range(n + 1) if j != k]
        a = _normal_through(on, n)
        c = -sum(x * y for x, y in zip(a, on[0]))
        opp = pts[idx[k]]
        if sum(x * y for x, y in zip(a, opp)) + c < 0:
            a = [-x for x in a]
            c = -c
        mask = 0
        for j in range(n + 1):
            if j != k:
                mask |= 1 << j
        out.append((a, c, mask))
    return out


def _normal_through(on: list[tuple[int, ...]], n: int) -> list[int]:
    """Primitive normal of the hyperplane through n affinely independent points."""
    p0 = on[0]
    rows = [[x - y for x, y in zip(p, p0)] for p in on[1:]]
    # cofactor expansion: a_i = (-1)^i det(rows without column i)
    if n == 1:
        a = [1]
    else:
        a = []
        for i in range(n):
            minor = [r[:i] + r[i + 1:] for r in rows]
            a.append((-1) ** i * det(minor))
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        raise ConsistencyError("degenerate simplex facet")
    return [x // g for x in a]


def find_hull(points, check_span: bool = True) -> Hull:
    """Vertices and facet equations of the convex hull of ``points``."""
    pts_in = _as_tuples(points)
    if not pts_in:
        raise SpanError("empty point list", 0, [])
    n = len(pts_in[0])
    check_dim(n)
    lim = get_limits()
    if len(pts_in) > lim.point_nmax:
        raise CapacityError("POINT_Nmax", len(pts_in))
    for p in pts_in:
        for x in p:
            check_int(x, "find_hull input")
    first: dict[tuple[int, ...], int] = {}
    for i, p in enumerate(pts_in):
        first.setdefault(p, i)
    uniq = list(first)
    orig = list(first.values())

    seed = _seed_simplex(uniq, n)
    if len(seed) < n + 1:
        eqs = affine_hull_equations(uniq)
        raise SpanError(
            f"points span only dimension {len(seed) - 1} < {n}", len(seed) - 1, eqs
        )
    verts, eqs = _dd_hull(uniq, n, seed)
    if len(verts) == n + 1 and all(e.c > 0 for e in eqs):
        eqs = _opposite_order(eqs, [uniq[i] for i in sorted(verts)])
    return Hull(pts_in, sorted(orig[i] for i in verts), eqs)


def _opposite_order(eqs, verts):
    """Simplices with the origin in the interior list facet k opposite vertex k."""
    out = []
    for v in verts:
        for e in eqs:
            if sum(a * x for a, x in zip(e.a, v)) + e.c != 0:
                out.append(e)
                break
    return out


def _dd_hull(pts: list[tuple[int, ...]], n: int, seed: list[int]):
    """Core incremental hull on deduplicated points.  Returns (vertex idx, eqs)."""
    # working slot k <-> point index slots[k]
    slots = list(seed)
    # seed facets are listed starting with the one opposite the last seed point
    facets = _simplex_facets(pts, seed, n)[::-1]
    in_seed = set(seed)
    rest = [i for i in range(len(pts)) if i not in in_seed]
    if len(rest) > 64:
        rest = _prefilter(pts, rest, facets)
    wide_max = get_limits().wide_max
    for i in rest:
        p = pts[i]
        vals = []
        outside = False
        for a, c, _ in facets:
            v = c
            for ai, xi in zip(a, p):
                v += ai * xi
            vals.append(v)
            if v < 0:
                outside = True
        if not outside:
            continue
        bit = 1 << len(slots)
        slots.append(i)
        plus, minus = [], []
        for f, v in zip(facets, vals):
            if v < 0:
                minus.append((f, v))
            elif v > 0:
                plus.append((f, v))
        all_masks = [f[2] for f in facets]
        new = []
        for fp, vp in plus:
            mp = fp[2]
            for fm, vm in minus:
                s = mp & fm[2]
                if s.bit_count() < n - 1:
                    continue
                adjacent = True
                for m in all_masks:
                    if m & s == s and m != mp and m != fm[2]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                a = [vp * x - vm * y for x, y in zip(fm[0], fp[0])]
                c = vp * fm[1] - vm * fp[1]
                for x in a:
                    if x > wide_max or x < -wide_max - 1:
                        raise ArithmeticOverflow("facet join", x, get_limits().wide_bits)
                check_wide(c, "facet join")
                g = 0
                for x in a:
                    g = gcd(g, x)
                if g == 0 or c % g:
                    raise ConsistencyError("facet join produced an invalid equation")
                new.append(([x // g for x in a], c // g, s | bit))
        # discarded facets are replaced by the current last one (swap-remove)
        kept = [(f[0], f[1], f[2] | bit) if v == 0 else f for f, v in zip(facets, vals)]
        kv = list(vals)
        k = 0
        while k < len(kept):
            if kv[k] < 0:
                kept[k] = kept[-1]
                kv[k] = kv[-1]
                kept.pop()
                kv.pop()
            else:
                k += 1
        facets = kept + new
        if len(facets) > get_limits().eq_nmax:
            raise CapacityError("EQUA_Nmax", len(facets))

    # vertices: inserted points whose facet incidences isolate them
    allbits = (1 << len(slots)) - 1
    verts = []
    for k, i in enumerate(slots):
        bit = 1 << k
        inter = allbits
        for _, _, m in facets:
            if m & bit:
                inter &= m
        if inter == bit:
            verts.append(i)
    if len(verts) > get_limits().vert_nmax:
        raise CapacityError("VERT_Nmax", len(verts))
    eqs = []
    for a, c, _ in facets:
        eqs.append(HyperplaneEq(tuple(check_int(x, "facet") for x in a), check_int(c, "facet")))
    return verts, eqs


def _prefilter(pts, rest, facets):
    """Drop points inside the seed simplex (vectorized where int64 is safe)."""
    arr = [pts[i] for i in rest]
    bound = max(max(abs(x) for p in arr for x in p), 1)
    amax = max(max(abs(x) for x in f[0]) + abs(f[1]) for f in facets)
    n = len(arr[0])
    if bound * amax * (n + 1) >= 2 ** 62:
        return rest
    X = np.array(arr, dtype=np.int64)
    A = np.array([f[0] for f in facets], dtype=np.int64)
    C = np.array([f[1] for f in facets], dtype=np.int64)
    E = X @ A.T + C
    out = (E < 0).any(axis=1)
    return [rest[k] for k in np.nonzero(out)[0].tolist()]


def ip_check(eqs) -> bool:
    """True iff the origin is an interior point (all c > 0)."""
    return all(e.c > 0 for e in eqs)


def is_reflexive(eqs) -> bool:
    return all(e.c == 1 for e in eqs)


def dual_poly(eqs) -> list[tuple[int, ...]]:
    """Vertices of the dual polytope (requires reflexivity)."""
    if not is_reflexive(eqs):
        raise ReflexivityError("dual polytope requires reflexive input")
    return [tuple(e.a) for e in eqs]


def facet_masks(points, eqs) -> list[int]:
    """Per point, the bit mask of facets containing it."""
    out = []
    for p in _as_tuples(points):
        m = 0
        for j, e in enumerate(eqs):
            if sum(x * y for x, y in zip(e.a, p)) + e.c == 0:
                m |= 1 << j
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# lattice point completion


def _projection_eqs(verts: list[tuple[int, ...]], k: int):
    """Facet equations of the projection of conv(verts) to the first k coords."""
    proj = list(dict.fromkeys(v[:k] for v in verts))
    if k == 1:
        lo = min(p[0] for p in proj)
        hi = max(p[0] for p in proj)
        return [HyperplaneEq((1,), -lo), HyperplaneEq((-1,), hi)]
    return find_hull(proj).eqs


def _fits_int64(verts, eq_lists) -> bool:
    vmax = max(max(abs(x) for x in v) for v in verts) + 1
    for eqs in eq_lists:
        for e in eqs:
            amax = max(abs(x) for x in e.a) + 1
            if amax * vmax * (len(e.a) + 1) + abs(e.c) >= 2 ** 62:
                return False
    return True


def complete_points(verts, eqs=None, as_array: bool = False):
    """All lattice points of conv(verts), in lexicographic order.

    Enumerates coordinate by coordinate, using the exact projections of
    the polytope to the leading coordinates to bound each new coordinate.
    """
    verts = _as_tuples(verts)
    n = len(verts[0])
    lim = get_limits()
    proj = [_projection_eqs(verts, k) for k in range(1, n)]
    if eqs is None:
        eqs = find_hull(verts).eqs
    proj.append(list(eqs))
    if not _fits_int64(verts, proj):
        pts = _complete_exact(proj, n)
        return np.array(pts, dtype=object) if as_array else pts
    cur = np.zeros((1, 0), dtype=np.int64)
    for k in range(n):
        peqs = proj[k]
        A = np.array([e.a for e in peqs], dtype=np.int64)
        C = np.array([e.c for e in peqs], dtype=np.int64)
        ak = A[:, k]
        base = cur @ A[:, :k].T + C if k else np.broadcast_to(C, (1, len(C))).copy()
        pos = ak > 0
        neg = ak < 0
        # a_k x + base >= 0
        if pos.any():
            lo = (-(base[:, pos]) + ak[pos] - 1) // ak[pos]  # ceil(-base/a)
            lo = lo.max(axis=1)
        else:
            raise ConsistencyError("unbounded projection")
        if neg.any():
            hi = base[:, neg] // (-ak[neg])  # floor(base/|a|)
            hi = hi.min(axis=1)
        else:
            raise ConsistencyError("unbounded projection")
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        if total > lim.point_nmax:
            raise CapacityError("POINT_Nmax", total)
        keep = cnt > 0
        cur, lo, cnt = cur[keep], lo[keep], cnt[keep]
        rep = np.repeat(np.arange(len(cur)), cnt)
        starts = np.repeat(np.cumsum(cnt) - cnt, cnt)
        offs = np.arange(total, dtype=np.int64) - starts
        newc = lo[rep] + offs
        cur = np.concatenate([cur[rep], newc[:, None]], axis=1)
    if as_array:
        return cur
    return [tuple(r) for r in cur.tolist()]


def _complete_exact(proj, n):
    lim = get_limits()
    out = []

    def rec(prefix, k):
        peqs = proj[k]
        lo, hi = None, None
        for e in peqs:
            ak = e.a[k]
            base = e.c + sum(x * y for x, y in zip(e.a, prefix))
            if ak > 0:
                b = -((base) // ak)  # ceil(-base/ak)
                lo = b if lo is None else max(lo, b)
            elif ak < 0:
                b = base // (-ak)
                hi = b if hi is None else min(hi, b)
        for x in range(lo, hi + 1):
            if k == n - 1:
                out.append(tuple(prefix) + (x,))
                if len(out) > lim.point_nmax:
                    raise CapacityError("POINT_Nmax", len(out))
            else:
                rec(prefix + [x], k + 1)

    rec([], 0)
    return out


def polytope_points(points) -> tuple[Hull, list[tuple[int, ...]]]:
    """Hull of ``points`` together with all lattice points of the hull."""
    h = find_hull(points)
    return h, complete_points(h.vertex_coords, h.eqs)


def span_check(embedding, eqs) -> bool:
    """True iff every coordinate hyperplane X_i = 0 pulls back to a facet."""
    if embedding is None:
        raise LatpolyError("span check applies only to (C)WS input")
    eqset = {(tuple(e.a), e.c) for e in eqs}
    for a, c in embedding.coordinate_equations():
        g = 0
        for x in a:
            g = gcd(g, x)
        if g == 0:
            return False
        if c % g:
            return False
        if (tuple(x // g for x in a), c // g) not in eqset:
            return False
    return True
