"""Normal forms of lattice polytopes under GL(n, Z), symmetries, and
upper triangular coordinate changes."""

from __future__ import annotations

from dataclasses import dataclass

from .core import LatpolyError, SpanError
from .hull import find_hull
from .intmat import hnf, rank

__all__ = [
    "NormalForm",
    "SymmetryCounts",
    "pairing_matrix_fv",
    "vpm_normal_form",
    "normal_form",
    "normal_form_data",
    "triangular_form",
    "symmetry_counts",
    "nf_key",
]


@dataclass(frozen=True)
class NormalForm:
    matrix: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def nv(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.matrix) for j in range(self.nv)]

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.matrix)


@dataclass(frozen=True)
class SymmetryCounts:
    n_lattice: int
    n_vpm: int


def pairing_matrix_fv(vertices, eqs) -> list[list[int]]:
    """Pairing matrix with rows = facets and columns = vertices."""
    out = []
    for e in eqs:
        a, c = e.a, e.c
        row = []
        for v in vertices:
            x = c
            for ai, vi in zip(a, v):
                x += ai * vi
            if x < 0:
                raise LatpolyError("negative pairing: inconsistent hull")
            row.append(x)
        out.append(row)
    return out


def vpm_normal_form(pm):
    """Lexicographically maximal form of ``pm`` under row and column permutations.

    Returns ``(pm_max, perms)`` where ``perms`` lists every column order
    (tuple of original column indices) attaining the maximum.
    """
    nf_rows = len(pm)
    nv = len(pm[0])
    # a state: (rows used as bitmask, column order, block boundaries)
    states = [(0, tuple(range(nv)), (0, nv))]
    best_rows = []
    for _step in range(nf_rows):
        best = None
        nxt = []
        for used, cols, bounds in states:
            for r in range(nf_rows):
                if used >> r & 1:
                    continue
                row = pm[r]
                key = []
                for b in range(0, len(bounds) - 1):
                    s, e = bounds[b], bounds[b + 1]
                    if e - s == 1:
                        key.append(row[cols[s]])
                    else:
                        key.extend(sorted((row[cols[j]] for j in range(s, e)), reverse=True))
                if best is not None:
                    if key < best:
                        continue
                    if key > best:
                        nxt = []
                best = key
                nxt.append((used | (1 << r), r, cols, bounds))
        best_rows.append(best)
        states = []
        seen = set()
        for used, r, cols, bounds in nxt:
            row = pm[r]
            newcols = []
            newb = [0]
            for b in range(0, len(bounds) - 1):
                s, e = bounds[b], bounds[b + 1]
                if e - s == 1:
                    newcols.append(cols[s])
                    newb.append(len(newcols))
                    continue
                blk = sorted(cols[s:e], key=lambda c: -row[c])
                prev = None
                for c in blk:
                    if prev is not None and row[c] != prev:
                        newb.append(len(newcols))
                    newcols.append(c)
                    prev = row[c]
                newb.append(len(newcols))
            st = (used, tuple(newcols), tuple(newb))
            if (used, st[1]) in seen:
                continue
            seen.add((used, st[1]))
            states.append(st)
    perms = sorted({cols for _, cols, _ in states})
    return [list(r) for r in best_rows], perms


def _column_reorder(pm_max) -> list[int]:
    """Position permutation sorting columns by (column max, column sum),
    realized by selection sort with transpositions."""
    nv = len(pm_max[0])
    mx = [max(r[j] for r in pm_max) for j in range(nv)]
    sm = [sum(r[j] for r in pm_max) for j in range(nv)]
    pos = list(range(nv))
    for i in range(nv):
        k = i
        for j in range(i + 1, nv):
            if mx[j] < mx[k] or (mx[j] == mx[k] and sm[j] < sm[k]):
                k = j
        if k != i:
            mx[i], mx[k] = mx[k], mx[i]
            sm[i], sm[k] = sm[k], sm[i]
            pos[i], pos[k] = pos[k], pos[i]
    return pos


def _flat(m):
    return tuple(x for r in m for x in r)


@dataclass
class NFData:
    """All intermediate results of a normal form computation."""

    vertices: list
    pm: list
    pm_max: list
    perms: list
    orders: list
    nf: NormalForm
    n_lattice: int


def normal_form_data(vertices, eqs=None) -> NFData:
    vertices = [tuple(v) for v in vertices]
    n = len(vertices[0])
    if eqs is None:
        h = find_hull(vertices)
        vertices = h.vertex_coords
        eqs = h.eqs
    pm = pairing_matrix_fv(vertices, eqs)
    pm_max, perms = vpm_normal_form(pm)
    pos = _column_reorder(pm_max)
    best = None
    best_count = 0
    orders = []
    for p in perms:
        order = [p[pos[i]] for i in range(len(p))]
        orders.append(order)
        M = [[vertices[j][i] for j in order] for i in range(n)]
        H = hnf(M, with_transform=False)
        key = _flat(H)
        if best is None or key < best[0]:
            best = (key, H)
            best_count = 1
        elif key == best[0]:
            best_count += 1
    H = best[1]
    if any(not any(r) for r in H):
        raise SpanError("vertices do not span the lattice dimension", rank(H))
    nf = NormalForm(tuple(tuple(r) for r in H))
    return NFData(vertices, pm, pm_max, perms, orders, nf, best_count)


def normal_form(points, eqs=None) -> NormalForm:
    """GL(n,Z) normal form of conv(points) (``points`` may be just vertices)."""
    if eqs is None:
        h = find_hull(points)
        return normal_form_data(h.vertex_coords, h.eqs).nf
    return normal_form_data(points, eqs).nf


def nf_key(nf: NormalForm) -> str:
    """Canonical one-line serialization."""
    return f"{nf.n} {nf.nv} " + " ".join(str(x) for r in nf.matrix for x in r)


def triangular_form(points):
    """``(G @ M, G)``: upper triangular form of the coordinate matrix ``M``
    (columns = points) with positive pivots and reduced entries above them."""
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    M = [[p[i] for p in pts] for i in range(n)]
    H, G = hnf(M)
    if any(not any(r) for r in H):
        raise SpanError("points do not span", rank(M))
    return H, G


def symmetry_counts(points, eqs=None) -> SymmetryCounts:
    if eqs is None:
        h = find_hull(points)
        d = normal_form_data(h.vertex_coords, h.eqs)
    else:
        d = normal_form_data(points, eqs)
    return SymmetryCounts(d.n_lattice, len(d.perms))
