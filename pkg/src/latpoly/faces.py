"""Face lattice from incidence bit masks, and Hodge data of reflexive polytopes.

Faces are stored as pairs of integer bit masks: the vertices they contain
and the facets containing them.  For a reflexive polytope the facets of P
are the vertices of the dual, so the same masks describe the dual face.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import CapacityError, LatpolyError, ReflexivityError, get_limits
from .hull import complete_points, find_hull, is_reflexive

__all__ = [
    "Face",
    "FaceLattice",
    "face_lattice",
    "HodgeData",
    "hodge",
    "ReflexivePair",
    "reflexive_pair",
    "point_masks",
    "format_incidences",
]


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_bits: int
    facet_bits: int


class FaceLattice:
    """All faces of P grouped by dimension (``faces[d]``, 0 <= d <= n-1)."""

    def __init__(self, n, nv, ne, faces):
        self.n = n
        self.nv = nv
        self.ne = ne
        self.faces = faces

    def f_vector(self) -> list[int]:
        return [len(self.faces[d]) for d in range(self.n)]

    def __iter__(self):
        for d in range(self.n):
            yield from self.faces[d]


def face_lattice(vertices, eqs) -> FaceLattice:
    """Enumerate faces by repeatedly intersecting with facets."""
    vertices = [tuple(v) for v in vertices]
    n = len(vertices[0])
    nv, ne = len(vertices), len(eqs)
    vbits_of_facet = []
    for e in eqs:
        m = 0
        for i, v in enumerate(vertices):
            if sum(a * x for a, x in zip(e.a, v)) + e.c == 0:
                m |= 1 << i
        vbits_of_facet.append(m)
    fbits_of_vertex = [0] * nv
    for j, m in enumerate(vbits_of_facet):
        for i in range(nv):
            if m >> i & 1:
                fbits_of_vertex[i] |= 1 << j

    def facets_containing(vm):
        fm = (1 << ne) - 1
        i = 0
        while vm:
            if vm & 1:
                fm &= fbits_of_vertex[i]
            vm >>= 1
            i += 1
        return fm

    cap = get_limits().face_nmax
    faces: list[list[Face]] = [[] for _ in range(n)]
    cur = {vbits_of_facet[j]: 1 << j for j in range(ne)}
    total = 0
    for d in range(n - 1, -1, -1):
        level = []
        for vm in cur:
            level.append(Face(d, vm, facets_containing(vm)))
        level.sort(key=lambda f: f.vertex_bits)
        faces[d] = level
        total += len(level)
        if total > cap:
            raise CapacityError("FACE_Nmax", total)
        if d == 0:
            break
        nxt: dict[int, int] = {}
        for f in level:
            cands = set()
            for j in range(ne):
                if f.facet_bits >> j & 1:
                    continue
                g = f.vertex_bits & vbits_of_facet[j]
                if g:
                    cands.add(g)
            for g in cands:
                if not any(h != g and h & g == g for h in cands):
                    nxt[g] = 0
        cur = nxt
    for f in faces[0]:
        if f.vertex_bits & (f.vertex_bits - 1):
            raise LatpolyError("face lattice: vertex face with several vertices")
    return FaceLattice(n, nv, ne, faces)


def point_masks(points, normals, offsets) -> np.ndarray:
    """For each point, bit mask (as Python int) of the hyperplanes it lies on.

    Returns an object array of ints when more than 62 hyperplanes are involved.
    """
    P = np.asarray(points)
    A = np.asarray(normals)
    C = np.asarray(offsets)
    if P.dtype == object or A.dtype == object:
        rows = []
        for p in points:
            m = 0
            for j, (a, c) in enumerate(zip(normals, offsets)):
                if sum(x * y for x, y in zip(a, p)) + c == 0:
                    m |= 1 << j
            rows.append(m)
        return np.array(rows, dtype=object)
    Z = (P.astype(np.int64) @ A.astype(np.int64).T + C.astype(np.int64)) == 0
    k = Z.shape[1]
    if k <= 62:
        w = (np.int64(1) << np.arange(k, dtype=np.int64))
        return (Z.astype(np.int64) * w).sum(axis=1)
    out = np.zeros(len(Z), dtype=object)
    for j in range(k):
        out[Z[:, j]] = out[Z[:, j]] + (1 << j)
    return out


@dataclass
class HodgeData:
    n: int
    h11: int | None = None
    h21: int | None = None
    h12: int | None = None
    h13: int | None = None
    h22: int | None = None
    chi: int | None = None
    pic: int | None = None
    cor: int | None = None

    def tag(self) -> str:
        if self.n == 3:
            return f"Pic:{self.pic} Cor:{self.cor}"
        if self.n == 4:
            return f"H:{self.h11},{self.h21} [{self.chi}]"
        if self.n == 5:
            return f"H:{self.h11},{self.h12},{self.h13} [{self.chi}]"
        return ""

    def numbers(self) -> str:
        if self.n == 4:
            return f"{self.h11},{self.h21} [{self.chi}]"
        if self.n == 5:
            return f"{self.h11},{self.h12},{self.h13} [{self.chi}]"
        return ""


class ReflexivePair:
    """A reflexive polytope with its dual, lattice points and face data."""

    def __init__(self, vertices, eqs, points=None, dual_points=None):
        self.vertices = [tuple(v) for v in vertices]
        self.eqs = list(eqs)
        if not is_reflexive(self.eqs):
            raise ReflexivityError("polytope is not reflexive")
        self.n = len(self.vertices[0])
        self.dual_vertices = [tuple(e.a) for e in self.eqs]
        if points is None:
            points = complete_points(self.vertices, self.eqs, as_array=True)
        if dual_points is None:
            deqs = _dual_eqs(self.vertices)
            dual_points = complete_points(self.dual_vertices, deqs, as_array=True)
        self.points = points
        self.dual_points = dual_points
        self._lattice = None
        self._pt_count = None
        self._dpt_count = None

    @property
    def lattice(self) -> FaceLattice:
        if self._lattice is None:
            self._lattice = face_lattice(self.vertices, self.eqs)
        return self._lattice

    def _interior_counts(self):
        if self._pt_count is None:
            A = [e.a for e in self.eqs]
            C = [e.c for e in self.eqs]
            pm = point_masks(self.points, A, C)
            self._pt_count = Counter(pm.tolist())
            dm = point_masks(self.dual_points, self.vertices, [1] * len(self.vertices))
            self._dpt_count = Counter(dm.tolist())
        return self._pt_count, self._dpt_count

    def l_star(self, face: Face) -> int:
        return self._interior_counts()[0].get(face.facet_bits, 0)

    def l_star_dual(self, face: Face) -> int:
        """Interior points of the dual face of ``face``."""
        return self._interior_counts()[1].get(face.vertex_bits, 0)

    def hodge(self) -> HodgeData:
        return hodge(self)


def _dual_eqs(vertices):
    from .core import HyperplaneEq

    return [HyperplaneEq(tuple(v), 1) for v in vertices]


def reflexive_pair(points) -> ReflexivePair:
    h = find_hull(points)
    return ReflexivePair(h.vertex_coords, h.eqs)


def hodge(rp: ReflexivePair) -> HodgeData:
    """Hodge data of the Calabi-Yau hypersurface (n = 3, 4, 5)."""
    n = rp.n
    if n not in (3, 4, 5):
        raise LatpolyError(f"Hodge data not implemented in dimension {n}")
    L = rp.lattice
    lP = len(rp.points)
    lD = len(rp.dual_points)

    def pair_sum(dim):
        return sum(rp.l_star(f) * rp.l_star_dual(f) for f in L.faces[dim])

    # facets of P* <-> vertices of P; facets of P <-> vertices of P*
    sum_dual_facets = sum(rp.l_star_dual(f) for f in L.faces[0])
    sum_facets = sum(rp.l_star(f) for f in L.faces[n - 1])
    if n == 3:
        cor = pair_sum(1)
        pic = lD - 4 - sum_dual_facets + cor
        return HodgeData(3, pic=pic, cor=cor)
    h11 = lD - n - 1 - sum_dual_facets + pair_sum(1)
    hn1 = lP - n - 1 - sum_facets + pair_sum(n - 2)
    if n == 4:
        return HodgeData(4, h11=h11, h21=hn1, chi=2 * (h11 - hn1))
    h12 = pair_sum(2)
    h13 = hn1
    chi = 6 * (8 + h11 + h13 - h12)
    h22 = 2 * (22 + 2 * h11 + 2 * h13 - h12)
    return HodgeData(5, h11=h11, h12=h12, h13=h13, h22=h22, chi=chi)


def format_incidences(L: FaceLattice) -> str:
    """Per dimension, each face as hex vertex mask and hex facet mask."""
    out = []
    for d in range(L.n):
        fs = L.faces[d]
        out.append(f"dim={d} #faces={len(fs)}")
        out.append(" ".join(f"{f.vertex_bits:x}/{f.facet_bits:x}" for f in fs))
    return "\n".join(out)
