"""Reflexive subpolytopes, sublattice polytopes, mirror statistics and a
bounded brute force enumeration of IP (combined) weight systems.

Two independent searches for reflexive subpolytopes are provided.

* :func:`subpolytopes` drops one vertex at a time (the lattice points of
  conv(R - v) are exactly R - v, so a step omits exactly one point) and
  keeps going through every IP polytope, up to a given depth.
* :func:`reflexive_subpolytopes` cuts with half spaces <x, y> >= -1.  Every
  reflexive Q strictly inside a lattice polytope R has a facet whose
  hyperplane cuts R and contains n independent points of R, so cutting by
  all such hyperplanes reaches every Q while visiting far fewer polytopes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations, permutations, product
from math import gcd

import numpy as np

from .core import LatpolyError, SpanError
from .faces import _dual_eqs
from .hull import complete_points, find_hull, ip_check, is_reflexive
from .intmat import hnf, kernel_basis, smith, solve_rational
from .normalform import NormalForm, nf_key, normal_form, normal_form_data
from .store import NFStore, parse_key
from .textio import CWS, WeightSystem, cws_to_points

__all__ = [
    "SearchStats",
    "subpolytopes",
    "reflexive_subpolytopes",
    "classify",
    "sublattice_scan",
    "mirror_stats",
    "MirrorStats",
    "brute_ws",
    "WSList",
    "brute_cws",
    "ip_cws",
    "ws_dedup",
    "ip_cws_list",
    "dual_nf",
]


@dataclass
class SearchStats:
    n_ip: int = 0  # IP tests performed
    n_hit: int = 0  # reflexive finds already in the store before the search
    n_nf: int = 0  # new reflexive normal forms
    n_states: int = 0  # distinct polytopes expanded
    seconds: float = 0.0

    def __iadd__(self, o):
        self.n_ip += o.n_ip
        self.n_hit += o.n_hit
        self.n_nf += o.n_nf
        self.n_states += o.n_states
        self.seconds += o.seconds
        return self


# ---------------------------------------------------------------------------
# vertex removal


def _hull_without(P: np.ndarray, mask: np.ndarray, verts: list[int], v: int):
    """Hull of the points ``P[mask]`` minus the vertex ``P[v]``.

    Only points outside conv(V - v) can become new vertices, so the hull is
    taken of the remaining old vertices together with that cap.
    """
    rest = [i for i in verts if i != v]
    try:
        h0 = find_hull(P[rest].tolist())
    except SpanError:
        idx = np.nonzero(mask)[0]
        idx = idx[idx != v]
        h = find_hull(P[idx].tolist())
        return h, [int(idx[i]) for i in h.vertices]
    A = np.array([e.a for e in h0.eqs], dtype=np.int64)
    c = np.array([e.c for e in h0.eqs], dtype=np.int64)
    m = mask.copy()
    m[v] = False
    out = np.nonzero(m & ((P @ A.T + c) < 0).any(axis=1))[0]
    idx = rest + [int(i) for i in out]
    h = find_hull(P[idx].tolist())
    return h, [idx[i] for i in h.vertices]


def subpolytopes(points, depth: int | None = None, store: NFStore | None = None,
                 dedup: str = "nf") -> tuple[NFStore, SearchStats]:
    """Reflexive polytopes obtained from conv(points) by dropping vertices.

    ``depth`` bounds the number of omitted points (None: no bound).  Visited
    polytopes are identified by their point set and, with ``dedup="nf"``,
    also by their normal form, which prunes symmetric copies (equivalent
    polytopes have equivalent subpolytopes at the same depth).
    The starting polytope itself counts when it is reflexive.
    """
    t0 = time.time()
    h = find_hull(points)
    P = np.array(complete_points(h.vertex_coords, h.eqs), dtype=np.int64)
    n = P.shape[1]
    hp = find_hull(P.tolist())
    store = NFStore(dim=n) if store is None else store
    found = NFStore(dim=n)
    st = SearchStats()

    def record(hh):
        key = nf_key(normal_form_data(hh.vertex_coords, hh.eqs).nf)
        if key in store and key not in found:
            st.n_hit += 1
        if found.add(key):
            st.n_nf += 1
        return key

    st.n_ip += 1
    if not ip_check(hp.eqs):
        st.seconds = time.time() - t0
        return found, st
    if is_reflexive(hp.eqs):
        record(hp)
    full = np.ones(len(P), dtype=bool)
    seen = {full.tobytes()}
    stack = [(full, list(hp.vertices), 0)]
    while stack:
        mask, verts, k = stack.pop()
        st.n_states += 1
        if depth is not None and k >= depth:
            continue
        for v in verts:
            m2 = mask.copy()
            m2[v] = False
            key = m2.tobytes()
            if key in seen:
                continue
            seen.add(key)
            hh, vv = _hull_without(P, mask, verts, v)
            st.n_ip += 1
            if not ip_check(hh.eqs):
                continue
            if dedup == "nf":
                key = nf_key(normal_form_data(hh.vertex_coords, hh.eqs).nf)
                if key in seen:
                    continue
                seen.add(key)
            if is_reflexive(hh.eqs):
                record(hh)
            stack.append((m2, vv, k + 1))
    for key in found:
        store.add(key)
    st.seconds = time.time() - t0
    return found, st


# ---------------------------------------------------------------------------
# cutting by distance-one half spaces


def _cut_normals(P: np.ndarray) -> np.ndarray:
    """All integral y with <x, y> = -1 on n independent points of P."""
    n = P.shape[1]
    pts = P.tolist()
    ys = set()
    nz = [i for i, p in enumerate(pts) if any(p)]
    for sub in combinations(nz, n):
        A = [pts[i] for i in sub]
        y = solve_rational(A, [-1] * n)
        if y is None or any(x.denominator != 1 for x in y):
            continue
        # solve_rational returns some solution; require uniqueness (independence)
        if _rank_int(A) < n:
            continue
        ys.add(tuple(int(x) for x in y))
    if not ys:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(sorted(ys), dtype=np.int64)


def _rank_int(A):
    from .intmat import rank

    return rank(A)


def reflexive_subpolytopes(points, store: NFStore | None = None, seen: set | None = None
                           ) -> tuple[NFStore, SearchStats]:
    """All reflexive lattice polytopes contained in conv(points), by cutting.

    ``seen`` (normal forms of already expanded polytopes) may be shared
    between calls; a start polytope already in it is not expanded again.
    """
    t0 = time.time()
    h = find_hull(points)
    P = np.array(complete_points(h.vertex_coords, h.eqs), dtype=np.int64)
    n = P.shape[1]
    store = NFStore(dim=n) if store is None else store
    found = NFStore(dim=n)
    seen = set() if seen is None else seen
    st = SearchStats()
    hp = find_hull(P.tolist())
    st.n_ip += 1
    if not ip_check(hp.eqs):
        st.seconds = time.time() - t0
        return found, st
    key0 = nf_key(normal_form_data(hp.vertex_coords, hp.eqs).nf)
    if key0 in seen:
        st.seconds = time.time() - t0
        return found, st
    seen.add(key0)

    def record(key):
        if key in store and key not in found:
            st.n_hit += 1
        if found.add(key):
            st.n_nf += 1

    if is_reflexive(hp.eqs):
        record(key0)
    Y = _cut_normals(P)
    G = P @ Y.T if len(Y) else np.zeros((len(P), 0), dtype=np.int64)
    masks = set()
    stack = [np.ones(len(P), dtype=bool)]
    while stack:
        m = stack.pop()
        st.n_states += 1
        Gm = G[m]
        cand = (Gm < -1).any(axis=0) & ((Gm == -1).sum(axis=0) >= n)
        for j in np.nonzero(cand)[0]:
            m2 = m & (G[:, j] >= -1)
            mk = m2.tobytes()
            if mk in masks:
                continue
            masks.add(mk)
            try:
                hh = find_hull(P[m2].tolist())
            except SpanError:
                continue
            st.n_ip += 1
            if not ip_check(hh.eqs):
                continue
            key = nf_key(normal_form_data(hh.vertex_coords, hh.eqs).nf)
            if key in seen:
                continue
            seen.add(key)
            if is_reflexive(hh.eqs):
                record(key)
            stack.append(m2)
    for key in found:
        store.add(key)
    st.seconds = time.time() - t0
    return found, st


def classify(polytopes, progress=None) -> tuple[NFStore, SearchStats]:
    """Reflexive subpolytopes of all given polytopes (lists of points).

    Larger polytopes go first so that smaller starts are usually reached
    as intermediate polytopes and need no separate expansion.
    """
    items = []
    for pts in polytopes:
        h = find_hull(pts)
        allp = complete_points(h.vertex_coords, h.eqs)
        items.append((len(allp), allp))
    items.sort(key=lambda t: -t[0])
    store = NFStore()
    seen: set = set()
    total = SearchStats()
    for i, (_, pts) in enumerate(items):
        _, st = reflexive_subpolytopes(pts, store, seen)
        total += st
        if progress:
            progress(i, len(items), st, len(store))
    return store, total


# ---------------------------------------------------------------------------
# sublattices and mirrors


def _intermediate_lattices(verts):
    """Bases (integer rows) of all lattices between <verts> and Z^n, the
    vertex lattice included and Z^n excluded."""
    n = len(verts[0])
    H = [r for r in hnf([list(v) for v in verts], with_transform=False) if any(r)]
    if len(H) < n:
        raise SpanError("vertices do not span", len(H))
    diag, U, V = smith(H)
    # Z^n / L is generated by the images of ...; enumerate subgroups of the
    # finite quotient through all lattices L' = L + span(g) iterated
    from fractions import Fraction

    index = 1
    for d in diag:
        index *= abs(d)
    if index == 1:
        return []
    # elements of Z^n / L: coset representatives by brute force over a box
    reps = _coset_reps(H)
    lattices = {}
    base_key = tuple(map(tuple, H))
    lattices[base_key] = H
    frontier = [H]
    while frontier:
        nxt = []
        for L in frontier:
            for r in reps:
                M = [row[:] for row in L] + [list(r)]
                L2 = [row for row in hnf(M, with_transform=False) if any(row)]
                k = tuple(map(tuple, L2))
                if k not in lattices:
                    lattices[k] = L2
                    nxt.append(L2)
        frontier = nxt
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return [L for k, L in lattices.items() if k != ident]


def _coset_reps(H):
    """Representatives of Z^n / rowspace(H) for H upper triangular (HNF)."""
    n = len(H)
    piv = []
    for r in H:
        piv.append(next(j for j, x in enumerate(r) if x))
    ranges = [range(abs(H[i][piv[i]])) for i in range(n)]
    out = []
    for c in product(*ranges):
        v = [0] * n
        for i in range(n):
            v[piv[i]] = c[i]
        if any(v):
            out.append(v)
    return out


def _coords_in(L, pts):
    """Coordinates of ``pts`` in the lattice basis ``L`` (rows)."""
    n = len(L)
    At = [[L[i][j] for i in range(n)] for j in range(n)]
    out = []
    for p in pts:
        y = solve_rational(At, list(p))
        if y is None or any(x.denominator != 1 for x in y):
            raise LatpolyError("point not in sublattice")
        out.append(tuple(int(x) for x in y))
    return out


def sublattice_scan(store: NFStore, progress=None) -> NFStore:
    """Polytopes of the store on intermediate lattices that are not in the store.

    A reflexive polytope stays reflexive on every lattice between its vertex
    lattice and the ambient one, so each such lattice gives a candidate.
    """
    out = NFStore(dim=store.dim)
    for i, nf in enumerate(store.normal_forms()):
        verts = nf.columns()
        for L in _intermediate_lattices(verts):
            new = _coords_in(L, verts)
            key = nf_key(normal_form(new))
            if key not in store:
                out.add(key)
        if progress:
            progress(i, len(store))
    return out


def dual_nf(nf: NormalForm | str) -> str:
    if isinstance(nf, str):
        nf = parse_key(nf)
    verts = nf.columns()
    h = find_hull(verts)
    if not is_reflexive(h.eqs):
        raise LatpolyError("dual of a non-reflexive polytope")
    return nf_key(normal_form([e.a for e in h.eqs], _dual_eqs(h.vertex_coords)))


@dataclass
class MirrorStats:
    pairs: int
    selfdual: int
    missing: list = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return not self.missing


def mirror_stats(store: NFStore) -> MirrorStats:
    """Count mirror pairs and self-dual polytopes; list missing mirrors."""
    keys = set(store.keys())
    pairs = selfd = 0
    missing = []
    for k in store.keys():
        d = dual_nf(k)
        if d == k:
            selfd += 1
        elif d in keys:
            if k < d:
                pairs += 1
        else:
            missing.append(d)
    return MirrorStats(pairs, selfd, sorted(set(missing)))


# ---------------------------------------------------------------------------
# weight systems


def _partitions(total: int, k: int, smallest: int = 1):
    if k == 1:
        if total >= smallest:
            yield (total,)
        return
    for a in range(smallest, total // k + 1):
        for rest in _partitions(total - a, k - 1, a):
            yield (a,) + rest


def _has_solution(d: int, w: tuple[int, ...]) -> bool:
    """Whether sum w_i X_i = d has a nonnegative solution (d >= 0)."""
    reach = 1
    mask = (1 << (d + 1)) - 1
    for x in w:
        r = reach
        s = x
        while s <= d:
            r |= reach << s
            s += x
        reach = r & mask
    return bool(reach >> d & 1)


def _ws_prefilter(d: int, w: tuple[int, ...]) -> bool:
    """Necessary conditions for IP: every coordinate takes the values 0 and
    some value >= 2 on the solution set."""
    for i, wi in enumerate(w):
        others = w[:i] + w[i + 1:]
        if not _has_solution(d, others):
            return False
        if 2 * wi > d or not _has_solution(d - 2 * wi, w):
            return False
    return True


def ip_cws(cws: CWS) -> bool:
    """IP property of the polytope of a (combined) weight system."""
    pts, _ = cws_to_points(cws)
    try:
        h = find_hull(pts)
    except SpanError:
        return False
    return ip_check(h.eqs)


class WSList(list):
    """List of weight systems that remembers how it was bounded.

    ``inconclusive`` is set when the last IP system was found too close to
    the degree bound (bound < 3/2 of its degree) for the list to be trusted
    as complete.
    """

    def __init__(self, items=(), bound: int = 0):
        super().__init__(items)
        self.bound = bound

    @property
    def last_degree(self) -> int:
        return max((ws.d for ws in self), default=0)

    @property
    def inconclusive(self) -> bool:
        return 2 * self.bound < 3 * self.last_degree


def brute_ws(dim: int, degree_bound: int) -> WSList:
    """All IP weight systems with dim+1 weights and degree <= degree_bound.

    Weights are sorted ascending with gcd 1 and d = sum of weights.
    """
    out = WSList(bound=degree_bound)
    k = dim + 1
    for d in range(k, degree_bound + 1):
        for w in _partitions(d, k):
            if reduce(gcd, w) != 1 or not _ws_prefilter(d, w):
                continue
            ws = WeightSystem(d, w)
            if ip_cws(CWS((ws,), ())):
                out.append(ws)
    return out


def _canonical_cws(rows, N):
    """Representative of a combination of rows under coordinate permutations
    and row reordering (rows given as (d, weight tuple)).

    For a fixed row order, sorting the columns removes the coordinate
    permutation; the minimum over row orders is then canonical.
    """
    best = None
    for order in permutations(rows):
        cols = sorted(zip(*(w for _, w in order)))
        key = (tuple(d for d, _ in order), tuple(cols))
        if best is None or key < best:
            best = key
    ds, cols = best
    return tuple((d, tuple(c[r] for c in cols)) for r, d in enumerate(ds))


def _minimal_config(rows, N) -> bool:
    """The points v_i with relations given by the rows: dropping any of them
    must lose the IP property of their convex hull."""
    W = [list(w) for _, w in rows]
    K = kernel_basis(W, N)  # rows span the orthogonal complement; v_i = column i
    vs = [tuple(r[i] for r in K) for i in range(N)]
    for i in range(N):
        rest = vs[:i] + vs[i + 1:]
        try:
            h = find_hull(rest)
        except SpanError:
            continue
        if ip_check(h.eqs):
            return False
    return True


def brute_cws(dim: int, max_rows: int | None = None) -> list[CWS]:
    """Candidate combined weight systems (k >= 2) of dimension ``dim``.

    Each row is an IP weight system of lower dimension placed on a subset of
    the coordinates; the rows cover all N = dim + k coordinates, are
    independent, and the points v_i they relate form a minimal IP
    configuration.  Results are distinct up to coordinate permutations.
    """
    lower = []
    for dd in range(1, dim):
        bound = {1: 2, 2: 6}.get(dd, 0)
        if not bound:
            raise LatpolyError("brute_cws is implemented for dim <= 3")
        lower.extend(brute_ws(dd, bound))
    max_rows = max_rows or dim
    seen = set()
    out = []
    for k in range(2, max_rows + 1):
        N = dim + k
        row_opts = sorted({r for ws in lower for r in _placements(ws, range(N), N)})
        # by symmetry one row may be placed on the leading coordinates
        firsts = sorted({r for ws in lower for r in _placements(ws, range(len(ws.w)), N)})
        for r0 in firsts:
            for rest in _covering(row_opts, k - 1, N, [r0]):
                combo = [r0] + rest
                if _rank([list(r[1]) for r in combo]) != k:
                    continue
                key = _canonical_cws(combo, N)
                if key in seen:
                    continue
                seen.add(key)
                if not _minimal_config(combo, N):
                    continue
                out.append(CWS(tuple(WeightSystem(d, w) for d, w in key), ()))
    return out


def _placements(ws, coords, N):
    for supp in permutations(coords, len(ws.w)):
        w = [0] * N
        for i, x in zip(supp, ws.w):
            w[i] = x
        yield (ws.d, tuple(w))


def _covering(opts, k, N, chosen, start=0):
    """Increasing k-subsets of ``opts`` that together with ``chosen`` cover
    all N coordinates."""
    covered = {i for _, w in chosen for i in range(N) if w[i]}
    if k == 0:
        if len(covered) == N:
            yield []
        return
    if N - len(covered) > 3 * k:
        return
    for j in range(start, len(opts)):
        r = opts[j]
        for tail in _covering(opts, k - 1, N, chosen + [r], j + 1):
            yield [r] + tail


def _rank(m):
    from .intmat import rank

    return rank(m)


def ws_dedup(systems) -> int:
    """Number of distinct polytopes among the given (C)WS of one dimension."""
    keys = set()
    dim = None
    for s in systems:
        cws = s if isinstance(s, CWS) else CWS((s,), ())
        if dim is None:
            dim = cws.dim
        elif cws.dim != dim:
            raise LatpolyError(f"dimension mismatch: {dim} vs {cws.dim}")
        pts, _ = cws_to_points(cws)
        keys.add(nf_key(normal_form(pts)))
    return len(keys)


def ip_cws_list(dim: int = 3, degree_bound: int = 100) -> list[CWS]:
    """IP weight systems up to ``degree_bound`` plus IP combined systems."""
    out = [CWS((ws,), ()) for ws in brute_ws(dim, degree_bound)]
    out.extend(c for c in brute_cws(dim) if ip_cws(c))
    return out
