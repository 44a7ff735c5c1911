"""IP simplices, lattice quotients of simplices, reflexive sections
(fibrations) of the dual polytope, and free quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .core import CapacityError, LatpolyError, ReflexivityError
from .hull import complete_points, dual_poly, find_hull, is_reflexive
from .intmat import hnf, inverse_unimodular, kernel_basis, matvec, saturated_coords, smith, solve_integer
from .textio import QuotientAction

__all__ = [
    "IPSimplex",
    "ip_simplices",
    "simplex_quotient",
    "canonical_action",
    "Section",
    "section",
    "FibrationRecord",
    "fiber_scan",
    "all_fibrations",
    "fiber_basis",
    "FreeQuotient",
    "free_quotient_scan",
]

SUBSET_CAP = 2_000_000


@dataclass(frozen=True)
class IPSimplex:
    indices: tuple[int, ...]
    weights: tuple[int, ...]  # one entry per listed point, zero off the simplex
    d: int
    codim: int


def ip_simplices(points, max_codim: int | None = None, min_codim: int = 0) -> list[IPSimplex]:
    """All IP simplices whose vertices are among ``points`` (origin excluded).

    A simplex is an independent set I together with one more point p in the
    span of I whose coordinates with respect to I are all negative.  Each
    simplex is found once, with p its largest index.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    n = len(pts[0])
    m = len(pts)
    out = []
    visited = [0]

    def reduce(vec, basis):
        r = [Fraction(x) for x in vec]
        mu = {}
        for piv, row, combo in basis:
            if r[piv]:
                f = r[piv] / row[piv]
                for j in range(n):
                    r[j] -= f * row[j]
                for i, c in combo.items():
                    mu[i] = mu.get(i, 0) + f * c
        return r, mu

    def dfs(basis, members, start):
        visited[0] += 1
        if visited[0] > SUBSET_CAP:
            raise CapacityError("SUBSET_CAP (IP simplex search)", visited[0])
        k = len(members)
        for p in range(start, m):
            r, mu = reduce(pts[p], basis)
            if not any(r):
                if len(mu) == k and all(mu.get(i, 0) < 0 for i in members):
                    codim = n - k
                    if codim >= min_codim and (max_codim is None or codim <= max_codim):
                        lam = {i: -mu[i] for i in members}
                        lam[p] = Fraction(1)
                        den = lcm(*(x.denominator for x in lam.values()))
                        iv = {i: int(x * den) for i, x in lam.items()}
                        g = 0
                        for x in iv.values():
                            g = gcd(g, x)
                        w = tuple(iv.get(i, 0) // g for i in range(m))
                        out.append(IPSimplex(tuple(sorted(iv)), w, sum(w), codim))
                continue
            if k < n:
                piv = next(j for j in range(n) if r[j])
                combo = {i: -c for i, c in mu.items()}
                combo[p] = Fraction(1)
                dfs(basis + [(piv, r, combo)], members + [p], p + 1)

    dfs([], [], 0)
    out.sort(key=lambda s: (s.codim, s.indices))
    return out


def canonical_action(order: int, residues, weights) -> QuotientAction:
    """Representative of a cyclic action modulo relations and units.

    ``weights`` is one relation vector or a list of them.  Candidates are
    k*(a + sum_r t_r*lambda_r) mod m for units k and all t; the chosen one
    has the lexicographically smallest reversed residue tuple.
    """
    m = order
    a = [x % m for x in residues]
    rels = [weights] if weights and isinstance(weights[0], int) else list(weights)
    rels = [[x % m for x in r] for r in rels if any(x % m for x in r)]
    if m ** len(rels) > 1 << 16:
        rels = rels[:1]
    units = [k for k in range(1, m) if gcd(k, m) == 1] or [1]
    best = None
    for ts in product(range(m), repeat=len(rels)):
        b = list(a)
        for t, r in zip(ts, rels):
            b = [(x + t * y) % m for x, y in zip(b, r)]
        for k in units:
            c = tuple((k * x) % m for x in b)
            key = c[::-1]
            if best is None or key < best[0]:
                best = (key, c)
    return QuotientAction(m, best[1])


def _lattice_coords(vectors):
    """Basis of the saturated lattice spanned by ``vectors`` and its coordinate map."""
    n = len(vectors[0])
    ann = kernel_basis([list(v) for v in vectors], n)
    if ann:
        basis = kernel_basis(ann, n)
    else:
        basis = [[int(i == j) for j in range(n)] for i in range(n)]
    return basis, saturated_coords(basis)


def simplex_quotient(points, simplex: IPSimplex) -> list[QuotientAction]:
    """Cyclic factors of (span(S) cap N) / <S>, as actions on the listed points."""
    pts = [tuple(p) for p in points]
    idx = list(simplex.indices)
    basis, L = _lattice_coords([pts[i] for i in idx])
    k = len(basis)
    V = [[0] * len(idx) for _ in range(k)]
    for c, i in enumerate(idx):
        y = matvec(L, pts[i])
        for r in range(k):
            V[r][c] = y[r]
    diag, U, W = smith(V)
    acts = []
    for j, s in enumerate(diag):
        s = abs(s)
        if s <= 1:
            continue
        res = [0] * len(pts)
        for c, i in enumerate(idx):
            res[i] = W[c][j] % s
        acts.append(canonical_action(s, res, simplex.weights))
    return acts


@dataclass
class Section:
    """Intersection of P* with a linear subspace, in lattice coordinates."""

    mask: int  # bits over the listed points
    dim: int
    coords: list  # points (incl. origin) in sublattice coordinates
    reflexive: bool
    n_points: int = 0
    n_vertices: int = 0
    m_points: int = 0
    m_vertices: int = 0

    def stats(self) -> str:
        return f"m:{self.m_points} {self.m_vertices} n:{self.n_points} {self.n_vertices}"


def section(points, mask: int) -> Section:
    """P* cap span(points in mask); ``points`` are the nonzero points of P*."""
    pts = [tuple(p) for p in points]
    sel = [pts[i] for i in range(len(pts)) if mask >> i & 1]
    basis, L = _lattice_coords(sel)
    f = len(basis)
    inside = [i for i, p in enumerate(pts) if _in_span(p, basis, L)]
    mask = sum(1 << i for i in inside)
    coords = [tuple(matvec(L, pts[i])) for i in inside] + [(0,) * f]
    sec = Section(mask, f, coords, False)
    if f == 0:
        return sec
    h = find_hull(coords)
    if not is_reflexive(h.eqs):
        return sec
    sec.reflexive = True
    sec.n_points = len(coords)
    sec.n_vertices = len(h.vertices)
    dv = dual_poly(h.eqs)
    sec.m_points = len(complete_points(dv, _dual_eqs(h.vertex_coords)))
    sec.m_vertices = len(dv)
    return sec


def _dual_eqs(vertices):
    from .core import HyperplaneEq

    return [HyperplaneEq(tuple(v), 1) for v in vertices]


def _in_span(p, basis, L) -> bool:
    y = matvec(L, p)
    back = [sum(y[r] * basis[r][j] for r in range(len(basis))) for j in range(len(p))]
    return tuple(back) == tuple(p)


@dataclass
class FibrationRecord:
    codim: int
    fiber: Section
    outer: Section | None = None  # for nested specs: the section containing the fiber
    simplex: IPSimplex | None = None
    perm: tuple[int, ...] = ()
    basis_matrix: list = field(default_factory=list)

    def pstring(self) -> str:
        return "".join(_digit(i) for i in self.perm)


def _digit(i: int) -> str:
    return str(i) if i < 10 else chr(ord("a") + i - 10)


def _bits(mask: int, m: int) -> list[int]:
    return [i for i in range(m) if mask >> i & 1]


def fiber_scan(points, simplices, depth: int) -> list[FibrationRecord]:
    """Reflexive sections spanned by single IP simplices with 1 <= codim <= depth."""
    pts = [tuple(p) for p in points]
    seen = set()
    out = []
    for s in simplices:
        if not 1 <= s.codim <= depth:
            continue
        sec = section(pts, sum(1 << i for i in s.indices))
        if sec.mask in seen:
            continue
        seen.add(sec.mask)
        if sec.reflexive:
            out.append(FibrationRecord(s.codim, sec, simplex=s))
    return out


def _subspaces(pts, dim: int) -> dict[int, None]:
    """Masks of all linear subspaces of dimension ``dim`` spanned by listed points."""
    m = len(pts)
    level = {0: None}
    for r in range(1, dim + 1):
        nxt: dict[int, None] = {}
        for mask in level:
            lo = max(_bits(mask, m), default=-1)
            for p in range(m):
                if mask >> p & 1:
                    continue
                if r > 1 and p < lo and (mask | 1 << p) in nxt:
                    continue
                sel = [pts[i] for i in _bits(mask, m)] + [pts[p]]
                basis, L = _lattice_coords(sel)
                if len(basis) != r:
                    continue
                full = sum(1 << i for i, q in enumerate(pts) if _in_span(q, basis, L))
                nxt[full] = None
                if len(nxt) > SUBSET_CAP:
                    raise CapacityError("SUBSET_CAP (subspace search)", len(nxt))
        level = nxt
    return level


def all_fibrations(points, spec: int) -> list[FibrationRecord]:
    """All reflexive sections of the given codimension spec (11, 22, 33, 12, 23).

    ``points`` are the nonzero lattice points of P* in a fixed order.  Records
    are sorted by the resulting permutation string.
    """
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    m = len(pts)
    if spec in (11, 22, 33):
        codim = spec // 11
        recs = []
        for mask in _subspaces(pts, n - codim):
            sec = section(pts, mask)
            if sec.reflexive:
                perm = tuple(_bits(sec.mask, m) + _bits(~sec.mask & ((1 << m) - 1), m))
                recs.append(FibrationRecord(codim, sec, perm=perm))
    elif spec in (12, 23):
        outer_codim = spec // 10
        recs = []
        outers = [section(pts, mk) for mk in _subspaces(pts, n - outer_codim)]
        for K in outers:
            if not K.reflexive:
                continue
            kpts = _bits(K.mask, m)
            sub = [pts[i] for i in kpts]
            for smask in _subspaces(sub, n - outer_codim - 1):
                gmask = sum(1 << kpts[j] for j in _bits(smask, len(kpts)))
                E = section(pts, gmask)
                if not E.reflexive:
                    continue
                rest = ~K.mask & ((1 << m) - 1)
                perm = tuple(_bits(E.mask, m) + _bits(K.mask & ~E.mask, m) + _bits(rest, m))
                recs.append(FibrationRecord(outer_codim + 1, E, outer=K, perm=perm))
    else:
        raise LatpolyError(f"unknown fibration spec {spec}")
    for r in recs:
        r.basis_matrix = fiber_basis(pts, r.perm)
    recs.sort(key=lambda r: r.perm)
    return recs


def fiber_basis(points, perm) -> list[list[int]]:
    """Coordinates of the points, in the order ``perm``, in triangular form.

    Fiber points come first, so the first rows of the result span the fiber.
    """
    n = len(points[0])
    M = [[points[j][i] for j in perm] for i in range(n)]
    return hnf(M, with_transform=False)


@dataclass
class FreeQuotient:
    """A refinement N' of N (given by a rational basis) adding no points to P*."""

    index: int
    basis: list  # rows (tuples of Fraction) spanning N'
    cyclic: list  # [(order, generator)] with N'/N the direct sum of the cyclic groups
    n_points: int
    dual_vertices: list  # vertices of P* in coordinates of ``basis``
    weak_only: bool = False  # hit only under the weak criterion

    def actions(self, columns) -> list[QuotientAction]:
        """The refinement as actions on coordinates X_i with X_i - 1 = <x, c_i>.

        ``columns`` lists the vectors c_i of N (for CWS input, the pullbacks of
        the coordinate hyperplanes).  A point x of M lies in the dual of N'
        iff sum_i a_i (X_i - 1) = 0 mod m for every returned action.
        """
        cols = [tuple(int(x) for x in c) for c in columns]
        n = len(cols[0])
        N = len(cols)
        rels = kernel_basis([[c[i] for c in cols] for i in range(n)], N)
        out = []
        for m, g in self.cyclic:
            A = [[c[i] for c in cols] + [m * int(i == j) for j in range(n)] for i in range(n)]
            sol = solve_integer(A, [int(m * x) for x in g])
            if sol is None:
                raise LatpolyError("refinement not expressible through the given columns")
            out.append(canonical_action(m, sol[:N], rels))
        return out


def free_quotient_scan(vertices, eqs=None, weak: bool = False, max_index: int = 4096) -> list[FreeQuotient]:
    """Refinements N' of N for which P* gains no lattice points.

    ``vertices`` are the vertices of the reflexive polytope P in M.  The
    refinements are the lattices between N and the dual of the lattice
    generated by the vertices of P.  In weak mode new points in the relative
    interior of facets of P* are tolerated.  Refinements giving isomorphic
    quotient polytopes are reported once.
    """
    from .normalform import normal_form, nf_key

    verts = [tuple(v) for v in vertices]
    n = len(verts[0])
    if eqs is None:
        eqs = find_hull(verts).eqs
    if not is_reflexive(eqs):
        raise ReflexivityError("free quotients need a reflexive polytope")
    dverts = dual_poly(eqs)
    base_n = len(complete_points(dverts, _dual_eqs(verts)))
    # lattice generated by the vertices of P
    H = [r for r in hnf(verts, with_transform=False) if any(r)]
    diag, _, _ = smith(H)
    index = 1
    for s in diag:
        index *= abs(s)
    if index == 1:
        return []
    if index > max_index:
        raise CapacityError("free quotient index bound", index)
    # N_max = {y : <v, y> in Z for all v in M_v}; generators of N_max / N
    Hinv = _rational_inverse(H)
    gens = [tuple(Hinv[i][j] for i in range(n)) for j in range(n)]
    cyc_ok = [g for g in _group_elements(gens)
              if any(x.denominator != 1 for x in g)
              and _test_refinement(dverts, verts, [g], base_n, weak) is not None]
    # subgroups generated by admissible elements (closed under joins)
    found = {}
    for g in cyc_ok:
        found.setdefault(_subgroup_key([g]), [g])
    changed = True
    while changed:
        changed = False
        for g1 in list(found.values()):
            for g in cyc_ok:
                key = _subgroup_key(g1 + [g])
                if key in found:
                    continue
                if _test_refinement(dverts, verts, g1 + [g], base_n, weak) is not None:
                    found[key] = g1 + [g]
                    changed = True
    hits = []
    seen = set()
    for key, gs in sorted(found.items(), key=lambda kv: kv[0]):
        np_, wk, B, new = _test_refinement(dverts, verts, gs, base_n, weak)
        nf = nf_key(normal_form(new))
        if nf in seen:
            continue
        seen.add(nf)
        hits.append(FreeQuotient(key[0], B, _cyclic_factors(B), np_, new, wk))
    return hits


def _cyclic_factors(B):
    """Invariant factor decomposition of N'/N for N' spanned by the rows of B."""
    n = len(B)
    T = _rational_inverse(B)  # rows: coordinates of the unit vectors in the basis B
    if any(x.denominator != 1 for r in T for x in r):
        raise LatpolyError("refinement does not contain N")
    T = [[int(x) for x in r] for r in T]
    diag, U, V = smith(T)
    Vinv = inverse_unimodular(V)
    out = []
    for i, d in enumerate(diag):
        if abs(d) > 1:
            g = tuple(sum(Vinv[i][k] * B[k][j] for k in range(n)) for j in range(n))
            g = tuple(x - (x.numerator // x.denominator) for x in g)
            out.append((abs(d), g))
    return out


def _rational_inverse(m):
    from .intmat import solve_rational

    n = len(m)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        cols.append(solve_rational(m, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _group_elements(gens):
    """All elements of (Z^n + sum Z g) / Z^n, as reduced rational vectors."""
    n = len(gens[0])
    orders = []
    for g in gens:
        orders.append(lcm(*(x.denominator for x in g)))
    seen = set()
    out = []
    for coeffs in product(*(range(o) for o in orders)):
        v = [Fraction(0)] * n
        for c, g in zip(coeffs, gens):
            if c:
                for i in range(n):
                    v[i] += c * g[i]
        v = tuple(x - (x.numerator // x.denominator) for x in v)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _refined_basis(gens, n):
    """Basis (rational rows) of Z^n + sum Z g."""
    den = lcm(*(x.denominator for g in gens for x in g))
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(x * den) for x in g] for g in gens]
    H = [r for r in hnf(rows, with_transform=False) if any(r)]
    return [[Fraction(x, den) for x in r] for r in H]


def _subgroup_key(gens):
    n = len(gens[0])
    B = _refined_basis(gens, n)
    idx = 1
    for i in range(n):
        piv = next(x for x in B[i] if x)
        idx *= (1 / piv)
    return int(idx), tuple(tuple(r) for r in B)


def _test_refinement(dverts, verts, gens, base_n, weak):
    n = len(dverts[0])
    B = _refined_basis(gens, n)
    # coordinates of N-points in the basis B: y = x * B^{-1}
    Bt = [[B[i][j] for i in range(n)] for j in range(n)]
    new = []
    for v in dverts:
        c = _solve_frac(Bt, v)
        if any(x.denominator != 1 for x in c):
            raise LatpolyError("refinement does not contain N")
        new.append(tuple(int(x) for x in c))
    h = find_hull(new)
    pts = complete_points(h.vertex_coords, h.eqs)
    if len(pts) == base_n:
        return len(pts), False, B, new
    if not weak:
        return None
    # extra points must each lie on exactly one facet of P*
    for y in pts:
        x = [sum(y[i] * B[i][j] for i in range(n)) for j in range(n)]
        if all(t.denominator == 1 for t in x):
            continue
        on = sum(1 for v in verts if sum(a * b for a, b in zip(v, x)) == -1)
        if on != 1:
            return None
    return len(pts), True, B, new


def _solve_frac(A, b):
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]
