"""Property suites: brute-force oracles, lattice invariance, duality,
LG versus toric Hodge numbers, and overflow injection."""

import itertools
import random
from functools import reduce
from math import gcd

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from latpoly.classify import _has_solution, _partitions
from latpoly.core import ArithmeticOverflow, SpanError, limits
from latpoly.faces import ReflexivePair, _dual_eqs, hodge
from latpoly.hull import complete_points, dual_poly, find_hull, is_reflexive
from latpoly.intmat import det
from latpoly.lg import cross_check, lg_spectrum
from latpoly.normalform import normal_form
from latpoly.textio import CWS, WeightSystem, cws_to_points, parse_cws

FAST = settings(max_examples=1000, deadline=None,
                suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def point_sets(n):
    coord = st.integers(-3, 3)
    return st.lists(st.tuples(*[coord] * n), min_size=n + 1, max_size=8, unique=True)


any_points = st.integers(1, 3).flatmap(point_sets)


def oracle_facets(pts):
    """Facets from every affinely independent n-subset whose hyperplane supports pts."""
    n = len(pts[0])
    out = set()
    for sub in itertools.combinations(pts, n):
        p0 = sub[0]
        rows = [[x - y for x, y in zip(p, p0)] for p in sub[1:]]
        # normal vector by cofactors of the (n-1) x n difference matrix
        a = []
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in rows]
            a.append((-1) ** j * det(minor) if minor else 1)
        if not any(a):
            continue
        g = reduce(gcd, a)
        a = [x // g for x in a]
        vals = [sum(x * y for x, y in zip(a, p)) for p in pts]
        c0 = sum(x * y for x, y in zip(a, p0))
        if min(vals) == c0:
            out.add((tuple(a), -c0))
        elif max(vals) == c0:
            out.add((tuple(-x for x in a), c0))
    return out


def inside(eqs, p):
    return all(sum(x * y for x, y in zip(a, p)) + c >= 0 for a, c in eqs)


@FAST
@given(any_points)
def test_hull_matches_oracle(pts):
    try:
        h = find_hull(pts)
    except SpanError:
        n = len(pts[0])
        rows = [[x - y for x, y in zip(p, pts[0])] for p in pts[1:]]
        assert all(det([list(r) for r in c]) == 0 for c in itertools.combinations(rows, n))
        return
    eqs = oracle_facets(pts)
    assert {(e.a, e.c) for e in h.eqs} == eqs
    n = len(pts[0])
    verts = {p for p in pts
             if sum(1 for a, c in eqs if sum(x * y for x, y in zip(a, p)) + c == 0) >= n
             and len({a for a, c in eqs if sum(x * y for x, y in zip(a, p)) + c == 0}) >= n
             and _is_vertex(p, eqs, n)}
    assert set(h.vertex_coords) == verts
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    box = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
    assert sorted(complete_points(h.vertex_coords, h.eqs)) == sorted(p for p in box if inside(eqs, p))


def _is_vertex(p, eqs, n):
    tight = [list(a) for a, c in eqs if sum(x * y for x, y in zip(a, p)) + c == 0]
    return any(det(list(c)) != 0 for c in itertools.combinations(tight, n))


def unimodular(n, rnd):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rnd.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            m[0] = [-x for x in m[0]]
            continue
        k = rnd.choice([-2, -1, 1, 2])
        m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        if rnd.random() < 0.3:
            m[i], m[j] = m[j], m[i]
    return m


@FAST
@given(st.integers(1, 4).flatmap(point_sets), st.randoms(use_true_random=False))
def test_normal_form_invariance(pts, rnd):
    try:
        nf = normal_form(pts)
    except SpanError:
        assume(False)
    n = len(pts[0])
    U = unimodular(n, rnd)
    moved = [tuple(sum(U[i][j] * p[j] for j in range(n)) for i in range(n)) for p in pts]
    rnd.shuffle(moved)
    assert normal_form(moved) == nf
    assert normal_form(nf.columns()) == nf


# reflexive polytopes met in the transcripts: (kind, data)
REFLEXIVE_INPUTS = [
    "7 2 1 1 1 1 1 0  2 1 0 0 0 0 0 1",
    "4 1 1 1 1 /Z2: 1 0 1 0",
    "4 1 1 1 1",
    "5 1 1 1 1 1",
    "3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2",
    "9 3 3 1 1 1 /Z3: 1 2 1 2 0",
    "6 1 1 1 1 1 1",
]
REFLEXIVE_MATRICES = [
    [(1, 0, 0, 0), (-1, 2, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 2, -1, 0), (1, 1, 1, 2), (-1, -1, -1, -2)],
    [(1, 0, 0, 0), (-1, 2, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 2, -1, 0), (1, 1, 1, 1), (-1, -1, -1, -1)],
]


def _reflexive_cases():
    for s in REFLEXIVE_INPUTS:
        yield s, cws_to_points(parse_cws(s))[0]
    for i, m in enumerate(REFLEXIVE_MATRICES):
        yield f"matrix{i}", m


@pytest.mark.parametrize("name,pts", list(_reflexive_cases()))
def test_duality_and_mirror_hodge(name, pts):
    h = find_hull(pts)
    assert is_reflexive(h.eqs)
    dv = dual_poly(h.eqs)
    hd = find_hull(dv)
    assert is_reflexive(hd.eqs)
    assert sorted(dual_poly(hd.eqs)) == sorted(h.vertex_coords)
    P = ReflexivePair(h.vertex_coords, h.eqs)
    D = ReflexivePair(dv, _dual_eqs(h.vertex_coords))
    a, b = hodge(P), hodge(D)
    if P.n == 3:
        assert a.cor == b.cor
    elif P.n == 4:
        assert (a.h11, a.h21, a.chi) == (b.h21, b.h11, -b.chi)
    else:
        assert (a.h11, a.h12, a.h13, a.chi) == (b.h13, b.h12, b.h11, b.chi)


def transversal(d, w):
    """Transversality of a weight system: every index set I has a monomial
    of degree d in X_I, or at least |I| monomials X_I^n X_e with distinct e."""
    N = len(w)
    for k in range(1, N + 1):
        for I in itertools.combinations(range(N), k):
            wI = tuple(w[i] for i in I)
            if _has_solution(d, wI):
                continue
            es = [j for j in range(N) if j not in I and _has_solution(d - w[j], wI)]
            if len(es) < k:
                return False
    return True


def transversal_cy_systems(count):
    out = []
    d = 5
    while len(out) < count:
        for w in _partitions(d, 5):
            if reduce(gcd, w) == 1 and transversal(d, w):
                out.append(WeightSystem(d, w))
        d += 1
    return out[:count]


def test_vafa_matches_batyrev():
    systems = transversal_cy_systems(100)
    assert len(systems) == 100
    for ws in systems:
        pts, _ = cws_to_points(CWS((ws,), ()))
        h = find_hull(pts)
        assert is_reflexive(h.eqs), ws
        cross_check(lg_spectrum(ws), ReflexivePair(h.vertex_coords, h.eqs).hodge())


big_points = st.integers(2, 3).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(-400, 400)] * n), min_size=n + 1, max_size=7, unique=True))


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(big_points, st.integers(8, 20))
def test_overflow_never_silent(pts, bits):
    try:
        ref = find_hull(pts)
    except SpanError:
        assume(False)
    with limits(int_bits=bits, wide_bits=2 * bits):
        try:
            h = find_hull(pts)
        except ArithmeticOverflow:
            return
    assert {(e.a, e.c) for e in h.eqs} == {(e.a, e.c) for e in ref.eqs}
    assert sorted(h.vertex_coords) == sorted(ref.vertex_coords)


def test_lg_overflow_detected():
    with pytest.raises(ArithmeticOverflow):
        lg_spectrum(WeightSystem(3 << 61, (1 << 61, 1 << 61, 1 << 61)))
