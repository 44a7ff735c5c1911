from latpoly.fiber import (
    all_fibrations,
    canonical_action,
    free_quotient_scan,
    ip_simplices,
)
from latpoly.hull import dual_poly, find_hull
from latpoly.normalform import normal_form
from latpoly.textio import cws_to_points, parse_cws


def hull_of(s):
    pts, emb = cws_to_points(parse_cws(s))
    return find_hull(pts)


def test_ip_simplices_of_triangle_with_extra_point():
    sims = ip_simplices([(1, 0), (0, 1), (-1, -1), (-1, 0)])
    assert {(s.weights, s.d, s.codim) for s in sims} == {((1, 1, 1, 0), 3, 0), ((1, 0, 0, 1), 2, 1)}


def test_canonical_action_is_normalized():
    a = canonical_action(2, (1, 0, 1, 0), [(1, 1, 1, 1)])
    b = canonical_action(2, (0, 1, 0, 1), [(1, 1, 1, 1)])
    assert a == b


def _quotient_nf(q):
    return normal_form(q.dual_vertices)


def test_quintic_z5():
    h = hull_of("5 1 1 1 1 1")
    qs = free_quotient_scan(h.vertex_coords, h.eqs)
    assert [q.index for q in qs] == [5]
    ref = hull_of("5 1 1 1 1 1 /Z5: 0 1 2 3 4")
    assert _quotient_nf(qs[0]) == normal_form(dual_poly(ref.eqs))


def test_p2xp2_z3():
    h = hull_of("3 1 1 1 0 0 0  3 0 0 0 1 1 1")
    qs = free_quotient_scan(h.vertex_coords, h.eqs)
    assert [q.index for q in qs] == [3]
    ref = hull_of("3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2")
    assert _quotient_nf(qs[0]) == normal_form(dual_poly(ref.eqs))


def test_elliptic_fibrations_of_p2xp2_quotient():
    h = hull_of("3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2")
    pts = dual_poly(h.eqs)
    recs = all_fibrations(pts, 22)
    assert len(recs) == 2
    assert {r.fiber.stats() for r in recs} == {"m:10 3 n:4 3"}
