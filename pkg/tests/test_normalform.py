from latpoly.hull import find_hull
from latpoly.normalform import (
    nf_key,
    normal_form,
    normal_form_data,
    symmetry_counts,
    triangular_form,
)
from latpoly.textio import cws_to_points, parse_cws

BLOWUP_NF = (
    (1, 1, 1, 1, 1, -1, -1, -1, -1, -1),
    (0, 3, 0, 0, 0, -2, -2, 5, -2, -2),
    (0, 0, 3, 0, 0, -2, -2, -2, 5, -2),
    (0, 0, 0, 3, 0, -2, -2, -2, -2, 5),
    (0, 0, 0, 0, 3, 5, -2, -2, -2, -2),
)


def test_triangle_normal_form():
    nf = normal_form([(1, 0), (0, 1), (-1, -1)])
    assert nf.matrix == ((1, 0, -1), (0, 1, -1))
    assert symmetry_counts([(1, 0), (0, 1), (-1, -1)]).n_lattice == 6


def test_cws_blowup_matches_printed_matrix():
    pts, _ = cws_to_points(parse_cws("7 2 1 1 1 1 1 0  2 1 0 0 0 0 0 1"))
    assert normal_form(pts).matrix == BLOWUP_NF


def test_nf_of_nf_is_fixed():
    pts, _ = cws_to_points(parse_cws("6 1 1 1 3"))
    nf = normal_form(pts)
    assert normal_form(nf.columns()) == nf
    assert nf_key(nf).startswith("3 ")


def test_nf_data_symmetries_are_automorphisms():
    pts = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    d = normal_form_data(pts)
    assert d.n_lattice == 8
    assert len(d.perms) >= 8


def test_triangular_form_same_lattice():
    pts = [(2, 0), (0, 2), (-2, -2)]
    H, G = triangular_form(pts)
    assert all(H[i][j] == 0 for i in range(2) for j in range(i))
    assert find_hull([tuple(c) for c in zip(*H)]).vertex_coords
