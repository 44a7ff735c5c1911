import pytest

from latpoly.core import LatpolyError
from latpoly.normalform import normal_form
from latpoly.store import NFStore, parse_key

A = "2 3 1 0 -1 0 1 -1"
B = "2 4 1 0 -1 0 0 1 0 -1"
C = "2 3 1 0 -2 0 1 -1"


def test_merge_disjoint_and_overlap():
    assert len(NFStore([A]).merge(NFStore([B]))) == 2
    m = NFStore([A, B]).merge(NFStore([B, C]))
    assert m.keys() == sorted([A, B, C], key=lambda k: [int(x) for x in k.split()])


def test_text_roundtrip(tmp_path):
    s = NFStore([B, A])
    s.add(C, sublattice=True)
    p = tmp_path / "s.txt"
    s.save(p)
    t = NFStore.load(p)
    assert t.dumps() == s.dumps() and t.n_sublattice == 1


def test_dimension_mismatch():
    s = NFStore([A])
    with pytest.raises(LatpolyError):
        s.add("3 4 1 0 0 -1 0 1 0 -1 0 0 1 -1")


def test_ascii_blocks_parse_back():
    s = NFStore([A])
    assert s.ascii_blocks() == "2 3\n1 0 -1\n0 1 -1\n"
    nf = parse_key(A)
    assert normal_form(nf.columns()) == nf
