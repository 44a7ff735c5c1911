"""Acceptance suite: one PASS/FAIL line per criterion.

Each test collects its checks, prints a summary line (visible with or
without ``-s``) and then asserts, so a failure shows what was missed.
"""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import klass, poly
from latpoly.classify import (
    classify,
    ip_cws_list,
    mirror_stats,
    sublattice_scan,
    subpolytopes,
)
from latpoly.faces import reflexive_pair
from latpoly.fiber import free_quotient_scan, ip_simplices
from latpoly.hull import dual_poly, find_hull
from latpoly.normalform import nf_key, normal_form
from latpoly.textio import cws_to_points, parse_cws

HERE = Path(__file__).parent


@pytest.fixture
def report(capsys):
    def emit(n, title, checks):
        bad = [name for name, ok in checks if not ok]
        line = f"[{'PASS' if not bad else 'FAIL'}] criterion {n}: {title}"
        if bad:
            line += "  (missed: " + "; ".join(bad) + ")"
        with capsys.disabled():
            print("\n" + line)
        assert not bad, line
    return emit


def cws_points(s):
    return cws_to_points(parse_cws(s))[0]


def test_criterion_1_transcripts(report):
    t0 = time.time()
    _, ve = poly(["-fve"], "3 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n")
    t1 = time.time()
    _, e = poly(["-fe"], "3 4\n3 -1 -1 -1\n-1 3 -1 -1\n-1 -1 3 -1\n")
    t2 = time.time()
    report(1, "unit simplex -ve and reflexive simplex -e transcripts", [
        ("-ve vertices", ve.splitlines()[:4] == ["3 4  Vertices of P", "    1    0    0    0",
                                                  "    0    1    0    0", "    0    0    1    0"]),
        ("-ve equations", ve.splitlines()[4:] == ["4 3  Equations of P", "  -1  -1  -1     1",
                                                   "   0   0   1     0", "   0   1   0     0",
                                                   "   1   0   0     0"]),
        ("-e block", e.splitlines() == ["4 3  Vertices of P-dual <-> Equations of P",
                                        "   1   0   0", "   0   1   0", "   0   0   1", "  -1  -1  -1"]),
        ("runtime < 0.1 s", t1 - t0 < 0.1 and t2 - t1 < 0.1),
    ])


BLOWUP = "5 10 1 1 1 1 1 -1 -1 -1 -1 -1 0 3 0 0 0 -2 -2 5 -2 -2 0 0 3 0 0 -2 -2 -2 5 -2 " \
         "0 0 0 3 0 -2 -2 -2 -2 5 0 0 0 0 3 5 -2 -2 -2 -2"


def test_criterion_2_subpolytope_chain(report):
    t0 = time.time()
    g = poly(["-f"], "7 1 1 1 1 1 2\n")[1].strip()
    found, st = subpolytopes(cws_points("7 1 1 1 1 1 2"), 5)
    keys = found.keys()
    blocks = found.ascii_blocks()
    g2 = poly(["-fg"], blocks)[1].strip()
    nf = found.normal_forms()[0] if keys else None
    sims = []
    if nf is not None:
        h = find_hull(nf.columns())
        dverts = [tuple(e.a) for e in h.eqs]
        sims = {(s.weights, s.d, s.codim) for s in ip_simplices(dverts)}
    cws = "7 2 1 1 1 1 1 0  2 1 0 0 0 0 0 1"
    g3 = poly(["-fg"], cws + "\n")[1].strip()
    report(2, "7 1 1 1 1 1 2 -> depth-5 reflexive subpolytope chain", [
        ("M:496 10 F:7", g == "7 1 1 1 1 1 2 M:496 10 F:7"),
        ("NF=1", len(keys) == 1),
        ("printed 5x10 matrix", keys == [BLOWUP]),
        ("-g of the find", g2 == "M:491 10 N:8 7 H:2,0,450 [2760]"),
        ("IP simplex (2,1,1,1,1,1,0) 7=d codim=0", ((2, 1, 1, 1, 1, 1, 0), 7, 0) in sims),
        ("IP simplex (1,0,0,0,0,0,1) 2=d codim=4", ((1, 0, 0, 0, 0, 0, 1), 2, 4) in sims),
        ("CWS g-line", g3 == cws + " M:491 10 N:8 7 H:2,0,450 [2760]"),
        ("CWS normal form", nf_key(normal_form(cws_points(cws))) == BLOWUP),
        ("total < 30 s", time.time() - t0 < 30),
    ])


QUARTIC_Z2 = "3 4 1 1 1 -3 0 2 0 -2 0 0 4 -4"


@pytest.mark.slow
def test_criterion_3_classification(report):
    t0 = time.time()
    starts = ip_cws_list(3)
    store, _ = classify([cws_to_points(c)[0] for c in starts])
    extra = sublattice_scan(store)
    full = store.merge(extra)
    ms = mirror_stats(full)
    report(3, "3d classification 116 -> 4318 + 1 -> (2120, 79)", [
        ("116 IP (C)WS", len(starts) == 116),
        ("4318 normal forms", len(store) == 4318),
        ("sublattice scan adds exactly the quartic/Z2", extra.keys() == [QUARTIC_Z2]),
        ("2120 pairs, 79 self-dual", (ms.pairs, ms.selfdual) == (2120, 79)),
        ("mirror closed, 2m+s = 4319", ms.closed and 2 * ms.pairs + ms.selfdual == len(full) == 4319),
        ("< 30 min", time.time() - t0 < 1800),
    ])


def test_criterion_4_quotient_input(report):
    out = poly(["-fgN"], "4 1 1 1 1 /Z2: 1 0 1 0\n")[1].splitlines()
    report(4, "4 1 1 1 1 /Z2: 1 0 1 0 g-line and normal form", [
        ("g-line", out[0] == "4 1 1 1 1 /Z2: 1 0 1 0 M:19 4 N:7 4 Pic:9 Cor:6"),
        ("normal form", out[1:] == ["3 4  Normal form of vertices of P", "   1   1   1  -3",
                                    "   0   2   0  -2", "   0   0   4  -4"]),
    ])


def test_criterion_5_lg(report):
    lines = poly(["-flg"], "3 1 1 1 1 1\n3 1 1 1 1 1 1\n")[1].splitlines()
    big = "6521466 1805 1806 151662 931638 2173822 3260733"
    t0 = time.time()
    plain = poly(["-f"], big + "\n")[1].strip()
    t1 = time.time()
    lg = poly(["-flg"], big + "\n")[1].strip()
    t2 = time.time()
    report(5, "LG spectra and the degree 6521466 system", [
        ("c/3=5/3 with M:35 5 F:5", lines[0] == "1 1 1 1 1 3=d M:35 5 F:5 LG: c/3=5/3"),
        ("H0:1,0,1 H1:0,20 H2:1", lines[1].endswith("LG: H0:1,0,1 H1:0,20 H2:1")),
        ("toric line", plain == big + " M:355 6 N:355785 6 H:303148,0,252 [1820448]"),
        ("LG line", lg == "1805 1806 151662 931638 2173822 3260733 6521466=d "
                          "M:355 6 N:355785 6 V:303148,0,252 [1820448]"),
        ("non-LG <= 60 s", t1 - t0 <= 60),
        ("LG <= 30 min", t2 - t1 <= 1800),
    ])


K3_FIBERED = "4 7\n1 -1 0 0 0 1 -1\n0 2 -1 0 2 1 -1\n0 0 0 1 -1 1 -1\n0 0 0 0 0 2 -2\n"
DOUBLE_COVER = "4 7\n1 -1 0 0 0 1 -1\n0 2 -1 0 2 1 -1\n0 0 0 1 -1 1 -1\n0 0 0 0 0 1 -1\n"


def test_criterion_6_quotients_and_fibrations(report):
    times = []
    t = time.time()
    a = poly(["-fg2P"], "3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2\n")[1].splitlines()
    times.append(time.time() - t)
    t = time.time()
    b = poly(["-fg22PZ"], "9 3 3 1 1 1 /Z3: 1 2 1 2 0\n")[1].splitlines()
    times.append(time.time() - t)
    t = time.time()
    c = poly(["-f12PD"], K3_FIBERED)[1].splitlines()
    times.append(time.time() - t)
    t = time.time()
    d = poly(["-fDg"], DOUBLE_COVER)[1].strip()
    times.append(time.time() - t)
    fib_a = [ln for ln in a if "cd=" in ln]
    simp_b = [ln for ln in b if "9=d" in ln]
    head_b = [ln for ln in b if ln.startswith("4 6  ")]
    heads_c = [ln for ln in c if ln.startswith("4 8  ")]
    report(6, "quotients and fibrations", [
        ("P2xP2/Z3 g-line", a[0].endswith("M:34 9 N:7 6 H:2,29 [-54]")),
        ("2 fibrations cd=2 m:10 3 n:4 3",
         len(fib_a) == 2 and all(ln.endswith("cd=2  m:10 3 n:4 3") for ln in fib_a)),
        ("P4(33111)/Z3 g-line", b[0].endswith("M:49 5 N:7 5 H:2,38 [-72]")),
        ("/Z3: 1 2 2 1 0 0", bool(simp_b) and simp_b[0].endswith("/Z3: 1 2 2 1 0 0")),
        ("p=025134", bool(head_b) and head_b[0].endswith("p=025134")),
        ("6 elliptic-K3 records", len(heads_c) == 6),
        ("Km:35 5 n:7 5", any("Km:35 5 n:7 5" in h for h in heads_c)),
        ("Km:27 6 n:7 5", any("Km:27 6 n:7 5" in h for h in heads_c)),
        ("double cover", d == "M:105 10 N:9 7 H:5,85 [-160]"),
        ("< 10 s each", max(times) < 10),
    ])


def test_criterion_7_free_quotients(report):
    checks = []
    for s, order, q in [("5 1 1 1 1 1", 5, "/Z5: 0 1 2 3 4"),
                        ("3 1 1 1 0 0 0  3 0 0 0 1 1 1", 3, "/Z3: 0 1 2 0 1 2")]:
        h = find_hull(cws_points(s))
        found = free_quotient_scan(h.vertex_coords, h.eqs)
        ref = find_hull(cws_points(f"{s} {q}"))
        hit = [f for f in found if f.index == order
               and normal_form(f.dual_vertices) == normal_form(dual_poly(ref.eqs))]
        checks.append((f"{s}: Z{order} refinement", len(hit) == 1))
        chi = reflexive_pair(cws_points(s)).hodge().chi
        chi_q = reflexive_pair(cws_points(f"{s} {q}")).hodge().chi
        checks.append((f"{s}: Euler number divides by {order}", chi == order * chi_q))
    report(7, "free quotients of the quintic (Z5) and P2xP2 (Z3)", checks)


def test_criterion_8_property_suites(report):
    t0 = time.time()
    r = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                        str(HERE / "test_properties.py")], capture_output=True, text=True)
    dt = time.time() - t0
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr[-200:]
    report(8, f"property suites 8a-8e ({tail})", [
        ("all pass", r.returncode == 0),
        ("runtime < 5 min", dt < 300),
    ])
