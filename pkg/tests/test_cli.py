import pytest

from conftest import klass, poly

UNIT_VE = """\
3 4  Vertices of P
    1    0    0    0
    0    1    0    0
    0    0    1    0
4 3  Equations of P
  -1  -1  -1     1
   0   0   1     0
   0   1   0     0
   1   0   0     0
"""

SIMPLEX_E = """\
4 3  Vertices of P-dual <-> Equations of P
   1   0   0
   0   1   0
   0   0   1
  -1  -1  -1
"""

K3_FIBERED = "4 7\n1 -1 0 0 0 1 -1\n0 2 -1 0 2 1 -1\n0 0 0 1 -1 1 -1\n0 0 0 0 0 2 -2\n"
DOUBLE_COVER = "4 7\n1 -1 0 0 0 1 -1\n0 2 -1 0 2 1 -1\n0 0 0 1 -1 1 -1\n0 0 0 0 0 1 -1\n"


def test_unit_simplex_ve():
    assert poly(["-fve"], "3 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n") == (0, UNIT_VE)


def test_reflexive_simplex_e():
    assert poly(["-fe"], "3 4\n3 -1 -1 -1\n-1 3 -1 -1\n-1 -1 3 -1\n") == (0, SIMPLEX_E)


def test_transposed_input_same_result():
    assert poly(["-fve"], "4 3\n1 0 0\n0 1 0\n0 0 1\n0 0 0\n")[1] == UNIT_VE


def test_help_and_unknown_flag():
    rc, out = poly(["-h"])
    assert rc == 0 and out.startswith("This is ``poly.x''")
    assert poly(["-fx"])[0] == 1


def test_dimension_limit_exit_code(capsys):
    rc, _ = poly(["-fg"], "7 8\n" + "1 " * 56 + "\n")
    assert rc == 4
    assert "Please increase POLY_Dmax to at least 7" in capsys.readouterr().err


def test_parse_error_exit_code():
    assert poly(["-f"], "3 1 x\n")[0] == 2


@pytest.mark.parametrize("text,line", [
    ("7 1 1 1 1 1 2", "7 1 1 1 1 1 2 M:496 10 F:7"),
    ("7 2 1 1 1 1 1 0  2 1 0 0 0 0 0 1",
     "7 2 1 1 1 1 1 0  2 1 0 0 0 0 0 1 M:491 10 N:8 7 H:2,0,450 [2760]"),
    ("4 1 1 1 1 /Z2: 1 0 1 0", "4 1 1 1 1 /Z2: 1 0 1 0 M:19 4 N:7 4 Pic:9 Cor:6"),
    ("3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2",
     "3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2 M:34 9 N:7 6 H:2,29 [-54]"),
    ("9 3 3 1 1 1 /Z3: 1 2 1 2 0", "9 3 3 1 1 1 /Z3: 1 2 1 2 0 M:49 5 N:7 5 H:2,38 [-72]"),
])
def test_g_lines(text, line):
    assert poly(["-fg"], text + "\n")[1].splitlines()[0] == line


def test_default_flag_is_g():
    assert poly(["-f"], "5 1 1 1 1 1\n")[1] == "5 1 1 1 1 1 M:126 5 N:6 5 H:1,101 [-200]\n"


def test_lg_lines():
    out = poly(["-flg"], "3 1 1 1 1 1\n3 1 1 1 1 1 1\n")[1].splitlines()
    assert out == ["1 1 1 1 1 3=d M:35 5 F:5 LG: c/3=5/3",
                   "1 1 1 1 1 1 3=d M:56 6 F:6 LG: H0:1,0,1 H1:0,20 H2:1"]


def test_normal_form_block():
    out = poly(["-fgN"], "4 1 1 1 1 /Z2: 1 0 1 0\n")[1]
    assert out.splitlines()[1:] == ["3 4  Normal form of vertices of P",
                                    "   1   1   1  -3",
                                    "   0   2   0  -2",
                                    "   0   0   4  -4"]


def test_k3_fibrations():
    out = poly(["-f12PD"], K3_FIBERED)[1]
    heads = [ln for ln in out.splitlines() if ln.startswith("4 8  ")]
    assert len(heads) == 6
    ps = {ln.split("p=")[1] for ln in heads}
    assert {"01273456", "01275634", "25673401", "23470156", "23475601", "25670134"} == ps
    assert any("Km:35 5 n:7 5" in h for h in heads)
    assert any("Km:27 6 n:7 5" in h for h in heads)
    assert "4 8  Em:9 4 n:5 4  Km:27 6 n:7 5  M:53 10 N:9 7  p=25673401" in heads


def test_double_cover():
    assert poly(["-fDg"], DOUBLE_COVER)[1] == "M:105 10 N:9 7 H:5,85 [-160]\n"


def test_p2xp2_fibrations():
    out = poly(["-fg2P"], "3 1 1 1 0 0 0  3 0 0 0 1 1 1 /Z3: 0 1 2 0 1 2\n")[1].splitlines()
    assert "#fibrations=2" in out[-3]
    assert all(ln.endswith("cd=2  m:10 3 n:4 3") for ln in out[-2:])


def test_class_pipeline(tmp_path):
    w = tmp_path / "w.in"
    w.write_text("7 1 1 1 1 1 2\n")
    z = tmp_path / "zw.5"
    rc, out = klass(["-o5", "-po", str(z), str(w)])
    assert rc == 0
    assert "7 1 1 1 1 1 2 R=1 +0sl" in out and "NF=1 (0)" in out
    assert f"Writing {z}: 1+0sl 0m+0s" in out
    rc, blocks = klass(["-b2a", "-pi", str(z)])
    assert blocks.splitlines()[:2] == ["5 10", "1 1 1 1 1 -1 -1 -1 -1 -1"]
    assert poly(["-fg"], blocks)[1] == "M:491 10 N:8 7 H:2,0,450 [2760]\n"
    vblock = poly(["-fV"], blocks)[1].splitlines()
    assert vblock[-2].split() == "2 1 1 1 1 1 0 7=d codim=0".split()
    assert vblock[-1].split() == "1 0 0 0 0 0 1 2=d codim=4".split()


def test_class_ip_filter_and_ascii(tmp_path):
    rc, out = klass(["-ma", "-f"], "4 1 1 1 1\n5 1 1 1 1 1\n7 1 1 1 1 1 2\n13 1 2 3 7\n")
    assert rc == 0
    assert out.splitlines() == ["4 1 1 1 1", "5 1 1 1 1 1", "7 1 1 1 1 1 2"]
    st = tmp_path / "q"
    assert klass(["-a", "-po", str(st), "-f"], "4 1 1 1 1\n")[0] == 0
    rc, out = klass(["-sv", "-pi", str(st)])
    assert rc == 0 and "3 4\n1 1 1 -3\n0 2 0 -2\n0 0 4 -4\n" in out


def test_class_rejects_unsupported():
    for opt in ("-k", "-c", "-r", "-Hc", "-ml", "-sp"):
        assert klass([opt])[0] == 1
