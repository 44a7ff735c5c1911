"""Command line polytope analyzer (``latpoly-poly``)."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from ..core import LatpolyError, ReflexivityError, SpanError, pairing_matrix
from ..faces import ReflexivePair, _dual_eqs
from ..fiber import all_fibrations, fiber_scan, ip_simplices, simplex_quotient
from ..hull import complete_points, dual_poly, find_hull, ip_check, is_reflexive, span_check
from ..lg import cross_check, lg_spectrum
from ..normalform import normal_form_data, symmetry_counts, triangular_form
from ..textio import cws_to_points, format_matrix, read_inputs

HELP = """\
This is ``poly.x'':  computing data of a polytope P
Usage:   poly.x [-<Option-string>] [in-file [out-file]]
Options (concatenate any number of them into <Option-string>):
  h  print this information            | n  do not complete polytope or
  f  use as filter                     |      calculate Hodge numbers
  g  general output:                   | i  incidence information
     P reflexive: numbers of (dual)    | s  check for span property
       points/vertices, Hodge numbers  |      (only if P from CWS)
     P not reflexive: numbers of       | I  check for IP property
       points, vertices, equations     | S  number of symmetries
  p  points of P                       | T  upper triangular form
  v  vertices of P                     | N  normal form
  e  equations of P/vertices of P-dual | t  traced normal form computation
  m  pairing matrix between vertices   | V  IP simplices among vertices of P*
       and equations                   | P  IP simplices among points of P*
  d  points of P-dual                  |      (with 1<=codim<=# when # is set)
       (only if P reflexive)           | Z  lattice quotients for IP simplices
  a  all of the above except h,f       | #  #=1,2,3  fibers spanned by IP
  l  LG-`Hodge numbers' from single    |      simplices with codim<=#
       weight input                    | ## ##=11,22,33,(12,23): all (fibered)
  r  ignore non-reflexive input        |      fibers with specified codim(s)
  D  dual polytope as input (ref only) |    when combined: ### = (##)#
Input:    degrees and weights `d1 w11 w12 ... d2 w21 w22 ...'
          or `d np' or `np d' (d=Dimension, np=#[points]) and
              (after newline) np*d coordinates
Output:   as specified by options
"""

PROMPT = ("Degrees and weights  `d1 w11 w12 ... d2 w21 w22 ...'\n"
          "  or `#lines #colums' (= `PolyDim #Points' or `#Points PolyDim'):")

LETTERS = set("hfgpvemdalrDnisISTNtVPZ")
SPECS = (11, 22, 33, 12, 23)


class UsageError(LatpolyError):
    exit_code = 1


@dataclass
class Flags:
    letters: set = field(default_factory=set)
    depth: int = 0  # single digit: fibers spanned by IP simplices
    spec: int = 0  # two digits: all fibrations of a type

    def __contains__(self, c):
        return c in self.letters


def parse_flags(args):
    """Split argv into a :class:`Flags` and the file arguments."""
    fl = Flags()
    files = []
    for a in args:
        if not a.startswith("-") or a == "-":
            files.append(a)
            continue
        s = a[1:]
        i = 0
        while i < len(s):
            c = s[i]
            if c.isdigit():
                j = i
                while j < len(s) and s[j].isdigit():
                    j += 1
                run = s[i:j]
                if len(run) == 1 and run in "123":
                    fl.depth = int(run)
                elif len(run) == 2 and int(run) in SPECS:
                    fl.spec = int(run)
                elif len(run) == 3 and int(run[:2]) in SPECS and run[2] in "123":
                    fl.spec, fl.depth = int(run[:2]), int(run[2])
                else:
                    raise UsageError(f"unknown fibration option -{run}")
                i = j
                continue
            if c not in LETTERS:
                raise UsageError(f"unknown option -{c}")
            fl.letters.add(c)
            i += 1
    if "a" in fl.letters:
        fl.letters |= set("gpvemd")
    if len(files) > 2:
        raise UsageError("too many file arguments")
    return fl, files


# ---------------------------------------------------------------------------
# one record


class Record:
    """Analysis state of one input polytope P (and of P* when reflexive)."""

    def __init__(self, rec, flags: Flags):
        self.rec = rec
        self.flags = flags
        self.emb = None
        if rec.is_cws:
            pts, self.emb = cws_to_points(rec.cws)
        else:
            pts = rec.points
        self.input_points = pts
        if "D" in flags:
            hd = find_hull(pts)
            if not is_reflexive(hd.eqs):
                raise ReflexivityError("dual polytope input must be reflexive")
            self.vertices = dual_poly(hd.eqs)
            self.eqs = _dual_eqs(hd.vertex_coords)
            self.dual_first = [p for p in dict.fromkeys(tuple(q) for q in pts) if any(p)]
            self.points = None
        else:
            h = find_hull(pts)
            self.vertices = h.vertex_coords
            self.eqs = h.eqs
            self.dual_first = None
            self.points = None
        self.reflexive = is_reflexive(self.eqs)
        self._rp = None
        self._dual_pts = None

    @property
    def n(self):
        return len(self.vertices[0])

    def all_points(self):
        if self.points is None:
            if self.rec.is_cws and "D" not in self.flags:
                self.points = sorted(set(self.input_points))
            else:
                self.points = complete_points(self.vertices, self.eqs)
        return self.points

    @property
    def rp(self) -> ReflexivePair:
        if self._rp is None:
            self._rp = ReflexivePair(self.vertices, self.eqs)
        return self._rp

    def dual_points(self):
        """Nonzero points of P*: dual vertices (or input points under -D),
        then the remaining nonzero points in lexicographic order."""
        if self._dual_pts is None:
            head = self.dual_first or [tuple(e.a) for e in self.eqs]
            allp = complete_points([tuple(e.a) for e in self.eqs], _dual_eqs(self.vertices))
            seen = set(head)
            rest = [p for p in allp if any(p) and p not in seen]
            self._dual_pts = list(head) + rest
        return self._dual_pts

    def dual_vertex_list(self):
        dv = {tuple(e.a) for e in self.eqs}
        if self.dual_first:
            return [p for p in self.dual_first if p in dv]
        return [tuple(e.a) for e in self.eqs]


def _g_line(r: Record, fl: Flags) -> str:
    toks = []
    if r.rec.echo:
        toks.append(r.rec.echo)
    nv = len(r.vertices)
    if "n" in fl:
        np_ = len(r.input_points)
        toks.append(f"M:{np_} {nv} F:{len(r.eqs)}")
        return " ".join(toks)
    np_ = len(r.all_points())
    if r.reflexive:
        rp = r.rp
        toks.append(f"M:{np_} {nv} N:{len(rp.dual_points)} {len(rp.dual_vertices)}")
    else:
        toks.append(f"M:{np_} {nv} F:{len(r.eqs)}")
    lg = "l" in fl and r.rec.is_cws
    if lg:
        ws = r.rec.cws.systems[0]
        spec = lg_spectrum(ws)
        cy = sum(ws.w) == ws.d and spec.integral and spec.D in (3, 4)
        if cy:
            if r.reflexive and r.n in (4, 5):
                cross_check(spec, r.rp.hodge())
            toks.append(spec.cy_tag())
        else:
            toks.append("LG: " + spec.hodge_rows())
    elif r.reflexive and r.n in (3, 4, 5):
        toks.append(r.rp.hodge().tag())
    return " ".join(toks)


def _eq_block(r: Record) -> str:
    if r.reflexive:
        return format_matrix([e.a for e in r.eqs], "Vertices of P-dual <-> Equations of P", width=4)
    lines = [f"{len(r.eqs)} {r.n}  Equations of P"]
    for e in r.eqs:
        lines.append("".join(f"{x:4d}" for x in e.a) + f"{e.c:6d}")
    return "\n".join(lines)


def _points_block(pts, caption, width=5) -> str:
    pts = list(pts)
    if len(pts) > 20:
        return format_matrix(pts, caption, width=width)
    n = len(pts[0])
    return format_matrix([[p[i] for p in pts] for i in range(n)], caption, width=width)


def _incidence_block(r: Record) -> str:
    L = r.rp.lattice if r.reflexive else None
    if L is None:
        from ..faces import face_lattice

        L = face_lattice(r.vertices, r.eqs)
    out = [f"Incidences of P: {L.nv} vertices, {L.ne} facets"]
    counts = None
    if "n" not in r.flags:
        from ..faces import point_masks

        pm = point_masks(r.all_points(), [e.a for e in r.eqs], [e.c for e in r.eqs]).tolist()
        counts = pm
    for d in range(L.n):
        fs = L.faces[d]
        items = []
        for f in fs:
            s = f"{f.vertex_bits:x}/{f.facet_bits:x}"
            if counts is not None:
                fb = f.facet_bits
                lp = sum(1 for m in counts if m & fb == fb)
                li = sum(1 for m in counts if m == fb)
                s += f"({lp},{li})"
            items.append(s)
        out.append(f"dim={d} #faces={len(fs)}: " + " ".join(items))
    return "\n".join(out)


def _trace_block(r: Record) -> str:
    d = normal_form_data(r.vertices, r.eqs)
    out = [format_matrix(d.pm, "Vertex pairing matrix of P", width=4)]
    out.append(format_matrix(d.pm_max, "Normal form of the pairing matrix", width=4))
    out.append(f"{len(d.perms)} vertex permutations leaving it invariant:")
    for p in d.orders:
        out.append(" ".join(str(i) for i in p))
    out.append(format_matrix(d.nf.matrix, "Normal form of vertices of P", width=4))
    return "\n".join(out)


def _simplex_block(r: Record, fl: Flags):
    """-V/-P output; returns (text, points used, simplices)."""
    use_points = "P" in fl or ("V" not in fl)
    if use_points:
        pts = r.dual_points()
        cols = pts + [(0,) * r.n]
        caption, dash_w, sep, dw = "points of P-dual and IP-simplices", 5 * len(pts), "    ", 4
    else:
        pts = r.dual_vertex_list()
        cols = pts
        caption, dash_w, sep, dw = "vertices of P-dual and IP-simplices", 5 * len(pts), "   ", 5
    maxc = fl.depth if (fl.depth and not ("V" in fl or "P" in fl)) else None
    simp = ip_simplices(pts, max_codim=maxc)
    if "V" not in fl and "P" not in fl:
        return None, pts, simp, dash_w, sep
    lines = [format_matrix([[p[i] for p in cols] for i in range(r.n)], caption)]
    lines.append("-" * dash_w + f"{sep}#IP-simp={len(simp)}")
    for s in simp:
        row = "".join(f"{w:5d}" for w in s.weights) + f"{s.d:{dw}d}=d  codim={s.codim}"
        if "Z" in fl:
            for q in simplex_quotient(pts, s):
                row += f" {q}"
        lines.append(row)
    return "\n".join(lines), pts, simp, dash_w, sep


def _fiber_lines(r: Record, pts, simp, depth, dash_w, sep) -> str:
    recs = fiber_scan(pts, simp, depth)
    lines = ["-" * dash_w + f"{sep}#fibrations={len(recs)}"]
    for fr in recs:
        marks = "".join(f"{'v' if fr.fiber.mask >> i & 1 else '_':>5s}" for i in range(len(pts)))
        lines.append(f"{marks}  cd={fr.codim}  {fr.fiber.stats()}")
    return "\n".join(lines)


def _all_fiber_blocks(r: Record, spec: int) -> str:
    pts = r.dual_points()
    recs = all_fibrations(pts, spec)
    rp = r.rp
    whole = f"M:{len(rp.points)} {len(rp.vertices)} N:{len(rp.dual_points)} {len(rp.dual_vertices)}"
    out = []
    for fr in recs:
        if fr.outer is not None:
            if spec == 12 and r.n == 4:
                tag = f"E{fr.fiber.stats()}  K{fr.outer.stats()}"
            else:
                tag = f"{fr.fiber.stats()}  {fr.outer.stats()}"
        else:
            tag = fr.fiber.stats()
        cap = f"{tag}  {whole}  p={fr.pstring()}"
        out.append(format_matrix(fr.basis_matrix, cap, width=5, first_width=4))
    return "\n".join(out)


def process(rec, fl: Flags, out) -> None:
    r = Record(rec, fl)
    if "r" in fl and not r.reflexive:
        return
    blocks = []
    want_g = "g" in fl or not (fl.letters - set("fIlrDn") or fl.depth or fl.spec)
    if want_g:
        blocks.append(_g_line(r, fl))
    if "I" in fl and not ip_check(r.eqs):
        blocks.append("P does not have the IP property")
    if "p" in fl:
        blocks.append(_points_block(r.all_points(), "Points of P"))
    if "v" in fl:
        blocks.append(_points_block(r.vertices, "Vertices of P"))
    if "e" in fl:
        blocks.append(_eq_block(r))
    if "m" in fl:
        blocks.append(format_matrix(pairing_matrix(r.vertices, r.eqs),
                                    "Pairing matrix of vertices and equations of P", width=4))
    if "d" in fl and r.reflexive:
        blocks.append(_points_block(r.dual_points() + [(0,) * r.n], "Points of P-dual"))
    if "i" in fl:
        blocks.append(_incidence_block(r))
    if "s" in fl:
        if not rec.is_cws:
            print("span property is only defined for (C)WS input", file=sys.stderr)
        elif not span_check(r.emb, r.eqs):
            blocks.append("P does not have the span property")
    if "S" in fl:
        sc = symmetry_counts(r.vertices, r.eqs)
        blocks.append(f"#GL(Z{r.n})-Symmetries={sc.n_lattice}, #VPM-Symmetries={sc.n_vpm}")
    if "T" in fl:
        H, _ = triangular_form(r.input_points)
        blocks.append(format_matrix(H, "Upper triangular form of the input points", width=4))
    if "N" in fl:
        nf = normal_form_data(r.vertices, r.eqs).nf
        blocks.append(format_matrix(nf.matrix, "Normal form of vertices of P", width=4))
    if "t" in fl:
        blocks.append(_trace_block(r))
    if ("V" in fl or "P" in fl or fl.depth) and not r.reflexive:
        print("IP simplices and fibrations need a reflexive polytope", file=sys.stderr)
    elif "V" in fl or "P" in fl or fl.depth:
        text, pts, simp, dash_w, sep = _simplex_block(r, fl)
        if text:
            blocks.append(text)
        if fl.depth:
            blocks.append(_fiber_lines(r, pts, simp, fl.depth, dash_w, sep))
    if fl.spec:
        if r.reflexive:
            text = _all_fiber_blocks(r, fl.spec)
            if text:
                blocks.append(text)
        else:
            print("fibrations need a reflexive polytope", file=sys.stderr)
    for b in blocks:
        out.write(b + "\n")


def _interactive_prompt(header):
    if header is None:
        print(PROMPT, file=sys.stderr)
    else:
        r, c = header
        n, np_ = min(r, c), max(r, c)
        if r <= c:
            print(f"Type the {r * c} coordinates as dim={n} lines with #pts={np_} colums:", file=sys.stderr)
        else:
            print(f"Type the {r * c} coordinates as #pts={np_} lines with dim={n} colums:", file=sys.stderr)
    sys.stderr.flush()


def run_poly(argv, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        fl, files = parse_flags(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        print(HELP, end="", file=sys.stderr)
        return 1
    if "h" in fl:
        stdout.write(HELP)
        return 0
    fin, fout = stdin, stdout
    try:
        if files and files[0] != "-":
            fin = open(files[0])
        if len(files) > 1:
            fout = open(files[1], "w")
    except OSError as exc:
        print(exc, file=sys.stderr)
        return 1
    prompt = None
    if not files and "f" not in fl:
        prompt = _interactive_prompt
    try:
        for rec in read_inputs(fin, lg="l" in fl, prompt=prompt):
            try:
                process(rec, fl, fout)
            except ReflexivityError as exc:
                if "D" in fl:
                    print(exc, file=sys.stderr)
                    continue
                raise
            fout.flush()
    except SpanError as exc:
        print(exc, file=sys.stderr)
        for a, c in exc.equations:
            print(" ".join(str(x) for x in a) + f"  {c}", file=sys.stderr)
        return exc.exit_code
    except LatpolyError as exc:
        print(exc, file=sys.stderr)
        return exc.exit_code
    finally:
        if fin is not stdin:
            fin.close()
        if fout is not stdout:
            fout.close()
    return 0


def main(argv=None) -> int:
    return run_poly(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
