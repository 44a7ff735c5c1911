"""Command line classifier (``latpoly-class``).

Stores are plain text files of normal forms (see :mod:`latpoly.store`);
the binary file and database options all read and write that format.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from ..core import LatpolyError
from ..classify import (
    classify,
    ip_cws,
    mirror_stats,
    subpolytopes,
    sublattice_scan,
)
from ..hull import complete_points, find_hull
from ..normalform import nf_key, normal_form
from ..store import NFStore
from ..textio import cws_to_points, read_inputs

HELP = """\
This is  `class.x', a program for classifying reflexive polytopes
Usage:     class.x  [options] [ascii-input-file [ascii-output-file]]
Options:   -h          print this information
           -f or -     use as filter; otherwise parameters denote I/O files
           -m*         various types of minimality checks (* ... lvra)
           -p* NAME    specification of a binary I/O file (* ... ioas)
           -d* NAME    specification of a binary I/O database (DB) (* ... ios)
           -r          recover: file=po-file.aux, use same pi-file
           -o[#]       original lattice [omit up to # points] only
           -s*         subpolytopes on various sublattices (* ... vphm)
           -k          keep some of the vertices
           -c          check consistency of binary file or DB
           -M[M]       print missing mirrors to ascii-output
           -a[2b]      create binary file from ascii-input
           -b[2a]      ascii-output from binary file or DB
           -H*         applications related to Hodge number DBs (* ...cstfe)
"""

_UNSUPPORTED = {
    "r": "-r (recover) is not supported: stores are written atomically",
    "k": "-k (keep vertices) is not supported",
    "c": "-c (consistency check) is not supported",
    "H": "-H* (Hodge number databases) is not supported",
}


class UsageError(LatpolyError):
    exit_code = 1


@dataclass
class Options:
    filter: bool = False
    depth: int | None = None
    orig: bool = False
    ma: bool = False
    to_ascii: bool = False
    from_ascii: bool = False
    sv: bool = False
    missing: bool = False
    pi: str | None = None
    po: str | None = None
    pa: str | None = None
    files: list = field(default_factory=list)


def parse_args(argv) -> Options:
    op = Options()
    args = list(argv)
    i = 0
    while i < len(args):
        a = args[i]
        i += 1
        if a == "-":
            op.filter = True
            continue
        if not a.startswith("-") or len(a) < 2:
            op.files.append(a)
            continue
        body = a[1:]
        c = body[0]
        if c == "h":
            raise _Help()
        if c == "f":
            op.filter = True
        elif c == "o":
            op.orig = True
            if body[1:]:
                if not body[1:].isdigit():
                    raise UsageError(f"bad depth in {a}")
                op.depth = int(body[1:])
        elif c == "m":
            if body[1:] != "a":
                raise UsageError("only -ma (IP filter of (C)WS) is supported; "
                                 "minimality checks l, v, r are not available")
            op.ma = True
        elif c in "pd":
            kind = body[1:2]
            if kind not in ("i", "o", "a") or (c == "d" and kind == "a"):
                raise UsageError(f"unsupported option {a}")
            if i >= len(args):
                raise UsageError(f"{a} needs a file name")
            setattr(op, "p" + kind, args[i])
            i += 1
        elif c == "s":
            if body[1:] != "v":
                raise UsageError("only -sv (sublattices of the vertex lattice) is supported")
            op.sv = True
        elif c == "M":
            op.missing = True
        elif c == "a":
            op.from_ascii = True
        elif c == "b":
            op.to_ascii = True
        elif c in _UNSUPPORTED:
            raise UsageError(_UNSUPPORTED[c])
        else:
            raise UsageError(f"unknown option {a}")
    if len(op.files) > 2:
        raise UsageError("too many file arguments")
    return op


class _Help(Exception):
    pass


def _summary(name: str, store: NFStore, seconds: float) -> str:
    ms = mirror_stats(store)
    n = len(store)
    sl = store.n_sublattice
    return f"Writing {name}: {n - sl}+{sl}sl {ms.pairs}m+{ms.selfdual}s done: {seconds:.0f}s"


def _points(rec):
    if rec.is_cws:
        return cws_to_points(rec.cws)[0]
    h = find_hull(rec.points)
    return complete_points(h.vertex_coords, h.eqs)


def _write_store(op: Options, store: NFStore, log, t0: float) -> None:
    if op.pa:
        try:
            store = NFStore.load(op.pa).merge(store)
        except FileNotFoundError:
            pass
        store.save(op.pa)
        print(_summary(op.pa, store, time.time() - t0), file=log)
    if op.po:
        store.save(op.po)
        print(_summary(op.po, store, time.time() - t0), file=log)


def run_class(argv, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        op = parse_args(argv)
    except _Help:
        stdout.write(HELP)
        return 0
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    t0 = time.time()
    fin = fout = None
    try:
        if op.files and not op.filter:
            fin = open(op.files[0])
            if len(op.files) > 1:
                fout = open(op.files[1], "w")
        src = fin or stdin
        out = fout or stdout
        # summaries go to the output stream only when no ascii data goes there
        log = out if (op.po or op.pa) and not op.filter else sys.stderr
        base = NFStore.load(op.pi) if op.pi else None
        if base is not None and op.pi and not (op.to_ascii or op.sv or op.missing):
            print(f"Read {op.pi} ({len(base) - base.n_sublattice}poly "
                  f"+{base.n_sublattice}sl)", file=log)

        if op.to_ascii:
            if base is None:
                raise UsageError("-b needs a store (-pi NAME or -di NAME)")
            out.write(base.ascii_blocks())
            return 0
        if op.missing:
            if base is None:
                raise UsageError("-M needs a store (-pi NAME or -di NAME)")
            ms = mirror_stats(base)
            out.write(NFStore(ms.missing, dim=base.dim).ascii_blocks())
            print(f"{len(ms.missing)} missing mirrors", file=sys.stderr)
            return 0
        if op.sv:
            if base is None:
                raise UsageError("-sv needs a store (-pi NAME or -di NAME)")
            new = sublattice_scan(base)
            if op.po or op.pa:
                _write_store(op, new, log, t0)
            else:
                out.write(new.ascii_blocks())
            return 0
        if op.ma:
            for rec in read_inputs(src):
                if not rec.is_cws:
                    raise UsageError("-ma expects (C)WS input")
                if ip_cws(rec.cws):
                    print(rec.echo, file=out)
            return 0
        if op.from_ascii:
            store = NFStore() if base is None else base.merge()
            for rec in read_inputs(src):
                store.add(nf_key(normal_form(_points(rec))))
            if not (op.po or op.pa):
                raise UsageError("-a needs an output store (-po NAME)")
            _write_store(op, store, log, t0)
            return 0

        # subpolytope search
        recs = list(read_inputs(src))
        if op.orig:
            print(f"rec-dep<={op.depth if op.depth is not None else 'inf'}", file=log)
            store = NFStore() if base is None else base.merge()
            for k, rec in enumerate(recs, 1):
                found, st = subpolytopes(_points(rec), op.depth, store)
                print(f"{rec.echo} R={k} +0sl hit={st.n_hit} IP={st.n_ip} "
                      f"NF={st.n_nf} ({found.n_sublattice})", file=log)
        else:
            store, st = classify([_points(r) for r in recs])
            if base is not None:
                store = base.merge(store)
            print(f"R={len(recs)} +0sl IP={st.n_ip} NF={st.n_nf}", file=log)
        if op.po or op.pa:
            _write_store(op, store, log, t0)
        else:
            out.write(store.ascii_blocks())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print(exc, file=sys.stderr)
        return 1
    except LatpolyError as exc:
        print(exc, file=sys.stderr)
        return exc.exit_code
    finally:
        if fin is not None:
            fin.close()
        if fout is not None:
            fout.close()
    return 0


def main(argv=None) -> int:
    return run_class(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
