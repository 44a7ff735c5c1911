"""Plain-text store of polytope normal forms.

One polytope per line, serialized by :func:`latpoly.normalform.nf_key`
("n nv" followed by the matrix entries row by row).  Lines are kept sorted
and unique, so merging stores is a set union and files diff cleanly.
Polytopes that are reflexive only on a sublattice carry a trailing ``sl``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .core import LatpolyError
from .normalform import NormalForm, nf_key

__all__ = ["NFStore", "parse_key", "key_dim"]


def parse_key(key: str) -> NormalForm:
    t = key.split()
    n, nv = int(t[0]), int(t[1])
    vals = [int(x) for x in t[2:2 + n * nv]]
    if len(vals) != n * nv:
        raise LatpolyError(f"truncated normal form line: {key!r}")
    return NormalForm(tuple(tuple(vals[i * nv:(i + 1) * nv]) for i in range(n)))


def key_dim(key: str) -> int:
    return int(key.split(None, 1)[0])


def _sort_key(key: str):
    return tuple(int(x) for x in key.split())


@dataclass
class _Entry:
    key: str
    sublattice: bool = False


class NFStore:
    """Sorted, duplicate-free collection of normal forms of one dimension."""

    def __init__(self, keys=(), dim: int | None = None):
        self.dim = dim
        self._d: dict[str, bool] = {}
        for k in keys:
            self.add(k)

    def __len__(self):
        return len(self._d)

    def __contains__(self, key):
        if isinstance(key, NormalForm):
            key = nf_key(key)
        return key in self._d

    def __iter__(self):
        return iter(self.keys())

    def keys(self) -> list[str]:
        return sorted(self._d, key=_sort_key)

    def normal_forms(self) -> list[NormalForm]:
        return [parse_key(k) for k in self.keys()]

    @property
    def n_sublattice(self) -> int:
        return sum(1 for v in self._d.values() if v)

    def add(self, nf, sublattice: bool = False) -> bool:
        """Insert; returns True when the entry is new."""
        key = nf_key(nf) if isinstance(nf, NormalForm) else " ".join(str(nf).split())
        d = key_dim(key)
        if self.dim is None:
            self.dim = d
        elif d != self.dim:
            raise LatpolyError(f"dimension mismatch: store has {self.dim}d, got {d}d")
        if key in self._d:
            self._d[key] = self._d[key] and sublattice
            return False
        self._d[key] = sublattice
        return True

    def merge(self, *others: "NFStore") -> "NFStore":
        out = NFStore(dim=self.dim)
        for s in (self,) + others:
            for k, sl in s._d.items():
                out.add(k, sl)
        return out

    # -- text I/O --------------------------------------------------------

    def dumps(self) -> str:
        return "".join(k + (" sl" if self._d[k] else "") + "\n" for k in self.keys())

    @classmethod
    def loads(cls, text: str) -> "NFStore":
        st = cls()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            sl = line.endswith(" sl")
            st.add(line[:-3] if sl else line, sl)
        return st

    def save(self, path: str | os.PathLike) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "NFStore":
        with open(path) as fh:
            return cls.loads(fh.read())

    def ascii_blocks(self) -> str:
        """Each polytope as a matrix block readable by the polytope CLI."""
        out = []
        for nf in self.normal_forms():
            out.append(f"{nf.n} {nf.nv}")
            out.extend(" ".join(str(x) for x in r) for r in nf.matrix)
        return "\n".join(out) + ("\n" if out else "")
