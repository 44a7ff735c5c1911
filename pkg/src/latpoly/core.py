"""Integer types, checked arithmetic and the basic polytope records.

All arithmetic is carried out on Python integers, which never wrap.  The
fixed-precision contract of the original C package is emulated by range
checks: results that do not fit the configured ``Int`` (or ``WideInt`` on
critical paths) raise :class:`ArithmeticOverflow` instead of being returned.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Iterator, Sequence

__all__ = [
    "LatpolyError",
    "ArithmeticOverflow",
    "CapacityError",
    "SpanError",
    "ReflexivityError",
    "ConsistencyError",
    "Limits",
    "get_limits",
    "limits",
    "check_int",
    "check_wide",
    "HyperplaneEq",
    "eval_eq",
    "normalize_eq",
    "pairing_matrix",
]


class LatpolyError(Exception):
    """Base class of all errors raised by this package."""

    exit_code = 1


class ArithmeticOverflow(LatpolyError, ArithmeticError):
    exit_code = 3

    def __init__(self, operation: str, value: int, bits: int):
        self.operation = operation
        self.value = value
        self.bits = bits
        super().__init__(
            f"arithmetic overflow in {operation}: {value} does not fit {bits}-bit integer"
        )


class CapacityError(LatpolyError):
    """A configured size limit (dimension, points, vertices, ...) was exceeded."""

    exit_code = 4

    def __init__(self, param: str, needed: int):
        self.param = param
        self.needed = needed
        super().__init__(f"Please increase {param} to at least {needed}")


class SpanError(LatpolyError):
    """Input points do not span the ambient space.

    ``equations`` holds integer equations ``(a, c)`` with ``a.x + c == 0`` on
    all input points, defining their affine hull.
    """

    exit_code = 2

    def __init__(self, msg: str, dim: int = -1, equations: list | None = None):
        super().__init__(msg)
        self.dim = dim
        self.equations = equations or []


class ReflexivityError(LatpolyError):
    exit_code = 2


class ConsistencyError(LatpolyError):
    """Internal inconsistency; signals a bug or an undetected overflow."""

    exit_code = 3


@dataclass(frozen=True)
class Limits:
    """Precision and capacity configuration (the ``Global.h`` analogue)."""

    int_bits: int = 32
    wide_bits: int = 64
    poly_dmax: int = 6
    point_nmax: int = 2_000_000
    vert_nmax: int = 256
    eq_nmax: int = 4096
    face_nmax: int = 200_000

    @property
    def int_max(self) -> int:
        return (1 << (self.int_bits - 1)) - 1

    @property
    def wide_max(self) -> int:
        return (1 << (self.wide_bits - 1)) - 1


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("latpoly_limits", default=Limits())


def get_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits(**overrides) -> Iterator[Limits]:
    """Temporarily override fields of the active :class:`Limits`."""
    new = replace(_LIMITS.get(), **overrides)
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


def check_int(value: int, operation: str) -> int:
    lim = _LIMITS.get()
    if -lim.int_max - 1 <= value <= lim.int_max:
        return value
    raise ArithmeticOverflow(operation, value, lim.int_bits)


def check_wide(value: int, operation: str) -> int:
    lim = _LIMITS.get()
    if -lim.wide_max - 1 <= value <= lim.wide_max:
        return value
    raise ArithmeticOverflow(operation, value, lim.wide_bits)


def check_dim(n: int) -> None:
    if n > _LIMITS.get().poly_dmax:
        raise CapacityError("POLY_Dmax", n)


@dataclass(frozen=True)
class HyperplaneEq:
    """Facet inequality ``a.x + c >= 0`` with primitive integer normal ``a``."""

    a: tuple[int, ...]
    c: int

    def __call__(self, x: Sequence[int]) -> int:
        return eval_eq(self, x)

    def __iter__(self):
        yield self.a
        yield self.c


def eval_eq(eq: HyperplaneEq, x: Sequence[int]) -> int:
    """Return ``a.x + c``, checked to fit ``Int``."""
    a = eq.a
    if len(a) != len(x):
        raise ValueError(f"dimension mismatch: equation has {len(a)}, point has {len(x)}")
    s = eq.c
    for ai, xi in zip(a, x):
        s += ai * xi
    check_wide(s, "eval_eq")
    return check_int(s, "eval_eq")


def normalize_eq(a: Sequence[int], c: int) -> HyperplaneEq:
    """Divide ``(a, c)`` by ``gcd(a)``; ``c`` is never divided on its own."""
    g = 0
    for ai in a:
        g = gcd(g, ai)
    if g == 0:
        raise ConsistencyError("zero normal vector")
    if c % g:
        raise ConsistencyError(f"offset {c} not divisible by gcd {g} of normal")
    a = tuple(check_int(ai // g, "normalize_eq") for ai in a)
    return HyperplaneEq(a, check_int(c // g, "normalize_eq"))


def pairing_matrix(
    vertices: Sequence[Sequence[int]], eqs: Sequence[HyperplaneEq]
) -> list[list[int]]:
    """Vertex-facet pairing matrix ``a_j.v_i + c_j`` (rows: vertices)."""
    out = []
    for v in vertices:
        row = [eval_eq(e, v) for e in eqs]
        if any(x < 0 for x in row):
            raise ConsistencyError("negative vertex-facet distance: hull is inconsistent")
        out.append(row)
    return out


@dataclass
class PolyData:
    """Convenience bundle of a polytope's points, vertices and facets."""

    points: list[tuple[int, ...]]
    vertices: list[int]
    eqs: list[HyperplaneEq]
    extra: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def vertex_coords(self) -> list[tuple[int, ...]]:
        return [self.points[i] for i in self.vertices]
