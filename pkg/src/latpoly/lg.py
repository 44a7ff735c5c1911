"""Landau-Ginzburg data of a single weight system.

Exponents of the Poincare polynomial are kept in the t^(1/d) grading: the
coefficient at index e belongs to the U(1) charge e/d.  All large arrays are
computed in the ring Z/2^64 (numpy uint64 wraps modulo 2^64).  That is exact
for the final results because they are nonnegative integers whose sum is
checked against the Milnor number, which is required to stay below 2^63.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

import numpy as np

from .core import ArithmeticOverflow, ConsistencyError, LatpolyError, get_limits

__all__ = [
    "LGSpectrum",
    "central_charge",
    "milnor_number",
    "poincare_poly",
    "lg_spectrum",
    "cross_check",
]

_U64 = np.uint64
_CHUNK = 1 << 20


def _weights(ws):
    d = int(ws.d)
    w = [int(x) for x in ws.w]
    if d <= 0 or any(x <= 0 or x >= d for x in w):
        raise LatpolyError(f"LG weights must satisfy 0 < w_i < d (d={d}, w={w})")
    return d, w


def central_charge(ws) -> Fraction:
    """c/3 = sum_i (1 - 2 w_i / d), as an exact rational."""
    d, w = _weights(ws)
    return sum((Fraction(d - 2 * x, d) for x in w), Fraction(0))


def milnor_number(ws) -> int:
    d, w = _weights(ws)
    num = prod(d - x for x in w)
    den = prod(w)
    if num % den:
        raise ConsistencyError("Milnor number is not an integer: weight system not transversal")
    return num // den


def _mul_binomial(a: np.ndarray, s: int) -> None:
    """a <- a * (1 - t^s), truncated, in place."""
    if s < len(a):
        a[s:] -= a[:-s].copy()


def _div_geometric(a: np.ndarray, w: int) -> np.ndarray:
    """a <- a / (1 - t^w) as a truncated power series."""
    L = len(a)
    pad = (-L) % w
    b = np.concatenate([a, np.zeros(pad, dtype=a.dtype)]).reshape(-1, w)
    np.cumsum(b, axis=0, out=b)
    return b.reshape(-1)[:L]


def _poly_mod64(d: int, w: tuple[int, ...]) -> np.ndarray:
    """Coefficients of prod (1 - t^(d-w_i)) / (1 - t^(w_i)) modulo 2^64."""
    deg = sum(d - 2 * x for x in w)
    if deg < 0:
        raise LatpolyError("negative Poincare degree")
    if deg + sum(w) + 1 > 8 * get_limits().point_nmax * 64:
        raise ArithmeticOverflow("poincare_poly degree", deg, 64)
    # the tail (deg, deg + sum w] must vanish iff the division is exact
    L = deg + sum(w) + 1
    a = np.zeros(L, dtype=_U64)
    a[0] = 1
    for x in w:
        _mul_binomial(a, d - x)
        a = _div_geometric(a, x)
    if a[deg + 1:].any():
        raise ConsistencyError("Poincare series is not a polynomial (weights not transversal)")
    return a[: deg + 1]


@lru_cache(maxsize=64)
def _checked_poly(d: int, w: tuple[int, ...]) -> np.ndarray:
    a = _poly_mod64(d, w)
    mu_num, mu_den = prod(d - x for x in w), prod(w)
    if mu_num % mu_den:
        raise ConsistencyError("Milnor number is not an integer")
    mu = mu_num // mu_den
    if mu >= 1 << 63:
        raise ArithmeticOverflow("poincare_poly Milnor number", mu, 63)
    a = a.view(np.int64)
    if (a < 0).any() or int(a.sum(dtype=object)) != mu:
        raise ArithmeticOverflow("poincare_poly coefficients", mu, 64)
    a.setflags(write=False)
    return a


def poincare_poly(ws) -> np.ndarray:
    """Integer coefficients of P(t) = prod (1 - t^(d - w_i)) / (1 - t^w_i).

    Index e of the returned array is the coefficient of t^e with the weights
    used as integer exponents, i.e. charge e/d.
    """
    d, w = _weights(ws)
    return _checked_poly(d, tuple(w))


@dataclass
class LGSpectrum:
    D: int | None
    c3: Fraction
    h: list[list[int]] | None = None

    @property
    def integral(self) -> bool:
        return self.h is not None

    def hodge_rows(self) -> str:
        """``H0:h00,...,h0D H1:h10,...,h1,D-1 ... HD:hD0``."""
        if self.h is None:
            return f"c/3={_frac(self.c3)}"
        D = self.D
        parts = []
        for p in range(D + 1):
            parts.append(f"H{p}:" + ",".join(str(self.h[p][q]) for q in range(D - p + 1)))
        return " ".join(parts)

    def cy_numbers(self):
        """Geometric Hodge data (h11, h21) or (h11, h12, h13) with Euler number."""
        h, D = self.h, self.D
        if D == 3:
            return (h[1][1], h[1][2]), 2 * (h[1][1] - h[1][2])
        if D == 4:
            return (h[1][1], h[1][2], h[1][3]), 6 * (8 + h[1][1] + h[1][3] - h[1][2])
        return None, None

    def cy_tag(self) -> str:
        nums, chi = self.cy_numbers()
        return "V:" + ",".join(str(x) for x in nums) + f" [{chi}]"


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def lg_spectrum(ws) -> LGSpectrum:
    """Charge degeneracies of the canonical Z_d orbifold.

    Sector l twists field i by the phase theta_i = frac(l w_i / d).  Fields with
    theta_i = 0 form the untwisted set U; the sector ground state has charges
    Q = sum_{i not in U} (theta_i - w_i/d) and Qbar = sum_{i not in U} (1 - theta_i - w_i/d),
    and the states are ground state times monomials counted by the Poincare
    polynomial of the fields in U.  A state of degree deg survives the
    projection when both Q + deg and Qbar + deg are integers; it contributes
    to h[p][q] with p = Q + deg and q = D - (Qbar + deg).
    """
    d, w = _weights(ws)
    c3 = central_charge(ws)
    if c3.denominator != 1:
        return LGSpectrum(None, c3)
    D = int(c3)
    N = len(w)
    if d * max(w) >= 1 << 62:
        raise ArithmeticOverflow("lg_spectrum sector phases", d * max(w), 63)
    h = np.zeros((D + 1, D + 1), dtype=object)
    wa = np.array(w, dtype=np.int64)
    bits = np.int64(1) << np.arange(N, dtype=np.int64)
    for start in range(0, d, _CHUNK):
        l = np.arange(start, min(d, start + _CHUNK), dtype=np.int64)
        r = (l[:, None] * wa[None, :]) % d
        tw = r != 0
        Qd = ((r - wa) * tw).sum(axis=1)
        Qbd = ((d - r - wa) * tw).sum(axis=1)
        mask = ((~tw) * bits).sum(axis=1)
        for m in np.unique(mask):
            sel = mask == m
            U = tuple(w[i] for i in range(N) if m >> i & 1)
            coef = _checked_poly(d, U) if U else np.ones(1, dtype=np.int64)
            _accumulate(h, D, d, coef, Qd[sel], Qbd[sel])
    grid = [[int(h[p][q]) for q in range(D + 1)] for p in range(D + 1)]
    spec = LGSpectrum(D, c3, grid)
    for p in range(D + 1):
        for q in range(D + 1):
            if grid[p][q] != grid[D - p][D - q]:
                raise ConsistencyError("LG spectrum violates Hodge-star duality")
    return spec


def _accumulate(h, D, d, coef, Qd, Qbd):
    L = len(coef)
    e0 = (-Qd) % d
    for k in range(L // d + 1):
        e = e0 + k * d
        ok = e < L
        if not ok.any():
            continue
        e, qd, qbd = e[ok], Qd[ok], Qbd[ok]
        c = coef[e]
        qr = qbd + e
        ok = (c != 0) & (qr % d == 0)
        if not ok.any():
            continue
        p = (qd[ok] + e[ok]) // d
        q = D - qr[ok] // d
        c = c[ok]
        if p.min() < 0 or p.max() > D or q.min() < 0 or q.max() > D:
            raise ConsistencyError("LG state charge outside [0, c/3]")
        cnt = np.zeros((D + 1) * (D + 1), dtype=np.int64)
        np.add.at(cnt, p * (D + 1) + q, c)
        for idx in np.nonzero(cnt)[0]:
            h[idx // (D + 1)][idx % (D + 1)] += int(cnt[idx])


def cross_check(spec: LGSpectrum, hodge_data) -> None:
    """Compare LG and toric Hodge numbers; raise ConsistencyError on mismatch."""
    if not spec.integral:
        raise ConsistencyError("no integral LG spectrum to compare")
    nums, chi = spec.cy_numbers()
    if hodge_data.n == 4:
        geo = (hodge_data.h11, hodge_data.h21)
    elif hodge_data.n == 5:
        geo = (hodge_data.h11, hodge_data.h12, hodge_data.h13)
    else:
        return
    if nums != geo or chi != hodge_data.chi:
        raise ConsistencyError(f"LG spectrum {nums} [{chi}] disagrees with toric Hodge data {geo} [{hodge_data.chi}]")
