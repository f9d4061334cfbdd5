"""Bracketed scalar minimization: golden-section plus bisection refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class GoldenResult:
    x: float
    fx: float
    bracket: tuple[float, float]
    evaluations: list[tuple[float, float]] = field(default_factory=list)


def golden_section(f, lo: float, hi: float, tol: float) -> GoldenResult:
    """Shrink [lo, hi] by golden-section until the bracket is below ``tol``.

    The objective is memoized, so a deterministic f is probed at most once
    per point; interior probes are reused across iterations as usual.
    """
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    cache: dict[float, float] = {}

    def ev(x: float) -> float:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    while (b - a) > tol:
        if ev(c) <= ev(d):
            b, d = d, c
            c = b - INVPHI * (b - a)
        else:
            a, c = c, d
            d = a + INVPHI * (b - a)
    xs = sorted(cache)
    x_best = min(cache, key=cache.get)
    return GoldenResult(x=x_best, fx=cache[x_best], bracket=(a, b),
                        evaluations=[(x, cache[x]) for x in xs])


def bisect_sign_change(g, lo: float, hi: float, tol: float,
                       max_iter: int = 200) -> float:
    """Bisection for a root of g on [lo, hi]; g(lo) and g(hi) must differ in sign."""
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo < 0) == (ghi < 0):
        raise ValueError("no sign change over the bracket")
    for _ in range(max_iter):
        if (hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    return 0.5 * (lo + hi)
