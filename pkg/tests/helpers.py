"""Shared oracles and corpus builders for the test suite.

Oracles here are deliberately naive (exhaustive scans) and independent
of the library's search logic, so agreement is meaningful.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from dctk.conjugate import (
    FlatBottom,
    LinearPlus,
    Quadratic,
    Restricted,
    Shifted,
    SumOf,
    Table,
    UnivariateConvex,
    VShape,
)
from dctk.extint import MINUS_INF, ExtInt, is_finite


def brute_conjugate(phi: UnivariateConvex, ell: int, lo: int = -30, hi: int = 30) -> ExtInt:
    """max k*ell - phi(k) by scanning [lo, hi]; callers must pick a scan
    range covering the effective domain."""
    best: ExtInt = MINUS_INF
    for k in range(lo, hi + 1):
        v = phi.value(k)
        if not is_finite(v):
            continue
        cand = k * ell - v
        if cand > best:
            best = cand
    return best


def random_convex_table(rng: random.Random) -> Table:
    k0 = rng.randint(-8, 4)
    length = rng.randint(1, min(12, 9 - k0))
    slopes = sorted(rng.randint(-4, 4) for _ in range(length - 1))
    v = rng.randint(-10, 10)
    values = [v]
    for s in slopes:
        v += s
        values.append(v)
    return Table(k0, tuple(values))


def random_closed_form(rng: random.Random) -> UnivariateConvex:
    """A closed-form shape with effective domain inside [-8, 8]."""
    A = rng.randint(-8, 2)
    B = rng.randint(A, 8)
    kind = rng.randrange(5)
    if kind == 0:
        inner: UnivariateConvex = Quadratic(rng.randint(1, 2))
        if rng.random() < 0.5:
            inner = Shifted(rng.randint(-3, 3), inner)
        if rng.random() < 0.5:
            inner = LinearPlus(rng.randint(-3, 3), inner)
        return Restricted(A, B, inner)
    if kind == 1:
        k0 = rng.randint(A, B)
        c1 = rng.randint(-4, 2)
        c2 = rng.randint(c1, 4)
        return VShape(k0, c1, c2, A, B)
    if kind == 2:
        a = rng.randint(A, B)
        b = rng.randint(a, B)
        return FlatBottom(a, b, rng.randint(-4, 0), rng.randint(0, 4), A, B)
    if kind == 3:
        k0 = rng.randint(A, B)
        c1 = rng.randint(-3, 1)
        c2 = rng.randint(max(c1, 0), 3)
        base = VShape(k0, c1, c2, A, B)
        return Shifted(0, LinearPlus(rng.randint(-2, 2), base))
    parts = []
    for _ in range(2):
        k0 = rng.randint(A, B)
        c1 = rng.randint(-2, 0)
        c2 = rng.randint(0, 2)
        parts.append(VShape(k0, c1, c2, A, B))
    return SumOf(tuple(parts))


def univariate_corpus(count: int = 220, seed: int = 7) -> List[UnivariateConvex]:
    """Mixed corpus with effective domains inside [-8, 8]."""
    rng = random.Random(seed)
    out: List[UnivariateConvex] = []
    while len(out) < count:
        if len(out) % 3 == 0:
            out.append(random_convex_table(rng))
        else:
            out.append(random_closed_form(rng))
    return out


def dom_range(phi: UnivariateConvex) -> Tuple[int, int]:
    lo, hi = phi.dom()
    assert is_finite(lo) and is_finite(hi)
    return lo, hi
