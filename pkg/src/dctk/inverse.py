"""Inverse optimization over integral linear systems.

Given a feasible point z0 of [Q'x >= p', Q=x = p=] and a separable
convex deviation Phi (typically a distance from a reference cost w0),
find an integral cost w minimizing Phi(w) among those making z0 a
w-minimizer.  The dual side maximizes -conj(Phi)(z) over the integer
points of the tangent cone at z0.  Multi-target instances reduce to a
single target on the dilated system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import ratlin
from .conjugate import (
    FlatBottom,
    Quadratic,
    SeparableConvex,
    Shifted,
    UnivariateConvex,
    VShape,
)
from .errors import NoFeasibleWeight, NotFeasible
from .extint import MINUS_INF, PLUS_INF, ExtInt, is_finite
from .polyhedron import (
    EQ,
    GEQ,
    LinearSystem,
    MinMaxReport,
    Row,
    Window,
    dilation,
    lp_min,
)


@dataclass(frozen=True)
class TangentCone:
    base_point: Tuple[int, ...]
    cone_system: LinearSystem


@dataclass(frozen=True)
class InverseInstance:
    parent: LinearSystem
    targets: Tuple[Tuple[int, ...], ...]
    deviation: SeparableConvex

    def __post_init__(self):
        for z in self.targets:
            if not self.parent.contains(z):
                raise NotFeasible(f"target {z} violates the system")


def tangent_cone(sys: LinearSystem, z0: Sequence[int]) -> TangentCone:
    """Rows tight at z0 with right-hand sides zeroed; equality rows are
    always included."""
    z0 = tuple(z0)
    if not sys.contains(z0):
        raise NotFeasible(f"z0={z0} violates the system")
    rows: List[Row] = []
    for r in sys.rows:
        if r.kind == EQ:
            rows.append(Row(r.coeffs, 0, EQ))
        elif r.slack(z0) == 0:
            rows.append(Row(r.coeffs, 0, GEQ))
    if not rows:
        rows.append(Row((0,) * sys.n, 0, GEQ))
    return TangentCone(z0, LinearSystem(sys.elements, tuple(rows)))


def is_minimizer(sys: LinearSystem, z0: Sequence[int], w: Sequence[int]) -> bool:
    """Exact rational check lp_min(sys, w) = w.z0."""
    val, _ = lp_min(sys, w)
    return val == ratlin.dot(w, z0)


def inverse_minimize(
    inst: InverseInstance, w_window: Window
) -> Tuple[Tuple[int, ...], ExtInt]:
    """Exhaustive scan for the cheapest admissible integral cost.

    Multi-target instances are reduced via the dilated system first;
    the scan keeps only w making the (combined) target a w-minimizer.
    """
    sys, z0 = reduce_targets(inst.parent, inst.targets)
    best: ExtInt = PLUS_INF
    arg: Optional[Tuple[int, ...]] = None
    for w in w_window.points():
        if not is_minimizer(sys, z0, w):
            continue
        v = inst.deviation.value(w)
        if v < best:
            best, arg = v, w
    if arg is None:
        raise NoFeasibleWeight(
            "no integral cost in the window makes the target optimal"
        )
    return arg, best


def inverse_dual_search(
    cone: TangentCone,
    deviation: SeparableConvex,
    z_window: Window,
    w_star: Optional[Sequence[int]] = None,
) -> MinMaxReport:
    """max -conj(Phi)(z) over integer points of the tangent cone.

    When the primal witness w* is supplied, the report also records the
    orthogonality (w*.z* = 0) and fitting (Phi'(w*-1) <= z* <= Phi'(w*))
    checks for the best pair.
    """
    best: ExtInt = MINUS_INF
    arg: Optional[Tuple[int, ...]] = None
    for z in z_window.points():
        if not cone.cone_system.contains(z):
            continue
        c = deviation.conjugate(z)
        if not is_finite(c):
            continue
        if -c > best:
            best, arg = -c, z
    report = MinMaxReport(
        dual_value=best,
        dual_witness=arg,
        bounds_used={"z_window": z_window.to_json()},
    )
    if w_star is not None and arg is not None:
        ortho = ratlin.dot(w_star, arg) == 0
        lower = deviation.prime_minus(w_star)
        upper = deviation.prime(w_star)
        fitting = all(
            lo <= zi <= hi for lo, zi, hi in zip(lower, arg, upper)
        )
        report.bounds_used["orthogonal"] = ortho
        report.bounds_used["fitting"] = fitting
    return report


def reduce_targets(
    sys: LinearSystem, targets: Sequence[Sequence[int]]
) -> Tuple[LinearSystem, Tuple[int, ...]]:
    """k targets on R become one target (their sum) on the k-dilation."""
    k = len(targets)
    if k < 1:
        raise ValueError("need at least one target")
    for z in targets:
        if not sys.contains(z):
            raise NotFeasible(f"target {tuple(z)} violates the system")
    if k == 1:
        return sys, tuple(targets[0])
    z0 = tuple(sum(t[i] for t in targets) for i in range(sys.n))
    return dilation(sys, k), z0


def dilate_targets(
    sys: LinearSystem, targets: Sequence[Sequence[int]]
) -> Tuple[LinearSystem, Tuple[int, ...]]:
    """Always-dilating variant of :func:`reduce_targets` (k=1 included)."""
    k = len(targets)
    if k < 1:
        raise ValueError("need at least one target")
    for z in targets:
        if not sys.contains(z):
            raise NotFeasible(f"target {tuple(z)} violates the system")
    z0 = tuple(sum(t[i] for t in targets) for i in range(sys.n))
    return dilation(sys, k), z0


# ---------------------------------------------------------------------------
# Deviation builders


def l1_deviation(w0: Sequence[int], elements: Sequence[str]) -> SeparableConvex:
    """Phi(w) = sum |w(s) - w0(s)|."""
    return SeparableConvex(
        tuple((e, VShape(k0, -1, 1)) for e, k0 in zip(elements, w0))
    )


def weighted_l1_deviation(
    w0: Sequence[int],
    c1: Sequence[int],
    c2: Sequence[int],
    elements: Sequence[str],
) -> SeparableConvex:
    """Asymmetric per-unit penalties: c1 below w0, c2 above."""
    return SeparableConvex(
        tuple(
            (e, VShape(k0, -a, b))
            for e, k0, a, b in zip(elements, w0, c1, c2)
        )
    )


def box_deviation(
    l0: Sequence[ExtInt],
    u0: Sequence[ExtInt],
    c1: Sequence[int],
    c2: Sequence[int],
    elements: Sequence[str],
) -> SeparableConvex:
    """Free inside [l0, u0], linear penalties c1 below and c2 above."""
    return SeparableConvex(
        tuple(
            (e, FlatBottom(a, b, -p, q))
            for e, a, b, p, q in zip(elements, l0, u0, c1, c2)
        )
    )


def weighted_square_deviation(
    w0: Sequence[int], a: Sequence[int], elements: Sequence[str]
) -> SeparableConvex:
    """Phi(w) = sum a(s) * (w(s) - w0(s))^2."""
    return SeparableConvex(
        tuple(
            (e, Shifted(k0, Quadratic(c)))
            for e, k0, c in zip(elements, w0, a)
        )
    )


def default_z_window(deviation: SeparableConvex, fallback: int = 6) -> Window:
    """Componentwise effective domain of the conjugate when the slopes
    are bounded (then the window is exact, not a heuristic), else a
    symmetric fallback box."""
    los: List[int] = []
    his: List[int] = []
    for _, phi in deviation.parts:
        lo, hi = _slope_range(phi)
        los.append(lo if is_finite(lo) else -fallback)
        his.append(hi if is_finite(hi) else fallback)
    return Window(tuple(los), tuple(his))


def _slope_range(phi: UnivariateConvex) -> Tuple[ExtInt, ExtInt]:
    lo, hi = phi.dom()
    if is_finite(lo):
        smin: ExtInt = MINUS_INF
    else:
        t = phi.tail_lo()
        smin = MINUS_INF if t is None else t[0]
    if is_finite(hi):
        smax: ExtInt = PLUS_INF
    else:
        t = phi.tail_hi()
        smax = PLUS_INF if t is None else t[0]
    return smin, smax
