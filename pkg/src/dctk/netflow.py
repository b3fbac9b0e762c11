"""Integral m-flows with separable convex arc costs.

An m-flow x assigns an integer to every arc so that inflow minus
outflow at node v equals m(v), with f <= x <= g.  The solver finds a
feasible flow by unit augmentations, then cancels negative-cost simple
cycles in the residual graph (forward cost phi'(x), backward
-phi'(x-1)); with unit pushes this is exact for convex costs.
Potentials extracted from residual shortest paths certify square-sum
optima.  Graphs here are tiny, so cycle detection is plain DFS
enumeration rather than anything clever.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .conjugate import Quadratic, SeparableConvex, separable_to_json
from .conjugate import from_json as phi_from_json
from .errors import Infeasible, NotFeasible, Unbounded, ValueMismatch
from .extint import MINUS_INF, PLUS_INF, ExtInt, bound_from_json, bound_to_json, is_finite
from .polyhedron import GEQ, LinearSystem, MinMaxReport, Row

NONNEG = "nonneg"
FREE = "free"


@dataclass(frozen=True)
class Digraph:
    nodes: Tuple[str, ...]
    arcs: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        known = set(self.nodes)
        for u, v in self.arcs:
            if u not in known or v not in known:
                raise ValueError(f"arc ({u},{v}) uses an undeclared node")

    def node_index(self, v: str) -> int:
        return self.nodes.index(v)


def incidence_matrix(d: Digraph) -> List[Tuple[int, ...]]:
    """One row per node: +1 entering, -1 leaving, 0 otherwise (loops 0)."""
    rows = []
    for v in d.nodes:
        rows.append(tuple((head == v) - (tail == v) for tail, head in d.arcs))
    return rows


@dataclass(frozen=True)
class FlowInstance:
    digraph: Digraph
    m: Tuple[int, ...]  # per node, ordered as digraph.nodes
    lower: Tuple[ExtInt, ...]
    upper: Tuple[ExtInt, ...]
    cost: SeparableConvex

    def __post_init__(self):
        d = self.digraph
        if len(self.m) != len(d.nodes):
            raise ValueError("m must have one entry per node")
        if len(self.lower) != len(d.arcs) or len(self.upper) != len(d.arcs):
            raise ValueError("bounds must have one entry per arc")
        if sum(self.m) != 0:
            raise ValueError("m must sum to zero")
        for lo, hi in zip(self.lower, self.upper):
            if lo > hi:
                raise ValueError("need lower <= upper per arc")
        if len(self.cost.parts) != len(d.arcs):
            raise ValueError("cost must have one part per arc")

    def is_feasible_flow(self, x: Sequence[int]) -> bool:
        d = self.digraph
        if len(x) != len(d.arcs):
            return False
        for lo, v, hi in zip(self.lower, x, self.upper):
            if not (lo <= v <= hi):
                return False
        for vi, row in enumerate(incidence_matrix(d)):
            if sum(c * xv for c, xv in zip(row, x)) != self.m[vi]:
                return False
        return True

    def to_json(self):
        cost_json = separable_to_json(self.cost)
        return {
            "nodes": list(self.digraph.nodes),
            "arcs": [list(a) for a in self.digraph.arcs],
            "m": {v: self.m[i] for i, v in enumerate(self.digraph.nodes)},
            "lower": [bound_to_json(v) for v in self.lower],
            "upper": [bound_to_json(v) for v in self.upper],
            "cost": {name: cost_json[name] for name, _ in self.cost.parts},
        }

    @classmethod
    def from_json(cls, obj) -> "FlowInstance":
        d = Digraph(tuple(obj["nodes"]), tuple(tuple(a) for a in obj["arcs"]))
        m = tuple(obj["m"][v] for v in d.nodes)
        lower = tuple(bound_from_json(v, -1) for v in obj["lower"])
        upper = tuple(bound_from_json(v, +1) for v in obj["upper"])
        names = [f"a{i}" for i in range(len(d.arcs))]
        cost_obj = obj.get("cost")
        if cost_obj is None:
            parts = tuple((n, Quadratic(1)) for n in names)
        else:
            parts = tuple((n, phi_from_json(cost_obj[n])) for n in names)
        return cls(d, m, lower, upper, SeparableConvex(parts))


def square_sum_instance(
    d: Digraph,
    m: Sequence[int],
    lower: Optional[Sequence[ExtInt]] = None,
    upper: Optional[Sequence[ExtInt]] = None,
) -> FlowInstance:
    na = len(d.arcs)
    if lower is None:
        lower = (0,) * na
    if upper is None:
        upper = (PLUS_INF,) * na
    cost = SeparableConvex(tuple((f"a{i}", Quadratic(1)) for i in range(na)))
    return FlowInstance(d, tuple(m), tuple(lower), tuple(upper), cost)


def hoffman_feasible(d: Digraph, m: Sequence[int]):
    """Nonnegative uncapacitated m-flow existence: every node set with no
    leaving arc must have nonnegative total demand.  Returns (True, None)
    or (False, first violating node set)."""
    n = len(d.nodes)
    idx = {v: i for i, v in enumerate(d.nodes)}
    for bits in range(1, 1 << n):
        leaves = any(
            bits >> idx[u] & 1 and not bits >> idx[v] & 1 for u, v in d.arcs
        )
        if leaves:
            continue
        total = sum(m[i] for i in range(n) if bits >> i & 1)
        if total < 0:
            return (False, tuple(d.nodes[i] for i in range(n) if bits >> i & 1))
    return (True, None)


def _excess(inst: FlowInstance, x: Sequence[int]) -> List[int]:
    """inflow - outflow - m per node; all zero means conservation."""
    rows = incidence_matrix(inst.digraph)
    return [
        sum(c * xv for c, xv in zip(row, x)) - inst.m[i]
        for i, row in enumerate(rows)
    ]


def _initial_flow(inst: FlowInstance) -> List[int]:
    """Any integral flow within bounds meeting conservation, by unit
    augmentations from surplus to deficit nodes in the residual graph."""
    x: List[int] = []
    for lo, hi in zip(inst.lower, inst.upper):
        if is_finite(lo):
            start = lo if (lo > 0 or hi < 0) else max(lo, min(0, hi) if is_finite(hi) else 0)
        elif is_finite(hi):
            start = min(0, hi)
        else:
            start = 0
        x.append(start)
    d = inst.digraph
    n = len(d.nodes)
    idx = {v: i for i, v in enumerate(d.nodes)}
    for _ in range(100000):
        exc = _excess(inst, x)
        sources = {i for i in range(n) if exc[i] > 0}
        sinks = {i for i in range(n) if exc[i] < 0}
        if not sources:
            return x
        prev: Dict[int, Tuple[int, int]] = {}
        seen = set(sources)
        queue = deque(sorted(sources))
        target = None
        while queue:
            u = queue.popleft()
            if u in sinks:
                target = u
                break
            for ai, (t, h) in enumerate(d.arcs):
                ti, hi_ = idx[t], idx[h]
                if ti == u and x[ai] < inst.upper[ai] and hi_ not in seen:
                    seen.add(hi_)
                    prev[hi_] = (ai, +1)
                    queue.append(hi_)
                if hi_ == u and x[ai] > inst.lower[ai] and ti not in seen:
                    seen.add(ti)
                    prev[ti] = (ai, -1)
                    queue.append(ti)
        if target is None:
            raise Infeasible("no augmenting path between surplus and deficit")
        v = target
        while v in prev:
            ai, sgn = prev[v]
            x[ai] += sgn
            t, h = d.arcs[ai]
            v = idx[t] if sgn == +1 else idx[h]
    raise Infeasible("augmentation guard exceeded")


def _residual_arcs(inst: FlowInstance, x: Sequence[int]):
    """(tail_idx, head_idx, cost, arc_idx, direction) residual arcs."""
    d = inst.digraph
    idx = {v: i for i, v in enumerate(d.nodes)}
    out = []
    for ai, (t, h) in enumerate(d.arcs):
        phi = inst.cost.parts[ai][1]
        if x[ai] < inst.upper[ai]:
            c = phi.value(x[ai] + 1) - phi.value(x[ai])
            out.append((idx[t], idx[h], c, ai, +1))
        if x[ai] > inst.lower[ai]:
            c = -(phi.value(x[ai]) - phi.value(x[ai] - 1))
            out.append((idx[h], idx[t], c, ai, -1))
    return out


def _find_negative_cycle(n: int, arcs) -> Optional[List[Tuple[int, int]]]:
    """Most negative node-simple residual cycle by DFS enumeration;
    None when every cycle has nonnegative cost.  Fine for tiny graphs."""
    finite = []
    for u, v, c, ai, sgn in arcs:
        if not is_finite(c):
            if c is MINUS_INF:
                raise Unbounded("residual arc with infinitely negative cost")
            continue  # PLUS_INF cost: unusable arc
        finite.append((u, v, c, ai, sgn))
    adj: Dict[int, List[Tuple[int, int, int, int]]] = {}
    for u, v, c, ai, sgn in finite:
        adj.setdefault(u, []).append((v, c, ai, sgn))

    best_cost = 0
    best: Optional[List[Tuple[int, int]]] = None

    def dfs(start, u, cost, path, onpath):
        nonlocal best_cost, best
        for v, c, ai, sgn in adj.get(u, ()):
            if v == start:
                if cost + c < best_cost:
                    best_cost = cost + c
                    best = path + [(ai, sgn)]
            elif v > start and v not in onpath:
                onpath.add(v)
                dfs(start, v, cost + c, path + [(ai, sgn)], onpath)
                onpath.discard(v)

    for s in range(n):
        dfs(s, s, 0, [], {s})
    return best


def min_convex_cost_flow(inst: FlowInstance) -> Tuple[int, ...]:
    """Minimum-cost integral m-flow; lexicographically least argmin.

    Cycle canceling with unit pushes, then a per-arc refinement that
    pins each arc to the smallest value preserving the optimal cost.
    """
    x = _cancel_to_optimal(inst, _initial_flow(inst))
    opt = inst.cost.value(x)

    pinned_lo = list(inst.lower)
    pinned_hi = list(inst.upper)
    for ai in range(len(inst.digraph.arcs)):
        lo = pinned_lo[ai]
        start = lo if is_finite(lo) else x[ai]
        for k in range(start, x[ai]):
            trial = _solve_restricted(inst, pinned_lo, pinned_hi, ai, k)
            if trial is not None and inst.cost.value(trial) == opt:
                x = trial
                break
        pinned_lo[ai] = x[ai]
        pinned_hi[ai] = x[ai]
    return tuple(x)


def _cancel_to_optimal(inst: FlowInstance, x: List[int]) -> List[int]:
    n = len(inst.digraph.nodes)
    for _ in range(100000):
        cyc = _find_negative_cycle(n, _residual_arcs(inst, x))
        if cyc is None:
            return x
        for ai, sgn in cyc:
            x[ai] += sgn
    raise Unbounded("cycle canceling budget exhausted")


def _solve_restricted(inst, lo, hi, ai, k):
    lo2 = list(lo)
    hi2 = list(hi)
    lo2[ai] = k
    hi2[ai] = k
    sub = FlowInstance(inst.digraph, inst.m, tuple(lo2), tuple(hi2), inst.cost)
    try:
        return _cancel_to_optimal(sub, _initial_flow(sub))
    except Infeasible:
        return None


def flow_dual_value(
    d: Digraph, m: Sequence[int], pi: Sequence[int], variant: str = NONNEG
) -> int:
    """m.pi minus the per-arc tension penalty floor(q/2)*ceil(q/2), with
    q = max(tension, 0) for the nonnegative-flow variant and the raw
    tension for the free variant."""
    idx = {v: i for i, v in enumerate(d.nodes)}
    total = sum(mv * pv for mv, pv in zip(m, pi))
    for t, h in d.arcs:
        q = pi[idx[h]] - pi[idx[t]]
        if variant == NONNEG:
            q = max(q, 0)
        total -= (q // 2) * ((q + 1) // 2)
    return total


def optimal_potential(inst: FlowInstance) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Solve the instance and return (x, pi) where pi holds residual
    shortest distances from a virtual source, shifted so min pi = 0.

    The shift leaves m.pi unchanged because m sums to zero, and the
    resulting pi is componentwise nonnegative.
    """
    x = min_convex_cost_flow(inst)
    n = len(inst.digraph.nodes)
    arcs = [(u, v, c) for u, v, c, _, _ in _residual_arcs(inst, x) if is_finite(c)]
    dist = [0] * n
    for round_ in range(n + 1):
        changed = False
        for u, v, c in arcs:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            break
    if changed:
        raise ValueMismatch("negative residual cycle at claimed optimum")
    shift = -min(dist)
    return x, tuple(dv + shift for dv in dist)


def certify_flow_square_sum(
    inst: FlowInstance, x: Sequence[int], pi: Sequence[int], variant: str = NONNEG
) -> MinMaxReport:
    """Exact equality check square-sum(x) = dual value at pi; equality
    certifies optimality of both sides."""
    if not inst.is_feasible_flow(x):
        raise NotFeasible(f"x={tuple(x)} is not a feasible flow")
    primal = sum(v * v for v in x)
    dual = flow_dual_value(inst.digraph, inst.m, pi, variant)
    if primal != dual:
        raise ValueMismatch(primal, dual)
    return MinMaxReport(
        primal_value=primal,
        dual_value=dual,
        primal_witness=tuple(x),
        dual_witness=tuple(pi),
        equality=True,
        support_size=sum(1 for v in pi if v != 0),
    )


def enumerate_flows(inst: FlowInstance, cap: int = 10) -> List[Tuple[int, ...]]:
    """All integral flows with bounds clipped to [-cap, cap]; oracle use."""
    ranges = []
    for lo, hi in zip(inst.lower, inst.upper):
        a = lo if is_finite(lo) else -cap
        b = hi if is_finite(hi) else cap
        ranges.append(range(a, b + 1))
    out = []
    for x in itertools.product(*ranges):
        if inst.is_feasible_flow(x):
            out.append(x)
    return out


def embedding_system(inst: FlowInstance) -> LinearSystem:
    """The [incidence; identity] >= (m; 0) encoding of nonnegative
    m-flows as a linear system over the arcs.

    Because m sums to zero, the incidence inequalities are forced to
    equality at every feasible point, so the relaxation is exact while
    keeping every dual multiplier sign-constrained.
    """
    d = inst.digraph
    na = len(d.arcs)
    rows = [Row(tuple(r), inst.m[i], GEQ) for i, r in enumerate(incidence_matrix(d))]
    for j in range(na):
        rows.append(Row(tuple(1 if k == j else 0 for k in range(na)), 0, GEQ))
    elements = tuple(f"a{i}" for i in range(na))
    return LinearSystem(elements, tuple(rows))
