"""Farthest-first traversals on graphs: r-nets, exact and approximate
greedy permutations, and 2-approximate k-center.

The approximate variants run a geometric schedule of radii and compute an
r-net per level; the spread-free variant additionally contracts very short
edges and deletes very long ones so each edge participates in O(log(n/eps))
levels regardless of the weight range.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    INF,
    ContractedGraph,
    DistanceField,
    Graph,
    approx_diameter,
    contract_graph,
    dijkstra_truncated,
    is_connected,
    pruned_dijkstra_relax,
)

__all__ = [
    "Net",
    "GreedyPermutation",
    "LevelSchedule",
    "r_net",
    "exact_greedy",
    "approx_greedy_bounded_spread",
    "approx_greedy",
    "k_center_integer",
    "prefix_k_center",
]


@dataclass
class Net:
    """An r-net: selected points plus the distance field that witnesses covering.

    selection_deltas[i] is the field value of points[i] at the moment it was
    selected (infinity for a fresh field), a packing witness. updates counts
    the decrease-key operations spent building the net.
    """

    points: list[int]
    r: float
    cover_field: DistanceField
    selection_deltas: list[float] = field(default_factory=list)
    updates: int = 0


@dataclass
class GreedyPermutation:
    order: list[int]
    radii: list[float]  # radii[0] is an +inf sentinel; non-increasing afterwards
    eps: float

    def __post_init__(self):
        if len(self.order) != len(self.radii):
            raise ValueError("order and radii lengths differ")

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass
class LevelSchedule:
    """Geometric radius schedule r_i = delta / (1+eps)^(i-1), i = 1..M."""

    delta: float
    eps: float
    levels: list[float]

    @classmethod
    def down_to(cls, delta: float, eps: float, floor: float) -> "LevelSchedule":
        """Levels from delta shrinking by (1+eps) until strictly below floor.

        The last level must be < floor, not <= floor: when floor is the
        minimum positive distance, a final level equal to it can leave a
        vertex at exactly that distance marked as used and never selected.
        """
        if delta <= 0 or eps <= 0 or floor <= 0:
            raise ValueError("delta, eps and floor must be positive")
        r = float(delta)
        levels = [r]
        while r >= floor:
            r /= 1.0 + eps
            levels.append(r)
        return cls(delta=delta, eps=eps, levels=levels)

    @property
    def m(self) -> int:
        return len(self.levels)


# --- r-nets ---


def _net_sweep(g: Graph, r: float, order, used, field: DistanceField) -> Net:
    """Core net loop: select every order[i] with delta >= r, relax after each."""
    delta = field.delta
    points: list[int] = []
    sel: list[float] = []
    updates = 0
    for v in order:
        v = int(v)
        if delta[v] >= r and not used[v]:
            points.append(v)
            sel.append(float(delta[v]))
            updates += pruned_dijkstra_relax(g, v, field)
    return Net(points=points, r=r, cover_field=field, selection_deltas=sel, updates=updates)


def r_net(g: Graph, r: float, order=None, used=(), field: DistanceField | None = None) -> Net:
    """Randomized-order r-net sweep over a (possibly carried) distance field.

    Walks the given vertex order (natural order when omitted); whenever the
    field value of a non-used vertex is still >= r, the vertex joins the net
    and a pruned Dijkstra run lowers the field around it.  With a fresh field
    (the default) and an empty used set the result is an exact r-net:
    pairwise distances >= r, covering <= r.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if not is_connected(g):
        raise ValueError("graph is disconnected")
    if order is None:
        order = range(g.n)
    if field is None:
        field = DistanceField.fresh(g.n)
    mask = np.zeros(g.n, dtype=bool)
    for v in used:
        mask[int(v)] = True
    return _net_sweep(g, r, order, mask, field)


# --- exact greedy ---


def exact_greedy(g: Graph, first: int) -> GreedyPermutation:
    """Naive farthest-first traversal: n single-source runs, smallest-id ties."""
    import scipy.sparse.csgraph as csg

    if not (0 <= first < g.n):
        raise ValueError(f"first vertex {first} out of range")
    csr = g.csr()
    dist = csg.dijkstra(csr, indices=first)
    if not np.all(np.isfinite(dist)):
        raise ValueError("graph is disconnected")
    order = [int(first)]
    radii = [INF]
    # dist-to-prefix; selected entries parked at -1 so argmax ignores them
    dist[first] = -1.0
    for _ in range(g.n - 1):
        v = int(np.argmax(dist))
        radii.append(float(dist[v]))
        order.append(v)
        dist = np.minimum(dist, csg.dijkstra(csr, indices=v))
        dist[v] = -1.0
    return GreedyPermutation(order=order, radii=radii, eps=0.0)


# --- approximate greedy, bounded spread ---


def approx_greedy_bounded_spread(g: Graph, eps: float, seed: int) -> GreedyPermutation:
    """(1+eps)-greedy permutation via per-level r-nets over one shared field.

    Runtime scales with log of the spread: every level marks vertices within
    r_i of the prior selections as used (truncated multi-source Dijkstra) and
    then runs the net sweep in a fresh random order.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if g.n == 1:
        return GreedyPermutation(order=[0], radii=[INF], eps=eps)
    delta = approx_diameter(g)  # also proves connectivity
    schedule = LevelSchedule.down_to(delta, eps, g.min_weight())
    rng = np.random.default_rng(seed)
    fld = DistanceField.fresh(g.n)
    order_out: list[int] = []
    radii: list[float] = []
    used = np.zeros(g.n, dtype=bool)
    for r in schedule.levels:
        used[:] = False
        if order_out:
            reach = dijkstra_truncated(g, [(v, 0.0) for v in order_out], cutoff=r)
            for v in reach:
                used[v] = True
        net = _net_sweep(g, r, rng.permutation(g.n), used, fld)
        for v in net.points:
            radii.append(INF if not order_out else r)
            order_out.append(v)
    _append_zero_distance_tail(g, fld, order_out, radii)
    return GreedyPermutation(order=order_out, radii=radii, eps=eps)


def _append_zero_distance_tail(g: Graph, fld: DistanceField, order_out, radii) -> None:
    # only vertices at distance zero from the selection (zero-weight edge
    # classes) can remain after the last level; everything else violates
    # the schedule's floor
    seen = set(order_out)
    for v in range(g.n):
        if v in seen:
            continue
        if fld.delta[v] > 0.0:
            raise AssertionError(f"vertex {v} left unselected at positive distance")
        order_out.append(v)
        radii.append(0.0)


# --- approximate greedy, spread-free ---


def _truncated_multisource(adj, sources, cutoff: float) -> dict[int, float]:
    """Dijkstra over a dict adjacency, never expanding past the cutoff."""
    import heapq

    dist: dict[int, float] = {}
    heap = []
    for s in sources:
        if 0.0 < dist.get(s, INF):
            dist[s] = 0.0
            heap.append((0.0, s))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, INF):
            continue
        for v, w in adj.get(u, ()):
            nd = d + w
            if nd <= cutoff and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _truncated_relax(adj, source: int, dist: dict, cutoff: float) -> None:
    import heapq

    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, INF):
            continue
        for v, w in adj.get(u, ()):
            nd = d + w
            if nd <= cutoff and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))


def approx_greedy(g: Graph, eps: float, seed: int) -> GreedyPermutation:
    """(1+eps)-greedy permutation whose runtime does not depend on the spread.

    Per level, edges much shorter than the radius are contracted and edges
    longer than twice the radius are deleted, so the working graph holds only
    the O(eps^-1 log(n/eps)) levels' worth of active edges; levels with no
    active edges are skipped outright.  Internally runs a finer schedule so
    the contraction error stays inside the claimed eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if g.n == 1:
        return GreedyPermutation(order=[0], radii=[INF], eps=eps)
    delta = approx_diameter(g)
    eps_run = min(eps, 1.0) / 3.0
    schedule = LevelSchedule.down_to(delta, eps_run, g.min_weight())
    rng = np.random.default_rng(seed)
    n = g.n
    order_idx = np.argsort([w for _, _, w in g.edges], kind="stable")
    lengths = [g.edges[i][2] for i in order_idx]
    active_levels = np.zeros(g.m, dtype=np.int64)
    order_out: list[int] = []
    radii: list[float] = []
    for r in schedule.levels:
        lo = bisect_right(lengths, eps_run * r / (2.0 * n))
        hi = bisect_right(lengths, 2.0 * r)
        if hi <= lo and order_out:
            continue  # nothing active: no vertex can be at distance >= r
        active_levels[order_idx[lo:hi]] += 1
        cg = contract_graph(g, order_idx[:lo], order_idx[lo:hi])
        adj = cg.adjacency()
        rep = cg.rep
        reps = np.unique(rep)
        wd = _truncated_multisource(adj, {int(rep[v]) for v in order_out}, cutoff=r)
        for s in rng.permutation(reps):
            s = int(s)
            if wd.get(s, INF) >= r:
                radii.append(INF if not order_out else r)
                order_out.append(s)
                _truncated_relax(adj, s, wd, cutoff=r)
    fld = DistanceField(np.asarray(
        [d for d in _final_distances(g, order_out)], dtype=np.float64))
    _append_zero_distance_tail(g, fld, order_out, radii)
    perm = GreedyPermutation(order=order_out, radii=radii, eps=eps)
    perm.active_level_counts = active_levels  # per-edge diagnostics
    return perm


def _final_distances(g: Graph, selected) -> np.ndarray:
    from .graphs import dijkstra

    return dijkstra(g, [(v, 0.0) for v in selected]).delta


# --- k-center ---


def k_center_integer(g: Graph, k: int, seed: int):
    """2-approximate k-center for positive integer weights.

    Binary search on the candidate radius x; feasibility of x is decided by
    an r-net at selection threshold 2x+1 (with integer distances this is the
    strict version of 2x, which makes every x >= opt feasible regardless of
    the sweep order).  Returns (centers, true covering radius).
    """
    for u, v, w in g.edges:
        if w < 1 or w != int(w):
            raise ValueError(f"k_center_integer needs positive integer weights, got {w} on ({u},{v})")
    if not (1 <= k <= g.n):
        raise ValueError(f"k={k} out of range 1..{g.n}")
    hi = int(math.ceil(approx_diameter(g)))
    lo = 0
    best: dict[int, Net] = {}

    def decide(x: int) -> bool:
        rng = np.random.default_rng([seed, x])
        fld = DistanceField.fresh(g.n)
        net = _net_sweep(g, 2.0 * x + 1.0, rng.permutation(g.n),
                         np.zeros(g.n, dtype=bool), fld)
        ok = len(net.points) <= k
        if ok:
            best[x] = net
        return ok

    if not decide(hi):
        raise AssertionError("radius bound failed to cover the graph")
    while lo < hi:
        mid = (lo + hi) // 2
        if decide(mid):
            hi = mid
        else:
            lo = mid + 1
    net = best[lo]
    return net.points, float(np.max(net.cover_field.delta))


def prefix_k_center(perm: GreedyPermutation, k: int):
    """Centers Pi_k of a greedy permutation with a 2(1+eps)-quality bound."""
    n = perm.n
    if not (1 <= k <= n):
        raise ValueError(f"k={k} out of range 1..{n}")
    centers = perm.order[:k]
    if k < n:
        bound = (1.0 + perm.eps) * perm.radii[k]
    else:
        bound = 0.0 if n == 1 else perm.radii[n - 1]
    return centers, float(bound)
