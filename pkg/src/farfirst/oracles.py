"""Brute-force ground truth and certificate verifiers.

Everything here is deliberately implemented by a different route than the
algorithms it judges: all-pairs distances come from Floyd-Warshall rather
than Dijkstra, the greedy reference is matrix-driven, and the verifiers work
from the distance matrix alone.  Correctness anchors, not fast code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph
from .greedy import GreedyPermutation

__all__ = [
    "apsp_exact",
    "bellman_ford",
    "exact_count",
    "exact_select",
    "verify_net",
    "verify_eps_greedy",
    "kcenter_opt",
    "brute_greedy",
    "NetCheck",
    "GreedyCheck",
]


def apsp_exact(g: Graph, cap: int = 2000) -> np.ndarray:
    """Exact all-pairs distance matrix via vectorized Floyd-Warshall."""
    if g.n > cap:
        raise ValueError(f"apsp_exact: n={g.n} exceeds cap {cap}")
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        if w < d[u, v]:
            d[u, v] = w
            d[v, u] = w
    for k in range(g.n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    if not np.all(np.isfinite(d)):
        raise ValueError("graph is disconnected")
    return d


def bellman_ford(g: Graph, source: int) -> np.ndarray:
    """Single-source distances by n-1 rounds of edge relaxation.

    Uses the same additions as Dijkstra, so results agree bit-for-bit.
    """
    dist = np.full(g.n, np.inf)
    dist[source] = 0.0
    for _ in range(g.n - 1):
        changed = False
        for u, v, w in g.edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def _upper_triangle(dm: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(dm.shape[0], k=1)
    return dm[iu]


def exact_count(dm: np.ndarray, r: float) -> int:
    """Number of unordered pairs at distance <= r."""
    return int(np.count_nonzero(_upper_triangle(dm) <= r))


def exact_select(dm: np.ndarray, k: int) -> float:
    """k-th smallest pairwise distance (1-based, over the n(n-1)/2 multiset)."""
    vals = _upper_triangle(dm)
    if not (1 <= k <= vals.size):
        raise ValueError(f"k={k} out of range 1..{vals.size}")
    return float(np.partition(vals, k - 1)[k - 1])


@dataclass
class NetCheck:
    ok: bool
    packing_ok: bool
    covering_ok: bool
    packing_witness: tuple | None = None  # (u, v, d) with d < r
    covering_witness: tuple | None = None  # (v, d) with d > factor*r


def verify_net(dm: np.ndarray, points, r: float, cover_factor: float = 1.0) -> NetCheck:
    """Check packing (pairwise >= r) and covering (<= cover_factor * r)."""
    pts = [int(p) for p in points]
    if not pts:
        raise ValueError("empty net")
    packing_ok, covering_ok = True, True
    packing_witness = covering_witness = None
    for i, j in itertools.combinations(range(len(pts)), 2):
        d = dm[pts[i], pts[j]]
        if d < r:
            packing_ok, packing_witness = False, (pts[i], pts[j], float(d))
            break
    to_net = dm[pts, :].min(axis=0)
    worst = int(np.argmax(to_net))
    if to_net[worst] > cover_factor * r:
        covering_ok, covering_witness = False, (worst, float(to_net[worst]))
    return NetCheck(ok=packing_ok and covering_ok, packing_ok=packing_ok,
                    covering_ok=covering_ok, packing_witness=packing_witness,
                    covering_witness=covering_witness)


@dataclass
class GreedyCheck:
    ok: bool
    radii: list[float] = field(default_factory=list)  # the constructed certificate
    witness: int | None = None  # first prefix length where no certificate exists


def verify_eps_greedy(dm: np.ndarray, perm, eps: float) -> GreedyCheck:
    """Decide whether an ordering admits a (1+eps)-greedy radius certificate.

    A certificate is a non-increasing sequence rho_i with, for every prefix
    of length i, ecc_i in [rho_i, (1+eps)*rho_i] and pairwise separation
    >= rho_i.  The greedy assignment rho_i = min(ecc_i, sep_i, rho_{i-1}) is
    the pointwise-largest feasible candidate, so it exists iff this one works.
    """
    order = list(perm.order) if isinstance(perm, GreedyPermutation) else [int(v) for v in perm]
    n = dm.shape[0]
    if sorted(order) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    to_prefix = dm[order[0]].copy()
    sep = np.inf  # min pairwise distance within the current prefix
    rho_prev = np.inf
    radii: list[float] = []
    for i in range(1, n + 1):
        ecc = float(np.max(to_prefix))
        rho = min(ecc, sep, rho_prev)
        if rho * (1.0 + eps) < ecc:
            return GreedyCheck(ok=False, radii=radii, witness=i)
        radii.append(rho)
        rho_prev = rho
        if i < n:
            nxt = order[i]
            sep = min(sep, float(to_prefix[nxt]))
            np.minimum(to_prefix, dm[nxt], out=to_prefix)
    return GreedyCheck(ok=True, radii=radii)


def kcenter_opt(dm: np.ndarray, k: int) -> float:
    """Exhaustive optimal k-center radius; exponential, tightly capped."""
    n = dm.shape[0]
    if not (1 <= k <= n):
        raise ValueError(f"k={k} out of range 1..{n}")
    if n > 14 and not (n <= 100 and k <= 3):
        raise ValueError(f"kcenter_opt: n={n}, k={k} too large for exhaustive search")
    best = np.inf
    for combo in itertools.combinations(range(n), k):
        radius = dm[list(combo), :].min(axis=0).max()
        if radius < best:
            best = float(radius)
    return best


def brute_greedy(dm: np.ndarray, first: int) -> GreedyPermutation:
    """Matrix-driven farthest-first traversal, smallest-id ties."""
    n = dm.shape[0]
    if not (0 <= first < n):
        raise ValueError(f"first vertex {first} out of range")
    order = [int(first)]
    radii = [float("inf")]
    dist = dm[first].copy()
    dist[first] = -1.0
    for _ in range(n - 1):
        v = int(np.argmax(dist))
        radii.append(float(dist[v]))
        order.append(v)
        np.minimum(dist, dm[v], out=dist)
        dist[v] = -1.0
    return GreedyPermutation(order=order, radii=radii, eps=0.0)
