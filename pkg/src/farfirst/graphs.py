"""Weighted undirected graphs: parsing, Dijkstra variants, diameter and spread.

The distance field abstraction (one delta value per vertex, lowered in place
by pruned Dijkstra runs) is the workhorse shared by the net and greedy
permutation algorithms.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INF = float("inf")


# --- basic types ---


@dataclass
class Graph:
    """Undirected graph with non-negative edge weights.

    Vertices are 0..n-1.  Self-loops are rejected; parallel edges are kept
    (they never change shortest-path semantics).
    """

    n: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)
    _adj: list[list[tuple[int, float]]] | None = None
    _csr: object | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Adjacency lists, built once and cached."""
        if self._adj is None:
            adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
            for u, v, w in self.edges:
                adj[u].append((v, w))
                adj[v].append((u, w))
            self._adj = adj
        return self._adj

    def csr(self):
        """Sparse CSR adjacency (scipy), cached; used by the bulk solvers."""
        if self._csr is None:
            import scipy.sparse as sp

            if self.m:
                u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=self.m)
                v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=self.m)
                w = np.fromiter((e[2] for e in self.edges), dtype=np.float64, count=self.m)
                rows = np.concatenate([u, v])
                cols = np.concatenate([v, u])
                data = np.concatenate([w, w])
            else:
                rows = cols = np.zeros(0, dtype=np.int64)
                data = np.zeros(0, dtype=np.float64)
            self._csr = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def min_weight(self) -> float:
        """Smallest positive edge weight."""
        pos = [w for _, _, w in self.edges if w > 0.0]
        if not pos:
            raise ValueError("graph has no positive edge weights")
        return min(pos)

    def max_weight(self) -> float:
        if not self.edges:
            return 0.0
        return max(w for _, _, w in self.edges)


def make_graph(n: int, edges) -> Graph:
    """Validate and build a Graph from (u, v, w) triples."""
    out: list[tuple[int, int, float]] = []
    for u, v, w in edges:
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if w < 0.0:
            raise ValueError(f"negative weight {w} on edge ({u},{v})")
        out.append((u, v, w))
    return Graph(n=n, edges=out)


@dataclass
class DistanceField:
    """Per-vertex tentative distances, shared across pruned Dijkstra runs."""

    delta: np.ndarray

    @classmethod
    def fresh(cls, n: int) -> "DistanceField":
        return cls(delta=np.full(n, INF, dtype=np.float64))

    def copy(self) -> "DistanceField":
        return DistanceField(delta=self.delta.copy())


# --- file formats ---


def parse_graph(source, fmt: str | None = None) -> Graph:
    """Read a graph from a path or a text blob.

    Formats: "edgelist" (header "n m", then m lines "u v w", 0-based) and
    "gr" (DIMACS-like: c comments, "p <tag> n m", 1-based "a u v w" lines).
    fmt=None picks by file extension, defaulting to edgelist.
    """
    name = "<string>"
    # a newline-free non-blank string is a path; anything else is file text
    if isinstance(source, (str, Path)) and (
            isinstance(source, Path) or ("\n" not in source and source.strip())):
        path = Path(source)
        name = str(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValueError(f"{name}: cannot read graph file: {exc}") from exc
        if fmt is None:
            fmt = "gr" if path.suffix == ".gr" else "edgelist"
    else:
        text = str(source)
        if fmt is None:
            fmt = "edgelist"

    if fmt == "edgelist":
        return _parse_edgelist(text, name)
    if fmt == "gr":
        return _parse_gr(text, name)
    raise ValueError(f"unknown graph format {fmt!r}")


def _parse_edgelist(text: str, name: str) -> Graph:
    lines = text.splitlines()
    rows = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise ValueError(f"{name}: empty graph file")
    lineno, head = rows[0]
    if len(head) != 2:
        raise ValueError(f"{name}:{lineno}: expected header 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValueError(f"{name}:{lineno}: bad header 'n m': {exc}") from exc
    if n < 1 or m < 0:
        raise ValueError(f"{name}:{lineno}: need n >= 1 and m >= 0")
    if len(rows) - 1 != m:
        raise ValueError(f"{name}: header promises {m} edges, file has {len(rows) - 1}")
    edges = []
    for lineno, parts in rows[1:]:
        if len(parts) != 3:
            raise ValueError(f"{name}:{lineno}: expected 'u v w'")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ValueError(f"{name}:{lineno}: {exc}") from exc
        try:
            edges.append((u, v, w))
        except ValueError:
            raise
    try:
        return make_graph(n, edges)
    except ValueError as exc:
        raise ValueError(f"{name}: {exc}") from exc


def _parse_gr(text: str, name: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int, float]] = []
    for i, ln in enumerate(text.splitlines(), start=1):
        parts = ln.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"{name}:{i}: duplicate p-line")
            if len(parts) < 3:
                raise ValueError(f"{name}:{i}: bad p-line")
            try:
                n, m = int(parts[-2]), int(parts[-1])
            except ValueError as exc:
                raise ValueError(f"{name}:{i}: bad p-line: {exc}") from exc
        elif parts[0] in ("a", "e"):
            if n is None:
                raise ValueError(f"{name}:{i}: edge before p-line")
            if len(parts) != 4:
                raise ValueError(f"{name}:{i}: expected '{parts[0]} u v w'")
            try:
                u, v, w = int(parts[1]) - 1, int(parts[2]) - 1, float(parts[3])
            except ValueError as exc:
                raise ValueError(f"{name}:{i}: {exc}") from exc
            edges.append((u, v, w))
        else:
            raise ValueError(f"{name}:{i}: unknown line kind {parts[0]!r}")
    if n is None:
        raise ValueError(f"{name}: missing p-line")
    if m != len(edges):
        raise ValueError(f"{name}: p-line promises {m} edges, file has {len(edges)}")
    try:
        return make_graph(n, edges)
    except ValueError as exc:
        raise ValueError(f"{name}: {exc}") from exc


def write_graph(g: Graph, path) -> None:
    """Write edge-list format ("n m" header, repr() weights round-trip)."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v, w in g.edges:
            fh.write(f"{u} {v} {w!r}\n")


# --- shortest paths ---


def dijkstra(g: Graph, sources) -> DistanceField:
    """Multi-source Dijkstra; sources is an iterable of (vertex, offset).

    delta(v) = min over sources of offset + dist(source, v).  Heap ties break
    on the smaller vertex id.
    """
    sources = list(sources)
    if not sources:
        raise ValueError("empty source set")
    adj = g.adjacency()
    delta = np.full(g.n, INF, dtype=np.float64)
    heap: list[tuple[float, int]] = []
    for v, off in sources:
        off = float(off)
        if off < delta[v]:
            delta[v] = off
            heap.append((off, int(v)))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d > delta[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < delta[v]:
                delta[v] = nd
                heapq.heappush(heap, (nd, v))
    return DistanceField(delta=delta)


def dijkstra_truncated(g: Graph, sources, cutoff: float) -> dict[int, float]:
    """Multi-source Dijkstra that never expands beyond the cutoff.

    Returns {vertex: distance} for every vertex at distance <= cutoff.
    """
    adj = g.adjacency()
    dist: dict[int, float] = {}
    heap: list[tuple[float, int]] = []
    for v, off in sources:
        off = float(off)
        if off <= cutoff and off < dist.get(v, INF):
            dist[v] = off
            heap.append((off, int(v)))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, INF):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd <= cutoff and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def pruned_dijkstra_relax(g: Graph, source: int, field: DistanceField) -> int:
    """Zero the source's delta and relax outward, pruning non-improving pushes.

    A vertex enters the heap only when its tentative distance beats the
    current field value, so the final field is the pointwise minimum of the
    prior field and the fresh single-source distances.  Returns the number of
    successful relaxations (decrease-key equivalents).
    """
    adj = g.adjacency()
    delta = field.delta
    delta[source] = 0.0
    heap: list[tuple[float, int]] = [(0.0, source)]
    updates = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > delta[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < delta[v]:
                delta[v] = nd
                updates += 1
                heapq.heappush(heap, (nd, v))
    return updates


def approx_diameter(g: Graph) -> float:
    """2-approximation of the diameter: twice the eccentricity of vertex 0."""
    f = dijkstra(g, [(0, 0.0)])
    ecc = float(np.max(f.delta))
    if ecc == INF:
        raise ValueError("graph is disconnected")
    return 2.0 * ecc


def spread(g: Graph) -> float:
    """Approximate diameter over the minimum positive edge weight."""
    if any(w == 0.0 for _, _, w in g.edges):
        warnings.warn("zero-weight edges present; spread uses the minimum positive weight")
    return approx_diameter(g) / g.min_weight()


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    f = dijkstra(g, [(0, 0.0)])
    return bool(np.all(np.isfinite(f.delta)))


# --- contraction ---


class DisjointSets:
    """Union-find with path halving; representatives are tracked separately."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the smaller id as the root so min-id representatives are free
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass
class ContractedGraph:
    """View of a graph with some edges contracted and only some kept active.

    rep[v] is the super-vertex id of v, the minimum original vertex id in its
    contracted class, so every super-vertex is one of the original vertices.
    Active edges are remapped onto representatives; self-loops are dropped.
    """

    base: Graph
    rep: np.ndarray
    edges: list[tuple[int, int, float, int]]  # (rep_u, rep_v, w, original edge index)

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {}
        for u, v, w, _ in self.edges:
            adj.setdefault(u, []).append((v, w))
            adj.setdefault(v, []).append((u, w))
        return adj


def contract_graph(g: Graph, contracted_idx, active_idx) -> ContractedGraph:
    """Contract the given edge indices and keep the active ones, remapped."""
    dsu = DisjointSets(g.n)
    for i in contracted_idx:
        u, v, _ = g.edges[i]
        dsu.union(u, v)
    rep = np.fromiter((dsu.find(v) for v in range(g.n)), dtype=np.int64, count=g.n)
    edges = []
    for i in active_idx:
        u, v, w = g.edges[i]
        ru, rv = int(rep[u]), int(rep[v])
        if ru != rv:
            edges.append((ru, rv, w, int(i)))
    return ContractedGraph(base=g, rep=rep, edges=edges)
