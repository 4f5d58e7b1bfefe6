"""Undirected communication topologies and the directed graph induced by
per-agent delay / time-to-live parameters.

Vertices are 0-indexed integers.  All values here are immutable after
construction; every operation is a pure function, so graphs can be shared
freely across parallel experiment replicas.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

UNREACHABLE = -1

# exact independence-number solver refuses larger instances unless the
# caller raises the cap explicitly (NP-hard; desk-scale only)
DEFAULT_ALPHA_CAP = 40


@dataclass(frozen=True)
class Graph:
    """Undirected graph: vertex count and a set of (u, v) pairs with u < v."""

    n: int
    edges: frozenset

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise ValueError(f"self-loop ({u},{u}) not allowed")
            if u > v:
                raise ValueError(f"edge ({u},{v}) not normalized (u < v required)")

    @staticmethod
    def from_edges(n, edge_iter):
        """Build a graph from unordered pairs, normalizing and deduplicating."""
        edges = frozenset((min(u, v), max(u, v)) for u, v in edge_iter)
        return Graph(n, edges)

    def adjacency(self):
        """Neighbor sets, index by vertex."""
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edges


@dataclass(frozen=True)
class ParamSet:
    """Per-vertex delay d(v) and time-to-live ttl(v)."""

    delays: tuple
    ttls: tuple

    def __post_init__(self):
        if len(self.delays) != len(self.ttls):
            raise ValueError("delays and ttls must have equal length")
        if any(d < 0 for d in self.delays) or any(t < 0 for t in self.ttls):
            raise ValueError("delay and ttl entries must be >= 0")

    @staticmethod
    def uniform(n, d, ttl=None):
        ttl = d if ttl is None else ttl
        return ParamSet(tuple([d] * n), tuple([ttl] * n))

    @property
    def n(self):
        return len(self.delays)

    def mean_delay(self):
        return sum(self.delays) / len(self.delays)


@dataclass(frozen=True)
class CommDigraph:
    """Directed communication graph: arc (u, v) means v may use u's messages.

    Self-loops (v, v) are always present.
    """

    n: int
    arcs: frozenset

    def __post_init__(self):
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) out of range for n={self.n}")
        missing = [v for v in range(self.n) if (v, v) not in self.arcs]
        if missing:
            raise ValueError(f"missing self-loops at vertices {missing}")

    def in_neighbors(self, v):
        """All u with an arc (u, v), including v itself."""
        return {u for u, w in self.arcs if w == v}


def bfs_distances(g: Graph) -> np.ndarray:
    """All-pairs hop distances by breadth-first search.

    Returns an (n, n) integer matrix; unreachable pairs hold UNREACHABLE.
    """
    adj = g.adjacency()
    dist = np.full((g.n, g.n), UNREACHABLE, dtype=np.int64)
    for src in range(g.n):
        dist[src, src] = 0
        frontier = [src]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if dist[src, w] == UNREACHABLE:
                        dist[src, w] = depth
                        nxt.append(w)
            frontier = nxt
    return dist


def is_connected(dist: np.ndarray) -> bool:
    return not np.any(dist == UNREACHABLE)


def power_graph(g: Graph, dist: np.ndarray, d: int) -> Graph:
    """The graph with an edge wherever 0 < hop distance <= d.

    d = 1 returns g itself; d = 0 the edgeless graph; d >= diameter a clique.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    edges = set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if 0 < dist[u, v] <= d:
                edges.add((u, v))
    return Graph(g.n, frozenset(edges))


def diameter(dist: np.ndarray) -> int:
    """Largest hop distance over all pairs.  Errors on disconnected input."""
    if not is_connected(dist):
        raise ValueError("diameter undefined: graph is disconnected")
    return int(dist.max())


def greedy_independent_set(g: Graph):
    """Deterministic lower-bound heuristic: repeatedly take a minimum-degree
    vertex and delete its closed neighborhood."""
    adj = {v: set(nbrs) for v, nbrs in enumerate(g.adjacency())}
    chosen = []
    while adj:
        v = min(adj, key=lambda u: (len(adj[u]), u))
        chosen.append(v)
        removed = adj.pop(v) | {v}
        for u in list(adj):
            if u in removed:
                del adj[u]
        for u in adj:
            adj[u] -= removed
    return chosen


def independence_number(g: Graph, mode="exact", cap=DEFAULT_ALPHA_CAP) -> int:
    """Size of a largest independent set (mode='exact'), or the size of the
    greedy heuristic's set, a valid lower bound (mode='greedy').

    Exact mode runs branch-and-bound seeded with the greedy bound and
    branching on a maximum-degree vertex; it refuses graphs above `cap`
    vertices (pass a larger cap to override, or use greedy mode).
    """
    if mode == "greedy":
        return len(greedy_independent_set(g))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}; use 'exact' or 'greedy'")
    if g.n > cap:
        raise ValueError(
            f"exact independence number capped at n <= {cap} (got n={g.n}); "
            "use mode='greedy' or raise the cap"
        )

    adj_bits = [0] * g.n
    for u, v in g.edges:
        adj_bits[u] |= 1 << v
        adj_bits[v] |= 1 << u

    best = len(greedy_independent_set(g))

    def expand(candidates, size):
        nonlocal best
        while candidates:
            if size + candidates.bit_count() <= best:
                return
            # branch on a max-degree vertex within the candidate subgraph
            pivot, pivot_deg = -1, -1
            m = candidates
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                deg = (adj_bits[v] & candidates).bit_count()
                if deg > pivot_deg:
                    pivot, pivot_deg = v, deg
            if pivot_deg == 0:
                best = max(best, size + candidates.bit_count())
                return
            expand(candidates & ~(adj_bits[pivot] | (1 << pivot)), size + 1)
            candidates &= ~(1 << pivot)

    expand((1 << g.n) - 1, 0)
    return best


def alpha_upper_bound_connected(n: int, d: int) -> int:
    """ceil(2n / (d+2)): a cap on the independence number of the d-th power
    of any connected n-vertex graph."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    return -(-2 * n // (d + 2))


def build_comm_digraph(dist: np.ndarray, params: ParamSet) -> CommDigraph:
    """Arcs (u, v) wherever dist(v, u) <= min(d(v), ttl(u)).

    Unreachable pairs never qualify; self-loops always do (distance 0).
    """
    n = dist.shape[0]
    if params.n != n:
        raise ValueError("params and distance matrix cover different vertex sets")
    arcs = set()
    for v in range(n):
        limit_v = params.delays[v]
        for u in range(n):
            s = dist[v, u]
            if s != UNREACHABLE and s <= min(limit_v, params.ttls[u]):
                arcs.add((u, v))
    return CommDigraph(n, frozenset(arcs))


def strip_orientation(dg: CommDigraph) -> Graph:
    """Undirected shadow of a digraph: drop self-loops and arc directions."""
    edges = {(min(u, v), max(u, v)) for u, v in dg.arcs if u != v}
    return Graph(dg.n, frozenset(edges))


def bidirected_arcs(g: Graph) -> frozenset:
    """Arc set of g with both orientations plus all self-loops."""
    arcs = {(v, v) for v in range(g.n)}
    for u, v in g.edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return frozenset(arcs)


# ---------------------------------------------------------------------------
# generators and file format
# ---------------------------------------------------------------------------


def path_graph(n):
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n):
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique_graph(n):
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def star_graph(n):
    if n < 2:
        raise ValueError("star needs n >= 2")
    return Graph.from_edges(n, ((0, v) for v in range(1, n)))


def grid_graph(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def erdos_renyi_graph(n, p, seed):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def barbell_graph(n_clique, n_path):
    """A clique with a path hanging off it: dense region plus sparse tail.

    Clique on vertices 0..n_clique-1; path on n_clique..n_clique+n_path-1,
    joined at vertex n_clique-1.
    """
    if n_clique < 1 or n_path < 0:
        raise ValueError("need n_clique >= 1 and n_path >= 0")
    edges = [(u, v) for u in range(n_clique) for v in range(u + 1, n_clique)]
    prev = n_clique - 1
    for i in range(n_path):
        v = n_clique + i
        edges.append((prev, v))
        prev = v
    return Graph.from_edges(n_clique + n_path, edges)


def random_connected_graph(n, extra_edge_prob, rng):
    """Random spanning tree (uniform attachment) plus independent extra edges."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    return Graph(n, frozenset(edges))


def parse_graph_spec(spec: str) -> Graph:
    """Build a graph from a generator spec string.

    Supported: path:N, cycle:N, clique:N, star:N, grid:RxC, er:N:p:seed,
    barbell:Nclique:Npath.
    """
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "path":
            return path_graph(int(parts[1]))
        if kind == "cycle":
            return cycle_graph(int(parts[1]))
        if kind == "clique":
            return clique_graph(int(parts[1]))
        if kind == "star":
            return star_graph(int(parts[1]))
        if kind == "grid":
            rows, cols = parts[1].lower().split("x")
            return grid_graph(int(rows), int(cols))
        if kind == "er":
            return erdos_renyi_graph(int(parts[1]), float(parts[2]), int(parts[3]))
        if kind == "barbell":
            return barbell_graph(int(parts[1]), int(parts[2]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad graph spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown graph kind {parts[0]!r} in spec {spec!r}")


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    One "u v" pair per line; '#' lines are comments; an optional leading
    "n <count>" header fixes the vertex count (otherwise max index + 1).
    """
    n_declared = None
    edges = []
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if not saw_data and tokens[0] == "n":
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            n_declared = int(tokens[1])
            saw_data = True
            continue
        saw_data = True
        if len(tokens) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer vertex in {line!r}") from exc
        if u == v:
            raise ValueError(f"line {lineno}: self-loop {u} {v} not allowed")
        edges.append((u, v))
    if not edges and n_declared is None:
        raise ValueError("empty edge list and no 'n <count>' header")
    n = n_declared if n_declared is not None else max(max(e) for e in edges) + 1
    return Graph.from_edges(n, edges)


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
