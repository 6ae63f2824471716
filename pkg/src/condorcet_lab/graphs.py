"""Small undirected graphs: distances, median test, shape predicates, isomorphism, DOT."""

from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``; edges stored as ``(u, v)``, ``u < v``."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for {self.n} vertices")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    @functools.cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @functools.cached_property
    def dist(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs BFS distances; -1 marks unreachable pairs."""
        rows = []
        for s in range(self.n):
            d = [-1] * self.n
            d[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if d[w] < 0:
                        d[w] = d[u] + 1
                        queue.append(w)
            rows.append(tuple(d))
        return tuple(rows)

    def is_connected(self) -> bool:
        return all(d >= 0 for d in self.dist[0])

    def geodesic_between(self, q: int, r: int, rp: int) -> bool:
        d = self.dist
        return d[r][q] >= 0 and d[q][rp] >= 0 and d[r][q] + d[q][rp] == d[r][rp]

    def interval(self, u: int, v: int) -> frozenset[int]:
        return frozenset(w for w in range(self.n) if self.geodesic_between(w, u, v))

    def is_convex(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return all(self.interval(u, v) <= s for u, v in itertools.combinations(sorted(s), 2))

    def induced_degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(self.degree(v) for v in range(self.n)))

    @functools.cached_property
    def invariant(self) -> tuple:
        """Isomorphism-invariant key: vertex count, edge count, sorted vertex signatures."""
        return (self.n, len(self.edges), tuple(sorted(self.vertex_signature(v) for v in range(self.n))))

    def vertex_signature(self, v: int) -> tuple:
        return (self.degree(v), tuple(sorted(self.dist[v])))

    def relabel(self, mapping: Sequence[int]) -> "Graph":
        return Graph.from_edges(self.n, ((mapping[u], mapping[v]) for u, v in self.edges))


def medians(g: Graph, u: int, v: int, w: int) -> list[int]:
    """Vertices lying on shortest paths between all three pairs."""
    return [
        m for m in range(g.n)
        if g.geodesic_between(m, u, v) and g.geodesic_between(m, v, w) and g.geodesic_between(m, u, w)
    ]


def is_median_graph(g: Graph) -> bool:
    """Connected, and every vertex triple has exactly one geodesic median."""
    if not g.is_connected():
        return False
    d = g.dist
    n = g.n
    for u, v, w in itertools.combinations(range(n), 3):
        duv, dvw, duw = d[u][v], d[v][w], d[u][w]
        count = 0
        for m in range(n):
            du, dv, dw = d[u][m], d[v][m], d[w][m]
            if du + dv == duv and dv + dw == dvw and du + dw == duw:
                count += 1
                if count > 1:
                    return False
        if count != 1:
            return False
    return True


def is_tree(g: Graph) -> bool:
    return g.is_connected() and len(g.edges) == g.n - 1


def is_chain(g: Graph) -> bool:
    return is_tree(g) and all(g.degree(v) <= 2 for v in range(g.n))


def is_cycle(g: Graph, k: int | None = None) -> bool:
    if k is not None and g.n != k:
        return False
    return g.n >= 3 and g.is_connected() and all(g.degree(v) == 2 for v in range(g.n))


def chain_traversal(g: Graph) -> list[int] | None:
    """Vertices of a chain graph from the lower-numbered endpoint, or None."""
    if not is_chain(g):
        return None
    if g.n == 1:
        return [0]
    start = min(v for v in range(g.n) if g.degree(v) == 1)
    path = [start]
    prev = -1
    while len(path) < g.n:
        cur = path[-1]
        nxt = next(w for w in g.adjacency[cur] if w != prev)
        prev = cur
        path.append(nxt)
    return path


def shape(g: Graph) -> str:
    if g.n == 1:
        return "single vertex"
    if is_chain(g):
        return "chain"
    if is_tree(g):
        return "tree"
    if is_cycle(g):
        return f"{g.n}-cycle"
    return "other"


def graph_isomorphic(g1: Graph, g2: Graph) -> dict[int, int] | None:
    """A vertex bijection mapping edges of g1 exactly onto edges of g2, or None.

    Backtracking over vertices of g1 in BFS order from a highest-degree vertex;
    candidates must share degree and sorted distance profile.
    """
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return None
    if g1.induced_degree_sequence() != g2.induced_degree_sequence():
        return None
    if g1.invariant != g2.invariant:
        return None
    n = g1.n
    sig1 = [g1.vertex_signature(v) for v in range(n)]
    sig2 = [g2.vertex_signature(v) for v in range(n)]

    order: list[int] = []
    seen = set()
    for root in sorted(range(n), key=lambda v: (-g1.degree(v), v)):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(g1.adjacency[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    mapping: dict[int, int] = {}
    used: set[int] = set()
    d1, d2 = g1.dist, g2.dist

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for cand in range(n):
            if cand in used or sig2[cand] != sig1[v]:
                continue
            if any(d1[v][u] != d2[cand][mapping[u]] for u in mapping):
                continue
            mapping[v] = cand
            used.add(cand)
            if extend(k + 1):
                return True
            del mapping[v]
            used.discard(cand)
        return False

    if extend(0):
        return dict(sorted(mapping.items()))
    return None


def is_isomorphism(g1: Graph, g2: Graph, mapping: dict[int, int]) -> bool:
    if sorted(mapping) != list(range(g1.n)) or sorted(mapping.values()) != list(range(g2.n)):
        return False
    image = {(min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) for u, v in g1.edges}
    return image == set(g2.edges)


def to_dot(g: Graph, labels: Sequence[str] | None = None, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        label = labels[v] if labels is not None else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for u, v in sorted(g.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
