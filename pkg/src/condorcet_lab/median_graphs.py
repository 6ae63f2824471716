"""Convex expansion of median graphs, generation from K1, and decomposition back to K1."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from condorcet_lab.graphs import Graph, graph_isomorphic, is_median_graph

GENERATE_MAX_VERTICES = 8


class InvalidExpansionStep(ValueError):
    def __init__(self, problems: list[str]) -> None:
        super().__init__("; ".join(problems))
        self.problems = problems


class NotMedianGraph(ValueError):
    pass


@dataclass(frozen=True)
class ExpansionStep:
    w1: frozenset[int]
    w2: frozenset[int]

    @classmethod
    def of(cls, w1, w2) -> "ExpansionStep":
        return cls(frozenset(w1), frozenset(w2))

    @property
    def shared(self) -> list[int]:
        return sorted(self.w1 & self.w2)

    def to_json(self) -> dict:
        return {"w1": sorted(self.w1), "w2": sorted(self.w2)}


@dataclass(frozen=True)
class Expansion:
    """Result graph plus, for each split vertex v, its two copies ``(v1, v2)``."""

    graph: Graph
    split: dict[int, tuple[int, int]]

    def image(self, v: int, side: int) -> int:
        """Where old vertex v lands; ``side`` picks the copy for split vertices."""
        if v in self.split:
            return self.split[v][side - 1]
        return v


def step_problems(g: Graph, step: ExpansionStep) -> list[str]:
    """Violated conditions of a convex expansion step, empty when valid."""
    problems = []
    vertices = set(range(g.n))
    w1, w2 = set(step.w1), set(step.w2)
    if not (w1 <= vertices and w2 <= vertices):
        problems.append("W1 and W2 must be vertex subsets")
        return problems
    if w1 | w2 != vertices:
        problems.append("W1 ∪ W2 must cover every vertex")
    if not w1 & w2:
        problems.append("W1 ∩ W2 must be nonempty")
    only1, only2 = w1 - w2, w2 - w1
    if any((u in only1 and v in only2) or (u in only2 and v in only1) for u, v in g.edges):
        problems.append("no edge may join W1 \\ W2 and W2 \\ W1")
    if not g.is_convex(w1):
        problems.append("W1 must be convex")
    if not g.is_convex(w2):
        problems.append("W2 must be convex")
    return problems


def expand(g: Graph, step: ExpansionStep) -> Expansion:
    """Convex expansion keeping old indices; the second copy of each shared vertex is appended."""
    problems = step_problems(g, step)
    if problems:
        raise InvalidExpansionStep(problems)
    shared = step.shared
    only1 = step.w1 - step.w2
    only2 = step.w2 - step.w1
    split = {v: (v, g.n + k) for k, v in enumerate(shared)}
    edges = set()
    for v in shared:
        edges.add(split[v])
    for u, v in g.edges:
        if u in split and v in split:
            edges.add((split[u][0], split[v][0]))
            edges.add((split[u][1], split[v][1]))
        elif u in split or v in split:
            s, o = (u, v) if u in split else (v, u)
            copy = split[s][0] if o in only1 else split[s][1]
            edges.add((copy, o))
        elif (u in only1) == (v in only1):
            edges.add((u, v))
    return Expansion(Graph.from_edges(g.n + len(shared), edges), split)


def apply_expansion(g: Graph, step: ExpansionStep) -> Graph:
    return expand(g, step).graph


def valid_steps(g: Graph, max_new: int | None = None) -> list[ExpansionStep]:
    """Every convex expansion step of g, as unordered pairs {W1, W2}."""
    convex = [
        frozenset(s)
        for r in range(1, g.n + 1)
        for s in itertools.combinations(range(g.n), r)
        if g.is_convex(s)
    ]
    vertices = frozenset(range(g.n))
    steps = []
    for a, b in itertools.combinations_with_replacement(convex, 2):
        if a | b != vertices or not a & b:
            continue
        if max_new is not None and len(a & b) > max_new:
            continue
        step = ExpansionStep(a, b)
        if not step_problems(g, step):
            steps.append(step)
    return steps


def generate_median_graphs(max_vertices: int) -> list[Graph]:
    """All median graphs with at most ``max_vertices`` vertices, up to isomorphism.

    Breadth-first over vertex counts, applying every convex expansion to every
    graph found so far and discarding isomorphic duplicates.
    """
    if max_vertices > GENERATE_MAX_VERTICES:
        from condorcet_lab.guards import GuardExceeded

        raise GuardExceeded(f"median graph generation refused above {GENERATE_MAX_VERTICES} vertices")
    if max_vertices < 1:
        return []
    found: list[Graph] = [Graph(1, frozenset())]
    buckets: dict[tuple, list[Graph]] = {found[0].invariant: [found[0]]}
    frontier = list(found)
    while frontier:
        nxt = []
        for g in frontier:
            for step in valid_steps(g, max_vertices - g.n):
                h = apply_expansion(g, step)
                bucket = buckets.setdefault(h.invariant, [])
                if any(graph_isomorphic(h, other) is not None for other in bucket):
                    continue
                bucket.append(h)
                found.append(h)
                nxt.append(h)
        frontier = nxt
    found.sort(key=lambda g: (g.n, len(g.edges), g.invariant))
    return found


def halfspace_contraction(g: Graph, u: int, v: int) -> tuple[Graph, ExpansionStep, list[int], list[int]]:
    """Contract the edge class of uv.

    Returns the contracted graph H, the step (over H's vertices) whose
    expansion gives back g, the map g-vertex -> H-vertex, and the side (1 or 2)
    of every g-vertex.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    d = g.dist
    side = [1 if d[w][u] < d[w][v] else 2 for w in range(g.n)]
    if any(d[w][u] == d[w][v] for w in range(g.n)):
        raise NotMedianGraph("graph is not bipartite along the chosen edge")
    # edges of the class: those crossing between the two halfspaces
    partner = {}
    for a, b in g.edges:
        if side[a] != side[b]:
            one, two = (a, b) if side[a] == 1 else (b, a)
            if one in partner or two in partner:
                raise NotMedianGraph("halfspace boundary is not a matching")
            partner[one] = two
            partner[two] = one
    keep = [w for w in range(g.n) if side[w] == 1 or w not in partner]
    index = {w: k for k, w in enumerate(keep)}
    to_h = [index[w] if w in index else index[partner[w]] for w in range(g.n)]
    edges = set()
    for a, b in g.edges:
        if to_h[a] != to_h[b]:
            edges.add((min(to_h[a], to_h[b]), max(to_h[a], to_h[b])))
    h = Graph(len(keep), frozenset(edges))
    w1 = frozenset(to_h[w] for w in range(g.n) if side[w] == 1)
    w2 = frozenset(to_h[w] for w in range(g.n) if side[w] == 2)
    return h, ExpansionStep(w1, w2), to_h, side


@dataclass(frozen=True)
class Decomposition:
    """Steps from K1, expressed in the numbering produced by replaying them,
    plus the isomorphism from the input graph onto the replayed graph."""

    steps: tuple[ExpansionStep, ...]
    vertex_map: dict[int, int]

    def replay(self) -> Graph:
        g = Graph(1, frozenset())
        for step in self.steps:
            g = apply_expansion(g, step)
        return g


def decomposition(g: Graph) -> Decomposition:
    """Contract the class of the lexicographically first edge until one vertex remains."""
    if not is_median_graph(g):
        raise NotMedianGraph("decompose requires a median graph")
    chain = []  # (contracted graph, step over it, map, side), from g downward
    current = g
    while current.n > 1:
        u, v = min(current.edges)
        h, step, to_h, side = halfspace_contraction(current, u, v)
        chain.append((current, h, step, to_h, side))
        current = h
    # replay upward, translating each step into the replayed numbering
    phi = [0]  # contracted-graph vertex -> replayed vertex
    replayed = Graph(1, frozenset())
    steps = []
    for big, h, step, to_h, side in reversed(chain):
        mapped = ExpansionStep(frozenset(phi[x] for x in step.w1), frozenset(phi[x] for x in step.w2))
        ex = expand(replayed, mapped)
        phi = [ex.image(phi[to_h[w]], side[w]) for w in range(big.n)]
        replayed = ex.graph
        steps.append(mapped)
    return Decomposition(tuple(steps), {w: phi[w] for w in range(g.n)})


def decompose(g: Graph) -> list[ExpansionStep]:
    return list(decomposition(g).steps)
