import itertools

import networkx as nx
import pytest

from condorcet_lab.graphs import Graph, graph_isomorphic, is_median_graph
from condorcet_lab.guards import GuardExceeded
from condorcet_lab.median_graphs import (
    ExpansionStep,
    InvalidExpansionStep,
    NotMedianGraph,
    apply_expansion,
    decompose,
    decomposition,
    expand,
    generate_median_graphs,
    halfspace_contraction,
    valid_steps,
)

# ladder with rungs a-b, c-d, e-f along rails a-c-e and b-d-f
A, B, C, D, E, F = range(6)
LADDER = Graph.from_edges(6, [(A, B), (C, D), (E, F), (A, C), (C, E), (B, D), (D, F)])


def grid(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return Graph.from_edges(rows * cols, edges)


def test_expansion_of_ladder_splits_the_shared_rung():
    step = ExpansionStep.of({A, B, C, D}, {C, D, E, F})
    ex = expand(LADDER, step)
    g = ex.graph
    assert g.n == 8
    c1, c2 = ex.split[C]
    d1, d2 = ex.split[D]
    assert g.has_edge(c1, c2) and g.has_edge(d1, d2)
    assert g.has_edge(c1, d1) and g.has_edge(c2, d2)
    assert g.has_edge(c1, A) and g.has_edge(c2, E) and not g.has_edge(c1, E)
    assert is_median_graph(g)
    assert graph_isomorphic(g, grid(2, 4)) is not None


def test_small_expansions():
    k1 = Graph(1, frozenset())
    k2 = apply_expansion(k1, ExpansionStep.of({0}, {0}))
    assert k2 == Graph.path(2)
    c4 = apply_expansion(k2, ExpansionStep.of({0, 1}, {0, 1}))
    assert graph_isomorphic(c4, Graph.cycle(4)) is not None


def test_invalid_steps_name_each_problem():
    path = Graph.path(3)
    with pytest.raises(InvalidExpansionStep) as info:
        apply_expansion(path, ExpansionStep.of({0}, {2}))
    problems = " ".join(info.value.problems)
    assert "cover" in problems and "nonempty" in problems
    with pytest.raises(InvalidExpansionStep) as info:
        apply_expansion(Graph.cycle(4), ExpansionStep.of({0, 2}, {0, 1, 2, 3}))
    assert any("W1 must be convex" in p for p in info.value.problems)


def test_edge_between_exclusive_parts_is_rejected():
    path = Graph.path(4)
    with pytest.raises(InvalidExpansionStep) as info:
        apply_expansion(path, ExpansionStep.of({0, 1, 3}, {1, 2}))
    assert any("no edge" in p for p in info.value.problems)


def _atlas_median_counts(max_n: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for h in nx.graph_atlas_g()[1:]:
        n = h.number_of_nodes()
        if n > max_n:
            break
        if nx.is_connected(h) and is_median_graph(Graph.from_edges(n, h.edges())):
            counts[n] = counts.get(n, 0) + 1
    return counts


def test_generation_matches_atlas_counts_up_to_seven_vertices():
    graphs = generate_median_graphs(7)
    counts: dict[int, int] = {}
    for g in graphs:
        counts[g.n] = counts.get(g.n, 0) + 1
    assert counts == _atlas_median_counts(7)
    assert counts == {1: 1, 2: 1, 3: 1, 4: 3, 5: 4, 6: 11, 7: 23}
    assert all(is_median_graph(g) for g in graphs)
    for g, h in itertools.combinations(graphs, 2):
        if g.n == h.n and len(g.edges) == len(h.edges):
            assert graph_isomorphic(g, h) is None


def test_generation_small_cases():
    assert [g.n for g in generate_median_graphs(2)] == [1, 2]
    four = generate_median_graphs(4)
    for candidate in (Graph.path(3), Graph.path(4), Graph.star(3), Graph.cycle(4)):
        assert any(graph_isomorphic(candidate, g) is not None for g in four)
    assert not any(graph_isomorphic(Graph.cycle(3), g) is not None for g in four)


def test_generation_guard():
    with pytest.raises(GuardExceeded):
        generate_median_graphs(9)
    assert generate_median_graphs(0) == []


def test_decomposition_examples():
    assert len(decompose(Graph.path(2))) == 1
    steps = decompose(Graph.cycle(4))
    assert len(steps) == 2
    star = Graph.star(3)
    star_steps = decomposition(star)
    assert len(star_steps.steps) == 3
    hub_image = star_steps.vertex_map[0]
    replayed = Graph(1, frozenset())
    for step in star_steps.steps:
        assert len(step.w1 & step.w2) == 1
        replayed = apply_expansion(replayed, step)
    # the shared vertex of the last step is the hub in replay numbering
    assert star_steps.steps[-1].shared == [hub_image]


def test_decomposition_round_trips_and_vertex_map_is_an_isomorphism():
    for g in generate_median_graphs(7) + [grid(2, 4), grid(3, 3)]:
        dec = decomposition(g)
        replay = dec.replay()
        assert replay.n == g.n
        assert sorted(dec.vertex_map.values()) == list(range(g.n))
        for u, v in g.edges:
            assert replay.has_edge(dec.vertex_map[u], dec.vertex_map[v])
        assert len(replay.edges) == len(g.edges)
        # each step adds exactly |W1 ∩ W2| vertices
        size = 1
        h = Graph(1, frozenset())
        for step in dec.steps:
            h = apply_expansion(h, step)
            size += len(step.shared)
            assert h.n == size


def test_decomposition_rejects_non_median_graphs():
    with pytest.raises(NotMedianGraph):
        decompose(Graph.cycle(6))


def test_expansion_preserves_median_graphs():
    for g in generate_median_graphs(6):
        for step in valid_steps(g, max_new=2):
            assert is_median_graph(apply_expansion(g, step))


def test_halfspace_contraction_gives_median_graphs():
    for g in generate_median_graphs(8):
        for u, v in sorted(g.edges)[:3]:
            h, step, _, _ = halfspace_contraction(g, u, v)
            assert is_median_graph(h)
            assert graph_isomorphic(apply_expansion(h, step), g) is not None


def test_generation_up_to_eight_vertices():
    graphs = generate_median_graphs(8)
    assert sum(1 for g in graphs if g.n == 8) == 69
