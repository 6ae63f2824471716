import itertools
import random

import pytest

from condorcet_lab.domain_graph import build_graph, is_connected_domain
from condorcet_lab.domains import (
    Domain,
    addable_orders,
    enumerate_maximal_condorcet,
    is_condorcet,
    is_maximal_condorcet,
)
from condorcet_lab.graphs import is_chain, is_tree
from condorcet_lab.orders import AlternativeSet, is_between, reverse
from condorcet_lab.single_crossing import (
    ChainError,
    MaximalChain,
    chains_equivalent,
    equivalence_closure,
    equivalent_chains,
    extract_maximal_chain,
    generalized_single_crossing_by_supporters,
    is_generalized_single_crossing,
    is_single_crossing_arrangement,
    maximal_sc_is_maximal_condorcet,
    nested_supporters,
    pairwise_concatenation,
    representative_voter_by_characterization,
    representative_voter_falsifier,
    representative_voter_property,
    single_crossing_order,
)

from conftest import ABC, ABCD, CHAIN7, CHAIN_C1, D1, FOUR_CYCLE, NINE, STAR, all_domains, dom, random_domains

CHAIN_C2 = "abcd bacd badc bdac dbac dbca dcba"


def literals(orders):
    return [str(r) for r in orders]


def population():
    yield from all_domains(ABC)
    yield from random_domains(ABCD, 1500, 10, seed=31)


# --- single-crossing detection ---------------------------------------------------------


def test_single_crossing_examples():
    assert literals(single_crossing_order(dom(D1))) == ["abc", "acb", "cab", "cba"]
    assert single_crossing_order(dom(STAR)) is None
    assert literals(single_crossing_order(dom(CHAIN7))) == CHAIN7.split()


def test_arrangement_starts_at_the_smaller_endpoint():
    arrangement = single_crossing_order(dom("cba cab acb abc"))
    assert str(arrangement[0]) == "abc"


def test_arrangements_are_contiguous_and_detection_matches_chain_shape():
    for d in population():
        arrangement = single_crossing_order(d)
        assert (arrangement is not None) == is_chain(build_graph(d))
        if arrangement is not None:
            assert is_single_crossing_arrangement(arrangement)


def _single_crossing_by_permutations(d: Domain) -> bool:
    """Oracle: try every arrangement of the domain."""
    return any(is_single_crossing_arrangement(p) for p in itertools.permutations(d.orders))


def test_detection_matches_brute_force_over_arrangements():
    for d in all_domains(ABC):
        assert (single_crossing_order(d) is not None) == _single_crossing_by_permutations(d)
    for d in random_domains(ABCD, 200, 6, seed=32):
        assert (single_crossing_order(d) is not None) == _single_crossing_by_permutations(d)


def test_intervals_of_a_single_crossing_domain_are_stretches_of_the_arrangement():
    for d in population():
        arrangement = single_crossing_order(d)
        if arrangement is None:
            continue
        for i, j in itertools.combinations(range(len(arrangement)), 2):
            inside = {q for q in arrangement if is_between(q, arrangement[i], arrangement[j])}
            assert inside == set(arrangement[i:j + 1])


# --- nested supporters and the tree variant -----------------------------------------------


@pytest.mark.parametrize("literals_, expected", [(D1, True), (STAR, False), ("abc cba", True), ("abc", True)])
def test_nested_supporters_examples(literals_, expected):
    assert nested_supporters(dom(literals_)) is expected


def test_nested_supporters_is_not_the_one_sided_inclusion():
    # abc acb bac is single-crossing (bac, abc, acb), yet the a-over-b supporters
    # fit inside neither side of the b/c split; orientation has to be chosen
    d = dom("abc acb bac")
    assert single_crossing_order(d) is not None
    assert nested_supporters(d)


def test_nested_supporters_matches_single_crossing():
    for d in population():
        assert nested_supporters(d) == (single_crossing_order(d) is not None)


@pytest.mark.parametrize("literals_, expected", [(STAR, True), (FOUR_CYCLE, False), (D1, True), (CHAIN7, True)])
def test_generalized_single_crossing_examples(literals_, expected):
    d = dom(literals_)
    assert is_generalized_single_crossing(d) is expected
    assert generalized_single_crossing_by_supporters(d) is expected


def test_crossing_pairs_may_share_an_alternative():
    # the a/b and b/d splits cross; the graph is a 4-cycle
    d = dom("abdc adbc bdac dbac")
    assert not is_tree(build_graph(d))
    assert not generalized_single_crossing_by_supporters(d)


def test_tree_test_matches_supporter_test():
    for d in population():
        assert is_generalized_single_crossing(d) == generalized_single_crossing_by_supporters(d)


def test_single_crossing_domains_are_tree_domains():
    for d in population():
        if single_crossing_order(d) is not None:
            assert is_generalized_single_crossing(d)


# --- representative voter --------------------------------------------------------------


def test_representative_voter_examples():
    assert representative_voter_property(dom(D1))
    assert representative_voter_property(dom(FOUR_CYCLE))
    star = representative_voter_property(dom(STAR))
    assert not star
    assert sorted(literals(star.witness)) == sorted(["acbd", "abdc", "bacd"])
    assert str(star.majority) == "abcd"


def test_representative_voter_characterization_matches_falsifier():
    for d in all_domains(ABC):
        if is_condorcet(d):
            assert representative_voter_by_characterization(d) == representative_voter_falsifier(d).holds
    for d in random_domains(ABCD, 800, 8, seed=33):
        if is_condorcet(d):
            assert representative_voter_by_characterization(d) == representative_voter_falsifier(d).holds


# --- maximal chains ----------------------------------------------------------------------


def test_switching_pairs_of_the_examples():
    assert extract_maximal_chain(dom(CHAIN7)).labelled_pairs() == [
        ("b", "c"), ("b", "d"), ("c", "d"), ("a", "d"), ("a", "c"), ("a", "b"),
    ]
    # each pair is written with the alternative ranked higher before the swap first,
    # so the opening swap abcd -> abdc reads (c, d)
    assert extract_maximal_chain(dom(CHAIN_C1)).labelled_pairs() == [
        ("c", "d"), ("a", "b"), ("a", "d"), ("b", "d"), ("a", "c"), ("b", "c"),
    ]
    chain = extract_maximal_chain(dom(D1))
    assert chain.labelled_pairs() == [("b", "c"), ("a", "c"), ("a", "b")]
    assert len(chain.orders) == 4


def test_pairwise_concatenation_examples():
    assert pairwise_concatenation(extract_maximal_chain(dom(CHAIN7)))
    assert not pairwise_concatenation(extract_maximal_chain(dom(CHAIN_C1)))
    two = extract_maximal_chain(dom("ab ba"))
    assert two.labelled_pairs() == [("a", "b")] and pairwise_concatenation(two)


def test_equivalent_chains_and_their_union():
    c1 = extract_maximal_chain(dom(CHAIN_C1))
    c2 = extract_maximal_chain(dom(CHAIN_C2))
    assert chains_equivalent(c1, c2) and chains_equivalent(c2, c1)
    assert equivalence_closure(c1) == dom(NINE)
    assert len(equivalent_chains(c1)) == 4
    c7 = extract_maximal_chain(dom(CHAIN7))
    assert equivalence_closure(c7) == dom(CHAIN7)
    assert not chains_equivalent(c1, c7)


def test_concatenation_decides_maximality():
    c7 = extract_maximal_chain(dom(CHAIN7))
    assert maximal_sc_is_maximal_condorcet(c7) and is_maximal_condorcet(c7.domain())
    c1 = extract_maximal_chain(dom(CHAIN_C1))
    assert not maximal_sc_is_maximal_condorcet(c1)
    verdict = is_maximal_condorcet(c1.domain())
    assert not verdict
    assert verdict.witness in set(dom(CHAIN_C2).orders) - set(c1.orders)
    assert str(verdict.witness) == "bacd"
    d1 = extract_maximal_chain(dom(D1))
    assert maximal_sc_is_maximal_condorcet(d1) and is_maximal_condorcet(d1.domain())


def _all_maximal_chains(alts: AlternativeSet):
    start = alts.order(range(alts.n))

    def walk(orders, used):
        r = orders[-1]
        if len(orders) == alts.n * (alts.n - 1) // 2 + 1:
            yield MaximalChain.from_orders(orders)
            return
        for k in range(alts.n - 1):
            x, y = r.ranking[k], r.ranking[k + 1]
            if x < y and (x, y) not in used:
                yield from walk(orders + [r.swap_adjacent(x, y)], used | {(x, y)})

    yield from walk([start], frozenset())


def test_concatenation_matches_generic_maximality_for_every_chain_on_four():
    chains = list(_all_maximal_chains(ABCD))
    assert len(chains) == 16
    for chain in chains:
        assert maximal_sc_is_maximal_condorcet(chain) == bool(is_maximal_condorcet(chain.domain()))
        closure = equivalence_closure(chain)
        assert is_condorcet(closure) and is_maximal_condorcet(closure)


def test_chain_errors_name_the_failed_invariant():
    with pytest.raises(ChainError, match="not single-crossing"):
        extract_maximal_chain(dom(STAR))
    with pytest.raises(ChainError, match="has 4 orders"):
        extract_maximal_chain(dom("abc acb"))
    with pytest.raises(ChainError, match="not connected"):
        extract_maximal_chain(dom("abc cba"))
    with pytest.raises(ChainError, match="more than one adjacent swap"):
        MaximalChain.from_orders([ABC.parse(s) for s in ("abc", "bca", "cba", "cab")])
    with pytest.raises(ChainError, match="empty"):
        MaximalChain.from_orders([])


# --- maximal tree domains -------------------------------------------------------------------


def test_maximal_condorcet_domains_with_acyclic_graphs_are_chains():
    trees = 0
    for d in enumerate_maximal_condorcet(4):
        g = build_graph(d)
        if is_tree(g):
            trees += 1
            assert is_chain(g)
    assert trees > 0


def _tree_domains(count, seed):
    for d in random_domains(ABCD, count, 6, seed):
        if is_generalized_single_crossing(d):
            yield d


def test_adding_an_order_between_neighbours_keeps_a_tree():
    universe = ABCD.all_orders()
    checked = 0
    for d in list(all_domains(ABC)) + list(_tree_domains(300, 34)):
        if not is_generalized_single_crossing(d):
            continue
        g = build_graph(d)
        pool = d.alts.all_orders() if d.alts.n == 3 else universe
        for u, v in g.edges:
            q, r = d.orders[u], d.orders[v]
            for p in pool:
                if p not in d and is_between(p, q, r):
                    assert is_generalized_single_crossing(d.with_orders([p]))
                    checked += 1
    assert checked > 100


def test_greedy_maximal_tree_domains_are_connected():
    rng = random.Random(35)
    for d in _tree_domains(120, 36):
        orders = list(d.orders)
        candidates = [r for r in ABCD.all_orders() if r not in d]
        rng.shuffle(candidates)
        grown = True
        while grown:
            grown = False
            for r in candidates:
                if r in orders:
                    continue
                trial = Domain.of(orders + [r], ABCD)
                if is_generalized_single_crossing(trial):
                    orders.append(r)
                    grown = True
        assert is_connected_domain(Domain.of(orders, ABCD))


def test_chain_round_trips_through_its_switching_pairs():
    chain = extract_maximal_chain(dom(CHAIN7))
    again = MaximalChain.from_switching_pairs(chain.orders[0], chain.labelled_pairs())
    assert again == chain
    assert chain.orders[-1] == reverse(chain.orders[0])
    assert list(addable_orders(chain.domain())) == []
