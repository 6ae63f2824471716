import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condorcet_lab.domains import (
    CondorcetCycleError,
    Domain,
    MajorityRelation,
    Profile,
    addable_orders,
    as_linear_order,
    closed_under_three_voter_majority,
    closure,
    convex_subsets,
    enumerate_maximal_condorcet,
    find_latin_square,
    helly_holds,
    is_acyclic,
    is_closed_condorcet,
    is_condorcet,
    is_condorcet_latin,
    is_convex,
    is_maximal_condorcet,
    is_median_stable,
    majority_relation,
    supporter_masks,
    supporters,
)
from condorcet_lab.guards import GuardExceeded
from condorcet_lab.orders import AlternativeSet, median_of_triple

from conftest import ABC, ABCD, D1, FOUR_CYCLE, NINE, STAR, all_domains, dom, random_domains

CYCLIC_PLUS_CBA = "abc cab cba bca"
FIVE_CYCLE = "acb cab cba bca bac"


def profile(literals, alts=ABC):
    return Profile.of(alts.parse(s) for s in literals.split())


def three_voter_oracle(d: Domain) -> bool:
    """Condorcet by brute force: every 3-voter profile has an acyclic majority."""
    return all(
        as_linear_order(majority_relation(Profile.of(p))) is not None
        for p in itertools.combinations_with_replacement(d.orders, 3)
    )


# --- majority relations ----------------------------------------------------------------


def test_majority_examples():
    unanimous = majority_relation(profile("abc abc abc"))
    assert as_linear_order(unanimous) == ABC.parse("abc")
    cyclic = majority_relation(profile("abc bca cab"))
    assert cyclic.labelled() == [("a", "b"), ("b", "c"), ("c", "a")]
    assert not is_acyclic(cyclic) and as_linear_order(cyclic) is None
    assert as_linear_order(majority_relation(profile("abc cab cba"))) == ABC.parse("cab")


def test_acyclicity_examples():
    assert is_acyclic(MajorityRelation(ABC, frozenset({(0, 1), (1, 2), (0, 2)})))
    assert as_linear_order(MajorityRelation(ABC, frozenset({(0, 1), (1, 2), (0, 2)}))) == ABC.parse("abc")
    empty = MajorityRelation(ABC, frozenset())
    assert is_acyclic(empty) and as_linear_order(empty) is None


def test_even_profile_ties_drop_both_directions():
    m = majority_relation(profile("abc bac"))
    assert (0, 1) not in m.wins and (1, 0) not in m.wins
    assert not m.is_complete()


def test_profile_counts():
    p = Profile(((ABC.parse("abc"), 2), (ABC.parse("cba"), 1)))
    assert p.n == 3 and p.is_odd
    assert [str(r) for r in p.voters()] == ["abc", "abc", "cba"]
    with pytest.raises(ValueError):
        Profile(((ABC.parse("abc"), 0),))


# --- Condorcet tests ------------------------------------------------------------------


@pytest.mark.parametrize("literals, expected", [(D1, True), ("abc bca cab", False), (CYCLIC_PLUS_CBA, False)])
def test_condorcet_examples(literals, expected):
    d = dom(literals)
    assert is_condorcet(d) is expected
    assert is_condorcet_latin(d) is expected


def test_latin_square_witness_is_genuine():
    square = find_latin_square(dom(CYCLIC_PLUS_CBA))
    assert square is not None and square.holds()
    assert {str(r) for r in square.orders} == {"abc", "bca", "cab"}


def test_condorcet_tests_agree_with_three_voter_oracle_on_all_three_alternative_domains():
    for d in all_domains(ABC):
        assert is_condorcet(d) == is_condorcet_latin(d) == three_voter_oracle(d)


def test_condorcet_tests_agree_on_random_four_alternative_domains():
    for d in random_domains(ABCD, 300, 8, seed=11):
        assert is_condorcet(d) == is_condorcet_latin(d) == three_voter_oracle(d)


def test_odd_profiles_over_condorcet_domains_have_linear_majorities():
    rng = random.Random(5)
    d = dom(NINE)
    for _ in range(300):
        voters = [rng.choice(d.orders) for _ in range(rng.choice([1, 3, 5, 7]))]
        assert as_linear_order(majority_relation(Profile.of(voters))) is not None


# --- median stability and closure -------------------------------------------------


@pytest.mark.parametrize("literals, expected", [(FOUR_CYCLE, True), (FIVE_CYCLE, False), ("abc", True)])
def test_median_stability_examples(literals, expected):
    d = dom(literals)
    assert is_median_stable(d) is expected
    assert is_closed_condorcet(d) is expected


def test_median_stable_iff_closed_under_three_voter_majority():
    for d in all_domains(ABC):
        assert is_median_stable(d) == closed_under_three_voter_majority(d)


def test_closure_examples():
    closed = dom(FOUR_CYCLE)
    assert closure(closed) == closed
    star = closure(dom("acbd abdc bacd"))
    assert star == dom(STAR)
    assert is_closed_condorcet(star)
    with pytest.raises(CondorcetCycleError) as info:
        closure(dom("abc bca cab"))
    report = info.value.report
    assert {str(r) for r in report.triple} == {"abc", "bca", "cab"}
    assert report.latin_square.holds()
    assert set(report.to_json()) == {"triple", "latin_square"}


def _condorcet_subsets(alts, seed, count):
    for d in random_domains(alts, count, 6, seed):
        if is_condorcet(d):
            yield d


def test_closure_is_inflationary_idempotent_and_minimal():
    for d in _condorcet_subsets(ABCD, 3, 200):
        c = closure(d)
        assert d.issubset(c)
        assert closure(c) == c
        assert is_median_stable(c) and is_condorcet(c)
        # minimal: every added order is forced as a median of orders already present
        for r in c.orders:
            if r not in d:
                assert any(median_of_triple(*t) == r for t in itertools.combinations(c.orders, 3))


def test_closure_raises_exactly_on_non_condorcet_domains():
    for d in all_domains(ABC):
        try:
            closure(d)
        except CondorcetCycleError:
            assert not is_condorcet(d)
        else:
            assert is_condorcet(d)


# --- supporters, convexity, Helly ---------------------------------------------------------


def test_supporters_examples():
    d = dom(D1)
    assert {str(r) for r in supporters(d, "a", "b")} == {"abc", "acb", "cab"}
    assert {str(r) for r in supporters(d, "b", "a")} == {"cba"}
    unanimous = dom("abc acb")
    assert supporters(unanimous, "a", "b") == frozenset(unanimous.orders)
    with pytest.raises(ValueError):
        supporters(d, "a", "a")


def test_supporters_partition_and_are_convex():
    for d in random_domains(ABCD, 100, 10, seed=2):
        masks = supporter_masks(d)
        for (x, y), bits in masks.items():
            assert bits & masks[(y, x)] == 0
            assert bits | masks[(y, x)] == (1 << len(d)) - 1
            assert is_convex(d, supporters(d, x, y))


def test_helly_examples():
    assert helly_holds(dom(FOUR_CYCLE))
    assert not helly_holds(dom(FIVE_CYCLE))


def _helly_by_cliques(d: Domain) -> bool:
    """Oracle: every maximal clique of the intersection graph of convex sets meets."""
    sets = [c for c in convex_subsets(d) if c]
    g = nx.Graph()
    g.add_nodes_from(range(len(sets)))
    g.add_edges_from((i, j) for i, j in itertools.combinations(range(len(sets)), 2) if sets[i] & sets[j])
    for clique in nx.find_cliques(g):
        common = (1 << len(d)) - 1
        for i in clique:
            common &= sets[i]
        if not common:
            return False
    return True


def test_helly_agrees_with_clique_oracle_and_median_stability():
    for d in all_domains(ABC):
        assert helly_holds(d) == _helly_by_cliques(d) == is_median_stable(d)


def test_helly_on_small_four_alternative_domains():
    for d in random_domains(ABCD, 40, 6, seed=4):
        assert helly_holds(d) == _helly_by_cliques(d) == is_median_stable(d)


def test_helly_refuses_large_domains():
    with pytest.raises(GuardExceeded):
        helly_holds(Domain.of(ABCD.all_orders()))


# --- maximality and enumeration -------------------------------------------------------


def test_maximality_examples():
    assert is_maximal_condorcet(dom(D1))
    nine = is_maximal_condorcet(dom(NINE))
    assert nine.is_maximal and nine.witness is None
    star = is_maximal_condorcet(dom(STAR))
    assert not star
    # the reported witness is the lexicographically smallest addable order;
    # badc is addable as well
    assert str(star.witness) == "acdb"
    assert ABCD.parse("badc") in set(addable_orders(dom(STAR)))
    assert is_condorcet(dom(STAR + " badc"))


def test_nine_order_domain_rejects_every_other_order():
    d = dom(NINE)
    rejected = [r for r in ABCD.all_orders() if r not in d]
    assert len(rejected) == 15
    assert all(not is_condorcet(d.with_orders([r])) for r in rejected)


def test_maximality_requires_condorcet():
    with pytest.raises(ValueError):
        is_maximal_condorcet(dom("abc bca cab"))


def _maximal_by_subsets(alts):
    """Oracle: inclusion-maximal Condorcet subsets, by brute force over all subsets."""
    orders = alts.all_orders()
    condorcet = [
        frozenset(s)
        for r in range(1, len(orders) + 1)
        for s in itertools.combinations(orders, r)
        if three_voter_oracle(Domain.of(s, alts))
    ]
    return {s for s in condorcet if not any(s < t for t in condorcet)}


def _maximal_by_restriction_choices(alts):
    """Oracle: every Condorcet domain lies in a set cut out by one 'never at position p'
    condition per alternative triple; the maximal domains are the maximal such sets."""
    orders = alts.all_orders()
    triples = list(itertools.combinations(range(alts.n), 3))
    per_triple = []
    for t in triples:
        options = []
        for x in t:
            for p in range(3):
                options.append(frozenset(r for r in orders if r.restrict(t).index(x) != p))
        per_triple.append(options)
    candidates = set()
    for choice in itertools.product(*per_triple):
        s = frozenset(orders).intersection(*choice)
        if s:
            candidates.add(s)
    return {s for s in candidates if not any(s < t for t in candidates)}


def test_enumeration_small_cases():
    (only,) = enumerate_maximal_condorcet(2)
    assert only.literals() == ["ab", "ba"]
    three = enumerate_maximal_condorcet(3)
    assert len(three) == 9
    assert all(len(d) == 4 for d in three)
    assert {frozenset(d.orders) for d in three} == _maximal_by_subsets(ABC)


def test_enumeration_for_four_alternatives_matches_restriction_oracle():
    four = enumerate_maximal_condorcet(4)
    assert {frozenset(d.orders) for d in four} == _maximal_by_restriction_choices(ABCD)
    assert len(four) == 495
    assert max(len(d) for d in four) == 9
    assert all(is_maximal_condorcet(d) for d in four[::25])
    assert four == sorted(four, key=lambda d: (d.orders))


def test_enumeration_guards():
    with pytest.raises(GuardExceeded):
        enumerate_maximal_condorcet(5)
    with pytest.raises(ValueError):
        enumerate_maximal_condorcet(1)


# --- properties ------------------------------------------------------------------------

orders4 = st.permutations(range(4)).map(lambda p: ABCD.order(list(p)))


@settings(max_examples=60, deadline=None)
@given(st.lists(orders4, min_size=1, max_size=8))
def test_closure_or_cycle_on_random_domains(orders):
    d = Domain.of(orders, ABCD)
    if is_condorcet(d):
        c = closure(d)
        assert is_median_stable(c) and d.issubset(c)
    else:
        with pytest.raises(CondorcetCycleError):
            closure(d)


def test_domain_parse_and_canonical_order():
    d = Domain.parse(["cba", "abc", "abc"])
    assert d.literals() == ["abc", "cba"]
    assert Domain.parse("cba,abc") == d
    alts = AlternativeSet.of(["x1", "y2"])
    assert Domain.parse(["y2 x1", "x1 y2"], alts).literals() == ["x1 y2", "y2 x1"]
