"""Single-crossing domains, their tree generalization, and maximal chains."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from condorcet_lab.domain_graph import build_graph, is_connected_domain
from condorcet_lab.domains import (
    Domain,
    Profile,
    as_linear_order,
    family_has_helly,
    is_closed_condorcet,
    majority_relation,
    supporter_masks,
)
from condorcet_lab.graphs import chain_traversal, is_cycle, is_tree
from condorcet_lab.orders import (
    AlternativeSet,
    LinearOrder,
    are_completely_reversed,
    are_universal_neighbors,
    differing_pairs,
)


def single_crossing_order(domain: Domain) -> list[LinearOrder] | None:
    """An arrangement witnessing the single-crossing property, or None.

    The domain is single-crossing exactly when its associated graph is a
    chain; the arrangement is the chain read from its lexicographically
    smaller endpoint.
    """
    path = chain_traversal(build_graph(domain))
    if path is None:
        return None
    return [domain.orders[k] for k in path]


def is_single_crossing_arrangement(orders: Sequence[LinearOrder]) -> bool:
    """Every pair's supporters form a contiguous block of the arrangement."""
    if not orders:
        return True
    alts = orders[0].alts
    for x, y in itertools.permutations(range(alts.n), 2):
        flags = [r.position[x] < r.position[y] for r in orders]
        changes = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
        if changes > 1:
            return False
    return True


def _nonempty_supporters(domain: Domain) -> dict[tuple[int, int], int]:
    masks = supporter_masks(domain)
    return {
        pair: bits for pair, bits in masks.items()
        if bits and masks[(pair[1], pair[0])]
    }


def nested_supporters(domain: Domain) -> bool:
    """Supporter sets of the non-unanimous pairs can be oriented into an inclusion chain.

    Orienting every pair toward one fixed order of the domain and asking for a
    chain succeeds exactly when that order can start a single-crossing
    arrangement, so each order is tried as the anchor.
    """
    live = _nonempty_supporters(domain)
    for anchor in range(len(domain)):
        bit = 1 << anchor
        oriented = sorted({v for v in live.values() if v & bit}, key=int.bit_count)
        if all(small & ~big == 0 for small, big in zip(oriented, oriented[1:])):
            return True
    return not live


def is_generalized_single_crossing(domain: Domain) -> bool:
    """Single-crossing with respect to some tree, i.e. the associated graph is a tree."""
    return is_tree(build_graph(domain))


def generalized_single_crossing_by_supporters(domain: Domain) -> bool:
    """Helly property of the supporter sets, and no two pairs split the domain crosswise."""
    masks = supporter_masks(domain)
    if not family_has_helly(list(masks.values()), len(domain)):
        return False
    n = domain.alts.n
    pairs = list(itertools.combinations(range(n), 2))
    # the two pairs may share an alternative: ab and bd can cross
    for (x, y), (z, w) in itertools.combinations(pairs, 2):
        if (
            masks[(x, y)] & masks[(z, w)]
            and masks[(x, y)] & masks[(w, z)]
            and masks[(y, x)] & masks[(z, w)]
            and masks[(y, x)] & masks[(w, z)]
        ):
            return False
    return True


@dataclass(frozen=True)
class RepresentativeVoterResult:
    holds: bool
    witness: tuple[LinearOrder, LinearOrder, LinearOrder] | None = None
    majority: LinearOrder | None = None

    def __bool__(self) -> bool:
        return self.holds


def representative_voter_by_characterization(domain: Domain) -> bool:
    """Single-crossing, or a closed four-order domain whose graph is a 4-cycle."""
    if single_crossing_order(domain) is not None:
        return True
    return len(domain) == 4 and is_cycle(build_graph(domain), 4) and is_closed_condorcet(domain)


def representative_voter_falsifier(domain: Domain) -> RepresentativeVoterResult:
    """Search 3-voter profiles for one whose majority relation is no voter's order."""
    for voters in itertools.combinations_with_replacement(domain.orders, 3):
        majority = as_linear_order(majority_relation(Profile.of(voters)))
        if majority is None or majority not in voters:
            return RepresentativeVoterResult(False, voters, majority)
    return RepresentativeVoterResult(True)


def representative_voter_property(domain: Domain) -> RepresentativeVoterResult:
    """Decided by the characterization; a 3-voter witness is attached when it fails."""
    if representative_voter_by_characterization(domain):
        return RepresentativeVoterResult(True)
    found = representative_voter_falsifier(domain)
    return RepresentativeVoterResult(False, found.witness, found.majority)


# --- maximal chains ---------------------------------------------------------------


class ChainError(ValueError):
    """A sequence of orders violates a maximal-chain invariant."""


@dataclass(frozen=True)
class MaximalChain:
    """Orders from one order to its reverse, one adjacent swap at a time.

    ``switching_pairs[j]`` is ``(x, y)`` with x directly above y in
    ``orders[j]`` and swapped in ``orders[j + 1]``.
    """

    orders: tuple[LinearOrder, ...]
    switching_pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_orders(cls, orders: Sequence[LinearOrder]) -> "MaximalChain":
        orders = tuple(orders)
        if not orders:
            raise ChainError("empty chain")
        n = orders[0].alts.n
        expected = n * (n - 1) // 2 + 1
        if len(orders) != expected:
            raise ChainError(f"a maximal chain on {n} alternatives has {expected} orders, got {len(orders)}")
        pairs = []
        for a, b in zip(orders, orders[1:]):
            if not are_universal_neighbors(a, b):
                raise ChainError(f"{a} and {b} differ by more than one adjacent swap")
            pairs.append(differing_pairs(a, b)[0])
        if len({frozenset(p) for p in pairs}) != len(pairs):
            raise ChainError("a pair is switched more than once")
        if not are_completely_reversed(orders[0], orders[-1]):
            raise ChainError(f"endpoints {orders[0]} and {orders[-1]} are not completely reversed")
        return cls(orders, tuple(pairs))

    @classmethod
    def from_switching_pairs(cls, start: LinearOrder, pairs: Sequence[tuple[int | str, int | str]]) -> "MaximalChain":
        orders = [start]
        for x, y in pairs:
            orders.append(orders[-1].swap_adjacent(x, y))
        return cls.from_orders(orders)

    @property
    def alts(self) -> AlternativeSet:
        return self.orders[0].alts

    def labelled_pairs(self) -> list[tuple[str, str]]:
        labels = self.alts.labels
        return [(labels[x], labels[y]) for x, y in self.switching_pairs]

    def domain(self) -> Domain:
        return Domain.of(self.orders, self.alts)


def extract_maximal_chain(domain: Domain) -> MaximalChain:
    """The maximal chain formed by a maximal single-crossing connected domain.

    Raises ChainError naming the failed invariant.
    """
    arrangement = single_crossing_order(domain)
    if arrangement is None:
        raise ChainError("domain is not single-crossing")
    if not is_connected_domain(domain):
        raise ChainError("domain is not connected")
    return MaximalChain.from_orders(arrangement)


def pairwise_concatenation(chain: MaximalChain) -> bool:
    """Consecutive switching pairs always share an alternative."""
    pairs = chain.switching_pairs
    return all(set(a) & set(b) for a, b in zip(pairs, pairs[1:]))


def equivalent_pair_sequences(pairs: Sequence[tuple[int, int]]) -> list[tuple[tuple[int, int], ...]]:
    """All sequences reachable by swapping adjacent pairs with no common alternative."""
    start = tuple(pairs)
    seen = {start}
    queue = deque([start])
    while queue:
        seq = queue.popleft()
        for j in range(len(seq) - 1):
            if not set(seq[j]) & set(seq[j + 1]):
                nxt = seq[:j] + (seq[j + 1], seq[j]) + seq[j + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted(seen)


def chains_equivalent(c1: MaximalChain, c2: MaximalChain) -> bool:
    if c1.alts != c2.alts or c1.orders[0] != c2.orders[0]:
        return False
    return c2.switching_pairs in set(equivalent_pair_sequences(c1.switching_pairs))


def equivalent_chains(chain: MaximalChain) -> list[MaximalChain]:
    return [
        MaximalChain.from_switching_pairs(chain.orders[0], seq)
        for seq in equivalent_pair_sequences(chain.switching_pairs)
    ]


def equivalence_closure(chain: MaximalChain) -> Domain:
    """Union of the orders of every chain equivalent to ``chain``."""
    orders = set()
    for c in equivalent_chains(chain):
        orders.update(c.orders)
    return Domain.of(orders, chain.alts)


def maximal_sc_is_maximal_condorcet(chain: MaximalChain) -> bool:
    return pairwise_concatenation(chain)
