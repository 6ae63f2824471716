"""Domains, profiles and majority relations; Condorcet, closedness and maximality tests."""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from condorcet_lab.guards import GuardExceeded
from condorcet_lab.orders import (
    AlternativeSet,
    AlternativeSetMismatch,
    LinearOrder,
    between_masks,
    median_mask,
)

HELLY_MAX_ORDERS = 12
ENUMERATE_MAX_ALTERNATIVES = 4


@dataclass(frozen=True)
class Domain:
    """A nonempty set of orders over one alternative set, kept in canonical order."""

    alts: AlternativeSet
    orders: tuple[LinearOrder, ...]

    def __post_init__(self) -> None:
        if not self.orders:
            raise ValueError("a domain must contain at least one order")
        for order in self.orders:
            if order.alts != self.alts:
                raise AlternativeSetMismatch(f"order {order} is not over {self.alts.labels}")
        if any(a >= b for a, b in zip(self.orders, self.orders[1:])):
            raise ValueError("orders must be strictly increasing; use Domain.of()")

    @classmethod
    def of(cls, orders: Iterable[LinearOrder], alts: AlternativeSet | None = None) -> "Domain":
        orders = sorted(set(orders))
        if not orders:
            raise ValueError("a domain must contain at least one order")
        return cls(alts or orders[0].alts, tuple(orders))

    @classmethod
    def parse(cls, literals: Iterable[str] | str, alts: AlternativeSet | None = None) -> "Domain":
        """Build from order literals.  Without ``alts``, labels are taken sorted.

        A single string is split on commas, or on whitespace when every
        token is a one-character-label order (``"abc acb"``).
        """
        if isinstance(literals, str):
            literals = literals.split(",") if "," in literals else literals.split()
        literals = [lit for lit in literals if lit.strip()]
        if not literals:
            raise ValueError("no orders given")
        if alts is None:
            alts = infer_alternatives(literals[0])
        return cls.of((alts.parse(lit) for lit in literals), alts)

    def __iter__(self) -> Iterator[LinearOrder]:
        return iter(self.orders)

    def __len__(self) -> int:
        return len(self.orders)

    @functools.cached_property
    def _members(self) -> dict[LinearOrder, int]:
        return {order: k for k, order in enumerate(self.orders)}

    @functools.cached_property
    def _by_mask(self) -> dict[int, LinearOrder]:
        return {order.mask: order for order in self.orders}

    def __contains__(self, order: object) -> bool:
        return order in self._members

    def index(self, order: LinearOrder) -> int:
        try:
            return self._members[order]
        except KeyError:
            raise KeyError(f"order {order} is not in the domain") from None

    def find_mask(self, mask: int) -> LinearOrder | None:
        return self._by_mask.get(mask)

    def with_orders(self, extra: Iterable[LinearOrder]) -> "Domain":
        return Domain.of(itertools.chain(self.orders, extra), self.alts)

    def issubset(self, other: "Domain") -> bool:
        return all(order in other for order in self.orders)

    def literals(self) -> list[str]:
        return [str(order) for order in self.orders]

    def __str__(self) -> str:
        return "{" + ", ".join(self.literals()) + "}"

    @functools.cached_property
    def interval_masks(self) -> tuple[tuple[int, ...], ...]:
        """``interval_masks[i][j]``: bitset over domain indices of ``[R_i, R_j]``."""
        masks = [order.mask for order in self.orders]
        full = self.alts.full_mask
        m = len(masks)
        table = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                bits = 0
                for k in range(m):
                    if between_masks(masks[k], masks[i], masks[j], full):
                        bits |= 1 << k
                table[i][j] = table[j][i] = bits
        return tuple(tuple(row) for row in table)


def infer_alternatives(literal: str) -> AlternativeSet:
    from condorcet_lab.orders import tokenize_order

    return AlternativeSet(tuple(sorted(token for token, _ in tokenize_order(literal))))


@dataclass(frozen=True)
class Profile:
    """Voters' orders as ``(order, count)`` entries; voter order follows entry order."""

    entries: tuple[tuple[LinearOrder, int], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("a profile needs at least one voter")
        alts = self.entries[0][0].alts
        for order, count in self.entries:
            if count < 1:
                raise ValueError(f"voter count must be positive, got {count}")
            if order.alts != alts:
                raise AlternativeSetMismatch("profile mixes alternative sets")

    @classmethod
    def of(cls, orders: Iterable[LinearOrder]) -> "Profile":
        return cls(tuple((order, 1) for order in orders))

    @property
    def alts(self) -> AlternativeSet:
        return self.entries[0][0].alts

    @property
    def n(self) -> int:
        return sum(count for _, count in self.entries)

    @property
    def is_odd(self) -> bool:
        return self.n % 2 == 1

    def voters(self) -> list[LinearOrder]:
        return [order for order, count in self.entries for _ in range(count)]

    def is_over(self, domain: Domain) -> bool:
        return all(order in domain for order, _ in self.entries)


@dataclass(frozen=True)
class MajorityRelation:
    """Strict-majority pairs ``(x, y)``: more than half of the voters rank x above y."""

    alts: AlternativeSet
    wins: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for x, y in self.wins:
            if (y, x) in self.wins:
                raise ValueError("a majority relation is asymmetric")

    def is_complete(self) -> bool:
        return len(self.wins) == self.alts.num_pairs

    def labelled(self) -> list[tuple[str, str]]:
        labels = self.alts.labels
        return sorted((labels[x], labels[y]) for x, y in self.wins)


def majority_relation(profile: Profile) -> MajorityRelation:
    alts = profile.alts
    support: Counter[tuple[int, int]] = Counter()
    for order, count in profile.entries:
        for pair in order.pair_list():
            support[pair] += count
    n = profile.n
    wins = frozenset(pair for pair, votes in support.items() if 2 * votes > n)
    return MajorityRelation(alts, wins)


def find_cycle(m: MajorityRelation) -> list[int] | None:
    """A directed cycle of the wins digraph as a vertex list, or None."""
    succ: dict[int, list[int]] = {a: [] for a in range(m.alts.n)}
    for x, y in sorted(m.wins):
        succ[x].append(y)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = [WHITE] * m.alts.n
    stack_path: list[int] = []

    def visit(v: int) -> list[int] | None:
        colour[v] = GREY
        stack_path.append(v)
        for w in succ[v]:
            if colour[w] == GREY:
                return stack_path[stack_path.index(w):]
            if colour[w] == WHITE:
                found = visit(w)
                if found:
                    return found
        stack_path.pop()
        colour[v] = BLACK
        return None

    for v in range(m.alts.n):
        if colour[v] == WHITE:
            found = visit(v)
            if found:
                return found
    return None


def is_acyclic(m: MajorityRelation) -> bool:
    return find_cycle(m) is None


def as_linear_order(m: MajorityRelation) -> LinearOrder | None:
    """The relation as an order when it is complete and acyclic."""
    if not m.is_complete() or not is_acyclic(m):
        return None
    beaten = Counter(x for x, _ in m.wins)
    return LinearOrder(m.alts, tuple(sorted(range(m.alts.n), key=lambda a: -beaten[a])))


# --- Condorcet tests -------------------------------------------------------


def _triple_patterns(domain: Domain) -> dict[tuple[int, int, int], set[tuple[int, int, int]]]:
    patterns: dict[tuple[int, int, int], set[tuple[int, int, int]]] = {}
    for triple in itertools.combinations(range(domain.alts.n), 3):
        patterns[triple] = {order.restrict(triple) for order in domain.orders}
    return patterns


def value_restricted(patterns: Iterable[tuple[int, int, int]], triple: Sequence[int]) -> bool:
    """Some element of the triple is never first, never second, or never third."""
    seen = set()
    for pattern in patterns:
        for rank, a in enumerate(pattern):
            seen.add((a, rank))
    return any((a, rank) not in seen for a in triple for rank in range(3))


def is_condorcet(domain: Domain) -> bool:
    """Value-restriction test over every triple of alternatives."""
    return all(value_restricted(p, t) for t, p in _triple_patterns(domain).items())


@dataclass(frozen=True)
class LatinSquare:
    """Orders r1, r2, r3 and alternatives x, y, z with x r1 y r1 z, y r2 z r2 x, z r3 x r3 y."""

    orders: tuple[LinearOrder, LinearOrder, LinearOrder]
    alternatives: tuple[int, int, int]

    def holds(self) -> bool:
        x, y, z = self.alternatives
        r1, r2, r3 = self.orders
        return (
            r1.prefers(x, y) and r1.prefers(y, z)
            and r2.prefers(y, z) and r2.prefers(z, x)
            and r3.prefers(z, x) and r3.prefers(x, y)
        )

    def to_json(self) -> dict:
        labels = self.orders[0].alts.labels
        return {
            "orders": [str(r) for r in self.orders],
            "alternatives": [labels[a] for a in self.alternatives],
        }


def find_latin_square(domain: Domain) -> LatinSquare | None:
    """Search for a forbidden cyclic pattern among three orders of the domain."""
    for triple in itertools.combinations(range(domain.alts.n), 3):
        by_pattern: dict[tuple[int, int, int], LinearOrder] = {}
        for order in domain.orders:
            by_pattern.setdefault(order.restrict(triple), order)
        for pattern, r1 in sorted(by_pattern.items(), key=lambda kv: kv[1]):
            x, y, z = pattern
            r2 = by_pattern.get((y, z, x))
            r3 = by_pattern.get((z, x, y))
            if r2 is not None and r3 is not None:
                return LatinSquare((r1, r2, r3), (x, y, z))
    return None


def is_condorcet_latin(domain: Domain) -> bool:
    """Absence of a Latin square among triples of orders (cross-check of is_condorcet)."""
    return find_latin_square(domain) is None


# --- median stability and closure -------------------------------------------


@dataclass(frozen=True)
class CycleReport:
    """Three orders without a median and the Latin square they form."""

    triple: tuple[LinearOrder, LinearOrder, LinearOrder]
    latin_square: LatinSquare

    def to_json(self) -> dict:
        return {"triple": [str(r) for r in self.triple], "latin_square": self.latin_square.to_json()}


class CondorcetCycleError(ValueError):
    """Raised by closure() when the domain is not a Condorcet domain."""

    def __init__(self, report: CycleReport) -> None:
        super().__init__(
            "no median for " + ", ".join(str(r) for r in report.triple)
        )
        self.report = report


def _latin_from_cyclic_triple(triple: tuple[LinearOrder, LinearOrder, LinearOrder]) -> LatinSquare:
    alts = triple[0].alts
    rel = MajorityRelation(
        alts,
        frozenset(
            (i, j) if median_mask(*(r.mask for r in triple)) >> bit & 1 else (j, i)
            for bit, (i, j) in enumerate(alts.pairs)
        ),
    )
    # a cyclic tournament always contains a directed 3-cycle
    for x, y, z in itertools.permutations(range(alts.n), 3):
        if x == min(x, y, z) and (x, y) in rel.wins and (y, z) in rel.wins and (z, x) in rel.wins:
            roles = {}
            for r in triple:
                pattern = r.restrict((x, y, z))
                roles[pattern] = r
            return LatinSquare((roles[(x, y, z)], roles[(y, z, x)], roles[(z, x, y)]), (x, y, z))
    raise AssertionError("cyclic majority without a 3-cycle")


def median_failures(domain: Domain) -> Iterator[tuple[LinearOrder, LinearOrder, LinearOrder]]:
    """Triples whose median does not exist or lies outside the domain."""
    for triple in itertools.combinations(domain.orders, 3):
        if domain.find_mask(median_mask(*(r.mask for r in triple))) is None:
            yield triple


def is_median_stable(domain: Domain) -> bool:
    return next(median_failures(domain), None) is None


def is_closed_condorcet(domain: Domain) -> bool:
    """Closed Condorcet domains coincide with median-stable domains."""
    return is_median_stable(domain)


def closed_under_three_voter_majority(domain: Domain) -> bool:
    """Direct check: every 3-voter profile has a linear majority relation inside the domain."""
    for voters in itertools.combinations_with_replacement(domain.orders, 3):
        order = as_linear_order(majority_relation(Profile.of(voters)))
        if order is None or order not in domain:
            return False
    return True


def closure(domain: Domain) -> Domain:
    """Smallest median-stable superdomain, built by adding triple medians to a fixpoint.

    A median-stable domain is closed under the majority relation of every odd
    profile, so triples suffice.  Raises CondorcetCycleError naming a triple
    without a median when the domain is not Condorcet.
    """
    alts = domain.alts
    current = {order.mask: order for order in domain.orders}
    fresh = list(current)
    while fresh:
        new: dict[int, LinearOrder] = {}
        members = sorted(current.values())
        fresh_set = set(fresh)
        for triple in itertools.combinations(members, 3):
            if not any(r.mask in fresh_set for r in triple):
                continue
            med = median_mask(*(r.mask for r in triple))
            if med in current or med in new:
                continue
            order = alts.order_from_mask(med)
            if order is None:
                raise CondorcetCycleError(CycleReport(triple, _latin_from_cyclic_triple(triple)))
            new[med] = order
        current.update(new)
        fresh = list(new)
    return Domain.of(current.values(), alts)


# --- supporters, convexity, Helly ---------------------------------------------


def supporters(domain: Domain, x: int | str, y: int | str) -> frozenset[LinearOrder]:
    """Orders of the domain ranking x above y."""
    xi, yi = domain.alts.index(x), domain.alts.index(y)
    if xi == yi:
        raise ValueError("supporters need two distinct alternatives")
    return frozenset(r for r in domain.orders if r.position[xi] < r.position[yi])


def supporter_masks(domain: Domain) -> dict[tuple[int, int], int]:
    """Bitsets over domain indices of every supporter set, keyed by ordered pair."""
    out = {}
    n = domain.alts.n
    for x in range(n):
        for y in range(n):
            if x != y:
                bits = 0
                for k, r in enumerate(domain.orders):
                    if r.position[x] < r.position[y]:
                        bits |= 1 << k
                out[(x, y)] = bits
    return out


def _subset_mask(domain: Domain, subset: Iterable[LinearOrder]) -> int:
    bits = 0
    for order in subset:
        bits |= 1 << domain.index(order)
    return bits


def _is_convex_mask(domain: Domain, bits: int) -> bool:
    table = domain.interval_masks
    members = [k for k in range(len(domain)) if bits >> k & 1]
    for a, i in enumerate(members):
        row = table[i]
        for j in members[a + 1:]:
            if row[j] & ~bits:
                return False
    return True


def is_convex(domain: Domain, subset: Iterable[LinearOrder]) -> bool:
    """True iff the subset contains the domain interval of each of its pairs."""
    return _is_convex_mask(domain, _subset_mask(domain, subset))


def convex_subsets(domain: Domain) -> list[int]:
    """All nonempty convex subsets as bitsets over domain indices."""
    if len(domain) > HELLY_MAX_ORDERS:
        raise GuardExceeded(
            f"convex-subset enumeration refused for {len(domain)} orders (limit {HELLY_MAX_ORDERS})"
        )
    return [bits for bits in range(1, 1 << len(domain)) if _is_convex_mask(domain, bits)]


def family_has_helly(family: Sequence[int], ground_size: int) -> bool:
    """Helly property of a family of bitsets (empty members ignored).

    Uses the Berge-Duchet criterion: the family is Helly iff for every three
    ground elements the members containing at least two of them intersect.
    """
    members = [s for s in family if s]
    full = (1 << ground_size) - 1
    hull = {}
    for a in range(ground_size):
        for b in range(a + 1, ground_size):
            acc = full
            pair = (1 << a) | (1 << b)
            for s in members:
                if s & pair == pair:
                    acc &= s
            hull[(a, b)] = acc
    for a, b, c in itertools.combinations(range(ground_size), 3):
        if hull[(a, b)] & hull[(b, c)] & hull[(a, c)] == 0:
            return False
    return True


def helly_holds(domain: Domain) -> bool:
    """Helly property for the convex subsets of the domain (at most 12 orders)."""
    return family_has_helly(convex_subsets(domain), len(domain))


# --- maximality -----------------------------------------------------------------


@dataclass(frozen=True)
class MaximalityResult:
    is_maximal: bool
    witness: LinearOrder | None = None

    def __bool__(self) -> bool:
        return self.is_maximal


def addable_orders(domain: Domain) -> Iterator[LinearOrder]:
    """Orders outside the domain whose addition keeps it Condorcet, lexicographically."""
    patterns = _triple_patterns(domain)
    for order in domain.alts.all_orders():
        if order in domain:
            continue
        if all(value_restricted(p | {order.restrict(t)}, t) for t, p in patterns.items()):
            yield order


def is_maximal_condorcet(domain: Domain) -> MaximalityResult:
    """Maximal iff no single order can be added; otherwise report the smallest addable one."""
    if not is_condorcet(domain):
        raise ValueError("is_maximal_condorcet requires a Condorcet domain")
    witness = next(addable_orders(domain), None)
    return MaximalityResult(witness is None, witness)


# --- enumeration ------------------------------------------------------------------


def _forbidden_completions(orders: Sequence[LinearOrder]) -> list[list[int]]:
    """``table[i][j]``: bitset of k such that {i, j, k} fails value restriction."""
    m = len(orders)
    alts = orders[0].alts
    triples = list(itertools.combinations(range(alts.n), 3))
    restricted = [[r.restrict(t) for t in triples] for r in orders]
    table = [[0] * m for _ in range(m)]
    for i, j, k in itertools.combinations(range(m), 3):
        bad = False
        for t_idx, t in enumerate(triples):
            patterns = {restricted[i][t_idx], restricted[j][t_idx], restricted[k][t_idx]}
            if len(patterns) == 3 and not value_restricted(patterns, t):
                bad = True
                break
        if bad:
            table[i][j] |= 1 << k
            table[j][i] |= 1 << k
            table[i][k] |= 1 << j
            table[k][i] |= 1 << j
            table[j][k] |= 1 << i
            table[k][j] |= 1 << i
    return table


def enumerate_maximal_condorcet(n: int) -> list[Domain]:
    """All maximal Condorcet domains on ``n`` alternatives (2 <= n <= 4), canonically sorted.

    Depth-first search deciding each order in lexicographic sequence.  A set
    of orders is Condorcet iff it contains no value-restriction-violating
    3-subset, so the search tracks the orders blocked by chosen pairs and
    prunes branches where an excluded order can no longer be blocked.
    """
    if n > ENUMERATE_MAX_ALTERNATIVES:
        raise GuardExceeded(f"enumeration refused for {n} alternatives (limit {ENUMERATE_MAX_ALTERNATIVES})")
    if n < 2:
        raise ValueError("enumeration needs at least 2 alternatives")
    alts = AlternativeSet.letters(n)
    orders = alts.all_orders()
    m = len(orders)
    table = _forbidden_completions(orders)
    results: list[int] = []

    def blockable(e: int, possible: int) -> bool:
        row = table[e]
        bits = possible
        while bits:
            low = bits & -bits
            a = low.bit_length() - 1
            if row[a] & possible & ~low:
                return True
            bits ^= low
        return False

    def search(k: int, chosen: int, blocked: int, excluded: int) -> None:
        # orders >= k not yet decided; candidates are those not blocked
        undecided = ((1 << m) - 1) & ~((1 << k) - 1)
        possible = chosen | (undecided & ~blocked)
        pending = excluded & ~blocked
        while pending:
            low = pending & -pending
            if not blockable(low.bit_length() - 1, possible):
                return
            pending ^= low
        while k < m and blocked >> k & 1:
            k += 1
        if k == m:
            if excluded & ~blocked == 0:
                results.append(chosen)
            return
        # include order k
        new_blocked = blocked
        bits = chosen
        while bits:
            low = bits & -bits
            new_blocked |= table[k][low.bit_length() - 1]
            bits ^= low
        search(k + 1, chosen | 1 << k, new_blocked, excluded)
        # exclude order k
        search(k + 1, chosen, blocked, excluded | 1 << k)

    search(0, 0, 0, 0)
    domains = [Domain(alts, tuple(orders[k] for k in range(m) if bits >> k & 1)) for bits in results]
    domains.sort(key=lambda d: d.orders)
    return domains
