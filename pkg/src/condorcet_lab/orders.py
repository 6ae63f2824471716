"""Linear orders over a finite alternative set and Kemeny betweenness.

An order is stored as its ranking (alternative indices, most preferred
first).  Each order also carries a *pair mask*: one bit per unordered pair
``i < j`` of alternative indices, set when ``i`` is ranked above ``j``.  All
betweenness, interval and median computations reduce to bit operations on
these masks.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class AlternativeSetMismatch(ValueError):
    """Raised when orders over different alternative sets are combined."""


class OrderSyntaxError(ValueError):
    """An order literal could not be parsed."""

    def __init__(self, message: str, column: int = 1) -> None:
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class AlternativeSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("an alternative set needs at least one alternative")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate alternative labels in {self.labels!r}")
        for label in self.labels:
            if not label or any(ch.isspace() for ch in label) or "#" in label:
                raise ValueError(f"invalid alternative label {label!r}")

    @classmethod
    def of(cls, labels: Iterable[str] | str) -> "AlternativeSet":
        """Build from labels; a plain string is split into characters."""
        if isinstance(labels, str):
            labels = labels.split() if any(ch.isspace() for ch in labels) else list(labels)
        return cls(tuple(labels))

    @classmethod
    def letters(cls, n: int) -> "AlternativeSet":
        if not 1 <= n <= 26:
            raise ValueError("letters() supports 1..26 alternatives")
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @functools.cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @functools.cached_property
    def single_char(self) -> bool:
        return all(len(label) == 1 for label in self.labels)

    @functools.cached_property
    def pair_bit(self) -> tuple[tuple[int, ...], ...]:
        """``pair_bit[i][j]`` for ``i < j`` is the bit position of pair {i, j}."""
        n = self.n
        table = [[-1] * n for _ in range(n)]
        bit = 0
        for i in range(n):
            for j in range(i + 1, n):
                table[i][j] = table[j][i] = bit
                bit += 1
        return tuple(tuple(row) for row in table)

    @functools.cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Unordered pairs ``(i, j)``, ``i < j``, in bit order."""
        return tuple(itertools.combinations(range(self.n), 2))

    @property
    def num_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.num_pairs) - 1

    def index(self, alternative: int | str) -> int:
        """Resolve a label or an index to an index."""
        if isinstance(alternative, int):
            if not 0 <= alternative < self.n:
                raise IndexError(f"alternative index {alternative} out of range")
            return alternative
        try:
            return self._index[alternative]
        except KeyError:
            raise KeyError(f"unknown alternative {alternative!r}") from None

    def order(self, ranking: Sequence[int | str] | str) -> "LinearOrder":
        """Build an order from a literal or from a sequence of labels/indices."""
        if isinstance(ranking, str):
            return self.parse(ranking)
        return LinearOrder(self, tuple(self.index(a) for a in ranking))

    def parse(self, literal: str) -> "LinearOrder":
        tokens = tokenize_order(literal)
        ranking = []
        for token, column in tokens:
            if token not in self._index:
                raise OrderSyntaxError(f"unknown alternative {token!r}", column)
            ranking.append(self._index[token])
        if len(ranking) != self.n or len(set(ranking)) != self.n:
            raise OrderSyntaxError(
                f"{literal.strip()!r} does not rank each of {self.n} alternatives exactly once"
            )
        return LinearOrder(self, tuple(ranking))

    def all_orders(self) -> list["LinearOrder"]:
        """The universal domain, in canonical (lexicographic) order."""
        return [LinearOrder(self, p) for p in itertools.permutations(range(self.n))]

    def order_from_mask(self, mask: int) -> "LinearOrder | None":
        """The linear order with this pair mask, or None if the relation is cyclic."""
        n = self.n
        wins = [0] * n
        for bit, (i, j) in enumerate(self.pairs):
            if mask >> bit & 1:
                wins[i] += 1
            else:
                wins[j] += 1
        # a tournament is transitive iff its score sequence is 0..n-1
        if sorted(wins) != list(range(n)):
            return None
        return LinearOrder(self, tuple(sorted(range(n), key=lambda a: -wins[a])))

    def format_label_sequence(self, indices: Iterable[int]) -> str:
        sep = "" if self.single_char else " "
        return sep.join(self.labels[i] for i in indices)


def tokenize_order(literal: str) -> list[tuple[str, int]]:
    """Split an order literal into ``(token, column)`` pairs (1-based columns)."""
    stripped = literal.strip()
    if not stripped:
        raise OrderSyntaxError("empty order literal")
    offset = literal.index(stripped[0])
    if any(ch.isspace() for ch in stripped):
        tokens = []
        pos = 0
        for token in stripped.split():
            pos = stripped.index(token, pos)
            tokens.append((token, offset + pos + 1))
            pos += len(token)
        return tokens
    return [(ch, offset + k + 1) for k, ch in enumerate(stripped)]


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class LinearOrder:
    """A strict linear order; ``ranking[0]`` is the most preferred alternative."""

    alts: AlternativeSet
    ranking: tuple[int, ...]
    position: tuple[int, ...] = field(init=False, repr=False)
    mask: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = self.alts.n
        if sorted(self.ranking) != list(range(n)):
            raise ValueError(f"ranking {self.ranking} is not a permutation of 0..{n - 1}")
        position = [0] * n
        for rank, a in enumerate(self.ranking):
            position[a] = rank
        mask = 0
        for bit, (i, j) in enumerate(self.alts.pairs):
            if position[i] < position[j]:
                mask |= 1 << bit
        object.__setattr__(self, "position", tuple(position))
        object.__setattr__(self, "mask", mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearOrder):
            return NotImplemented
        return self.ranking == other.ranking and self.alts == other.alts

    def __hash__(self) -> int:
        return hash(self.ranking)

    def __lt__(self, other: "LinearOrder") -> bool:
        if not isinstance(other, LinearOrder):
            return NotImplemented
        return self.ranking < other.ranking

    def __str__(self) -> str:
        return self.alts.format_label_sequence(self.ranking)

    def __repr__(self) -> str:
        return f"LinearOrder({str(self)!r})"

    @property
    def top(self) -> int:
        return self.ranking[0]

    def prefers(self, x: int | str, y: int | str) -> bool:
        """True iff x is ranked above y."""
        return self.position[self.alts.index(x)] < self.position[self.alts.index(y)]

    def reversed(self) -> "LinearOrder":
        return LinearOrder(self.alts, self.ranking[::-1])

    def restrict(self, alternatives: Iterable[int]) -> tuple[int, ...]:
        """The ranking restricted to a subset of alternatives."""
        keep = set(alternatives)
        return tuple(a for a in self.ranking if a in keep)

    def swap_adjacent(self, x: int | str, y: int | str) -> "LinearOrder":
        """Swap x and y, which must be adjacent with x directly above y."""
        x, y = self.alts.index(x), self.alts.index(y)
        px = self.position[x]
        if self.position[y] != px + 1:
            raise ValueError(f"{self.alts.labels[x]} is not directly above {self.alts.labels[y]} in {self}")
        ranking = list(self.ranking)
        ranking[px], ranking[px + 1] = y, x
        return LinearOrder(self.alts, tuple(ranking))

    def pair_list(self) -> Iterator[tuple[int, int]]:
        """Ordered pairs (x, y) with x ranked above y."""
        for k, x in enumerate(self.ranking):
            for y in self.ranking[k + 1:]:
                yield (x, y)


def _same_alts(*orders: LinearOrder) -> AlternativeSet:
    alts = orders[0].alts
    for order in orders[1:]:
        if order.alts != alts:
            raise AlternativeSetMismatch(f"orders {orders[0]} and {order} use different alternative sets")
    return alts


def between_masks(q: int, r: int, rp: int, full: int) -> bool:
    agree = ~(r ^ rp) & full
    return (q ^ r) & agree == 0


def is_between(q: LinearOrder, r: LinearOrder, rp: LinearOrder) -> bool:
    """Kemeny betweenness: q agrees with every comparison shared by r and rp."""
    alts = _same_alts(q, r, rp)
    return between_masks(q.mask, r.mask, rp.mask, alts.full_mask)


def interval(r: LinearOrder, rp: LinearOrder, universe: Iterable[LinearOrder]) -> set[LinearOrder]:
    """All orders of ``universe`` lying between r and rp."""
    alts = _same_alts(r, rp)
    full = alts.full_mask
    agree = ~(r.mask ^ rp.mask) & full
    result = set()
    for q in universe:
        if q.alts != alts:
            raise AlternativeSetMismatch(f"order {q} is over a different alternative set")
        if (q.mask ^ r.mask) & agree == 0:
            result.add(q)
    return result


def median_mask(a: int, b: int, c: int) -> int:
    return (a & b) | (a & c) | (b & c)


def median_of_triple(r1: LinearOrder, r2: LinearOrder, r3: LinearOrder) -> LinearOrder | None:
    """Majority relation of the profile (r1, r2, r3) when acyclic, else None.

    When it exists it is the unique order lying in all three pairwise intervals.
    """
    alts = _same_alts(r1, r2, r3)
    return alts.order_from_mask(median_mask(r1.mask, r2.mask, r3.mask))


def reverse(r: LinearOrder) -> LinearOrder:
    return r.reversed()


def are_completely_reversed(r: LinearOrder, rp: LinearOrder) -> bool:
    alts = _same_alts(r, rp)
    return r.mask ^ rp.mask == alts.full_mask


def are_universal_neighbors(r: LinearOrder, rp: LinearOrder) -> bool:
    """True iff the orders differ on exactly one pair (an adjacent transposition)."""
    _same_alts(r, rp)
    return (r.mask ^ rp.mask).bit_count() == 1


def differing_pairs(r: LinearOrder, rp: LinearOrder) -> list[tuple[int, int]]:
    """Ordered pairs (x, y) with x above y in r and y above x in rp."""
    _same_alts(r, rp)
    diff = r.mask ^ rp.mask
    out = []
    for bit, (i, j) in enumerate(r.alts.pairs):
        if diff >> bit & 1:
            out.append((i, j) if r.position[i] < r.position[j] else (j, i))
    out.sort(key=lambda p: (r.position[p[0]], r.position[p[1]]))
    return out
