"""Winning-coalition structures, the aggregators they define, and exhaustive audits.

Coalitions are bitsets over voters: voter ``i`` (1-based) is bit ``i - 1``.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from condorcet_lab.domains import Domain, is_closed_condorcet, supporter_masks
from condorcet_lab.guards import check_guard
from condorcet_lab.orders import AlternativeSet, LinearOrder

Pair = tuple[int, int]


class InvalidStructure(ValueError):
    """A winning-coalition structure is not upward closed or not proper."""

    def __init__(self, condition: str, message: str) -> None:
        super().__init__(f"violates {condition}: {message}")
        self.condition = condition


class AggregationError(RuntimeError):
    """The pairwise winning rule produced a relation outside the domain."""


def coalition(voters: Iterable[int]) -> int:
    bits = 0
    for i in voters:
        if i < 1:
            raise ValueError(f"voters are numbered from 1, got {i}")
        bits |= 1 << (i - 1)
    return bits


def members(bits: int) -> list[int]:
    return [i + 1 for i in range(bits.bit_length()) if bits >> i & 1]


def _minimal(coalitions: Iterable[int]) -> tuple[int, ...]:
    cs = sorted(set(coalitions), key=lambda c: (c.bit_count(), c))
    out: list[int] = []
    for c in cs:
        if not any(m & c == m for m in out):
            out.append(c)
    return tuple(sorted(out))


@dataclass(frozen=True)
class WinningStructure:
    """Per ordered pair either a quota (``|W| >= q``) or minimal winning coalitions."""

    alts: AlternativeSet
    n: int
    quotas: Mapping[Pair, int] = field(default_factory=dict)
    minimal: Mapping[Pair, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("at least one voter is needed")
        pairs = set(itertools.permutations(range(self.alts.n), 2))
        given = set(self.quotas) | set(self.minimal)
        if given != pairs or set(self.quotas) & set(self.minimal):
            raise ValueError("every ordered pair needs exactly one rule (quota or minimal coalitions)")
        full = (1 << self.n) - 1
        for pair, q in self.quotas.items():
            if not 1 <= q <= self.n:
                raise InvalidStructure("upward-closure", f"quota {q} for {self._pair_label(pair)} outside 1..{self.n}")
        for pair, family in self.minimal.items():
            if not family or any(c == 0 or c & ~full for c in family):
                raise InvalidStructure(
                    "upward-closure", f"{self._pair_label(pair)} needs nonempty coalitions of voters 1..{self.n}"
                )
        self._check_proper()

    def _pair_label(self, pair: Pair) -> str:
        return self.alts.format_label_sequence(pair)

    def _check_proper(self) -> None:
        for x, y in itertools.permutations(range(self.alts.n), 2):
            if x > y:
                continue
            if (x, y) in self.quotas and (y, x) in self.quotas:
                if self.quotas[(x, y)] + self.quotas[(y, x)] != self.n + 1:
                    raise InvalidStructure(
                        "properness",
                        f"quotas for {self._pair_label((x, y))} and {self._pair_label((y, x))} "
                        f"must sum to {self.n + 1}",
                    )
                continue
            full = (1 << self.n) - 1
            for w in range(full + 1):
                if self.wins((x, y), w) == self.wins((y, x), full & ~w):
                    raise InvalidStructure(
                        "properness",
                        f"coalition {members(w)} for {self._pair_label((x, y))} "
                        "and its complement for the reverse pair",
                    )

    # constructors ------------------------------------------------------------------

    @classmethod
    def from_quotas(cls, alts: AlternativeSet, n: int, quotas: Mapping[Pair, int]) -> "WinningStructure":
        return cls(alts, n, dict(quotas), {})

    @classmethod
    def majority(cls, alts: AlternativeSet, n: int) -> "WinningStructure":
        if n % 2 == 0:
            raise InvalidStructure("properness", "pairwise majority needs an odd number of voters")
        q = (n + 1) // 2
        return cls.from_quotas(alts, n, {p: q for p in itertools.permutations(range(alts.n), 2)})

    @classmethod
    def from_minimal(cls, alts: AlternativeSet, n: int, families: Mapping[Pair, Iterable[Iterable[int]]]) -> "WinningStructure":
        return cls(alts, n, {}, {p: _minimal(coalition(c) for c in fam) for p, fam in families.items()})

    @classmethod
    def from_families(cls, alts: AlternativeSet, n: int, families: Mapping[Pair, Iterable[Iterable[int]]]) -> "WinningStructure":
        """From complete winning families; each must already be upward closed."""
        full = (1 << n) - 1
        minimal = {}
        for pair, fam in families.items():
            bits = {coalition(c) for c in fam}
            for c in bits:
                for extra in range(full + 1):
                    if (c | extra) not in bits:
                        raise InvalidStructure(
                            "upward-closure", f"family for {alts.format_label_sequence(pair)} is not upward closed"
                        )
            minimal[pair] = _minimal(bits)
        return cls(alts, n, {}, minimal)

    @classmethod
    def dictatorship(cls, alts: AlternativeSet, n: int, dictator: int) -> "WinningStructure":
        return cls.oligarchy(alts, n, [dictator])

    @classmethod
    def oligarchy(
        cls,
        alts: AlternativeSet,
        n: int,
        oligarchs: Sequence[int],
        favoured: Iterable[Pair] | None = None,
    ) -> "WinningStructure":
        """Pairs in ``favoured`` need every oligarch (case i); their reverses need any one.

        Without ``favoured``, each pair ``(x, y)`` with ``x < y`` is favoured.
        """
        m = coalition(oligarchs)
        if m == 0:
            raise ValueError("an oligarchy needs at least one member")
        if favoured is None:
            favoured = itertools.combinations(range(alts.n), 2)
        favoured = set(favoured)
        everyone = (m,)
        anyone = tuple(sorted(1 << (i - 1) for i in members(m)))
        minimal = {}
        for x, y in itertools.combinations(range(alts.n), 2):
            if (x, y) in favoured and (y, x) in favoured:
                raise ValueError("a pair and its reverse cannot both be favoured")
            strict, lax = ((x, y), (y, x)) if (y, x) not in favoured else ((y, x), (x, y))
            minimal[strict] = everyone
            minimal[lax] = anyone
        return cls(alts, n, {}, minimal)

    # queries -----------------------------------------------------------------------

    def wins(self, pair: Pair, w: int) -> bool:
        """Is coalition ``w`` winning for x against y?"""
        q = self.quotas.get(pair)
        if q is not None:
            return w.bit_count() >= q
        return any(m & w == m for m in self.minimal[pair])

    def family_subset(self, p: Pair, q: Pair) -> bool:
        """W_p ⊆ W_q."""
        if p in self.quotas and q in self.quotas:
            return self.quotas[p] >= self.quotas[q]
        if p in self.minimal:
            return all(self.wins(q, c) for c in self.minimal[p])
        full = (1 << self.n) - 1
        return all(self.wins(q, w) for w in range(full + 1) if self.wins(p, w))

    @property
    def is_anonymous_quota(self) -> bool:
        return not self.minimal

    def win_table(self) -> dict[Pair, bytes]:
        """For each pair, a lookup ``table[w]`` of winning coalitions."""
        full = (1 << self.n) - 1
        return {p: bytes(self.wins(p, w) for w in range(full + 1)) for p in itertools.permutations(range(self.alts.n), 2)}

    def to_json(self) -> dict:
        key = self._pair_label
        if self.is_anonymous_quota:
            return {"quota": {key(p): q for p, q in sorted(self.quotas.items())}}
        out = {}
        for p in sorted(itertools.permutations(range(self.alts.n), 2)):
            if p in self.minimal:
                out[key(p)] = [members(c) for c in self.minimal[p]]
            else:
                full = (1 << self.n) - 1
                out[key(p)] = [members(c) for c in _minimal(w for w in range(full + 1) if self.wins(p, w))]
        return {"minimal": out}


def all_quota_structures(alts: AlternativeSet, n: int) -> list[WinningStructure]:
    """Every anonymous quota structure: one free quota per unordered pair."""
    pairs = list(itertools.combinations(range(alts.n), 2))
    out = []
    for qs in itertools.product(range(1, n + 1), repeat=len(pairs)):
        quotas = {}
        for (x, y), q in zip(pairs, qs):
            quotas[(x, y)] = q
            quotas[(y, x)] = n + 1 - q
        out.append(WinningStructure.from_quotas(alts, n, quotas))
    return out


def is_order_preserving(w: WinningStructure, domain: Domain) -> bool:
    """Supporter-set inclusion between pairs implies winning-family inclusion."""
    masks = supporter_masks(domain)
    for p, vp in masks.items():
        for q, vq in masks.items():
            if p != q and vp & ~vq == 0 and not w.family_subset(p, q):
                return False
    return True


# --- aggregation -----------------------------------------------------------------


class _Aggregator:
    """Pairwise winning rule over a fixed domain, with precomputed lookups."""

    def __init__(self, w: WinningStructure, domain: Domain) -> None:
        self.w = w
        self.domain = domain
        self.pairs = domain.alts.pairs
        self.table = w.win_table()

    def social_mask(self, voters: Sequence[LinearOrder]) -> int:
        mask = 0
        for bit, (x, y) in enumerate(self.pairs):
            support = 0
            for i, r in enumerate(voters):
                if r.mask >> bit & 1:
                    support |= 1 << i
            if self.table[(x, y)][support]:
                mask |= 1 << bit
            elif not self.table[(y, x)][((1 << len(voters)) - 1) & ~support]:
                raise AggregationError("structure decides neither direction for a pair")
        return mask

    def __call__(self, voters: Sequence[LinearOrder]) -> LinearOrder:
        mask = self.social_mask(voters)
        result = self.domain.find_mask(mask)
        if result is None:
            raise AggregationError(
                "pairwise winning relation is not an order of the domain; "
                "the domain is not closed Condorcet or the structure is not order preserving"
            )
        return result


def _voters(profile) -> list[LinearOrder]:
    return profile.voters() if hasattr(profile, "voters") else list(profile)


def _check_preconditions(w: WinningStructure, domain: Domain, voters: Sequence[LinearOrder] | None = None) -> None:
    if w.alts != domain.alts:
        raise ValueError("structure and domain use different alternative sets")
    if not is_closed_condorcet(domain):
        raise ValueError("aggregation requires a closed Condorcet domain")
    if not is_order_preserving(w, domain):
        raise ValueError("structure is not order preserving on the domain")
    if voters is not None:
        if len(voters) != w.n:
            raise ValueError(f"profile has {len(voters)} voters, structure expects {w.n}")
        for r in voters:
            if r not in domain:
                raise ValueError(f"profile order {r} is not in the domain")


def aggregate(w: WinningStructure, domain: Domain, profile) -> LinearOrder:
    """The unique order of the domain ranking x above y iff x's supporters win."""
    voters = _voters(profile)
    _check_preconditions(w, domain, voters)
    return _Aggregator(w, domain)(voters)


def social_choice(w: WinningStructure, domain: Domain, profile) -> int:
    """Top alternative (index) of the aggregate order."""
    return aggregate(w, domain, profile).top


# --- audits --------------------------------------------------------------------------


@dataclass
class AggregationAudit:
    """Audit flags; ``None`` marks a property a sampled audit did not test."""

    unanimity: bool | None = True
    independence: bool | None = True
    monotonicity: bool | None = True
    full_range: bool | None = True
    counterexamples: dict[str, object] = field(default_factory=dict)
    exhaustive: bool = True
    profiles_checked: int = 0

    def flags(self) -> dict[str, bool | None]:
        return {
            "unanimity": self.unanimity,
            "independence": self.independence,
            "monotonicity": self.monotonicity,
            "full_range": self.full_range,
        }

    @property
    def arrovian(self) -> bool:
        return self.unanimity is not False and self.independence is not False

    @property
    def ok(self) -> bool:
        return all(flag is not False for flag in self.flags().values())


def _outcome_table(f: Callable[[Sequence[LinearOrder]], LinearOrder], domain: Domain, n: int) -> list[LinearOrder]:
    return [f(p) for p in itertools.product(domain.orders, repeat=n)]


def _profile_index(idx: Sequence[int], m: int) -> int:
    k = 0
    for i in idx:
        k = k * m + i
    return k


def audit_aggregator(
    f: Callable[[Sequence[LinearOrder]], LinearOrder],
    domain: Domain,
    n: int,
    guard: int | None = None,
) -> AggregationAudit:
    """Exhaustively test unanimity, independence, monotonicity and full range of f.

    Monotonicity is checked in interval form: f(R_i, R_-i) lies between R_i and
    f(R'_i, R_-i) for every voter and deviation.  Counterexamples are the
    lowest-index failing profiles.
    """
    m = len(domain)
    check_guard(m**n, "Arrovian audit", guard)
    orders = domain.orders
    table = _outcome_table(f, domain, n)
    audit = AggregationAudit(profiles_checked=len(table))
    profiles = list(itertools.product(range(m), repeat=n))

    for k, r in enumerate(orders):
        if table[_profile_index([k] * n, m)] != r:
            audit.unanimity = False
            audit.counterexamples.setdefault("unanimity", [str(r)] * n)

    attained = set(table)
    missing = [r for r in orders if r not in attained]
    if missing:
        audit.full_range = False
        audit.counterexamples["full_range"] = str(missing[0])

    alts = domain.alts
    for x, y in itertools.permutations(range(alts.n), 2):
        seen: dict[int, tuple[bool, int]] = {}
        for pidx, idx in enumerate(profiles):
            support = 0
            for i, k in enumerate(idx):
                if orders[k].position[x] < orders[k].position[y]:
                    support |= 1 << i
            out = table[pidx].position[x] < table[pidx].position[y]
            prev = seen.get(support)
            if prev is None:
                seen[support] = (out, pidx)
            elif prev[0] != out and audit.independence:
                audit.independence = False
                audit.counterexamples["independence"] = {
                    "pair": [alts.labels[x], alts.labels[y]],
                    "profiles": [
                        [str(orders[k]) for k in profiles[prev[1]]],
                        [str(orders[k]) for k in idx],
                    ],
                }
        if not audit.independence:
            break

    full = alts.full_mask
    for pidx, idx in enumerate(profiles):
        if not audit.monotonicity:
            break
        out = table[pidx].mask
        for i in range(n):
            ri = orders[idx[i]].mask
            for k in range(m):
                if k == idx[i]:
                    continue
                dev = list(idx)
                dev[i] = k
                other = table[_profile_index(dev, m)].mask
                agree = ~(ri ^ other) & full
                if (out ^ ri) & agree:
                    audit.monotonicity = False
                    audit.counterexamples["monotonicity"] = {
                        "profile": [str(orders[j]) for j in idx],
                        "voter": i + 1,
                        "deviation": str(orders[k]),
                    }
                    break
            if not audit.monotonicity:
                break
    return audit


def audit_arrovian(w: WinningStructure, domain: Domain, n: int | None = None, guard: int | None = None) -> AggregationAudit:
    n = w.n if n is None else n
    if n != w.n:
        raise ValueError(f"structure is for {w.n} voters, audit asked for {n}")
    check_guard(len(domain) ** n, "Arrovian audit", guard)
    _check_preconditions(w, domain)
    return audit_aggregator(_Aggregator(w, domain), domain, n, guard)


@dataclass(frozen=True)
class StrategyProofness:
    holds: bool
    counterexample: dict | None = None
    exhaustive: bool = True
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _sp_chunk(args) -> tuple[int, dict | None, int]:
    tops, masks_pos, m, n, start, stop, labels, literals = args
    checked = 0
    for pidx in range(start, stop):
        idx = []
        k = pidx
        for _ in range(n):
            idx.append(k % m)
            k //= m
        idx.reverse()
        chosen = tops[pidx]
        for i in range(n):
            pos = masks_pos[idx[i]]
            for k in range(m):
                if k == idx[i]:
                    continue
                dev = list(idx)
                dev[i] = k
                alt = tops[_profile_index(dev, m)]
                checked += 1
                if pos[alt] < pos[chosen]:
                    return pidx, {
                        "profile": [literals[j] for j in idx],
                        "voter": i + 1,
                        "deviation": literals[k],
                        "truthful_choice": labels[chosen],
                        "manipulated_choice": labels[alt],
                    }, checked
    return stop, None, checked


def strategy_proofness_of(
    choice: Callable[[Sequence[LinearOrder]], int],
    domain: Domain,
    n: int,
    guard: int | None = None,
    jobs: int = 1,
) -> StrategyProofness:
    """Exhaustive check that no voter gains by any unilateral misreport."""
    m = len(domain)
    check_guard(m**n * m * n, "strategy-proofness audit", guard)
    orders = domain.orders
    tops = [choice(p) for p in itertools.product(orders, repeat=n)]
    args_common = (tops, [r.position for r in orders], m, n)
    labels, literals = domain.alts.labels, domain.literals()
    total = m**n
    if jobs <= 1 or total < 4096:
        chunks = [(0, total)]
    else:
        size = -(-total // jobs)
        chunks = [(s, min(total, s + size)) for s in range(0, total, size)]
    work = [args_common + (s, e, labels, literals) for s, e in chunks]
    if len(work) == 1:
        results = [_sp_chunk(work[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sp_chunk, work))
    checked = sum(r[2] for r in results)
    failures = [(r[0], r[1]) for r in results if r[1] is not None]
    if failures:
        return StrategyProofness(False, min(failures, key=lambda t: t[0])[1], checked=checked)
    return StrategyProofness(True, checked=checked)


def is_strategy_proof(
    w: WinningStructure, domain: Domain, n: int | None = None, guard: int | None = None, jobs: int = 1
) -> StrategyProofness:
    n = w.n if n is None else n
    if n != w.n:
        raise ValueError(f"structure is for {w.n} voters, audit asked for {n}")
    m = len(domain)
    check_guard(m**n * m * n, "strategy-proofness audit", guard)
    _check_preconditions(w, domain)
    f = _Aggregator(w, domain)
    return strategy_proofness_of(lambda p: f(p).top, domain, n, guard, jobs)


def sample_audit(
    w: WinningStructure, domain: Domain, samples: int, seed: int = 0
) -> tuple[AggregationAudit, StrategyProofness]:
    """Non-exhaustive audit over random profiles and unilateral deviations.

    Unanimity is checked on every unanimous profile, monotonicity and
    strategy-proofness on the sampled deviations, and full range on the
    outcomes seen.  Independence needs matched profile pairs and is left
    untested (``None``).
    """
    _check_preconditions(w, domain)
    f = _Aggregator(w, domain)
    rng = random.Random(seed)
    orders = domain.orders
    full = domain.alts.full_mask
    audit = AggregationAudit(independence=None, exhaustive=False)
    seen = set()
    for r in orders:
        out = f([r] * w.n)
        seen.add(out)
        if out != r and audit.unanimity:
            audit.unanimity = False
            audit.counterexamples["unanimity"] = [str(r)] * w.n
    counterexample = None
    checked = 0
    for _ in range(samples):
        profile = [rng.choice(orders) for _ in range(w.n)]
        out = f(profile)
        i = rng.randrange(w.n)
        dev = list(profile)
        dev[i] = rng.choice(orders)
        other = f(dev)
        seen.update((out, other))
        checked += 1
        ri = profile[i]
        if audit.monotonicity and (out.mask ^ ri.mask) & ~(ri.mask ^ other.mask) & full:
            audit.monotonicity = False
            audit.counterexamples["monotonicity"] = {
                "profile": [str(r) for r in profile], "voter": i + 1, "deviation": str(dev[i]),
            }
        if counterexample is None and ri.position[other.top] < ri.position[out.top]:
            counterexample = {
                "profile": [str(r) for r in profile], "voter": i + 1, "deviation": str(dev[i]),
                "truthful_choice": domain.alts.labels[out.top],
                "manipulated_choice": domain.alts.labels[other.top],
            }
    missing = [r for r in orders if r not in seen]
    if missing:
        audit.full_range = False
        audit.counterexamples["full_range"] = str(missing[0])
    audit.profiles_checked = checked
    return audit, StrategyProofness(counterexample is None, counterexample, exhaustive=False, checked=checked)
