"""The associated graph of a domain and the interval-operator checks around it."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from condorcet_lab.domains import Domain
from condorcet_lab.graphs import Graph, to_dot
from condorcet_lab.orders import (
    LinearOrder,
    are_completely_reversed,
    are_universal_neighbors,
    median_of_triple,
    reverse,
)

REPORT_WITNESS_LIMIT = 10


@dataclass(frozen=True)
class DomainGraph(Graph):
    """Graph on the domain's orders (canonical indexing) joining domain neighbors."""

    domain: Domain | None = field(default=None, compare=False)

    def vertex(self, order: LinearOrder) -> int:
        if self.domain is None or order not in self.domain:
            raise KeyError(f"order {order} is not a vertex of this graph")
        return self.domain.index(order)

    def order(self, v: int) -> LinearOrder:
        return self.domain.orders[v]

    def to_dot(self, name: str = "D") -> str:
        return to_dot(self, self.domain.literals(), name)


def build_graph(domain: Domain) -> DomainGraph:
    """Join R, R' whenever the domain interval [R, R'] is exactly {R, R'}."""
    table = domain.interval_masks
    edges = []
    for i, j in itertools.combinations(range(len(domain)), 2):
        if table[i][j] == (1 << i) | (1 << j):
            edges.append((i, j))
    return DomainGraph(len(domain), frozenset(edges), domain)


def geodesic_between(g: DomainGraph, q: LinearOrder, r: LinearOrder, rp: LinearOrder) -> bool:
    return g.geodesic_between(g.vertex(q), g.vertex(r), g.vertex(rp))


def is_connected_domain(domain: Domain, graph: DomainGraph | None = None) -> bool:
    """True iff every edge of the associated graph is a single adjacent transposition."""
    g = graph or build_graph(domain)
    return all(are_universal_neighbors(domain.orders[u], domain.orders[v]) for u, v in g.edges)


def betweenness_discrepancies(domain: Domain, graph: DomainGraph | None = None):
    """Ordered triples (q, r, r') where Kemeny and geodesic betweenness disagree."""
    g = graph or build_graph(domain)
    table = domain.interval_masks
    m = len(domain)
    for r in range(m):
        for rp in range(m):
            for q in range(m):
                kemeny = bool(table[r][rp] >> q & 1)
                if kemeny != g.geodesic_between(q, r, rp):
                    yield (domain.orders[q], domain.orders[r], domain.orders[rp])


def betweenness_coincides(domain: Domain, graph: DomainGraph | None = None) -> bool:
    return next(betweenness_discrepancies(domain, graph), None) is None


@dataclass
class WitnessReport:
    """Outcome of an exhaustive sweep; keeps the first witnesses and a total count."""

    holds: bool = True
    count: int = 0
    witnesses: list = field(default_factory=list)

    def add(self, witness) -> None:
        self.count += 1
        if len(self.witnesses) < REPORT_WITNESS_LIMIT:
            self.witnesses.append(witness)


def check_geometric(domain: Domain) -> WitnessReport:
    """Check the three geometric interval-operator axioms on the domain intervals.

    Always holds for intervals restricted to a domain; violations flag a bug.
    Witnesses are ``(axiom, orders...)`` tuples.
    """
    table = domain.interval_masks
    m = len(domain)
    orders = domain.orders
    report = WitnessReport()
    for v in range(m):
        if table[v][v] != 1 << v:
            report.add(("singleton", orders[v]))
    for v in range(m):
        for w in range(m):
            vw = table[v][w]
            members = [u for u in range(m) if vw >> u & 1]
            for u in members:
                vu = table[v][u]
                if vu & ~vw:
                    report.add(("monotone", orders[u], orders[v], orders[w]))
                for t in members:
                    if vu >> t & 1 and not table[t][w] >> u & 1:
                        report.add(("exchange", orders[t], orders[u], orders[v], orders[w]))
    report.holds = report.count == 0
    return report


@dataclass
class TriangleReport:
    """Triples meeting the pairwise-intersection premise, and triangle-condition failures."""

    premise: WitnessReport = field(default_factory=WitnessReport)
    violations: WitnessReport = field(default_factory=WitnessReport)

    @property
    def holds(self) -> bool:
        return self.violations.count == 0


def check_triangle_condition(domain: Domain) -> TriangleReport:
    """Find distinct u, v, w whose pairwise intervals meet only in the shared endpoint.

    For each such triple the triangle condition requires that either all three
    intervals are edges or none is.
    """
    table = domain.interval_masks
    orders = domain.orders
    report = TriangleReport()
    for u, v, w in itertools.combinations(range(len(domain)), 3):
        uv, vw, wu = table[u][v], table[v][w], table[w][u]
        if uv & vw == 1 << v and vw & wu == 1 << w and wu & uv == 1 << u:
            triple = (orders[u], orders[v], orders[w])
            report.premise.add(triple)
            edges = [
                uv == (1 << u) | (1 << v),
                vw == (1 << v) | (1 << w),
                wu == (1 << w) | (1 << u),
            ]
            if any(edges) and not all(edges):
                report.violations.add(triple)
    report.premise.holds = True
    report.violations.holds = report.violations.count == 0
    return report


# --- median lattice ------------------------------------------------------------------


@dataclass(frozen=True)
class MedianLattice:
    """Join and meet on a closed domain from medians with two reversed anchors."""

    domain: Domain
    top: LinearOrder
    bottom: LinearOrder

    def join(self, r: LinearOrder, rp: LinearOrder) -> LinearOrder:
        return self._med(r, self.top, rp)

    def meet(self, r: LinearOrder, rp: LinearOrder) -> LinearOrder:
        return self._med(r, self.bottom, rp)

    def _med(self, a: LinearOrder, b: LinearOrder, c: LinearOrder) -> LinearOrder:
        m = median_of_triple(a, b, c)
        if m is None or m not in self.domain:
            raise ValueError(f"median of {a}, {b}, {c} is not in the domain")
        return m


def median_lattice(domain: Domain, top: LinearOrder | None = None, bottom: LinearOrder | None = None) -> MedianLattice:
    """Use the given anchors, or the first completely reversed pair of the domain."""
    if top is None or bottom is None:
        for r in domain.orders:
            rev = reverse(r)
            if rev in domain:
                top, bottom = r, rev
                break
        else:
            raise ValueError("domain has no completely reversed pair of orders")
    if not are_completely_reversed(top, bottom) or top not in domain or bottom not in domain:
        raise ValueError("anchors must be completely reversed orders of the domain")
    return MedianLattice(domain, top, bottom)


def check_distributive_lattice(lattice: MedianLattice) -> WitnessReport:
    """Sweep the lattice laws, the bounds, and both distributive laws."""
    join, meet = lattice.join, lattice.meet
    orders = lattice.domain.orders
    report = WitnessReport()
    for a in orders:
        if join(a, a) != a or meet(a, a) != a:
            report.add(("idempotence", a))
        if join(a, lattice.top) != lattice.top or meet(a, lattice.bottom) != lattice.bottom:
            report.add(("bounds", a))
    for a, b in itertools.product(orders, repeat=2):
        if join(a, b) != join(b, a):
            report.add(("join commutativity", a, b))
        if meet(a, b) != meet(b, a):
            report.add(("meet commutativity", a, b))
        if join(a, meet(a, b)) != a:
            report.add(("absorption a∨(a∧b)", a, b))
        if meet(a, join(a, b)) != a:
            report.add(("absorption a∧(a∨b)", a, b))
    for a, b, c in itertools.product(orders, repeat=3):
        if join(join(a, b), c) != join(a, join(b, c)):
            report.add(("join associativity", a, b, c))
        if meet(meet(a, b), c) != meet(a, meet(b, c)):
            report.add(("meet associativity", a, b, c))
        if meet(a, join(b, c)) != join(meet(a, b), meet(a, c)):
            report.add(("meet distributes over join", a, b, c))
        if join(a, meet(b, c)) != meet(join(a, b), join(a, c)):
            report.add(("join distributes over meet", a, b, c))
    report.holds = report.count == 0
    return report
