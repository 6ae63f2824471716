"""Realize a median graph as a closed Condorcet domain by cloning alternatives."""

from __future__ import annotations

from dataclasses import dataclass, field

from condorcet_lab.domains import Domain
from condorcet_lab.graphs import Graph
from condorcet_lab.median_graphs import ExpansionStep, decomposition, expand
from condorcet_lab.orders import AlternativeSet, LinearOrder

CLONE_POLICIES = ("first", "last")
SEED_LABEL = "a"


@dataclass(frozen=True)
class CloneRecord:
    step: ExpansionStep
    cloned: str
    clone: str


@dataclass(frozen=True)
class Construction:
    domain: Domain
    vertex_to_order: dict[int, LinearOrder]
    log: tuple[CloneRecord, ...] = field(default=())

    @property
    def num_alternatives(self) -> int:
        return self.domain.alts.n


def choose_clone_target(introduced: list[str], policy: str = "last") -> str:
    """Alternative to clone next: the seed (``first``) or the newest one (``last``)."""
    if not introduced:
        raise ValueError("no alternatives to clone")
    if policy == "last":
        return introduced[-1]
    if policy == "first":
        return introduced[0]
    raise ValueError(f"unknown clone policy {policy!r}; expected one of {CLONE_POLICIES}")


def _fresh_label(base: str, taken: set[str]) -> str:
    label = base + "'"
    while label in taken:
        label += "'"
    return label


def build_domain(g: Graph, clone_policy: str = "last") -> Construction:
    """A closed Condorcet domain whose associated graph is isomorphic to g.

    Replays an expansion sequence of g from a one-order domain.  At each step
    a clone y of x is introduced: vertices only in W1 rank x directly above y,
    vertices only in W2 rank y directly above x, and each shared vertex splits
    into both variants.
    """
    dec = decomposition(g)
    introduced = [SEED_LABEL]
    rankings: list[list[str]] = [[SEED_LABEL]]
    replayed = Graph(1, frozenset())
    log = []
    for step in dec.steps:
        x = choose_clone_target(introduced, clone_policy)
        y = _fresh_label(x, set(introduced))
        ex = expand(replayed, step)
        new_rankings: list[list[str]] = [[] for _ in range(ex.graph.n)]
        for v, ranking in enumerate(rankings):
            pos = ranking.index(x)
            x_first = ranking[:pos] + [x, y] + ranking[pos + 1:]
            y_first = ranking[:pos] + [y, x] + ranking[pos + 1:]
            if v in ex.split:
                v1, v2 = ex.split[v]
                new_rankings[v1] = x_first
                new_rankings[v2] = y_first
            elif v in step.w1:
                new_rankings[v] = x_first
            else:
                new_rankings[v] = y_first
        rankings = new_rankings
        replayed = ex.graph
        introduced.append(y)
        log.append(CloneRecord(step, x, y))
    alts = AlternativeSet(tuple(introduced))
    orders = [alts.order(r) for r in rankings]
    domain = Domain.of(orders, alts)
    vertex_to_order = {w: orders[dec.vertex_map[w]] for w in range(g.n)}
    return Construction(domain, vertex_to_order, tuple(log))
