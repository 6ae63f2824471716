import itertools
import random

import pytest

from condorcet_lab.domains import Domain
from condorcet_lab.orders import AlternativeSet

ABC = AlternativeSet.letters(3)
ABCD = AlternativeSet.letters(4)

D1 = "abc acb cab cba"
FOUR_CYCLE = "abc acb cba bca"
STAR = "abcd acbd abdc bacd"
CHAIN7 = "abcd acbd acdb adcb dacb dcab dcba"
CHAIN_C1 = "abcd abdc badc bdac dbac dbca dcba"
NINE = "abcd abdc badc bdac dbac dbca dcba bacd bdca"


def dom(literals: str, alts: AlternativeSet | None = None) -> Domain:
    return Domain.parse(literals, alts)


def all_domains(alts: AlternativeSet):
    """Every nonempty set of orders over ``alts`` (63 for three alternatives)."""
    orders = alts.all_orders()
    for r in range(1, len(orders) + 1):
        for subset in itertools.combinations(orders, r):
            yield Domain.of(subset, alts)


def random_domains(alts: AlternativeSet, count: int, max_size: int, seed: int):
    rng = random.Random(seed)
    orders = alts.all_orders()
    for _ in range(count):
        yield Domain.of(rng.sample(orders, rng.randint(1, max_size)), alts)


@pytest.fixture
def d1() -> Domain:
    return dom(D1)


@pytest.fixture
def four_cycle() -> Domain:
    return dom(FOUR_CYCLE)


@pytest.fixture
def star() -> Domain:
    return dom(STAR)


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance criteria verdicts, one line each."""
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
