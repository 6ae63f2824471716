"""Text formats: domain files, profile files, graph files and winning-structure JSON."""

from __future__ import annotations

import itertools
import json

from condorcet_lab.aggregation import InvalidStructure, WinningStructure, coalition
from condorcet_lab.domains import Domain, Profile, infer_alternatives
from condorcet_lab.graphs import Graph
from condorcet_lab.orders import AlternativeSet, LinearOrder, OrderSyntaxError, tokenize_order


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>") -> None:
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


def _content_lines(text: str):
    """(line number, column offset, content) with comments and blank lines removed."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            yield lineno, len(body) - len(body.lstrip()), stripped


def _parse_order(alts: AlternativeSet, literal: str, lineno: int, offset: int, source: str) -> LinearOrder:
    try:
        return alts.parse(literal)
    except OrderSyntaxError as e:
        raise ParseError(str(e), lineno, offset + e.column, source) from None


def _alternatives_for(literal: str, lineno: int, offset: int, source: str) -> AlternativeSet:
    try:
        return infer_alternatives(literal)
    except OrderSyntaxError as e:
        raise ParseError(str(e), lineno, offset + e.column, source) from None
    except ValueError as e:
        raise ParseError(str(e), lineno, offset + 1, source) from None


def parse_domain(text: str, alts: AlternativeSet | None = None, source: str = "<domain>") -> Domain:
    """One order literal per line; ``#`` starts a comment."""
    orders = []
    for lineno, offset, literal in _content_lines(text):
        if alts is None:
            alts = _alternatives_for(literal, lineno, offset, source)
        orders.append(_parse_order(alts, literal, lineno, offset, source))
    if not orders:
        raise ParseError("domain file contains no orders", 1, 1, source)
    return Domain.of(orders, alts)


def format_domain(domain: Domain) -> str:
    return "".join(f"{lit}\n" for lit in domain.literals())


def parse_profile(text: str, alts: AlternativeSet | None = None, source: str = "<profile>") -> Profile:
    """``count: order`` per line, count optional (default 1)."""
    entries: list[tuple[LinearOrder, int]] = []
    for lineno, offset, content in _content_lines(text):
        count = 1
        literal = content
        col = offset
        if ":" in content:
            head, literal = content.split(":", 1)
            try:
                count = int(head.strip())
            except ValueError:
                raise ParseError(f"voter count {head.strip()!r} is not an integer", lineno, offset + 1, source) from None
            if count < 1:
                raise ParseError("voter count must be positive", lineno, offset + 1, source)
            col = offset + len(head) + 1 + len(literal) - len(literal.lstrip())
            literal = literal.strip()
        if alts is None:
            alts = _alternatives_for(literal, lineno, col, source)
        entries.append((_parse_order(alts, literal, lineno, col, source), count))
    if not entries:
        raise ParseError("profile file contains no voters", 1, 1, source)
    return Profile(tuple(entries))


def parse_graph(text: str, source: str = "<graph>") -> Graph:
    """First line the vertex count, then one ``u v`` edge per line, 0-based."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("graph file is empty", 1, 1, source)
    lineno, offset, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(f"expected a vertex count, got {first!r}", lineno, offset + 1, source) from None
    if n < 1:
        raise ParseError("vertex count must be positive", lineno, offset + 1, source)
    edges = set()
    for lineno, offset, content in lines[1:]:
        parts = content.split()
        if len(parts) != 2:
            raise ParseError("expected two vertex numbers", lineno, offset + 1, source)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("vertex numbers must be integers", lineno, offset + 1, source) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno, offset + 1, source)
        if u == v:
            raise ParseError("self-loops are not allowed", lineno, offset + 1, source)
        edges.add((min(u, v), max(u, v)))
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    return f"{g.n}\n" + "".join(f"{u} {v}\n" for u, v in sorted(g.edges))


def _locate(text: str, key: str) -> tuple[int, int]:
    """Line and column of the first ``"key"`` in the JSON text (1, 1 if absent)."""
    at = text.find(json.dumps(key))
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    return line, at - (text.rfind("\n", 0, at) + 1) + 1


def _pair_from_key(key: str, alts: AlternativeSet, text: str, source: str) -> tuple[int, int]:
    where = _locate(text, key)
    tokens = [t for t, _ in tokenize_order(key)] if key.strip() else []
    if len(tokens) != 2:
        raise ParseError(f"pair key {key!r} must name two alternatives", *where, source)
    try:
        x, y = alts.index(tokens[0]), alts.index(tokens[1])
    except KeyError as e:
        raise ParseError(f"pair key {key!r}: {e.args[0]}", *where, source) from None
    if x == y:
        raise ParseError(f"pair key {key!r} repeats an alternative", *where, source)
    return x, y


def parse_structure(text: str, alts: AlternativeSet, n: int | None = None, source: str = "<structure>") -> WinningStructure:
    """Winning structure JSON over ``n`` voters.

    ``{"quota": {"ab": 2, ...}}`` or ``{"minimal": {"ab": [[1, 2], [3]], ...}}``.
    A pair whose reverse is missing gets the reverse derived from properness.
    An optional ``"voters"`` key must agree with ``n``.  Without either, the
    voter count comes from a quota pair given in both directions
    (``q_xy + q_yx - 1``) or from the largest voter named in a coalition.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, source) from None
    if not isinstance(data, dict):
        raise ParseError("structure must be a JSON object", 1, 1, source)
    voters = data.get("voters")
    if voters is not None and (not isinstance(voters, int) or isinstance(voters, bool) or voters < 1):
        raise ParseError('"voters" must be a positive integer', 1, 1, source)
    if n is not None and voters is not None and voters != n:
        raise ParseError(f"structure declares {voters} voters but {n} are given", 1, 1, source)
    kinds = [k for k in ("quota", "minimal") if k in data]
    extra = set(data) - {"quota", "minimal", "voters"}
    if len(kinds) != 1 or extra:
        raise ParseError('expected exactly one of "quota" or "minimal"', 1, 1, source)
    kind = kinds[0]
    rules = data[kind]
    if not isinstance(rules, dict):
        raise ParseError(f'"{kind}" must map pair keys to rules', 1, 1, source)
    keys = {}
    parsed = {}
    for k, v in rules.items():
        pair = _pair_from_key(k, alts, text, source)
        keys[pair] = k
        parsed[pair] = v
    if n is None:
        n = voters if voters is not None else _infer_voters(kind, parsed)
        if n is None or n < 1:
            raise ParseError('cannot infer the number of voters; add a "voters" key', 1, 1, source)
    full = (1 << n) - 1
    try:
        if kind == "quota":
            quotas = {}
            for pair, q in parsed.items():
                if not isinstance(q, int) or isinstance(q, bool):
                    raise ParseError(
                        f"quota for {alts.format_label_sequence(pair)} must be an integer",
                        *_locate(text, keys[pair]),
                        source,
                    )
                quotas[pair] = q
            for (x, y), q in list(quotas.items()):
                quotas.setdefault((y, x), n + 1 - q)
            _require_all_pairs(quotas, alts, source)
            return WinningStructure.from_quotas(alts, n, quotas)
        families = {}
        for pair, fam in parsed.items():
            if not isinstance(fam, list) or not all(
                isinstance(c, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in c) for c in fam
            ):
                raise ParseError(
                    f"coalitions for {alts.format_label_sequence(pair)} must be lists of voter numbers",
                    *_locate(text, keys[pair]),
                    source,
                )
            for c in fam:
                if any(not 1 <= i <= n for i in c):
                    raise ParseError(
                        f"coalitions for {alts.format_label_sequence(pair)}: voter numbers must lie in 1..{n}",
                        *_locate(text, keys[pair]),
                        source,
                    )
            families[pair] = [coalition(c) for c in fam]
        for (x, y), fam in list(families.items()):
            if (y, x) not in families:
                families[(y, x)] = _reverse_family(fam, full)
        _require_all_pairs(families, alts, source)
        return WinningStructure(alts, n, {}, {p: _antichain(f) for p, f in families.items()})
    except InvalidStructure as e:
        raise ParseError(str(e), 1, 1, source) from None


def _infer_voters(kind: str, parsed: dict) -> int | None:
    if kind == "quota":
        for (x, y), q in parsed.items():
            back = parsed.get((y, x))
            if isinstance(q, int) and isinstance(back, int):
                return q + back - 1
        return None
    named = [i for fam in parsed.values() if isinstance(fam, list) for c in fam if isinstance(c, list)
             for i in c if isinstance(i, int)]
    return max(named) if named else None


def _antichain(family: list[int]) -> tuple[int, ...]:
    if not family or any(c == 0 for c in family):
        raise InvalidStructure("upward-closure", "each pair needs at least one nonempty winning coalition")
    out = []
    for c in sorted(set(family), key=lambda b: (b.bit_count(), b)):
        if not any(m & c == m for m in out):
            out.append(c)
    return tuple(sorted(out))


def _reverse_family(family: list[int], full: int) -> list[int]:
    """Coalitions winning for the reverse pair: those whose complement loses."""
    return [w for w in range(1, full + 1) if not any(m & (full & ~w) == m for m in family)]


def _require_all_pairs(rules: dict, alts: AlternativeSet, source: str) -> None:
    for pair in itertools.permutations(range(alts.n), 2):
        if pair not in rules:
            raise ParseError(f"no rule for pair {alts.format_label_sequence(pair)}", 1, 1, source)


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()
