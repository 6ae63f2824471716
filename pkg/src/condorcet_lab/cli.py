"""Command-line front end.

Exit codes: 0 when the checked property holds (or the command succeeded),
1 when it fails and a witness is reported, 2 on malformed input or a refused
search.  Every report is a JSON object with ``command`` and ``holds`` keys;
``--json PATH`` writes it (``-`` for stdout, replacing the text output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from condorcet_lab import io
from condorcet_lab.aggregation import (
    AggregationError,
    InvalidStructure,
    aggregate,
    audit_arrovian,
    is_order_preserving,
    is_strategy_proof,
    sample_audit,
)
from condorcet_lab.construct import CLONE_POLICIES, build_domain
from condorcet_lab.domain_graph import betweenness_coincides, build_graph, is_connected_domain
from condorcet_lab.domains import (
    CondorcetCycleError,
    Domain,
    LatinSquare,
    Profile,
    as_linear_order,
    closure,
    enumerate_maximal_condorcet,
    find_latin_square,
    is_condorcet,
    is_maximal_condorcet,
    majority_relation,
    median_failures,
)
from condorcet_lab.graphs import Graph, graph_isomorphic, is_median_graph, medians, shape, to_dot
from condorcet_lab.guards import GuardExceeded
from condorcet_lab.median_graphs import decomposition, generate_median_graphs
from condorcet_lab.orders import median_of_triple
from condorcet_lab.single_crossing import (
    ChainError,
    equivalence_closure,
    extract_maximal_chain,
    is_generalized_single_crossing,
    nested_supporters,
    pairwise_concatenation,
    representative_voter_property,
    single_crossing_order,
)

EXIT_OK, EXIT_FAILS, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class Output:
    def __init__(self, args: argparse.Namespace, stdout) -> None:
        self.args = args
        self.stdout = stdout
        self.lines: list[str] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def finish(self, report: dict, dot: str | None = None) -> None:
        if dot is not None and self.args.dot:
            _write(self.args.dot, dot)
        if self.args.json:
            text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
            if self.args.json == "-":
                self.stdout.write(text)
                return
            _write(self.args.json, text)
        if self.lines:
            self.stdout.write("\n".join(self.lines) + "\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _load_domain(path: str) -> Domain:
    return io.parse_domain(io.read_text(path), source=path)


def _load_graph(path: str) -> Graph:
    return io.parse_graph(io.read_text(path), source=path)


def _median_graph_witness(g: Graph) -> dict | None:
    """Why g is not a median graph: disconnected, or a triple without a unique median."""
    if not g.is_connected():
        return {"reason": "disconnected"}
    for u in range(g.n):
        for v in range(u, g.n):
            for w in range(v, g.n):
                found = medians(g, u, v, w)
                if len(found) != 1:
                    return {"reason": "median count", "triple": [u, v, w], "medians": found}
    return None


# --- subcommands ------------------------------------------------------------------


def cmd_check(args, out: Output) -> int:
    d = _load_domain(args.domain)
    if args.verify_witness:
        return _verify_witness(d, args.verify_witness, out)
    report: dict = {"command": "check", "orders": d.literals(), "alternatives": list(d.alts.labels)}
    condorcet = is_condorcet(d)
    report["condorcet"] = condorcet
    out.line(f"orders: {len(d)} over {d.alts.format_label_sequence(range(d.alts.n))}")
    out.line(f"condorcet: {_yes(condorcet)}")
    if not condorcet:
        report["latin_square"] = find_latin_square(d).to_json()
        out.line(f"  latin square: {' '.join(report['latin_square']['orders'])}")
    failure = next(median_failures(d), None)
    report["median_stable"] = failure is None
    report["closed"] = failure is None
    out.line(f"closed (median-stable): {_yes(failure is None)}")
    if failure is not None:
        med = median_of_triple(*failure)
        report["median_failure"] = {
            "triple": [str(r) for r in failure],
            "median": None if med is None else str(med),
        }
        out.line(f"  triple without median in domain: {' '.join(str(r) for r in failure)}")
    if condorcet:
        maximal = is_maximal_condorcet(d)
        report["maximal"] = maximal.is_maximal
        out.line(f"maximal: {_yes(maximal.is_maximal)}")
        if maximal.witness is not None:
            report["addable_order"] = str(maximal.witness)
            out.line(f"  addable order: {maximal.witness}")
    arrangement = single_crossing_order(d)
    report["single_crossing"] = arrangement is not None
    if arrangement is not None:
        report["single_crossing_order"] = [str(r) for r in arrangement]
    out.line(f"single-crossing: {_yes(arrangement is not None)}")
    report["connected"] = is_connected_domain(d)
    out.line(f"connected: {_yes(report['connected'])}")
    report["holds"] = condorcet
    out.finish(report)
    return EXIT_OK if condorcet else EXIT_FAILS


def _verify_witness(d: Domain, path: str, out: Output) -> int:
    """Re-check every witness embedded in a previous JSON report against the domain."""
    try:
        report = json.loads(io.read_text(path))
    except json.JSONDecodeError as e:
        raise io.ParseError(e.msg, e.lineno, e.colno, path) from None
    alts = d.alts
    checks: dict[str, bool] = {}

    def order(lit: str):
        return alts.parse(lit)

    latin = report.get("latin_square") or (report.get("cycle") or {}).get("latin_square")
    if latin:
        orders = [order(s) for s in latin["orders"]]
        square = LatinSquare(tuple(orders), tuple(alts.index(a) for a in latin["alternatives"]))
        checks["latin_square"] = square.holds() and all(r in d for r in orders)
    if "median_failure" in report:
        triple = [order(s) for s in report["median_failure"]["triple"]]
        med = median_of_triple(*triple)
        checks["median_failure"] = all(r in d for r in triple) and (med is None or med not in d)
    if "addable_order" in report:
        extra = order(report["addable_order"])
        checks["addable_order"] = extra not in d and is_condorcet(d.with_orders([extra]))
    rvp = report.get("representative_voter_witness")
    if rvp:
        voters = [order(s) for s in rvp["profile"]]
        majority = as_linear_order(majority_relation(Profile.of(voters)))
        checks["representative_voter_witness"] = all(r in d for r in voters) and (
            majority is None or majority not in voters
        )
    if not checks:
        raise InputError(f"{path}: report contains no witness to verify")
    result = {"command": "check", "verified": checks, "holds": all(checks.values())}
    for key in sorted(checks):
        out.line(f"{key}: {'verified' if checks[key] else 'NOT verified'}")
    out.finish(result)
    return EXIT_OK if result["holds"] else EXIT_FAILS


def cmd_closure(args, out: Output) -> int:
    d = _load_domain(args.domain)
    try:
        closed = closure(d)
    except CondorcetCycleError as e:
        report = {"command": "closure", "holds": False, "cycle": e.report.to_json()}
        out.line("not a Condorcet domain; triple without a median:")
        out.line("  " + " ".join(report["cycle"]["triple"]))
        out.finish(report)
        return EXIT_FAILS
    added = [str(r) for r in closed.orders if r not in d]
    report = {"command": "closure", "holds": True, "orders": closed.literals(), "added": added}
    out.line(f"# closure: {len(closed)} orders, {len(added)} added")
    for lit in closed.literals():
        out.line(lit)
    out.finish(report)
    return EXIT_OK


def cmd_graph(args, out: Output) -> int:
    d = _load_domain(args.domain)
    g = build_graph(d)
    median = is_median_graph(g)
    report = {
        "command": "graph",
        "holds": True,
        "vertices": d.literals(),
        "edges": [[u, v] for u, v in sorted(g.edges)],
        "shape": shape(g),
        "median_graph": median,
        "connected_domain": is_connected_domain(d, g),
        "betweenness_coincides": betweenness_coincides(d, g),
    }
    out.line(f"shape: {report['shape']}")
    out.line(f"median graph: {_yes(median)}")
    out.line(f"connected domain: {_yes(report['connected_domain'])}")
    out.line(f"betweenness coincides: {_yes(report['betweenness_coincides'])}")
    out.line(g.to_dot().rstrip("\n"))
    out.finish(report, g.to_dot())
    return EXIT_OK


def cmd_median_graph(args, out: Output) -> int:
    g = _load_graph(args.graph)
    witness = _median_graph_witness(g)
    report: dict = {"command": "median-graph", "holds": witness is None, "vertices": g.n}
    out.line(f"median graph: {_yes(witness is None)}")
    if witness is not None:
        report["witness"] = witness
        out.line(f"  witness: {json.dumps(witness, sort_keys=True)}")
    elif args.decompose:
        dec = decomposition(g)
        report["steps"] = [s.to_json() for s in dec.steps]
        report["vertex_map"] = {str(k): v for k, v in sorted(dec.vertex_map.items())}
        for k, s in enumerate(dec.steps, start=1):
            out.line(f"  step {k}: W1={sorted(s.w1)} W2={sorted(s.w2)}")
    out.finish(report, to_dot(g))
    return EXIT_OK if witness is None else EXIT_FAILS


def cmd_construct(args, out: Output) -> int:
    g = _load_graph(args.graph)
    witness = _median_graph_witness(g)
    if witness is not None:
        report = {"command": "construct", "holds": False, "witness": witness}
        out.line("input is not a median graph")
        out.line(f"  witness: {json.dumps(witness, sort_keys=True)}")
        out.finish(report)
        return EXIT_FAILS
    result = build_domain(g, args.clone_policy)
    dg = build_graph(result.domain)
    iso = graph_isomorphic(g, dg)
    report = {
        "command": "construct",
        "holds": iso is not None,
        "alternatives": list(result.domain.alts.labels),
        "orders": result.domain.literals(),
        "vertex_to_order": {str(v): str(r) for v, r in sorted(result.vertex_to_order.items())},
        "isomorphism": {str(k): v for k, v in sorted((iso or {}).items())},
        "clones": [[rec.cloned, rec.clone] for rec in result.log],
    }
    out.line(f"# {len(result.domain)} orders over {len(result.domain.alts)} alternatives")
    for v in range(g.n):
        out.line(f"{result.vertex_to_order[v]}  # vertex {v}")
    out.finish(report, dg.to_dot())
    return EXIT_OK if iso is not None else EXIT_FAILS


def cmd_single_crossing(args, out: Output) -> int:
    d = _load_domain(args.domain)
    arrangement = single_crossing_order(d)
    g = build_graph(d)
    tree = is_generalized_single_crossing(d)
    rvp = representative_voter_property(d)
    report: dict = {
        "command": "single-crossing",
        "single_crossing": arrangement is not None,
        "generalized_single_crossing": tree,
        "nested_supporters": nested_supporters(d),
        "representative_voter": rvp.holds,
        "holds": arrangement is not None or tree,
    }
    if arrangement is not None:
        report["order"] = [str(r) for r in arrangement]
        out.line("single-crossing: yes")
        out.line("  " + " > ".join(report["order"]))
    else:
        out.line("single-crossing: no")
    out.line(f"generalized single-crossing (tree): {_yes(tree)}")
    if tree and arrangement is None:
        report["tree_edges"] = [[str(d.orders[u]), str(d.orders[v])] for u, v in sorted(g.edges)]
        for a, b in report["tree_edges"]:
            out.line(f"  {a} -- {b}")
    out.line(f"representative voter: {_yes(rvp.holds)}")
    if not rvp.holds:
        report["representative_voter_witness"] = {
            "profile": [str(r) for r in rvp.witness],
            "majority": None if rvp.majority is None else str(rvp.majority),
        }
        out.line("  profile: " + " ".join(report["representative_voter_witness"]["profile"]))
    out.finish(report, g.to_dot())
    return EXIT_OK if report["holds"] else EXIT_FAILS


def cmd_chain(args, out: Output) -> int:
    d = _load_domain(args.domain)
    try:
        chain = extract_maximal_chain(d)
    except ChainError as e:
        report = {"command": "chain", "holds": False, "error": str(e)}
        out.line(f"not a maximal chain: {e}")
        out.finish(report)
        return EXIT_FAILS
    concatenation = pairwise_concatenation(chain)
    maximal = is_maximal_condorcet(d)
    closed = equivalence_closure(chain)
    report: dict = {
        "command": "chain",
        "orders": [str(r) for r in chain.orders],
        "switching_pairs": [list(p) for p in chain.labelled_pairs()],
        "pairwise_concatenation": concatenation,
        "maximal_condorcet": maximal.is_maximal,
        "equivalence_closure": closed.literals(),
        "holds": concatenation,
    }
    out.line("chain: " + " > ".join(report["orders"]))
    out.line("switching pairs: " + " ".join(f"({x},{y})" for x, y in chain.labelled_pairs()))
    out.line(f"pairwise concatenation: {_yes(concatenation)}")
    out.line(f"maximal Condorcet: {_yes(maximal.is_maximal)}")
    if maximal.witness is not None:
        report["addable_order"] = str(maximal.witness)
        out.line(f"  addable order: {maximal.witness}")
    out.line(f"equivalence closure: {len(closed)} orders")
    out.line("  " + " ".join(closed.literals()))
    out.finish(report)
    return EXIT_OK if concatenation else EXIT_FAILS


def cmd_aggregate(args, out: Output) -> int:
    d = _load_domain(args.domain)
    profile = io.parse_profile(io.read_text(args.profile), d.alts, source=args.profile)
    w = io.parse_structure(io.read_text(args.structure), d.alts, profile.n, source=args.structure)
    result = aggregate(w, d, profile)
    report = {
        "command": "aggregate",
        "holds": True,
        "order": str(result),
        "winner": d.alts.labels[result.top],
        "voters": profile.n,
    }
    out.line(f"social order: {result}")
    out.line(f"winner: {report['winner']}")
    out.finish(report)
    return EXIT_OK


def cmd_audit(args, out: Output) -> int:
    d = _load_domain(args.domain)
    w = io.parse_structure(io.read_text(args.structure), d.alts, args.voters, source=args.structure)
    if not is_order_preserving(w, d):
        raise InputError("structure is not order preserving on this domain")
    if args.sample:
        audit, sp = sample_audit(w, d, args.sample, args.seed)
    else:
        audit = audit_arrovian(w, d, guard=args.guard)
        sp = is_strategy_proof(w, d, guard=args.guard, jobs=args.jobs)
    flags = audit.flags()
    flags["strategy_proof"] = sp.holds
    counterexamples = dict(audit.counterexamples)
    if sp.counterexample is not None:
        counterexamples["strategy_proof"] = sp.counterexample
    exhaustive = not args.sample
    report = {
        "command": "audit",
        "exhaustive": exhaustive,
        "voters": w.n,
        "flags": flags,
        "counterexamples": counterexamples,
        "holds": all(flag is not False for flag in flags.values()),
    }
    if not exhaustive:
        out.line(f"NON-EXHAUSTIVE sample audit ({args.sample} samples, seed {args.seed})")
    for key, value in flags.items():
        out.line(f"{key}: {'not checked' if value is None else _yes(value)}")
    for key in sorted(counterexamples):
        out.line(f"  {key} counterexample: {json.dumps(counterexamples[key], sort_keys=True)}")
    out.finish(report)
    return EXIT_OK if report["holds"] else EXIT_FAILS


def cmd_enumerate(args, out: Output) -> int:
    if args.alternatives is not None:
        domains = enumerate_maximal_condorcet(args.alternatives)
        sizes: dict[int, int] = {}
        for dom in domains:
            sizes[len(dom)] = sizes.get(len(dom), 0) + 1
        report = {
            "command": "enumerate",
            "holds": True,
            "alternatives": args.alternatives,
            "count": len(domains),
            "sizes": {str(k): v for k, v in sorted(sizes.items())},
            "domains": [dom.literals() for dom in domains],
        }
        out.line(f"maximal Condorcet domains on {args.alternatives} alternatives: {len(domains)}")
        for k, v in sorted(sizes.items()):
            out.line(f"  {v} with {k} orders")
        if len(sizes) == 1:
            out.line(f"every maximal domain has {next(iter(sizes))} orders")
        for dom in domains:
            out.line("  " + " ".join(dom.literals()))
    else:
        graphs = generate_median_graphs(args.median_graphs)
        counts: dict[int, int] = {}
        for g in graphs:
            counts[g.n] = counts.get(g.n, 0) + 1
        report = {
            "command": "enumerate",
            "holds": True,
            "max_vertices": args.median_graphs,
            "count": len(graphs),
            "by_vertices": {str(k): v for k, v in sorted(counts.items())},
            "graphs": [{"n": g.n, "edges": [[u, v] for u, v in sorted(g.edges)]} for g in graphs],
        }
        out.line(f"median graphs with at most {args.median_graphs} vertices: {len(graphs)}")
        for k, v in sorted(counts.items()):
            out.line(f"  {v} with {k} vertices")
    out.finish(report)
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--dot", metavar="PATH", help="write the relevant graph in DOT format")
    common.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1, help="worker processes for audits")
    common.add_argument("--guard", type=_positive, default=None, help="override the exhaustive-search guard")
    common.add_argument("--clone-policy", choices=CLONE_POLICIES, default="last")

    parser = argparse.ArgumentParser(prog="condorcet-lab", description="Exact checks on Condorcet domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="Condorcet, closed, maximal and single-crossing status")
    p.add_argument("domain")
    p.add_argument("--verify-witness", metavar="REPORT", help="re-check witnesses from a JSON report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="smallest closed Condorcet superdomain")
    p.add_argument("domain")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("graph", parents=[common], help="associated graph and its shape")
    p.add_argument("domain")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("median-graph", parents=[common], help="median graph recognition")
    p.add_argument("graph")
    p.add_argument("--decompose", action="store_true", help="print an expansion sequence from one vertex")
    p.set_defaults(func=cmd_median_graph)

    p = sub.add_parser("construct", parents=[common], help="closed Condorcet domain realizing a median graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("single-crossing", parents=[common], help="single-crossing and tree variants")
    p.add_argument("domain")
    p.set_defaults(func=cmd_single_crossing)

    p = sub.add_parser("chain", parents=[common], help="maximal chain analysis")
    p.add_argument("domain")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("aggregate", parents=[common], help="social order and winner of a profile")
    p.add_argument("structure")
    p.add_argument("domain")
    p.add_argument("profile")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("audit", parents=[common], help="Arrovian and strategy-proofness audit")
    p.add_argument("structure")
    p.add_argument("domain")
    p.add_argument("--voters", type=_positive, default=None, help="number of voters (else from the structure)")
    p.add_argument("--sample", type=_positive, default=None, help="random sample audit (non-exhaustive)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sample-audit", parents=[common], help="non-exhaustive audit on random profiles")
    p.add_argument("structure")
    p.add_argument("domain")
    p.add_argument("--voters", type=_positive, default=None, help="number of voters (else from the structure)")
    p.add_argument("--samples", dest="sample", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("enumerate", parents=[common], help="maximal Condorcet domains or median graphs")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alternatives", type=_positive)
    group.add_argument("--median-graphs", type=_positive, metavar="MAX_VERTICES")
    p.set_defaults(func=cmd_enumerate)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Output(args, stdout)
    try:
        return args.func(args, out)
    except io.ParseError as e:
        stderr.write(f"error: {e}\n")
    except (InputError, InvalidStructure, GuardExceeded, AggregationError, OSError, ValueError, KeyError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        stderr.write(f"error: {message}\n")
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


def report_schema() -> dict:
    """The JSON schema every report validates against."""
    from importlib.resources import files

    return json.loads(files("condorcet_lab").joinpath("schemas/report.schema.json").read_text(encoding="utf-8"))
