"""Exact combinatorics of Condorcet domains: orders, medians, median graphs,
single-crossing structure and monotone aggregation."""

from condorcet_lab.aggregation import (
    AggregationAudit,
    InvalidStructure,
    WinningStructure,
    aggregate,
    all_quota_structures,
    audit_arrovian,
    is_order_preserving,
    is_strategy_proof,
    sample_audit,
    social_choice,
)
from condorcet_lab.construct import Construction, build_domain, choose_clone_target
from condorcet_lab.domain_graph import (
    DomainGraph,
    betweenness_coincides,
    build_graph,
    check_distributive_lattice,
    check_geometric,
    check_triangle_condition,
    geodesic_between,
    is_connected_domain,
    median_lattice,
)
from condorcet_lab.domains import (
    CondorcetCycleError,
    CycleReport,
    Domain,
    LatinSquare,
    MajorityRelation,
    Profile,
    as_linear_order,
    closure,
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
    supporters,
)
from condorcet_lab.graphs import (
    Graph,
    graph_isomorphic,
    is_chain,
    is_cycle,
    is_median_graph,
    is_tree,
)
from condorcet_lab.guards import GuardExceeded
from condorcet_lab.median_graphs import (
    ExpansionStep,
    apply_expansion,
    decompose,
    generate_median_graphs,
)
from condorcet_lab.orders import (
    AlternativeSet,
    LinearOrder,
    are_completely_reversed,
    are_universal_neighbors,
    interval,
    is_between,
    median_of_triple,
    reverse,
)
from condorcet_lab.single_crossing import (
    MaximalChain,
    chains_equivalent,
    equivalence_closure,
    extract_maximal_chain,
    is_generalized_single_crossing,
    maximal_sc_is_maximal_condorcet,
    nested_supporters,
    pairwise_concatenation,
    representative_voter_property,
    single_crossing_order,
)

__version__ = "0.1.0"
