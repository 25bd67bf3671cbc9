"""Acyclic binary conditional preference networks, voting over profiles
of them, formula-driven net generators, and a brute-force oracle for
checking the whole stack at small scale."""

from .errors import (
    CPNetError,
    CycleError,
    InstanceTooLarge,
    StateBudgetExceeded,
)
from .model import (
    MAX_PARENTS,
    CPNet,
    CPTable,
    MCPNet,
    feature_mask,
    indegree,
    net_from_json,
    net_from_tables,
    net_to_json,
    outcome_str,
    parse_outcome,
    profile_from_json,
    profile_to_json,
    topological_order,
    validate_net,
    validate_profile,
    value_at,
)
from .semantics import (
    DEFAULT_MAX_STATES,
    DominanceAnswer,
    FlipSequence,
    dominates,
    forward_sweep_optimum,
    improving_flips,
    incomparable,
    is_optimal,
    ordering_query,
    reach_set,
    replay,
)
from .gadgets import (
    CnfFormula,
    FormulaNet,
    MEml,
    MImm,
    MIpo,
    NetFragment,
    Qbf2Formula,
    SummarizedNet,
    check_formula,
    check_qbf,
    direct_net,
    encode_assignment,
    formula_net,
    h_c,
    h_d,
    m_eml,
    m_imm,
    m_ipo,
    m_nowin,
    parse_dimacs,
    parse_qdimacs,
    summarized_formula_net,
)
from .oracle import (
    LEMMA_TAGS,
    ORACLE_BOUND,
    SAT_BOUND,
    DominanceClosure,
    ExtendedPreferenceGraph,
    LemmaReport,
    build_graph,
    closure,
    qbf2_enumerate,
    sat_enumerate,
    sinks,
    to_dot,
    verify_lemma,
)
from .voting import (
    CLOSURE_BOUND,
    PAIR_BOUND,
    AgentPartition,
    agent_partition,
    exists_majority_optimal,
    exists_majority_optimum,
    exists_pareto_optimal,
    exists_pareto_optimum,
    is_majority_optimal,
    is_majority_optimum,
    is_pareto_optimal,
    is_pareto_optimum,
    majority_dominates,
    pareto_dominates,
)

__version__ = "0.1.0"
