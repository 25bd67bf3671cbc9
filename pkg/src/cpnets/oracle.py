"""Exhaustive reference procedures over explicit preference graphs.

Everything here recomputes improving flips directly from the table rows,
so the graph is an independent check on the incremental engine in
semantics.py rather than a restatement of it. Sizes are capped hard:
these routines materialize all 2**n outcomes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .errors import CycleError, InstanceTooLarge
from .gadgets import (
    CnfFormula,
    PartialAssignment,
    Qbf2Formula,
    check_formula,
    check_qbf,
    formula_net,
    m_ipo,
    m_nowin,
    summarized_formula_net,
)
from .model import CPNet, MCPNet, outcome_str

ORACLE_BOUND = 14
SAT_BOUND = 24


@dataclass
class ExtendedPreferenceGraph:
    """Explicit improving-flip graph.

    arcs[worse] lists every outcome that is one improving flip better, so
    arcs point from dominated toward dominating along single flips.
    """

    net: CPNet
    arcs: list[list[int]]

    @property
    def n(self) -> int:
        return self.net.n


def build_graph(net: CPNet, bound: int = ORACLE_BOUND) -> ExtendedPreferenceGraph:
    """Materialize the improving-flip graph by reading each table row per
    outcome: a feature flips exactly when its current value differs from
    the row selected by its parents."""
    n = net.n
    if n > bound:
        raise InstanceTooLarge(
            f"net has {n} features; the explicit graph is capped at {bound}"
        )
    per_feature = []
    for idx, name in enumerate(net.features):
        table = net.tables[name]
        parent_bits = tuple(1 << (n - 1 - net.index(p)) for p in table.parents)
        per_feature.append((parent_bits, 1 << (n - 1 - idx), table.rows))
    arcs: list[list[int]] = [[] for _ in range(1 << n)]
    for outcome in range(1 << n):
        here = arcs[outcome]
        for parent_bits, own, rows in per_feature:
            cond = tuple(1 if outcome & b else 0 for b in parent_bits)
            if rows[cond] != (1 if outcome & own else 0):
                here.append(outcome ^ own)
    return ExtendedPreferenceGraph(net=net, arcs=arcs)


def sinks(graph: ExtendedPreferenceGraph) -> list[int]:
    """Outcomes with no improving flip. A valid acyclic net has exactly
    one, its optimum."""
    return [u for u in range(1 << graph.n) if not graph.arcs[u]]


def to_dot(graph: ExtendedPreferenceGraph) -> str:
    """Graphviz text for the improving-flip graph, nodes labeled with
    outcome bitstrings, arcs pointing from worse to better."""
    n = graph.n
    lines = ["digraph preference {"]
    for u in range(1 << n):
        lines.append(f'  "{outcome_str(u, n)}";')
    for u in range(1 << n):
        for v in graph.arcs[u]:
            lines.append(f'  "{outcome_str(u, n)}" -> "{outcome_str(v, n)}";')
    lines.append("}")
    return "\n".join(lines)


@dataclass
class DominanceClosure:
    """Reachability closure of an improving-flip graph.

    reach[alpha] is a bitmask over outcomes: bit beta is set exactly when
    beta is reachable from alpha by one or more improving flips, i.e. when
    beta dominates alpha.
    """

    n: int
    reach: list[int]

    def dominates(self, beta: int, alpha: int) -> bool:
        return bool((self.reach[alpha] >> beta) & 1)

    def incomparable(self, alpha: int, beta: int) -> bool:
        if alpha == beta:
            raise ValueError("incomparability is defined on distinct outcomes")
        return not (self.dominates(alpha, beta) or self.dominates(beta, alpha))


def closure(graph: ExtendedPreferenceGraph) -> DominanceClosure:
    """Transitive reachability by topological order: process outcomes from
    best to worst and take the union of each successor's closure."""
    size = 1 << graph.n
    indegree = [0] * size
    for u in range(size):
        for v in graph.arcs[u]:
            indegree[v] += 1
    queue = deque(u for u in range(size) if indegree[u] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in graph.arcs[u]:
            indegree[v] -= 1
            if indegree[v] == 0:
                queue.append(v)
    if len(order) != size:
        raise CycleError("improving flips cycle; closure needs an acyclic graph")
    reach = [0] * size
    for u in reversed(order):
        acc = 0
        for v in graph.arcs[u]:
            acc |= reach[v] | (1 << v)
        reach[u] = acc
    return DominanceClosure(n=graph.n, reach=reach)


# ---------------------------------------------------------------------------
# Formula enumeration
# ---------------------------------------------------------------------------


def sat_enumerate(
    phi: CnfFormula,
    sigma: PartialAssignment | None = None,
    bound: int = SAT_BOUND,
) -> bool:
    """True when some total assignment extending sigma satisfies phi,
    by trying every completion of the unassigned variables."""
    check_formula(phi)
    fixed = dict(sigma) if sigma else {}
    for var in fixed:
        if not 1 <= var <= phi.num_vars:
            raise ValueError(f"assignment mentions unknown variable {var}")
    free = [v for v in range(1, phi.num_vars + 1) if v not in fixed]
    if len(free) > bound:
        raise InstanceTooLarge(
            f"{len(free)} unassigned variables; enumeration is capped at {bound}"
        )
    values = dict(fixed)
    for bits in range(1 << len(free)):
        for i, v in enumerate(free):
            values[v] = bool((bits >> i) & 1)
        if all(
            any((lit > 0) == values[abs(lit)] for lit in clause)
            for clause in phi.clauses
        ):
            return True
    return False


def qbf2_enumerate(formula: Qbf2Formula, bound: int = SAT_BOUND) -> bool:
    """Decide exists X for all Y not matrix(X, Y): true when some
    assignment to the exists block leaves the matrix unsatisfiable no
    matter how the forall block is completed."""
    check_qbf(formula)
    xs = list(formula.exists_vars)
    if len(xs) > bound:
        raise InstanceTooLarge(
            f"{len(xs)} exists variables; enumeration is capped at {bound}"
        )
    for bits in range(1 << len(xs)):
        sigma = {v: bool((bits >> i) & 1) for i, v in enumerate(xs)}
        if not sat_enumerate(formula.matrix, sigma, bound=bound):
            return True
    return False


# ---------------------------------------------------------------------------
# Lemma verification
# ---------------------------------------------------------------------------

LEMMA_TAGS = (
    "corollary1",
    "lemma1",
    "corollary2",
    "lemma5",
    "lemma7",
    "theorem_nowin",
)


@dataclass
class LemmaReport:
    tag: str
    ok: bool
    checked: int
    detail: str = ""


def _report(tag: str, checked: int, failure: str | None) -> LemmaReport:
    if failure is None:
        return LemmaReport(tag=tag, ok=True, checked=checked, detail="pass")
    return LemmaReport(tag=tag, ok=False, checked=checked, detail=failure)


def _check_pair_equivalence(
    clo: DominanceClosure, beta: int, alpha: int, expected: bool, n: int
) -> str | None:
    """The shared shape of the formula-net claims: beta dominates alpha
    exactly under `expected`, and alpha never dominates beta (so the
    negative case is incomparability, not reverse dominance)."""
    if clo.dominates(beta, alpha) != expected:
        verb = "should dominate" if expected else "should not dominate"
        return (
            f"{outcome_str(beta, n)} {verb} {outcome_str(alpha, n)}"
        )
    if clo.dominates(alpha, beta):
        return (
            f"{outcome_str(alpha, n)} unexpectedly dominates {outcome_str(beta, n)}"
        )
    return None


def _verify_corollary1(phi: CnfFormula, bound: int) -> LemmaReport:
    built = formula_net(phi)
    clo = closure(build_graph(built.net, bound))
    failure = _check_pair_equivalence(
        clo, built.beta_bar(), built.alpha(), sat_enumerate(phi), built.net.n
    )
    return _report("corollary1", 1, failure)


def _verify_lemma1(phi: CnfFormula, bound: int) -> LemmaReport:
    built = formula_net(phi)
    clo = closure(build_graph(built.net, bound))
    beta = built.beta_bar()
    checked = 0
    for choice in product((None, True, False), repeat=phi.num_vars):
        sigma = {v: val for v, val in enumerate(choice, start=1) if val is not None}
        checked += 1
        failure = _check_pair_equivalence(
            clo, beta, built.alpha(sigma), sat_enumerate(phi, sigma), built.net.n
        )
        if failure:
            return _report("lemma1", checked, f"sigma={sigma}: {failure}")
    return _report("lemma1", checked, None)


def _verify_corollary2(phi: CnfFormula, bound: int) -> LemmaReport:
    built = summarized_formula_net(phi)
    clo = closure(build_graph(built.net, bound))
    failure = _check_pair_equivalence(
        clo, built.beta_bar(), built.alpha(), sat_enumerate(phi), built.net.n
    )
    return _report("corollary2", 1, failure)


def _verify_lemma5(phi: CnfFormula, max_states: int) -> LemmaReport:
    from .voting import is_pareto_optimal

    gadget = m_ipo(phi)
    expected = not sat_enumerate(phi)
    actual = is_pareto_optimal(gadget.profile, 0, max_states=max_states)
    if actual != expected:
        verb = "should be" if expected else "should not be"
        return _report(
            "lemma5",
            1,
            f"all-zero outcome {verb} Pareto optimal in the two-agent profile",
        )
    return _report("lemma5", 1, None)


def _pareto_optimum_mask(closures: list[DominanceClosure], size: int) -> int:
    """Definition-level Pareto optimum set as a bitmask: alpha qualifies
    when every other outcome reaches alpha in every agent's closure."""
    mask = (1 << size) - 1
    for clo in closures:
        acc = mask
        for beta in range(size):
            acc &= clo.reach[beta] | (1 << beta)
        mask &= acc
    return mask


def _verify_lemma7(profile: MCPNet, bound: int) -> LemmaReport:
    graphs = [build_graph(agent, bound) for agent in profile.agents]
    size = 1 << profile.n
    for i, graph in enumerate(graphs):
        tops = sinks(graph)
        if len(tops) != 1:
            return _report(
                "lemma7", 0, f"agent {i} has {len(tops)} flip-free outcomes"
            )
    optima = [sinks(graph)[0] for graph in graphs]
    closures = [closure(graph) for graph in graphs]
    actual = _pareto_optimum_mask(closures, size)
    shared = optima[0] if all(o == optima[0] for o in optima) else None
    expected = 0 if shared is None else 1 << shared
    if actual != expected:
        n = profile.n
        have = [outcome_str(o, n) for o in range(size) if (actual >> o) & 1]
        want = [] if shared is None else [outcome_str(shared, n)]
        return _report(
            "lemma7",
            size,
            f"Pareto optimum set {have} but individual optima give {want}",
        )
    return _report("lemma7", size, None)


def _verify_theorem_nowin(profile: MCPNet, bound: int) -> LemmaReport:
    closures = [closure(build_graph(agent, bound)) for agent in profile.agents]
    size = 1 << profile.n
    threshold = profile.m // 2
    n = profile.n
    for alpha in range(size):
        beaten = False
        for beta in range(size):
            if beta == alpha:
                continue
            votes = sum(clo.dominates(beta, alpha) for clo in closures)
            if votes > threshold:
                beaten = True
                break
        if not beaten:
            return _report(
                "theorem_nowin",
                alpha + 1,
                f"{outcome_str(alpha, n)} is not majority-dominated by anything",
            )
    return _report("theorem_nowin", size, None)


def verify_lemma(
    tag: str,
    instance=None,
    *,
    bound: int = ORACLE_BOUND,
    max_states: int = 1 << 22,
) -> LemmaReport:
    """Check one of the package's satisfiability-to-preference claims on a
    concrete instance against pure enumeration.

    Formula tags take a CnfFormula (corollary1, lemma1, corollary2,
    lemma5); lemma7 takes any acyclic profile; theorem_nowin takes a
    profile and defaults to the fixed four-agent one.
    """
    if tag == "corollary1":
        return _verify_corollary1(instance, bound)
    if tag == "lemma1":
        return _verify_lemma1(instance, bound)
    if tag == "corollary2":
        return _verify_corollary2(instance, bound)
    if tag == "lemma5":
        return _verify_lemma5(instance, max_states)
    if tag == "lemma7":
        return _verify_lemma7(instance, bound)
    if tag == "theorem_nowin":
        return _verify_theorem_nowin(
            instance if instance is not None else m_nowin(), bound
        )
    raise ValueError(f"unknown lemma tag {tag!r}; known tags: {', '.join(LEMMA_TAGS)}")
