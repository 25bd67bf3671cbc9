"""Group preference over profiles of nets sharing one feature universe.

Two aggregation rules: Pareto (every agent strictly prefers) and majority
(strictly more than half do). For each rule an outcome is optimal when
nothing beats it and an optimum when it beats everything else.

The majority optimality procedures enumerate candidate outcomes, so they
are hard-gated by feature count: below the closure bound each agent's
full dominance relation is precomputed from one reachability search per
outcome, between the bounds every needed pair is answered by its own
search, and past the pair bound the query is refused.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InstanceTooLarge, StateBudgetExceeded
from .model import MCPNet
from .semantics import (
    DEFAULT_MAX_STATES,
    dominates,
    flip_rules,
    forward_sweep_optimum,
    reach_set,
)

CLOSURE_BOUND = 14
PAIR_BOUND = 24


@dataclass
class AgentPartition:
    """How the agents split over an ordered outcome pair (alpha, beta):
    indices preferring alpha, preferring beta, and finding the pair
    incomparable. On alpha == beta everyone lands in incomparables."""

    prefers: frozenset[int]
    opposes: frozenset[int]
    incomparables: frozenset[int]


def agent_partition(
    profile: MCPNet,
    alpha: int,
    beta: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> AgentPartition:
    prefers, opposes, neither = set(), set(), set()
    for i, net in enumerate(profile.agents):
        if alpha == beta:
            neither.add(i)
        elif dominates(net, alpha, beta, max_states).holds:
            prefers.add(i)
        elif dominates(net, beta, alpha, max_states).holds:
            opposes.add(i)
        else:
            neither.add(i)
    return AgentPartition(
        prefers=frozenset(prefers),
        opposes=frozenset(opposes),
        incomparables=frozenset(neither),
    )


def pareto_dominates(
    profile: MCPNet,
    beta: int,
    alpha: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> bool:
    """True when every agent strictly prefers beta to alpha."""
    if alpha == beta:
        return False
    return all(
        dominates(net, beta, alpha, max_states).holds for net in profile.agents
    )


def majority_dominates(
    profile: MCPNet,
    beta: int,
    alpha: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> bool:
    """True when strictly more than half the agents prefer beta to alpha.

    Stops as soon as the vote is decided either way.
    """
    if alpha == beta:
        return False
    need = profile.m // 2 + 1
    votes = 0
    remaining = profile.m
    for net in profile.agents:
        if dominates(net, beta, alpha, max_states).holds:
            votes += 1
            if votes >= need:
                return True
        remaining -= 1
        if votes + remaining < need:
            return False
    return False


# ---------------------------------------------------------------------------
# Pareto optimality
# ---------------------------------------------------------------------------


def is_pareto_optimal(
    profile: MCPNet,
    alpha: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> bool:
    """No outcome Pareto-dominates alpha.

    A Pareto dominator is exactly an outcome flip-reachable from alpha in
    every agent's net, so this runs one reachability search per agent and
    asks whether the intersection holds anything besides alpha. The
    searches are interleaved level by level and stop at the first outcome
    seen by all agents, which keeps satisfiable gadget profiles from
    expanding the full product space. Each per-agent search honors
    max_states.
    """
    agents = profile.agents
    if not 0 <= alpha < (1 << profile.n):
        raise ValueError(f"outcome {alpha} out of range for {profile.n} features")
    rules = [flip_rules(net) for net in agents]
    seen: list[set[int]] = [{alpha} for _ in agents]
    frontier: list[list[int]] = [[alpha] for _ in agents]
    while any(frontier):
        for i in range(len(agents)):
            fresh: list[int] = []
            mine = seen[i]
            for state in frontier[i]:
                for relevant, own, triggers in rules[i]:
                    if state & relevant in triggers:
                        nxt = state ^ own
                        if nxt in mine:
                            continue
                        mine.add(nxt)
                        if len(mine) > max_states:
                            raise StateBudgetExceeded(len(mine), max_states)
                        fresh.append(nxt)
                        if all(nxt in s for s in seen):
                            return False
            frontier[i] = fresh
    return True


def exists_pareto_optimal(
    profile: MCPNet,
    max_states: int = DEFAULT_MAX_STATES,
) -> tuple[bool, int]:
    """Always (True, witness): agent 1's optimum is never Pareto-dominated,
    because nothing dominates it for agent 1."""
    del max_states
    return True, forward_sweep_optimum(profile.agents[0])


def is_pareto_optimum(profile: MCPNet, alpha: int) -> bool:
    """alpha Pareto-dominates every other outcome exactly when it is the
    optimum of every agent, since each agent's optimum dominates all
    outcomes in that agent's net and nothing else does."""
    return all(forward_sweep_optimum(net) == alpha for net in profile.agents)


def exists_pareto_optimum(profile: MCPNet) -> tuple[bool, int | None]:
    optima = [forward_sweep_optimum(net) for net in profile.agents]
    if all(o == optima[0] for o in optima):
        return True, optima[0]
    return False, None


# ---------------------------------------------------------------------------
# Majority optimality
# ---------------------------------------------------------------------------


def _threshold_mask(values: list[int], t: int, full: int) -> int:
    """Bit positions where more than t of the given masks have the bit set.

    Counts all positions at once with bit-plane addition, then compares the
    per-position counter against t from the high plane down.
    """
    planes: list[int] = []
    for v in values:
        carry = v
        k = 0
        while carry:
            if k == len(planes):
                planes.append(0)
            carry, planes[k] = planes[k] & carry, planes[k] ^ carry
            k += 1
    if t >> len(planes):
        return 0
    gt, eq = 0, full
    for k in range(len(planes) - 1, -1, -1):
        if (t >> k) & 1:
            eq &= planes[k]
        else:
            gt |= eq & planes[k]
            eq &= ~planes[k]
    return gt


def _closure_rows(profile: MCPNet, max_states: int) -> list[list[int]]:
    """rows[i][alpha] = bitmask of the outcomes dominating alpha in agent
    i's net, from one reachability search per outcome."""
    size = 1 << profile.n
    rows = []
    for net in profile.agents:
        mine = []
        for alpha in range(size):
            mask = 0
            for s in reach_set(net, alpha, max_states):
                mask |= 1 << s
            mine.append(mask & ~(1 << alpha))
        rows.append(mine)
    return rows


def _dominator_mask(rows: list[list[int]], alpha: int, threshold: int, full: int) -> int:
    return _threshold_mask([r[alpha] for r in rows], threshold, full)


def _gate(profile: MCPNet, pair_bound: int) -> None:
    if profile.n > pair_bound:
        raise InstanceTooLarge(
            f"majority optimality enumerates 2**{profile.n} outcomes; "
            f"refusing beyond 2**{pair_bound}"
        )


def is_majority_optimal(
    profile: MCPNet,
    alpha: int,
    max_states: int = DEFAULT_MAX_STATES,
    closure_bound: int = CLOSURE_BOUND,
    pair_bound: int = PAIR_BOUND,
) -> bool:
    """No outcome majority-dominates alpha, checked against all 2**n
    candidates."""
    _gate(profile, pair_bound)
    n = profile.n
    if not 0 <= alpha < (1 << n):
        raise ValueError(f"outcome {alpha} out of range for {n} features")
    if n <= closure_bound:
        rows = _closure_rows(profile, max_states)
        full = (1 << (1 << n)) - 1
        return _dominator_mask(rows, alpha, profile.m // 2, full) == 0
    return not any(
        majority_dominates(profile, beta, alpha, max_states)
        for beta in range(1 << n)
        if beta != alpha
    )


def exists_majority_optimal(
    profile: MCPNet,
    max_states: int = DEFAULT_MAX_STATES,
    closure_bound: int = CLOSURE_BOUND,
    pair_bound: int = PAIR_BOUND,
) -> tuple[bool, int | None]:
    """First majority-optimal outcome in canonical order, if any."""
    _gate(profile, pair_bound)
    n = profile.n
    if n <= closure_bound:
        rows = _closure_rows(profile, max_states)
        full = (1 << (1 << n)) - 1
        t = profile.m // 2
        for alpha in range(1 << n):
            if _dominator_mask(rows, alpha, t, full) == 0:
                return True, alpha
        return False, None
    for alpha in range(1 << n):
        if is_majority_optimal(
            profile, alpha, max_states, closure_bound, pair_bound
        ):
            return True, alpha
    return False, None


def is_majority_optimum(
    profile: MCPNet,
    alpha: int,
    max_states: int = DEFAULT_MAX_STATES,
    closure_bound: int = CLOSURE_BOUND,
    pair_bound: int = PAIR_BOUND,
) -> bool:
    """alpha majority-dominates every other outcome."""
    _gate(profile, pair_bound)
    n = profile.n
    if not 0 <= alpha < (1 << n):
        raise ValueError(f"outcome {alpha} out of range for {n} features")
    if n <= closure_bound:
        rows = _closure_rows(profile, max_states)
        full = (1 << (1 << n)) - 1
        t = profile.m // 2
        own = 1 << alpha
        return all(
            _dominator_mask(rows, beta, t, full) & own
            for beta in range(1 << n)
            if beta != alpha
        )
    return all(
        majority_dominates(profile, alpha, beta, max_states)
        for beta in range(1 << n)
        if beta != alpha
    )


def exists_majority_optimum(
    profile: MCPNet,
    max_states: int = DEFAULT_MAX_STATES,
    closure_bound: int = CLOSURE_BOUND,
    pair_bound: int = PAIR_BOUND,
) -> tuple[bool, int | None]:
    """The majority optimum, if one exists. At most one outcome can
    qualify: two would have to majority-dominate each other, and the
    preferring coalitions are disjoint."""
    _gate(profile, pair_bound)
    n = profile.n
    if n <= closure_bound:
        rows = _closure_rows(profile, max_states)
        size = 1 << n
        full = (1 << size) - 1
        t = profile.m // 2
        acc = full
        for beta in range(size):
            acc &= _dominator_mask(rows, beta, t, full) | (1 << beta)
            if not acc:
                return False, None
        winner = acc & -acc
        return True, winner.bit_length() - 1
    for alpha in range(1 << n):
        if is_majority_optimum(
            profile, alpha, max_states, closure_bound, pair_bound
        ):
            return True, alpha
    return False, None
