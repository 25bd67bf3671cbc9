"""Data model for acyclic binary CP-nets and multi-agent profiles.

Every feature is binary with values 0 and 1. The canonical feature order is
the insertion order at construction time, and an outcome is a plain int whose
binary rendering follows that order: feature 0 occupies the most significant
bit, so the bitstring "10" over features (A, B) means A=1, B=0 and equals the
int 2. Enumerating ``range(2 ** n)`` therefore walks outcomes in canonical
lexicographic order.

A CP table stores one preferred value per complete parent assignment; tables
are always fully materialized (2^|parents| rows).
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CycleError

MAX_PARENTS = 20


@dataclass
class CPTable:
    """Conditional preference table of one feature.

    rows maps each parent assignment (a tuple of 0/1 values, in parent
    order) to the preferred value of the feature under that assignment.
    """

    feature: str
    parents: tuple[str, ...]
    rows: dict[tuple[int, ...], int]


@dataclass
class CPNet:
    """A CP-net: an ordered feature tuple plus one CPTable per feature.

    The edge set is implied by the tables (parent -> feature). Instances
    are treated as immutable after construction.
    """

    features: tuple[str, ...]
    tables: dict[str, CPTable]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._index = {name: i for i, name in enumerate(self.features)}

    @property
    def n(self) -> int:
        return len(self.features)

    def index(self, name: str) -> int:
        return self._index[name]

    def parents(self, name: str) -> tuple[str, ...]:
        return self.tables[name].parents

    @property
    def edges(self) -> set[tuple[str, str]]:
        return {(p, t.feature) for t in self.tables.values() for p in t.parents}


@dataclass
class MCPNet:
    """A profile of m CP-nets over one shared feature universe."""

    agents: tuple[CPNet, ...]

    @property
    def m(self) -> int:
        return len(self.agents)

    @property
    def n(self) -> int:
        return self.agents[0].n

    @property
    def features(self) -> tuple[str, ...]:
        return self.agents[0].features


def net_from_tables(tables: Sequence[CPTable]) -> CPNet:
    """Build a net whose canonical feature order is the table order."""
    return CPNet(
        features=tuple(t.feature for t in tables),
        tables={t.feature: t for t in tables},
    )


def feature_mask(n: int, index: int) -> int:
    """Bit mask of the feature at the given canonical index."""
    return 1 << (n - 1 - index)


def value_at(outcome: int, n: int, index: int) -> int:
    return (outcome >> (n - 1 - index)) & 1


def parse_outcome(text: str, n: int) -> int:
    if len(text) != n or any(c not in "01" for c in text):
        raise ValueError(
            f"outcome must be a bitstring of length {n}, got {text!r}"
        )
    return int(text, 2)


def outcome_str(outcome: int, n: int) -> str:
    return format(outcome, f"0{n}b")


def validate_net(net: CPNet) -> list[str]:
    """Check every structural invariant; returns a list of violations.

    An empty list means the net is valid. Violations are data, not faults:
    nothing is raised here.
    """
    problems: list[str] = []
    if not net.features:
        problems.append("net has no features")
        return problems

    counts = Counter(net.features)
    for name, k in counts.items():
        if k > 1:
            problems.append(f"duplicate feature name {name!r}")
    known = set(net.features)

    missing = known - set(net.tables)
    for name in sorted(missing):
        problems.append(f"feature {name!r} has no CP table")
    extra = set(net.tables) - known
    for name in sorted(extra):
        problems.append(f"table for unknown feature {name!r}")

    for name in net.features:
        table = net.tables.get(name)
        if table is None:
            continue
        if table.feature != name:
            problems.append(
                f"table stored under {name!r} describes {table.feature!r}"
            )
        bad_parent = False
        for p in table.parents:
            if p not in known:
                problems.append(f"{name!r} lists unknown parent {p!r}")
                bad_parent = True
        if len(set(table.parents)) != len(table.parents):
            problems.append(f"{name!r} lists a duplicate parent")
            bad_parent = True
        if len(table.parents) > MAX_PARENTS:
            problems.append(
                f"{name!r} has {len(table.parents)} parents "
                f"(limit {MAX_PARENTS})"
            )
            bad_parent = True
        if bad_parent:
            continue
        want = 1 << len(table.parents)
        if len(table.rows) != want:
            problems.append(
                f"{name!r} table has {len(table.rows)} rows, needs {want}"
            )
        for cond, pref in table.rows.items():
            if len(cond) != len(table.parents) or any(
                v not in (0, 1) for v in cond
            ):
                problems.append(f"{name!r} table has malformed condition {cond!r}")
                break
            if pref not in (0, 1):
                problems.append(
                    f"{name!r} table prefers {pref!r} (must be 0 or 1)"
                )
                break

    if not problems:
        try:
            topological_order(net)
        except CycleError as exc:
            problems.append(str(exc))
    return problems


def topological_order(net: CPNet) -> list[str]:
    """Parents-first feature order, ties broken by canonical index."""
    children: dict[str, list[str]] = {name: [] for name in net.features}
    pending = {}
    for name in net.features:
        table = net.tables.get(name)
        parents = table.parents if table else ()
        pending[name] = len(parents)
        for p in parents:
            if p in children:
                children[p].append(name)
    ready = [net.index(name) for name, k in pending.items() if k == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        name = net.features[heapq.heappop(ready)]
        order.append(name)
        for child in children[name]:
            pending[child] -= 1
            if pending[child] == 0:
                heapq.heappush(ready, net.index(child))
    if len(order) != net.n:
        stuck = sorted(name for name, k in pending.items() if k > 0)
        raise CycleError(f"dependency cycle through features {stuck}")
    return order


def indegree(net: CPNet) -> int:
    """Largest parent count over all features."""
    return max(len(net.tables[name].parents) for name in net.features)


def validate_profile(profile: MCPNet) -> list[str]:
    problems: list[str] = []
    if profile.m < 1:
        problems.append("profile has no agents")
        return problems
    base = profile.agents[0].features
    for i, agent in enumerate(profile.agents):
        if agent.features != base:
            problems.append(
                f"agent {i} feature list differs from agent 0"
            )
        for issue in validate_net(agent):
            problems.append(f"agent {i}: {issue}")
    return problems


# ---------------------------------------------------------------------------
# JSON serialization. The wire format is the one consumed by the CLI:
# {"features": [{"name": ..., "parents": [...],
#                "cpt": [{"cond": [...], "prefer": 0|1}, ...]}, ...]}
# Profiles are {"agents": [<net>, ...]}. A feature may carry an optional
# "values": [name_for_0, name_for_1] pair; the model ignores it (the CLI
# uses it for --named outcome input).
# ---------------------------------------------------------------------------


def net_to_json(net: CPNet) -> dict:
    out = []
    for name in net.features:
        table = net.tables[name]
        out.append(
            {
                "name": name,
                "parents": list(table.parents),
                "cpt": [
                    {"cond": list(cond), "prefer": table.rows[cond]}
                    for cond in sorted(table.rows)
                ],
            }
        )
    return {"features": out}


def net_from_json(data: Mapping) -> CPNet:
    if not isinstance(data, Mapping) or "features" not in data:
        raise ValueError("net JSON must be an object with a 'features' list")
    raw = data["features"]
    if not isinstance(raw, list):
        raise ValueError("'features' must be a list")
    tables = []
    for entry in raw:
        try:
            name = entry["name"]
            parents = tuple(entry["parents"])
            rows = {
                tuple(int(v) for v in row["cond"]): int(row["prefer"])
                for row in entry["cpt"]
            }
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed feature entry: {entry!r}") from exc
        if len(rows) != len(entry["cpt"]):
            raise ValueError(f"feature {name!r} repeats a cpt condition")
        tables.append(CPTable(feature=name, parents=parents, rows=rows))
    return net_from_tables(tables)


def profile_to_json(profile: MCPNet) -> dict:
    return {"agents": [net_to_json(a) for a in profile.agents]}


def profile_from_json(data: Mapping) -> MCPNet:
    if not isinstance(data, Mapping) or "agents" not in data:
        raise ValueError("profile JSON must be an object with an 'agents' list")
    agents = data["agents"]
    if not isinstance(agents, list) or not agents:
        raise ValueError("'agents' must be a non-empty list")
    return MCPNet(agents=tuple(net_from_json(a) for a in agents))
