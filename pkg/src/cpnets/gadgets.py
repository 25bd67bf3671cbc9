"""Generators for nets and profiles whose preference structure tracks
Boolean satisfiability.

The constructions here are used by the verification oracle and the test
suite. The common convention throughout: value 1 of a feature is the
"raised" value that encodes progress (a satisfied literal, a satisfied
clause, a fired gate), and the interesting dominance questions compare
outcomes that differ in which features are raised.

Naming: variable pairs "V1^T"/"V1^F" (or "W1^T"/"W1^F" for the
universally quantified block), literal features "P_j_k" (clause j,
position k), clause features "D_j", pyramid features "A_5"/"B_3",
copy suffixes "^a"/"^b", gate features "U1"/"U2".
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .model import CPNet, CPTable, MCPNet, net_from_tables, value_at

PartialAssignment = Mapping[int, bool]


@dataclass
class CnfFormula:
    """CNF with clauses of one to three literals.

    Literals are nonzero ints: +i for variable i, -i for its negation,
    with 1 <= i <= num_vars.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]


@dataclass
class Qbf2Formula:
    """Two-block quantified formula: exists X, for all Y, not matrix(X, Y).

    The blocks partition the matrix variables 1..num_vars.
    """

    exists_vars: tuple[int, ...]
    forall_vars: tuple[int, ...]
    matrix: CnfFormula


def check_formula(phi: CnfFormula) -> None:
    if phi.num_vars < 1:
        raise ValueError("formula needs at least one variable")
    if not phi.clauses:
        raise ValueError("formula needs at least one clause")
    for j, clause in enumerate(phi.clauses, start=1):
        if not 1 <= len(clause) <= 3:
            raise ValueError(f"clause {j} must have 1 to 3 literals")
        for lit in clause:
            if lit == 0 or abs(lit) > phi.num_vars:
                raise ValueError(f"clause {j} has out-of-range literal {lit}")


def check_qbf(formula: Qbf2Formula) -> None:
    exists, forall = set(formula.exists_vars), set(formula.forall_vars)
    if len(exists) != len(formula.exists_vars) or len(forall) != len(
        formula.forall_vars
    ):
        raise ValueError("a quantifier block repeats a variable")
    if exists & forall:
        raise ValueError("the quantifier blocks overlap")
    check_formula(formula.matrix)
    everything = set(range(1, formula.matrix.num_vars + 1))
    if exists | forall != everything:
        raise ValueError("the blocks must partition the matrix variables")


# ---------------------------------------------------------------------------
# Formula nets
# ---------------------------------------------------------------------------


@dataclass
class FormulaNet:
    """A net whose dominance relation between alpha() and beta_bar()
    coincides with satisfiability of the generating formula.

    Per variable x_i two parentless features V_i^T / V_i^F that always
    prefer 1; per literal occurrence a feature raised only under the parent
    pattern encoding "this literal is satisfied"; per clause a feature
    raised as soon as one of its literal features is raised.
    """

    net: CPNet
    var_features: tuple[tuple[str, str], ...]
    literal_features: tuple[tuple[str, ...], ...]
    clause_features: tuple[str, ...]

    def alpha(self, sigma: PartialAssignment | None = None) -> int:
        """Outcome encoding an assignment on the variable pairs, all other
        features 0. With no argument: the all-zero outcome."""
        return encode_assignment(sigma or {}, self)

    def beta_bar(self) -> int:
        """Outcome with exactly the variable and clause features raised."""
        n = self.net.n
        out = 0
        for t, f in self.var_features:
            out |= 1 << (n - 1 - self.net.index(t))
            out |= 1 << (n - 1 - self.net.index(f))
        for d in self.clause_features:
            out |= 1 << (n - 1 - self.net.index(d))
        return out


def _literal_rows(lit: int) -> dict[tuple[int, int], int]:
    want = (1, 0) if lit > 0 else (0, 1)
    return {cond: (1 if cond == want else 0) for cond in product((0, 1), repeat=2)}


def _any_rows(width: int) -> dict[tuple[int, ...], int]:
    return {
        cond: (1 if any(cond) else 0) for cond in product((0, 1), repeat=width)
    }


def formula_net(phi: CnfFormula) -> FormulaNet:
    check_formula(phi)
    tables: list[CPTable] = []
    var_features = []
    for i in range(1, phi.num_vars + 1):
        t, f = f"V{i}^T", f"V{i}^F"
        var_features.append((t, f))
        tables.append(CPTable(t, (), {(): 1}))
        tables.append(CPTable(f, (), {(): 1}))
    literal_features = []
    clause_features = []
    for j, clause in enumerate(phi.clauses, start=1):
        names = []
        for k, lit in enumerate(clause, start=1):
            name = f"P_{j}_{k}"
            names.append(name)
            vt, vf = var_features[abs(lit) - 1]
            tables.append(CPTable(name, (vt, vf), _literal_rows(lit)))
        literal_features.append(tuple(names))
        dname = f"D_{j}"
        clause_features.append(dname)
        tables.append(CPTable(dname, tuple(names), _any_rows(len(names))))
    return FormulaNet(
        net=net_from_tables(tables),
        var_features=tuple(var_features),
        literal_features=tuple(literal_features),
        clause_features=tuple(clause_features),
    )


def encode_assignment(sigma: PartialAssignment, context) -> int:
    """Outcome with the variable pairs of `context` set per sigma.

    true -> (1, 0) on (V^T, V^F), false -> (0, 1), unassigned -> (0, 0);
    every feature outside the variable pairs is 0. The context is any
    object with .net and .var_features (FormulaNet, SummarizedNet, or a
    profile wrapper).
    """
    net: CPNet = context.net
    pairs = context.var_features
    n = net.n
    out = 0
    for var, val in sigma.items():
        if not 1 <= var <= len(pairs):
            raise ValueError(f"assignment mentions unknown variable {var}")
        t, f = pairs[var - 1]
        name = t if val else f
        out |= 1 << (n - 1 - net.index(name))
    return out


# ---------------------------------------------------------------------------
# Interconnecting pyramids
# ---------------------------------------------------------------------------


@dataclass
class NetFragment:
    """A set of fresh features wired over existing input features.

    features are in layer order ending at the apex; tables may reference
    the inputs as parents. Merge into a net by adding these tables to the
    host's.
    """

    features: tuple[str, ...]
    tables: dict[str, CPTable]
    apex: str


def _layer_groups(layer: Sequence[str]) -> list[Sequence[str]]:
    k = len(layer)
    if k == 1:
        return [layer]
    if k % 2 == 0:
        return [layer[i : i + 2] for i in range(0, k, 2)]
    head = [layer[i : i + 2] for i in range(0, k - 3, 2)]
    head.append(layer[-3:])
    return head


def _pyramid(
    inputs: Sequence[str], prefix: str, raise_when: Callable[[tuple], bool]
) -> NetFragment:
    if not inputs:
        raise ValueError("interconnecting net needs at least one input")
    order: list[str] = []
    tables: dict[str, CPTable] = {}
    current = list(inputs)
    counter = 0
    while True:
        next_layer = []
        for group in _layer_groups(current):
            counter += 1
            name = f"{prefix}_{counter}"
            rows = {
                cond: (1 if raise_when(cond) else 0)
                for cond in product((0, 1), repeat=len(group))
            }
            tables[name] = CPTable(name, tuple(group), rows)
            order.append(name)
            next_layer.append(name)
        current = next_layer
        if len(current) == 1:
            return NetFragment(tuple(order), tables, apex=current[0])


def h_c(inputs: Sequence[str], prefix: str = "A") -> NetFragment:
    """Conjunctive pyramid: the apex can rise only once every input is 1.

    Layered pairwise left to right; an odd layer of three or more ends in
    one triple, so no feature ever has more than three parents and at most
    one feature per layer has three. For three or more inputs the fragment
    has fewer fresh features than inputs; one input yields a single-parent
    apex, two yield a two-parent apex.
    """
    return _pyramid(inputs, prefix, all)


def h_d(inputs: Sequence[str], prefix: str = "A") -> NetFragment:
    """Disjunctive pyramid: same shape as h_c, apex rises when at least
    one input is 1."""
    return _pyramid(inputs, prefix, any)


# ---------------------------------------------------------------------------
# Direct nets
# ---------------------------------------------------------------------------


def direct_net(alpha: int, features: Sequence[str]) -> CPNet:
    """Edgeless net whose unique optimum is alpha: every feature
    unconditionally prefers its value in alpha, so any outcome is dominated
    by every outcome strictly closer to alpha (same disagreements minus at
    least one)."""
    feats = tuple(features)
    if not feats:
        raise ValueError("direct net needs at least one feature")
    n = len(feats)
    if not 0 <= alpha < (1 << n):
        raise ValueError(f"outcome {alpha} out of range for {n} features")
    return net_from_tables(
        [
            CPTable(name, (), {(): value_at(alpha, n, i)})
            for i, name in enumerate(feats)
        ]
    )


# ---------------------------------------------------------------------------
# Summarized formula nets
# ---------------------------------------------------------------------------


@dataclass
class SummarizedNet:
    """Formula net variant with two gate features.

    U1 is parentless and prefers 1; while U1 is 0 the variable and literal
    features behave as in the plain formula net, and once U1 is 1 they are
    frozen low. U2 hangs under the apex of a conjunctive pyramid over the
    clause features. Dominance of beta_bar() (only U1, U2 raised) over
    alpha() summarizes satisfiability in a net whose interesting flips are
    funneled through two features.
    """

    net: CPNet
    var_features: tuple[tuple[str, str], ...]
    literal_features: tuple[tuple[str, ...], ...]
    clause_features: tuple[str, ...]
    hc_features: tuple[str, ...]
    apex: str
    u1: str = "U1"
    u2: str = "U2"

    def alpha(self, sigma: PartialAssignment | None = None) -> int:
        return encode_assignment(sigma or {}, self)

    def beta_bar(self, var_bits: int = 0) -> int:
        """Outcome raising exactly U1 and U2; var_bits, when given, is OR-ed
        in to choose values for the variable pairs."""
        n = self.net.n
        out = 1 << (n - 1 - self.net.index(self.u1))
        out |= 1 << (n - 1 - self.net.index(self.u2))
        return out | var_bits


def summarized_formula_net(
    phi: CnfFormula,
    var_names: Sequence[tuple[str, str]] | None = None,
) -> SummarizedNet:
    check_formula(phi)
    if var_names is None:
        var_names = tuple((f"V{i}^T", f"V{i}^F") for i in range(1, phi.num_vars + 1))
    if len(var_names) != phi.num_vars:
        raise ValueError("need one name pair per variable")
    u1, u2 = "U1", "U2"
    gated = {(0,): 1, (1,): 0}
    tables: list[CPTable] = []
    for t, f in var_names:
        tables.append(CPTable(t, (u1,), dict(gated)))
        tables.append(CPTable(f, (u1,), dict(gated)))
    literal_features = []
    clause_features = []
    for j, clause in enumerate(phi.clauses, start=1):
        names = []
        for k, lit in enumerate(clause, start=1):
            name = f"P_{j}_{k}"
            names.append(name)
            vt, vf = var_names[abs(lit) - 1]
            want = (0, 1, 0) if lit > 0 else (0, 0, 1)
            rows = {
                cond: (1 if cond == want else 0)
                for cond in product((0, 1), repeat=3)
            }
            tables.append(CPTable(name, (u1, vt, vf), rows))
        literal_features.append(tuple(names))
        dname = f"D_{j}"
        clause_features.append(dname)
        tables.append(CPTable(dname, tuple(names), _any_rows(len(names))))
    frag = h_c(clause_features, prefix="A")
    tables.extend(frag.tables[name] for name in frag.features)
    tables.append(CPTable(u1, (), {(): 1}))
    tables.append(CPTable(u2, (frag.apex,), {(1,): 1, (0,): 0}))
    return SummarizedNet(
        net=net_from_tables(tables),
        var_features=tuple(var_names),
        literal_features=tuple(literal_features),
        clause_features=tuple(clause_features),
        hc_features=frag.features,
        apex=frag.apex,
    )


# ---------------------------------------------------------------------------
# Two-agent profile for Pareto-optimality questions
# ---------------------------------------------------------------------------


@dataclass
class MIpo:
    """Two agents over two formula-net copies joined by a conjunctive
    pyramid. In agent 1 the pyramid watches copy a's clause features and
    its apex gates copy b's variable features; agent 2 mirrors the roles.
    The all-zero outcome is Pareto optimal exactly when the formula is
    unsatisfiable."""

    profile: MCPNet
    var_features_a: tuple[tuple[str, str], ...]
    var_features_b: tuple[tuple[str, str], ...]
    clause_features_a: tuple[str, ...]
    clause_features_b: tuple[str, ...]
    hc_features: tuple[str, ...]
    apex: str

    @property
    def net(self) -> CPNet:
        return self.profile.agents[0]


def _suffixed(f: FormulaNet, suffix: str) -> FormulaNet:
    def r(s: str) -> str:
        return s + suffix

    tables = {
        r(name): CPTable(
            r(name), tuple(r(p) for p in t.parents), dict(t.rows)
        )
        for name, t in f.net.tables.items()
    }
    return FormulaNet(
        net=CPNet(tuple(r(x) for x in f.net.features), tables),
        var_features=tuple((r(a), r(b)) for a, b in f.var_features),
        literal_features=tuple(
            tuple(r(p) for p in c) for c in f.literal_features
        ),
        clause_features=tuple(r(d) for d in f.clause_features),
    )


def m_ipo(phi: CnfFormula) -> MIpo:
    base = formula_net(phi)
    copy_a = _suffixed(base, "^a")
    copy_b = _suffixed(base, "^b")
    frag_a = h_c(copy_a.clause_features)
    frag_b = h_c(copy_b.clause_features)
    universe = (
        copy_a.net.features + copy_b.net.features + frag_a.features
    )

    def gate_vars(tables: dict[str, CPTable], pairs, apex: str) -> None:
        for t, f in pairs:
            for name in (t, f):
                tables[name] = CPTable(name, (apex,), {(1,): 1, (0,): 0})

    tables_1 = {**copy_a.net.tables, **copy_b.net.tables, **frag_a.tables}
    gate_vars(tables_1, copy_b.var_features, frag_a.apex)
    tables_2 = {**copy_a.net.tables, **copy_b.net.tables, **frag_b.tables}
    gate_vars(tables_2, copy_a.var_features, frag_b.apex)

    profile = MCPNet(
        agents=(CPNet(universe, tables_1), CPNet(universe, tables_2))
    )
    return MIpo(
        profile=profile,
        var_features_a=copy_a.var_features,
        var_features_b=copy_b.var_features,
        clause_features_a=copy_a.clause_features,
        clause_features_b=copy_b.clause_features,
        hc_features=frag_a.features,
        apex=frag_a.apex,
    )


# ---------------------------------------------------------------------------
# Fixed four-agent paradox profile
# ---------------------------------------------------------------------------


def m_nowin() -> MCPNet:
    """Four single-edge nets over features (A, B) inducing the total orders

        agent 0: 11 > 10 > 00 > 01
        agent 1: 10 > 00 > 01 > 11
        agent 2: 00 > 01 > 11 > 10
        agent 3: 01 > 11 > 10 > 00

    Every outcome is majority-dominated by some other outcome, so the
    profile has no majority optimal (and hence no majority optimum)
    outcome.
    """
    feats = ("A", "B")

    def net(a_table: CPTable, b_table: CPTable) -> CPNet:
        return CPNet(feats, {"A": a_table, "B": b_table})

    n1 = net(
        CPTable("A", (), {(): 1}),
        CPTable("B", ("A",), {(0,): 0, (1,): 1}),
    )
    n2 = net(
        CPTable("A", ("B",), {(0,): 1, (1,): 0}),
        CPTable("B", (), {(): 0}),
    )
    n3 = net(
        CPTable("A", (), {(): 0}),
        CPTable("B", ("A",), {(0,): 0, (1,): 1}),
    )
    n4 = net(
        CPTable("A", ("B",), {(0,): 1, (1,): 0}),
        CPTable("B", (), {(): 1}),
    )
    return MCPNet(agents=(n1, n2, n3, n4))


# ---------------------------------------------------------------------------
# Quantified-formula profiles
# ---------------------------------------------------------------------------


@dataclass
class _QbfParts:
    universe: tuple[str, ...]
    var_features: tuple[tuple[str, str], ...]
    summary: SummarizedNet
    primes: tuple[str, ...]
    prime_parents: tuple[tuple[str, str], ...]
    b_fragment: NetFragment
    watched: tuple[str, ...]


def _qbf_parts(formula: Qbf2Formula) -> _QbfParts:
    check_qbf(formula)
    xpos = {v: i for i, v in enumerate(formula.exists_vars, start=1)}
    ypos = {v: i for i, v in enumerate(formula.forall_vars, start=1)}
    names = []
    for v in range(1, formula.matrix.num_vars + 1):
        if v in xpos:
            names.append((f"V{xpos[v]}^T", f"V{xpos[v]}^F"))
        else:
            names.append((f"W{ypos[v]}^T", f"W{ypos[v]}^F"))
    summary = summarized_formula_net(formula.matrix, var_names=tuple(names))
    primes = tuple(f"V{i}'" for i in range(1, len(formula.exists_vars) + 1))
    prime_parents = tuple(names[v - 1] for v in formula.exists_vars)
    w_flat = tuple(
        name for v in formula.forall_vars for name in names[v - 1]
    )
    lit_flat = tuple(p for c in summary.literal_features for p in c)
    watched = (
        primes
        + w_flat
        + lit_flat
        + summary.clause_features
        + summary.hc_features
    )
    b_fragment = h_d(watched, prefix="B")
    var_flat = tuple(name for pair in names for name in pair)
    universe = (
        var_flat
        + primes
        + lit_flat
        + summary.clause_features
        + summary.hc_features
        + b_fragment.features
        + (summary.u1, summary.u2)
    )
    return _QbfParts(
        universe=universe,
        var_features=tuple(names),
        summary=summary,
        primes=primes,
        prime_parents=prime_parents,
        b_fragment=b_fragment,
        watched=watched,
    )


def _flat_tables(parts: _QbfParts) -> dict[str, CPTable]:
    """Agent 1's tables: the summarized net plus every prime and pyramid-B
    feature pinned low (parentless, prefer 0)."""
    tables = dict(parts.summary.net.tables)
    for name in parts.primes + parts.b_fragment.features:
        tables[name] = CPTable(name, (), {(): 0})
    return tables


def _swapped_tables(tables: dict[str, CPTable], a: str, b: str) -> dict[str, CPTable]:
    swap = {a: b, b: a}

    def r(s: str) -> str:
        return swap.get(s, s)

    return {
        r(name): CPTable(r(name), tuple(r(p) for p in t.parents), dict(t.rows))
        for name, t in tables.items()
    }


def _watcher_tables(parts: _QbfParts) -> dict[str, CPTable]:
    """Agent 3's tables: everything prefers 0 except that each prime rises
    over a fully raised variable pair, the disjunctive pyramid watches the
    primes and the rest of the machinery, and U1/U2 chain off its apex."""
    tables: dict[str, CPTable] = {}
    summary = parts.summary
    low = (
        tuple(n for pair in parts.var_features for n in pair)
        + tuple(p for c in summary.literal_features for p in c)
        + summary.clause_features
        + summary.hc_features
    )
    for name in low:
        tables[name] = CPTable(name, (), {(): 0})
    for prime, (vt, vf) in zip(parts.primes, parts.prime_parents):
        rows = {
            cond: (1 if cond == (1, 1) else 0)
            for cond in product((0, 1), repeat=2)
        }
        tables[prime] = CPTable(prime, (vt, vf), rows)
    tables.update(parts.b_fragment.tables)
    tables[summary.u1] = CPTable(
        summary.u1, (parts.b_fragment.apex,), {(1,): 1, (0,): 0}
    )
    tables[summary.u2] = CPTable(summary.u2, (summary.u1,), {(1,): 1, (0,): 0})
    return tables


@dataclass
class MEml:
    """Six agents over the shared quantified-formula universe; a majority
    optimal outcome exists exactly when some choice for the existential
    block falsifies the matrix under every universal completion."""

    profile: MCPNet
    var_features: tuple[tuple[str, str], ...]
    exists_vars: tuple[int, ...]
    u1: str
    u2: str

    @property
    def net(self) -> CPNet:
        return self.profile.agents[0]

    def alpha_bar(self) -> int:
        n = self.net.n
        return (1 << (n - 1 - self.net.index(self.u1))) | (
            1 << (n - 1 - self.net.index(self.u2))
        )

    def beta_sigma(self, sigma: PartialAssignment) -> int:
        allowed = set(self.exists_vars)
        if any(v not in allowed for v in sigma):
            raise ValueError("assignment must stay within the exists block")
        return encode_assignment(sigma, self)


@dataclass
class MImm:
    """Three agents over the shared quantified-formula universe; the only
    possible majority optimum is alpha_bar(), and it is one exactly when
    the quantified formula is not valid."""

    profile: MCPNet
    var_features: tuple[tuple[str, str], ...]
    exists_vars: tuple[int, ...]
    u1: str
    u2: str

    alpha_bar = MEml.alpha_bar
    beta_sigma = MEml.beta_sigma
    net = MEml.net


def m_eml(formula: Qbf2Formula) -> MEml:
    parts = _qbf_parts(formula)
    summary = parts.summary
    n1 = _flat_tables(parts)
    n2 = _swapped_tables(n1, summary.u1, summary.u2)
    n3 = _watcher_tables(parts)

    n5: dict[str, CPTable] = {
        name: CPTable(name, (), {(): 0})
        for name in parts.universe
        if name not in (summary.u1, summary.u2)
    }
    n5[summary.u1] = CPTable(summary.u1, (), {(): 1})
    n5[summary.u2] = CPTable(summary.u2, (summary.u1,), {(1,): 1, (0,): 0})

    n6: dict[str, CPTable] = {
        name: CPTable(name, (summary.u2,), {(1,): 0, (0,): 1})
        for name in parts.universe
        if name != summary.u2
    }
    n6[summary.u2] = CPTable(summary.u2, (), {(): 1})

    agents = tuple(
        CPNet(parts.universe, t) for t in (n1, n2, n3, n3, n5, n6)
    )
    return MEml(
        profile=MCPNet(agents=agents),
        var_features=parts.var_features,
        exists_vars=formula.exists_vars,
        u1=summary.u1,
        u2=summary.u2,
    )


def m_imm(formula: Qbf2Formula) -> MImm:
    parts = _qbf_parts(formula)
    summary = parts.summary
    size = len(parts.universe)
    alpha_bar = (1 << (size - 1 - parts.universe.index(summary.u1))) | (
        1 << (size - 1 - parts.universe.index(summary.u2))
    )
    agents = (
        CPNet(parts.universe, _flat_tables(parts)),
        direct_net(alpha_bar, parts.universe),
        CPNet(parts.universe, _watcher_tables(parts)),
    )
    return MImm(
        profile=MCPNet(agents=agents),
        var_features=parts.var_features,
        exists_vars=formula.exists_vars,
        u1=summary.u1,
        u2=summary.u2,
    )


# ---------------------------------------------------------------------------
# DIMACS-style input
# ---------------------------------------------------------------------------


def parse_dimacs(text: str) -> CnfFormula:
    """Parse conjunctive-normal-form text: a 'p cnf <vars> <clauses>'
    header, then whitespace-separated literals with 0 ending each clause.
    Lines starting with 'c' or '%' are comments."""
    num_vars = None
    tokens: list[int] = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith(("c", "%")):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad header line: {s!r}")
            num_vars = int(parts[2])
            continue
        tokens.extend(int(tok) for tok in s.split())
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if current:
                clauses.append(tuple(current))
                current = []
        else:
            current.append(tok)
    if current:
        clauses.append(tuple(current))
    phi = CnfFormula(num_vars=num_vars, clauses=tuple(clauses))
    check_formula(phi)
    return phi


def parse_qdimacs(text: str) -> Qbf2Formula:
    """Parse two-block quantified input: an 'e <vars> 0' line, an
    'a <vars> 0' line, then clauses as in plain DIMACS."""
    exists: list[int] = []
    forall: list[int] = []
    body: list[str] = []
    num_vars = None
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith(("c", "%")):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad header line: {s!r}")
            num_vars = int(parts[2])
            continue
        if s.startswith("e"):
            exists.extend(int(t) for t in s.split()[1:] if t != "0")
            continue
        if s.startswith("a"):
            forall.extend(int(t) for t in s.split()[1:] if t != "0")
            continue
        body.append(s)
    if num_vars is None:
        num_vars = len(exists) + len(forall)
    tokens = [int(t) for chunk in body for t in chunk.split()]
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if current:
                clauses.append(tuple(current))
                current = []
        else:
            current.append(tok)
    if current:
        clauses.append(tuple(current))
    formula = Qbf2Formula(
        exists_vars=tuple(exists),
        forall_vars=tuple(forall),
        matrix=CnfFormula(num_vars=num_vars, clauses=tuple(clauses)),
    )
    check_qbf(formula)
    return formula
