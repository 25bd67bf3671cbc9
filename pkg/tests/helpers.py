"""Shared generators for randomized and exhaustive test inputs."""

from itertools import combinations

from cpnets import CPTable, CnfFormula, MCPNet, net_from_tables


def random_net(rng, n, names=None):
    """Build a random acyclic net over ``n`` binary features.

    Parents of feature i are drawn from features 0..i-1, so the insertion
    order is already a topological order. Indegree stays at most 3.
    """
    if names is None:
        names = [f"X{i}" for i in range(1, n + 1)]
    tables = []
    for i, name in enumerate(names):
        k = rng.randint(0, min(3, i))
        parents = tuple(rng.sample(names[:i], k))
        rows = {cond: rng.randint(0, 1) for cond in _conds(k)}
        tables.append(CPTable(feature=name, parents=parents, rows=rows))
    return net_from_tables(tables)


def _conds(k):
    if k == 0:
        return [()]
    return [tuple((c >> (k - 1 - j)) & 1 for j in range(k)) for c in range(1 << k)]


def random_profile(rng, n, m, names=None):
    if names is None:
        names = [f"X{i}" for i in range(1, n + 1)]
    return MCPNet(agents=tuple(random_net(rng, n, names) for _ in range(m)))


def clause_pool(num_vars):
    """Every clause with 1 to 3 distinct literals over ``num_vars`` variables.

    Literals are signed 1-based indices. Clauses holding both a variable and
    its negation are kept; they are satisfiable tautologies and legal inputs.
    """
    literals = [s * v for v in range(1, num_vars + 1) for s in (1, -1)]
    pool = []
    for size in (1, 2, 3):
        if size > len(literals):
            break
        pool.extend(combinations(literals, size))
    return pool


def formula_family(max_vars, max_clauses=2):
    """All small formulas: for each n up to ``max_vars``, every clause set
    of size 1..``max_clauses`` drawn from the full clause pool on n vars."""
    family = []
    for n in range(1, max_vars + 1):
        pool = clause_pool(n)
        for size in range(1, max_clauses + 1):
            for clauses in combinations(pool, size):
                family.append(CnfFormula(num_vars=n, clauses=clauses))
    return family


def random_formula(rng, max_vars=4, max_clauses=3):
    n = rng.randint(1, max_vars)
    pool = clause_pool(n)
    k = rng.randint(1, min(max_clauses, len(pool)))
    return CnfFormula(num_vars=n, clauses=tuple(rng.sample(pool, k)))
