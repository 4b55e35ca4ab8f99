"""3SAT -> VIMAX reduction gadget and an exhaustive check of its correctness.

Gadget layout (directed, unit capacities unless noted)::

    k -> d2                       capacity n + m
    d1 -> a_i, a_i -> t_i, a_i -> f_i      capacity 2
    t_i -> b_i, f_i -> b_i, t_i -> d2, f_i -> d2, b_i -> k
    d1 -> u_j, v_j -> k
    u_j -> t_i, t_i -> v_j        for literal  x_i in clause j
    u_j -> f_i, f_i -> v_j        for literal ~x_i in clause j
    M leaves -> d1, d2 -> M leaves

with M = 8 (m + n + n m) and threshold C = (M + 1)^2 (n + m), where n is
the variable count and m the clause count.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from vimax.errors import ParseError, SizeLimitError
from vimax.flow import pair_vitality
from vimax.graph import ORDERED, Graph, Instance, remove_vertices

MAX_CHECK_VARIABLES = 4
MAX_CHECK_CLAUSES = 8


@dataclass(frozen=True)
class CnfFormula:
    num_variables: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_variables:
                    raise ValueError(f"literal {lit} is out of range")
                if -lit in c:
                    raise ValueError(f"clause {c} contains a literal and its negation")

    def satisfied_by(self, assignment) -> bool:
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)

    def satisfiable(self) -> bool:
        return any(self.satisfied_by(a) for a in product((False, True), repeat=self.num_variables))


def parse_dimacs(text: str) -> CnfFormula:
    n = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            tok = line.split()
            if len(tok) != 4 or tok[1] != "cnf":
                raise ParseError("expected 'p cnf <variables> <clauses>'", lineno)
            n = int(tok[2])
            continue
        if n is None:
            raise ParseError("clause before the problem line", lineno)
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError("clause lines hold integers only", lineno) from None
        for x in nums:
            if x == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(x)
    if n is None:
        raise ParseError("missing problem line")
    if pending:
        clauses.append(tuple(pending))
    try:
        return CnfFormula(n, tuple(clauses))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class ReductionInstance:
    instance: Instance
    roles: dict[int, str]
    M: int
    C: int

    def vertex(self, role: str) -> int:
        return self.instance.graph.vid(role)


def leaf_count(n: int, m: int) -> int:
    return 8 * (m + n + n * m)


def threshold(n: int, m: int) -> int:
    return (leaf_count(n, m) + 1) ** 2 * (n + m)


def reduce_3sat(f: CnfFormula) -> ReductionInstance:
    n, m = f.num_variables, len(f.clauses)
    M = leaf_count(n, m)
    arcs: dict[tuple[str, str], int] = {("k", "d2"): n + m}
    roles = {"d1": "d1", "d2": "d2", "k": "k"}
    order = ["d1", "k", "d2"]
    for i in range(1, n + 1):
        a, b, t, fl = f"a{i}", f"b{i}", f"t{i}", f"f{i}"
        for name, role in ((a, "a"), (b, "b"), (t, "t"), (fl, "f")):
            roles[name] = f"{role}_{i}"
            order.append(name)
        arcs.update({("d1", a): 2, (a, t): 2, (a, fl): 2})
        arcs.update({(t, b): 1, (fl, b): 1, (t, "d2"): 1, (fl, "d2"): 1, (b, "k"): 1})
    for j, clause in enumerate(f.clauses, 1):
        u, v = f"u{j}", f"v{j}"
        roles[u], roles[v] = f"u_{j}", f"v_{j}"
        order += [u, v]
        arcs[("d1", u)] = 1
        arcs[(v, "k")] = 1
        for lit in clause:
            node = f"t{lit}" if lit > 0 else f"f{-lit}"
            arcs[(u, node)] = 1
            arcs[(node, v)] = 1
    for x in range(1, M + 1):
        src, dst = f"p{x}", f"q{x}"
        roles[src] = roles[dst] = "leaf"
        order += [src, dst]
        arcs[(src, "d1")] = 1
        arcs[("d2", dst)] = 1
    g = Graph.build([(a, b, c) for (a, b), c in arcs.items()], directed=True, vertices=order)
    inst = Instance(g, g.vid("k"), n, ORDERED)
    return ReductionInstance(inst, {g.vid(name): role for name, role in roles.items()}, M, threshold(n, m))


def assignment_subset(r: ReductionInstance, assignment) -> frozenset[int]:
    """t_i for every false x_i and f_i for every true x_i."""
    g = r.instance.graph
    return frozenset(g.vid(f"f{i}" if val else f"t{i}") for i, val in enumerate(assignment, 1))


def d1d2_vitality(r: ReductionInstance, removed) -> int:
    g = remove_vertices(r.instance.graph, removed)
    return pair_vitality(g, r.vertex("k"), r.vertex("d1"), r.vertex("d2"))


def reduction_sides(r: ReductionInstance, f: CnfFormula) -> tuple[bool, bool]:
    """(formula satisfiable, some one-of-{t_i, f_i} subset reaches n + m)."""
    n, m = f.num_variables, len(f.clauses)
    if n > MAX_CHECK_VARIABLES or m > MAX_CHECK_CLAUSES:
        raise SizeLimitError(
            f"exhaustive check limited to {MAX_CHECK_VARIABLES} variables and "
            f"{MAX_CHECK_CLAUSES} clauses, got {n} and {m}"
        )
    sat = f.satisfiable()
    reach = any(
        d1d2_vitality(r, assignment_subset(r, a)) >= n + m
        for a in product((False, True), repeat=n)
    )
    return sat, reach


def check_reduction(r: ReductionInstance, f: CnfFormula) -> bool:
    sat, reach = reduction_sides(r, f)
    return sat == reach


def weighting_bound(n: int, m: int) -> tuple[int, float]:
    """(M + 1)(4m + 9n + 2mn) and (M + 1)^2 / 2 for the given sizes."""
    M = leaf_count(n, m)
    return (M + 1) * (4 * m + 9 * n + 2 * m * n), (M + 1) ** 2 / 2
