"""VIMAX mixed-integer model export (CPLEX LP text) and solution import.

The model embeds, for every source-sink pair, the max-flow primal on the
graph with S removed and the min-cut dual on the graph with S and k
removed; z_i = 1 keeps vertex i and w_ij = z_i z_j keeps arc (i, j).
Solving happens outside this package.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from vimax.errors import ParseError, SizeLimitError, ValidationError
from vimax.flow import instance_vitality
from vimax.graph import ORDERED, Instance, write_instance
from vimax.preprocess import q_set
from vimax.solvers import Solution

DEFAULT_VARIABLE_CAP = 2_000_000
BINARY, CONTINUOUS, FREE = "binary", "continuous", "free"
_TERMS_PER_LINE = 8


@dataclass
class Variable:
    name: str
    kind: str = CONTINUOUS
    lb: float | None = 0
    ub: float | None = None


@dataclass
class Constraint:
    name: str
    coeffs: list[tuple[str, int]]
    sense: str  # "<=", ">=" or "="
    rhs: int


@dataclass
class MipModel:
    variables: dict[str, Variable] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[tuple[str, int]] = field(default_factory=list)
    sense: str = "max"
    metadata: dict[str, str] = field(default_factory=dict)

    def add_var(self, name: str, kind: str = CONTINUOUS) -> str:
        if name in self.variables:
            raise ValueError(f"duplicate variable {name}")
        lb = None if kind == FREE else 0
        ub = 1 if kind == BINARY else None
        self.variables[name] = Variable(name, kind, lb, ub)
        return name

    def add_constraint(self, name: str, coeffs: list[tuple[str, int]], sense: str, rhs: int) -> None:
        for var, _ in coeffs:
            if var not in self.variables:
                raise ValueError(f"constraint {name} uses unregistered variable {var}")
        self.constraints.append(Constraint(name, coeffs, sense, rhs))

    def count(self, prefix: str) -> int:
        return sum(1 for v in self.variables if v.startswith(prefix + "_"))


def vertex_tokens(inst: Instance) -> dict[int, str]:
    """LP-safe vertex labels: the names if all are alphanumeric, else ``n<id>``."""
    g = inst.graph
    if all(re.fullmatch(r"[A-Za-z0-9]+", g.names[v]) for v in g.vertices):
        return {v: g.names[v] for v in g.vertices}
    return {v: f"n{v}" for v in g.vertices}


def model_pairs(inst: Instance) -> list[tuple[int, int]]:
    k = inst.k
    vs = [v for v in inst.graph.vertices if v != k]
    if inst.pairs == ORDERED:
        pairs = [(s, t) for s in vs for t in vs if s != t]
    else:
        pairs = [(s, t) for i, s in enumerate(vs) for t in vs[i + 1:]]
    return [p for p in pairs if frozenset(p) not in inst.excluded_pairs]


def estimate_variables(inst: Instance) -> int:
    g, k = inst.graph, inst.k
    arcs = len(g.arcs)
    reduced = sum(1 for u, v, _ in g.arcs if k not in (u, v))
    return g.n + arcs + len(model_pairs(inst)) * (1 + arcs + reduced + g.n - 1)


def instance_checksum(inst: Instance) -> str:
    return hashlib.sha256(write_instance(inst).encode()).hexdigest()[:16]


def build_mip(inst: Instance, strengthen: bool = False, cap: int = DEFAULT_VARIABLE_CAP) -> MipModel:
    size = estimate_variables(inst)
    if size > cap:
        raise SizeLimitError(f"model would have {size} variables, above the cap of {cap}")
    g, k = inst.graph, inst.k
    tok = vertex_tokens(inst)
    vprime = [v for v in g.vertices if v != k]
    reduced_arcs = [(u, v, c) for u, v, c in g.arcs if k not in (u, v)]
    wt = g.weights
    in_arcs: dict[int, list[int]] = {v: [] for v in g.vertices}
    for u, v, _ in g.arcs:
        in_arcs[v].append(u)

    model = MipModel(metadata={"instance": instance_checksum(inst)})
    z = {v: model.add_var(f"z_{tok[v]}", BINARY) for v in g.vertices}
    w = {(u, v): model.add_var(f"w_{tok[u]}_{tok[v]}") for u, v, _ in g.arcs}

    model.add_constraint("budget", [(z[v], 1) for v in g.vertices], ">=", g.n - inst.budget)
    model.add_constraint("key", [(z[k], 1)], "=", 1)
    for u, v, _ in g.arcs:
        e = f"{tok[u]}_{tok[v]}"
        model.add_constraint(f"wz1_{e}", [(w[u, v], 1), (z[u], -1)], "<=", 0)
        model.add_constraint(f"wz2_{e}", [(w[u, v], 1), (z[v], -1)], "<=", 0)
        model.add_constraint(f"wz3_{e}", [(w[u, v], 1), (z[u], -1), (z[v], -1)], ">=", -1)

    objective: list[tuple[str, int]] = []
    for s, t in model_pairs(inst):
        st = f"{tok[s]}_{tok[t]}"
        weight = wt[s] * wt[t]
        flow = model.add_var(f"v_{st}")
        x = {(u, v): model.add_var(f"x_{tok[u]}_{tok[v]}_{st}") for u, v, _ in g.arcs}
        ye = {(u, v): model.add_var(f"ye_{tok[u]}_{tok[v]}_{st}") for u, v, _ in reduced_arcs}
        yv = {i: model.add_var(f"yv_{tok[i]}_{st}", FREE) for i in vprime}
        objective.append((flow, weight))
        objective += [(ye[u, v], -weight * c) for u, v, c in reduced_arcs]

        for i in g.vertices:
            terms = [(x[i, b], 1) for b, _ in g.out_arcs[i]]
            terms += [(x[a, i], -1) for a in in_arcs[i]]
            if i == s:
                terms.append((flow, -1))
            elif i == t:
                terms.append((flow, 1))
            if terms:
                model.add_constraint(f"bal_{tok[i]}_{st}", terms, "=", 0)
        for u, v, c in g.arcs:
            model.add_constraint(f"cap_{tok[u]}_{tok[v]}_{st}", [(x[u, v], 1), (w[u, v], -c)], "<=", 0)
        for u, v, _ in reduced_arcs:
            model.add_constraint(
                f"pot_{tok[u]}_{tok[v]}_{st}",
                [(yv[u], 1), (yv[v], -1), (ye[u, v], 1), (w[u, v], -1)],
                ">=", -1,
            )
        model.add_constraint(f"st_{st}", [(yv[s], -1), (yv[t], 1)], ">=", 1)
    model.objective = objective

    if strengthen:
        for i in sorted(q_set(g, k)):
            model.add_constraint(f"q_{tok[i]}", [(z[i], 1)], "=", 1)
        nk = sorted(g.neighbors[k])
        if nk:
            model.add_constraint("nk", [(z[i], 1) for i in nk], ">=", min(2, len(nk)))
    return model


def _terms(coeffs: list[tuple[str, int]]) -> list[str]:
    lines, cur = [], []
    for var, c in coeffs:
        cur.append(f"{'+' if c >= 0 else '-'} {abs(c)} {var}")
        if len(cur) == _TERMS_PER_LINE:
            lines.append(" ".join(cur))
            cur = []
    if cur:
        lines.append(" ".join(cur))
    return lines


def write_lp(model: MipModel) -> str:
    out = []
    for key, value in sorted(model.metadata.items()):
        out.append(f"\\ {key} {value}")
    out.append("Maximize" if model.sense == "max" else "Minimize")
    obj = _terms(model.objective) or ["0"]
    out.append(f" obj: {obj[0]}")
    out += [f"   {line}" for line in obj[1:]]
    out.append("Subject To")
    for con in model.constraints:
        body = _terms(con.coeffs)
        out.append(f" {con.name}: {body[0]}")
        out += [f"   {line}" for line in body[1:]]
        out.append(f"   {con.sense} {con.rhs}")
    out.append("Bounds")
    for var in model.variables.values():
        if var.kind == FREE:
            out.append(f" {var.name} free")
        elif var.kind == BINARY:
            out.append(f" 0 <= {var.name} <= 1")
    binaries = [v.name for v in model.variables.values() if v.kind == BINARY]
    if binaries:
        out.append("Binary")
        for i in range(0, len(binaries), _TERMS_PER_LINE):
            out.append(" " + " ".join(binaries[i:i + _TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> tuple[dict[str, float], float | None]:
    values: dict[str, float] = {}
    objective = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ParseError("expected 'name value'", lineno)
        try:
            value = float(tok[1])
        except ValueError:
            raise ParseError(f"value {tok[1]!r} is not a number", lineno) from None
        if tok[0] == "objective":
            objective = value
        else:
            values[tok[0]] = value
    return values, objective


def import_solution(text: str, inst: Instance, tol: float = 1e-6) -> Solution:
    """Read ``name value`` lines, rebuild S from the z variables and verify it."""
    values, objective = parse_solution(text)
    tok = vertex_tokens(inst)
    kept = {}
    for v in inst.graph.vertices:
        name = f"z_{tok[v]}"
        if name not in values:
            raise ValidationError(f"solution is missing {name}")
        x = values[name]
        if abs(x - round(x)) > tol or round(x) not in (0, 1):
            raise ValidationError(f"{name} = {x} is not binary")
        kept[v] = round(x) == 1
    if not kept[inst.k]:
        raise ValidationError("the key vertex must stay in the graph (z_k = 1)")
    removed = frozenset(v for v, keep in kept.items() if not keep)
    if len(removed) > inst.budget:
        raise ValidationError(f"removal subset of size {len(removed)} exceeds budget {inst.budget}")
    value = instance_vitality(inst, removed)
    if objective is not None and round(objective) != value:
        raise ValidationError(f"solver objective {objective} does not match recomputed vitality {value}")
    base = instance_vitality(inst)
    return Solution(removed, value, value - base, "mip", 0.0, 2)
