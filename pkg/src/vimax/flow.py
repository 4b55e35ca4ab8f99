"""Exact integer max-flow, Gomory-Hu trees and all-pairs vitality."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from vimax.errors import UnsupportedStructureError
from vimax.graph import ORDERED, UNORDERED, Graph, Instance, pair_key, remove_vertices


@dataclass(frozen=True)
class FlowResult:
    value: int
    source_side: frozenset[int]


class FlowNetwork:
    """Residual network over dense positions, reusable across many s-t queries.

    Runs Dinic's algorithm; capacities are restored before every query.
    """

    def __init__(self, n: int, arcs: Iterable[tuple[int, int, int]]):
        self.n = n
        self.head: list[int] = []
        self.cap0: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for u, v, c in arcs:
            self.adj[u].append(len(self.head))
            self.head.append(v)
            self.cap0.append(c)
            self.adj[v].append(len(self.head))
            self.head.append(u)
            self.cap0.append(0)
        self.cap = list(self.cap0)

    def max_flow(self, s: int, t: int) -> tuple[int, list[bool]]:
        """Return (value, reachable-from-s mask of the final residual graph)."""
        head, adj = self.head, self.adj
        cap = self.cap = list(self.cap0)
        n = self.n
        total = 0
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for e in adj[u]:
                    if cap[e] > 0 and level[head[e]] < 0:
                        level[head[e]] = level[u] + 1
                        q.append(head[e])
            if level[t] < 0:
                return total, [lv >= 0 for lv in level]
            it = [0] * n
            while True:
                pushed = self._augment(s, t, level, it)
                if not pushed:
                    break
                total += pushed

    def _augment(self, s: int, t: int, level: list[int], it: list[int]) -> int:
        # iterative DFS along the level graph; returns the bottleneck pushed
        head, adj, cap = self.head, self.adj, self.cap
        path: list[int] = []
        u = s
        while True:
            if u == t:
                f = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= f
                    cap[e ^ 1] += f
                return f
            edges = adj[u]
            advanced = False
            while it[u] < len(edges):
                e = edges[it[u]]
                v = head[e]
                if cap[e] > 0 and level[v] == level[u] + 1:
                    path.append(e)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if not advanced:
                if not path:
                    return 0
                level[u] = -1
                e = path.pop()
                u = head[e ^ 1]
                it[u] += 1


class _Dense:
    """Graph relabelled to positions 0..n-1 with a FlowNetwork attached."""

    def __init__(self, g: Graph):
        self.ids = list(g.vertices)
        self.pos = {v: i for i, v in enumerate(self.ids)}
        self.net = FlowNetwork(len(self.ids), ((self.pos[u], self.pos[v], c) for u, v, c in g.arcs))

    def flow(self, s: int, t: int) -> tuple[int, list[bool]]:
        return self.net.max_flow(self.pos[s], self.pos[t])


def _check_pair(g: Graph, *vs: int) -> None:
    for v in vs:
        if v not in g.weights:
            raise ValueError(f"vertex {v} is not in the graph")
    if len(set(vs)) != len(vs):
        raise ValueError("vertices must be distinct")


def max_flow(g: Graph, s: int, t: int) -> FlowResult:
    _check_pair(g, s, t)
    d = _Dense(g)
    value, mask = d.flow(s, t)
    side = frozenset(d.ids[i] for i, r in enumerate(mask) if r)
    crossing = sum(c for u, v, c in g.arcs if u in side and v not in side)
    assert crossing == value, "max-flow/min-cut mismatch"
    return FlowResult(value, side)


@dataclass(frozen=True)
class GomoryHuTree:
    parent: dict[int, int]
    cut_value: dict[int, int]

    def path_min(self, s: int, t: int) -> int:
        return self.all_pairs()[s][t]

    def all_pairs(self) -> dict[int, dict[int, int]]:
        """Minimum edge value on every tree path, i.e. every pairwise max flow."""
        cached = self.__dict__.get("_all")
        if cached is not None:
            return cached
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if v != p:
                adj[v].append((p, self.cut_value[v]))
                adj[p].append((v, self.cut_value[v]))
        out: dict[int, dict[int, int]] = {}
        for src in self.parent:
            best = {src: None}
            stack = [src]
            while stack:
                u = stack.pop()
                for w, c in adj[u]:
                    if w not in best:
                        b = best[u]
                        best[w] = c if b is None else min(b, c)
                        stack.append(w)
            del best[src]
            out[src] = best
        object.__setattr__(self, "_all", out)
        return out


def gomory_hu(g: Graph) -> GomoryHuTree:
    """Gusfield's construction: |V|-1 max-flow calls, no contractions."""
    if not g.symmetric:
        raise UnsupportedStructureError("Gomory-Hu trees need a symmetric graph")
    d = _Dense(g)
    n = len(d.ids)
    if n == 0:
        return GomoryHuTree({}, {})
    p = [0] * n
    fl = [0] * n
    for s in range(1, n):
        t = p[s]
        value, side = d.net.max_flow(s, t)
        fl[s] = value
        for i in range(n):
            if i != s and side[i] and p[i] == t:
                p[i] = s
        if side[p[t]]:
            p[s] = p[t]
            p[t] = s
            fl[s] = fl[t]
            fl[t] = value
    # position 0 is never swapped away from the root: it is always a sink
    ids = d.ids
    parent = {ids[i]: ids[p[i]] for i in range(n)}
    cut = {ids[i]: fl[i] for i in range(n)}
    cut[ids[0]] = 0
    return GomoryHuTree(parent, cut)


def _pair_flows(g: Graph, vertices: list[int], pairs: str) -> Iterable[tuple[int, int, int]]:
    """Yield (s, t, z_st) for the requested pairs among ``vertices``."""
    if pairs == UNORDERED and not g.symmetric:
        raise ValueError("unordered pair convention needs a symmetric graph")
    if g.symmetric:
        table = gomory_hu(g).all_pairs()
        for i, s in enumerate(vertices):
            row = table[s]
            for t in vertices[i + 1:]:
                z = row[t]
                yield s, t, z
                if pairs == ORDERED:
                    yield t, s, z
        return
    d = _Dense(g)
    for s in vertices:
        for t in vertices:
            if s != t:
                yield s, t, d.flow(s, t)[0]


def _capacity_sum(g: Graph, k: int, pairs: str, excluded: frozenset = frozenset()) -> int:
    vs = [v for v in g.vertices if v != k]
    w = g.weights
    total = 0
    for s, t, z in _pair_flows(g, vs, pairs):
        if z and not (excluded and pair_key(s, t) in excluded):
            total += w[s] * w[t] * z
    return total


def flow_capacity(g: Graph, k: int, pairs: str, excluded: frozenset = frozenset()) -> int:
    """Weighted sum of pairwise max flows over pairs avoiding ``k``."""
    _check_pair(g, k)
    return _capacity_sum(g, k, pairs, excluded)


def vitality(g: Graph, k: int, pairs: str, excluded: frozenset = frozenset()) -> int:
    _check_pair(g, k)
    with_k = _capacity_sum(g, k, pairs, excluded)
    without_k = _capacity_sum(remove_vertices(g, {k}), k, pairs, excluded)
    value = with_k - without_k
    assert value >= 0
    return value


def pair_vitality(g: Graph, k: int, s: int, t: int) -> int:
    _check_pair(g, k, s, t)
    value = _Dense(g).flow(s, t)[0] - _Dense(remove_vertices(g, {k})).flow(s, t)[0]
    assert value >= 0
    return value


def instance_vitality(inst: Instance, removed: Iterable[int] = ()) -> int:
    """All-pairs vitality of the key vertex after deleting ``removed``."""
    removed = frozenset(removed)
    if inst.k in removed:
        raise ValueError("the key vertex cannot be removed")
    g = remove_vertices(inst.graph, removed)
    return vitality(g, inst.k, inst.pairs, inst.excluded_pairs)


def vitality_effect(inst: Instance, removed: Iterable[int]) -> int:
    return instance_vitality(inst, removed) - instance_vitality(inst)
