"""Candidate pruning and vitality-preserving graph simplification.

A vertex ``u`` that lacks two internally vertex-disjoint paths to the key
vertex never helps when removed, so it can be dropped from every removal
pool (the Q-set). Components hanging off a cut vertex ``v`` made only of
such vertices can also be collapsed into weighted leaves of ``v``: flows
between the component and the rest of the graph only depend on each
member's max flow to ``v``.
"""

from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass, field

from vimax.flow import FlowNetwork, _Dense
from vimax.graph import Graph, Instance, pair_key

# larger than any path count in a split graph
_UNBOUNDED = 1 << 30


def q_set(g: Graph, k: int) -> frozenset[int]:
    """Vertices without two internally vertex-disjoint paths to ``k``.

    Every vertex ``u`` becomes ``u_in -> u_out`` with capacity 1 (``k``'s own
    split arc is unbounded) and every arc ``(i, j)`` becomes ``i_out -> j_in``
    with capacity 1, so a max flow from ``u_out`` to ``k_in`` counts
    internally disjoint ``u``-``k`` paths; a direct edge counts as one path.
    """
    if k not in g.weights:
        raise ValueError(f"vertex {k} is not in the graph")
    pos = {v: i for i, v in enumerate(g.vertices)}
    arcs = [(2 * pos[v], 2 * pos[v] + 1, _UNBOUNDED if v == k else 1) for v in g.vertices]
    arcs += [(2 * pos[a] + 1, 2 * pos[b], 1) for a, b, c in g.arcs if c > 0]
    net = FlowNetwork(2 * len(pos), arcs)
    sink = 2 * pos[k]
    return frozenset(u for u in g.vertices if u != k and net.max_flow(2 * pos[u] + 1, sink)[0] <= 1)


def candidates(inst: Instance) -> tuple[int, ...]:
    """Vertices a solver may put in a removal subset, ascending."""
    k = inst.k
    q = q_set(inst.graph, k)
    return tuple(v for v in inst.graph.vertices if v != k and v not in q)


def key_neighbor_limit(inst: Instance) -> tuple[frozenset[int], int]:
    """Neighbors of k and how many of them a useful subset may remove.

    Removing more than |N(k)| - 2 neighbors leaves k with at most one
    neighbor, where its vitality is 0; the empty set is always allowed.
    """
    nk = inst.graph.neighbors[inst.k]
    return nk, max(len(nk) - 2, 0)


@dataclass(frozen=True)
class SimplifiedInstance:
    instance: Instance
    origin: dict[int, frozenset[int]]
    excluded_pairs: frozenset[frozenset[int]]
    component_of: dict[int, int] = field(default_factory=dict)


def _bfs_path(g: Graph, src: int, dst: int) -> list[int] | None:
    prev = {src: None}
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            break
        for w in sorted(g.neighbors[u]):
            if w not in prev:
                prev[w] = u
                q.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _component(g: Graph, start: int, blocked: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors[u]:
            if w != blocked and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def simplify(inst: Instance) -> SimplifiedInstance:
    """Collapse Q-components into weighted leaves of their cut vertex.

    Directed graphs are returned unchanged (with a warning). Vertex ids on
    the key side are kept; each merged group keeps its smallest member's
    id and receives a ``+``-joined name.
    """
    g, k = inst.graph, inst.k
    identity = {v: frozenset([v]) for v in g.vertices}
    if not g.symmetric:
        warnings.warn("simplify() only handles symmetric graphs; instance returned unchanged")
        return SimplifiedInstance(inst, identity, inst.excluded_pairs, {})

    q = q_set(g, k)
    dense = _Dense(g)
    processed: set[int] = set()
    component_of: dict[int, int] = {}
    groups: list[tuple[int, list[int], int]] = []  # (cut vertex, members, capacity)
    excluded_groups: list[list[list[int]]] = []

    for u in sorted(q):
        if u in processed:
            continue
        path = _bfs_path(g, u, k)
        if path is None:
            # unreachable from k: contributes nothing to any vitality
            processed |= _component(g, u, blocked=k)
            continue
        v = next(x for x in path[1:] if x not in q)
        t2 = _component(g, u, blocked=v)
        assert k not in t2 and not t2 & processed and t2 <= q
        processed |= t2
        by_cap: dict[int, list[int]] = defaultdict(list)
        for t in sorted(t2):
            by_cap[dense.flow(t, v)[0]].append(t)
            component_of[t] = v
        comp = []
        for cap, members in sorted(by_cap.items(), key=lambda kv: kv[1][0]):
            groups.append((v, members, cap))
            comp.append(members)
        excluded_groups.append(comp)

    merged_away = {t for _, members, _ in groups for t in members}
    keep = [x for x in g.vertices if x not in merged_away]
    names = list(g.names)
    weights = {x: g.weights[x] for x in keep}
    origin = {x: frozenset([x]) for x in keep}
    rep_of: dict[int, int] = {x: x for x in keep}
    arcs = [(a, b, c) for a, b, c in g.arcs if a not in merged_away and b not in merged_away]
    taken = set(g.names)
    for v, members, cap in groups:
        rep = members[0]
        keep.append(rep)
        if len(members) > 1:
            name = "+".join(g.names[t] for t in members)
            while name in taken:
                name += "'"
            taken.add(name)
            names[rep] = name
        weights[rep] = sum(g.weights[t] for t in members)
        origin[rep] = frozenset(members)
        for t in members:
            rep_of[t] = rep
        arcs += [(rep, v, cap), (v, rep, cap)]

    excluded = set()
    for comp in excluded_groups:
        reps = [m[0] for m in comp]
        excluded |= {pair_key(a, b) for i, a in enumerate(reps) for b in reps[i + 1:]}
    for p in inst.excluded_pairs:
        a, b = (rep_of.get(x, x) for x in p)
        if a != b:
            excluded.add(pair_key(a, b))

    new_graph = Graph(tuple(names), tuple(sorted(keep)), tuple(sorted(arcs)), True, weights)
    new_inst = Instance(new_graph, k, min(inst.budget, max(new_graph.n - 1, 0)), inst.pairs,
                        frozenset(excluded))
    return SimplifiedInstance(new_inst, origin, frozenset(excluded), component_of)
