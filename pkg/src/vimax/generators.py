"""Benchmark instances: grids, connected G(n, m) graphs, the drug network."""

from __future__ import annotations

import math
import random
from collections import deque
from itertools import combinations

from vimax.errors import DataIntegrityError, ParseError
from vimax.graph import Graph, Instance

DRUG_VERTICES = 28
DRUG_EDGES = 40
DRUG_CALLS = 151
DRUG_BOSSES = ("1", "2", "3")
DRUG_BUDGET = 5

MAX_REJECTIONS = 1_000_000


def gen_grid(M: int, seed: int = 0, budget: int | None = None) -> Instance:
    """M x M lattice with capacities uniform on 1..M and a uniform random key."""
    if M < 2:
        raise ValueError("grid side must be at least 2")
    rng = random.Random(seed)
    label = lambda r, c: str(r * M + c + 1)  # noqa: E731
    edges = []
    for r in range(M):
        for c in range(M):
            if c + 1 < M:
                edges.append((label(r, c), label(r, c + 1)))
            if r + 1 < M:
                edges.append((label(r, c), label(r + 1, c)))
    g = Graph.build(
        [(a, b, rng.randint(1, M)) for a, b in edges],
        vertices=[label(r, c) for r in range(M) for c in range(M)],
    )
    key = rng.randrange(M * M)
    return Instance(g, key, M if budget is None else budget)


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            parts -= 1
    return parts == 1


def sample_connected_gnm(n: int, m_edges: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform m-edge labelled graph on n vertices, conditioned on connectivity."""
    if n < 1 or m_edges < n - 1 or m_edges > n * (n - 1) // 2:
        raise ValueError(f"no connected graph with {n} vertices and {m_edges} edges")
    pairs = list(combinations(range(n), 2))
    for _ in range(MAX_REJECTIONS):
        edges = sorted(rng.sample(pairs, m_edges))
        if _connected(n, edges):
            return edges
    raise RuntimeError(f"no connected sample after {MAX_REJECTIONS} attempts")


def gen_gnm(n: int, m_edges: int, cap_max: int, seed: int = 0, budget: int | None = None) -> Instance:
    """Connected G(n, m) with uniform capacities; key = top betweenness vertex."""
    if cap_max < 1:
        raise ValueError("cap_max must be >= 1")
    rng = random.Random(seed)
    edges = sample_connected_gnm(n, m_edges, rng)
    g = Graph.build(
        [(str(u), str(v), rng.randint(1, cap_max)) for u, v in edges],
        vertices=[str(i) for i in range(n)],
    )
    scores = betweenness(g)
    key = min(g.vertices, key=lambda v: (-scores[v], v))
    if budget is None:
        budget = min(math.isqrt(n), n - 1)
    return Instance(g, key, budget)


def betweenness(g: Graph) -> dict[int, float]:
    """Brandes shortest-path betweenness on the unweighted topology.

    On symmetric graphs each unordered pair is counted once.
    """
    succ: dict[int, list[int]] = {v: [] for v in g.vertices}
    for u, v, _ in g.arcs:
        succ[u].append(v)
    score = {v: 0.0 for v in g.vertices}
    for s in g.vertices:
        order = []
        preds: dict[int, list[int]] = {v: [] for v in g.vertices}
        sigma = dict.fromkeys(g.vertices, 0)
        dist = dict.fromkeys(g.vertices, -1)
        sigma[s], dist[s] = 1, 0
        q = deque([s])
        while q:
            u = q.popleft()
            order.append(u)
            for w in succ[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    preds[w].append(u)
        delta = dict.fromkeys(g.vertices, 0.0)
        for w in reversed(order):
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1 + delta[w])
            if w != s:
                score[w] += delta[w]
    if g.symmetric:
        score = {v: x / 2 for v, x in score.items()}
    return score


def load_drug_network(text: str, unit_cap: bool, budget: int = DRUG_BUDGET) -> Instance:
    """Parse ``personA personB call_count`` lines into the trafficking network.

    Repeated pairs (in either order) are summed. The key vertex is left
    unset; pick a boss with ``Instance.with_key``.
    """
    calls: dict[tuple[str, str], int] = {}
    people: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 3:
            raise ParseError("expected 'personA personB call_count'", lineno)
        a, b = tok[0], tok[1]
        try:
            count = int(tok[2])
        except ValueError:
            raise ParseError(f"call count must be an integer, got {tok[2]!r}", lineno) from None
        if a == b or count < 1:
            raise ParseError("a call record needs two people and a positive count", lineno)
        for p in (a, b):
            if p not in people:
                people.append(p)
        pair = (a, b) if (a, b) in calls or (b, a) not in calls else (b, a)
        calls[pair] = calls.get(pair, 0) + count

    total = sum(calls.values())
    if (len(people), len(calls), total) != (DRUG_VERTICES, DRUG_EDGES, DRUG_CALLS):
        raise DataIntegrityError(
            f"drug network needs {DRUG_VERTICES} people, {DRUG_EDGES} edges and "
            f"{DRUG_CALLS} calls; got {len(people)}, {len(calls)} and {total}"
        )
    g = Graph.build(
        [(a, b, 1 if unit_cap else c) for (a, b), c in calls.items()],
        vertices=sorted(people, key=lambda p: (not p.isdigit(), int(p) if p.isdigit() else 0, p)),
    )
    return Instance(g, None, budget)
