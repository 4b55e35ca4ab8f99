"""Capacitated graphs, VIMAX instances and the instance text format.

Vertices carry dense integer ids assigned at parse time; the external
string names live in ``Graph.names`` (indexed by id). Removing vertices
keeps the surviving ids unchanged, so vertex sets computed on a graph
stay valid on all of its induced subgraphs.

Instance file format (one directive per line)::

    # comment
    graph undirected          # or: directed
    key k
    budget 2
    pairs unordered           # optional
    vertex x                  # optional, declares an isolated vertex
    weight x 3                # optional, merged-vertex weight
    exclude x y               # optional, pair skipped in flow sums
    edge a k 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from vimax.errors import ParseError

Arc = tuple[int, int, int]

ORDERED = "ordered"
UNORDERED = "unordered"
PAIR_CONVENTIONS = (ORDERED, UNORDERED)


@dataclass(frozen=True)
class Graph:
    names: tuple[str, ...]
    vertices: tuple[int, ...]
    arcs: tuple[Arc, ...]
    symmetric: bool
    weights: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        seen = set()
        for u, v, c in self.arcs:
            if u == v:
                raise ValueError(f"self-loop on {self.names[u]}")
            if u not in vset or v not in vset:
                raise ValueError("arc endpoint is not a vertex")
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"capacity must be a non-negative integer, got {c!r}")
            if (u, v) in seen:
                raise ValueError(f"duplicate arc {self.names[u]}->{self.names[v]}")
            seen.add((u, v))
        if self.symmetric:
            caps = {(u, v): c for u, v, c in self.arcs}
            for (u, v), c in caps.items():
                if caps.get((v, u)) != c:
                    raise ValueError("symmetric graph is not closed under arc reversal")
        weights = {v: 1 for v in self.vertices}
        for v, w in self.weights.items():
            if v not in vset:
                raise ValueError("weight given for a non-vertex")
            if w < 1:
                raise ValueError("vertex weights must be >= 1")
            weights[v] = w
        object.__setattr__(self, "weights", weights)

    @classmethod
    def build(
        cls,
        edges: Iterable[tuple[str, str, int]],
        directed: bool = False,
        vertices: Iterable[str] = (),
        weights: Mapping[str, int] | None = None,
    ) -> Graph:
        """Build from name-labelled edges; undirected edges become arc pairs."""
        names: list[str] = []
        index: dict[str, int] = {}

        def vid(name: str) -> int:
            if name not in index:
                index[name] = len(names)
                names.append(name)
            return index[name]

        for name in vertices:
            vid(name)
        arcs = []
        for a, b, c in edges:
            u, v = vid(a), vid(b)
            arcs.append((u, v, c))
            if not directed:
                arcs.append((v, u, c))
        w = {index[n]: x for n, x in (weights or {}).items()}
        return cls(tuple(names), tuple(range(len(names))), tuple(sorted(arcs)), not directed, w)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def out_arcs(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for u, v, c in self.arcs:
            out[u].append((v, c))
        return out

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        """Adjacency ignoring arc direction."""
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v, _ in self.arcs:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    @cached_property
    def capacity(self) -> dict[tuple[int, int], int]:
        return {(u, v): c for u, v, c in self.arcs}

    def edges(self) -> list[Arc]:
        """Undirected edges (u < v) of a symmetric graph, else all arcs."""
        if not self.symmetric:
            return list(self.arcs)
        return [(u, v, c) for u, v, c in self.arcs if u < v]

    def vid(self, name: str) -> int:
        for v in self.vertices:
            if self.names[v] == name:
                return v
        raise KeyError(f"unknown vertex {name!r}")

    def canonical(self):
        """Name-based form for comparisons that ignore id assignment."""
        nm = self.names
        return (
            self.symmetric,
            frozenset(nm[v] for v in self.vertices),
            frozenset((nm[u], nm[v], c) for u, v, c in self.arcs),
            frozenset((nm[v], w) for v, w in self.weights.items()),
        )


def remove_vertices(g: Graph, removed: Iterable[int]) -> Graph:
    """Induced subgraph on the vertices not in ``removed``."""
    removed = frozenset(removed)
    if not removed:
        return g
    missing = removed.difference(g.vertices)
    if missing:
        raise ValueError(f"cannot remove non-vertices {sorted(missing)}")
    keep = tuple(v for v in g.vertices if v not in removed)
    arcs = tuple(a for a in g.arcs if a[0] not in removed and a[1] not in removed)
    weights = {v: g.weights[v] for v in keep}
    return Graph(g.names, keep, arcs, g.symmetric, weights)


def pair_key(s: int, t: int) -> frozenset[int]:
    return frozenset((s, t))


@dataclass(frozen=True)
class Instance:
    """A graph, its key vertex and the removal budget.

    ``key`` may be None only for loaders that leave the choice to the
    caller; every solver requires it. ``excluded_pairs`` holds unordered
    pairs whose flow is skipped (set by graph simplification).
    """

    graph: Graph
    key: int | None
    budget: int
    pairs: str = ""
    excluded_pairs: frozenset[frozenset[int]] = frozenset()

    def __post_init__(self):
        g = self.graph
        pairs = self.pairs or (UNORDERED if g.symmetric else ORDERED)
        object.__setattr__(self, "pairs", pairs)
        if pairs not in PAIR_CONVENTIONS:
            raise ValueError(f"unknown pair convention {pairs!r}")
        if pairs == UNORDERED and not g.symmetric:
            raise ValueError("unordered pair convention needs a symmetric graph")
        if self.key is not None and self.key not in g.vertices:
            raise ValueError("key vertex is not in the graph")
        if self.budget < 0 or (g.n and self.budget > g.n - 1):
            raise ValueError(f"budget must lie in [0, |V|-1], got {self.budget}")
        for p in self.excluded_pairs:
            if len(p) != 2 or not p <= set(g.vertices):
                raise ValueError("excluded pair must name two graph vertices")

    @property
    def k(self) -> int:
        if self.key is None:
            raise ValueError("instance has no key vertex")
        return self.key

    def with_key(self, key: int | str, budget: int | None = None) -> Instance:
        if isinstance(key, str):
            key = self.graph.vid(key)
        return Instance(
            self.graph,
            key,
            self.budget if budget is None else budget,
            self.pairs,
            self.excluded_pairs,
        )

    def replace(self, **changes) -> Instance:
        fields = dict(
            graph=self.graph,
            key=self.key,
            budget=self.budget,
            pairs=self.pairs,
            excluded_pairs=self.excluded_pairs,
        )
        fields.update(changes)
        return Instance(**fields)

    def canonical(self):
        nm = self.graph.names
        return (
            self.graph.canonical(),
            None if self.key is None else nm[self.key],
            self.budget,
            self.pairs,
            frozenset(frozenset(nm[v] for v in p) for p in self.excluded_pairs),
        )


def parse_instance(text: str) -> Instance:
    kind = key_name = pairs = None
    budget = 0
    names: list[str] = []
    index: dict[str, int] = {}
    declared: set[str] = set()
    raw_edges: list[tuple[int, str, str, int]] = []
    raw_weights: list[tuple[int, str, int]] = []
    raw_excl: list[tuple[int, str, str]] = []

    def add(name: str) -> None:
        if name not in index:
            index[name] = len(names)
            names.append(name)

    def as_int(tok: str, lineno: int) -> int:
        try:
            x = int(tok)
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", lineno) from None
        if x < 0:
            raise ParseError(f"expected a non-negative integer, got {x}", lineno)
        return x

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head, args = tok[0], tok[1:]
        arity = {"graph": 1, "key": 1, "budget": 1, "pairs": 1, "vertex": 1,
                 "weight": 2, "exclude": 2, "edge": 3}
        if head not in arity:
            raise ParseError(f"unknown directive {head!r}", lineno)
        if len(args) != arity[head]:
            raise ParseError(f"{head} takes {arity[head]} argument(s)", lineno)
        if head == "graph":
            if args[0] not in ("directed", "undirected"):
                raise ParseError("graph must be 'directed' or 'undirected'", lineno)
            kind = args[0]
        elif head == "key":
            key_name = (args[0], lineno)
        elif head == "budget":
            budget = as_int(args[0], lineno)
        elif head == "pairs":
            if args[0] not in PAIR_CONVENTIONS:
                raise ParseError("pairs must be 'ordered' or 'unordered'", lineno)
            pairs = args[0]
        elif head == "vertex":
            add(args[0])
            declared.add(args[0])
        elif head == "weight":
            raw_weights.append((lineno, args[0], as_int(args[1], lineno)))
        elif head == "exclude":
            raw_excl.append((lineno, args[0], args[1]))
        else:
            a, b = args[0], args[1]
            if a == b:
                raise ParseError(f"self-loop on {a!r}", lineno)
            add(a)
            add(b)
            raw_edges.append((lineno, a, b, as_int(args[2], lineno)))

    if kind is None:
        raise ParseError("missing 'graph directed|undirected' directive")
    if key_name is None:
        raise ParseError("missing 'key' directive")
    directed = kind == "directed"
    arcs: dict[tuple[int, int], int] = {}
    for lineno, a, b, c in raw_edges:
        u, v = index[a], index[b]
        if (u, v) in arcs:
            raise ParseError(f"duplicate edge {a} {b}", lineno)
        arcs[(u, v)] = c
        if not directed:
            arcs[(v, u)] = c
    weights = {}
    for lineno, a, w in raw_weights:
        if a not in index:
            raise ParseError(f"unknown vertex {a!r}", lineno)
        if w < 1:
            raise ParseError("weight must be >= 1", lineno)
        weights[index[a]] = w
    excluded = set()
    for lineno, a, b in raw_excl:
        for x in (a, b):
            if x not in index:
                raise ParseError(f"unknown vertex {x!r}", lineno)
        if a == b:
            raise ParseError("excluded pair needs two distinct vertices", lineno)
        excluded.add(pair_key(index[a], index[b]))
    name, lineno = key_name
    if name not in index:
        raise ParseError(f"unknown key vertex {name!r}", lineno)
    g = Graph(
        tuple(names),
        tuple(range(len(names))),
        tuple(sorted((u, v, c) for (u, v), c in arcs.items())),
        not directed,
        weights,
    )
    try:
        return Instance(g, index[name], budget, pairs or "", frozenset(excluded))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_instance(inst: Instance) -> str:
    g = inst.graph
    nm = g.names
    out = [f"graph {'undirected' if g.symmetric else 'directed'}"]
    if inst.key is not None:
        out.append(f"key {nm[inst.key]}")
    out.append(f"budget {inst.budget}")
    out.append(f"pairs {inst.pairs}")
    for v in g.vertices:
        out.append(f"vertex {nm[v]}")
    for v in g.vertices:
        if g.weights[v] != 1:
            out.append(f"weight {nm[v]} {g.weights[v]}")
    for p in sorted(tuple(sorted(p)) for p in inst.excluded_pairs):
        out.append(f"exclude {nm[p[0]]} {nm[p[1]]}")
    for u, v, c in g.edges():
        out.append(f"edge {nm[u]} {nm[v]} {c}")
    return "\n".join(out) + "\n"
