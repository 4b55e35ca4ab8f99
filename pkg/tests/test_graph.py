import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import p3, random_graph, tri
from vimax.errors import ParseError
from vimax.generators import gen_gnm
from vimax.graph import Graph, Instance, parse_instance, remove_vertices, write_instance

P3_TEXT = """\
# path a - k - b
graph undirected
key k
budget 1
edge a k 1
edge k b 1
"""


def test_parse_p3_expands_undirected_edges():
    inst = parse_instance(P3_TEXT)
    g = inst.graph
    assert g.symmetric
    assert len(g.arcs) == 4
    assert g.names[inst.key] == "k"
    assert inst.pairs == "unordered"
    assert inst.canonical() == p3().canonical()


def test_directed_defaults_to_ordered_pairs():
    inst = parse_instance("graph directed\nkey a\nedge a b 2\nedge b a 1\n")
    assert not inst.graph.symmetric
    assert inst.pairs == "ordered"
    assert len(inst.graph.arcs) == 2


def test_unknown_key_vertex():
    with pytest.raises(ParseError, match="unknown key vertex") as err:
        parse_instance("graph undirected\nkey z\nedge a b 1\n")
    assert err.value.line == 2


def test_declared_isolated_key_is_accepted():
    inst = parse_instance("graph undirected\nvertex z\nkey z\nedge a b 1\n")
    assert inst.graph.n == 3


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("graph undirected\nkey a\nedge a b 1\nedge b a 1\n", "duplicate edge", 4),
        ("graph undirected\nkey a\nedge a b x\n", "integer", 3),
        ("graph undirected\nkey a\nedge a b\n", "argument", 3),
        ("graph undirected\nkey a\nfoo a\n", "unknown directive", 3),
        ("graph undirected\nkey a\nedge a a 1\n", "self-loop", 3),
        ("graph sideways\nkey a\n", "directed", 1),
        ("graph undirected\nedge a b 1\n", "missing 'key'", None),
        ("key a\nedge a b 1\n", "missing 'graph", None),
        ("graph undirected\nkey a\nweight q 2\nedge a b 1\n", "unknown vertex", 3),
    ],
)
def test_parse_errors_name_the_line(text, fragment, line):
    with pytest.raises(ParseError, match=fragment) as err:
        parse_instance(text)
    assert err.value.line == line


def test_unordered_pairs_rejected_on_directed_graph():
    with pytest.raises(ParseError, match="symmetric"):
        parse_instance("graph directed\nkey a\npairs unordered\nedge a b 1\n")


@pytest.mark.parametrize("make", [p3, tri])
def test_round_trip_fixtures(make):
    inst = make()
    assert parse_instance(write_instance(inst)).canonical() == inst.canonical()


def test_round_trip_gnm():
    inst = gen_gnm(25, 40, 5, seed=11)
    back = parse_instance(write_instance(inst))
    assert back.canonical() == inst.canonical()
    # dense ids are written in order, so the round trip is exact
    assert back == inst


def test_round_trip_keeps_weights_and_exclusions():
    g = Graph.build([("a", "b", 2), ("b", "c", 1)], weights={"a": 3})
    inst = Instance(g, 1, 1, excluded_pairs=frozenset({frozenset({0, 2})}))
    back = parse_instance(write_instance(inst))
    assert back.canonical() == inst.canonical()
    assert back.graph.weights[0] == 3


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), directed=st.booleans())
def test_round_trip_random(seed, n, directed):
    rng = random.Random(seed)
    g = random_graph(rng, n, rng.randint(0, n * (n - 1) // 2), connected=False)
    if directed:
        arcs = tuple(a for a in g.arcs if rng.random() < 0.7)
        g = Graph(g.names, g.vertices, arcs, False)
    inst = Instance(g, rng.randrange(n), rng.randint(0, n - 1))
    assert parse_instance(write_instance(inst)).canonical() == inst.canonical()


def test_remove_nothing_is_identity(TRI):
    assert remove_vertices(TRI.graph, set()) == TRI.graph


def test_remove_leaf_key_disconnects(P3):
    g = remove_vertices(P3.graph, {P3.key})
    assert {g.names[v] for v in g.vertices} == {"a", "b"}
    assert g.arcs == ()


def test_remove_triangle_vertex(TRI):
    g = remove_vertices(TRI.graph, {TRI.graph.vid("2")})
    assert len(g.arcs) == 2
    assert {(g.names[u], g.names[v]) for u, v, _ in g.arcs} == {("1", "3"), ("3", "1")}
    assert g.symmetric


def test_remove_everything():
    g = remove_vertices(tri().graph, {0, 1, 2})
    assert g.n == 0 and g.arcs == ()


def test_remove_non_vertex_rejected(TRI):
    with pytest.raises(ValueError):
        remove_vertices(TRI.graph, {7})


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12))
def test_removal_is_order_independent(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n, rng.randint(0, n * (n - 1) // 2), connected=False)
    g = Graph(g.names, g.vertices, g.arcs, True, {v: rng.randint(1, 3) for v in g.vertices})
    vs = list(g.vertices)
    rng.shuffle(vs)
    cut = rng.randint(0, n)
    a = set(vs[:cut][: rng.randint(0, cut)])
    b = set(vs[cut:][: rng.randint(0, n - cut)])
    assert remove_vertices(g, a | b) == remove_vertices(remove_vertices(g, a), b)


def test_graph_invariants_enforced():
    names = ("a", "b")
    with pytest.raises(ValueError, match="self-loop"):
        Graph(names, (0, 1), ((0, 0, 1),), False)
    with pytest.raises(ValueError, match="reversal"):
        Graph(names, (0, 1), ((0, 1, 1),), True)
    with pytest.raises(ValueError, match="non-negative"):
        Graph(names, (0, 1), ((0, 1, -1),), False)
    with pytest.raises(ValueError, match=">= 1"):
        Graph(names, (0, 1), (), False, {0: 0})


def test_instance_budget_bounds(TRI):
    with pytest.raises(ValueError, match="budget"):
        TRI.replace(budget=3)
