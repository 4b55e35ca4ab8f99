import os
import random
from pathlib import Path

import networkx as nx
import pytest

from vimax.graph import Graph, Instance

DATA = Path(__file__).parent / "data"


def p3() -> Instance:
    g = Graph.build([("a", "k", 1), ("k", "b", 1)])
    return Instance(g, g.vid("k"), 1)


def tri() -> Instance:
    g = Graph.build([("1", "2", 1), ("2", "3", 1), ("1", "3", 1)])
    return Instance(g, g.vid("1"), 1)


@pytest.fixture
def P3():
    return p3()


@pytest.fixture
def TRI():
    return tri()


def random_graph(rng: random.Random, n: int, m: int, cap_max: int = 3, connected: bool = True) -> Graph:
    """Symmetric graph with vertices '0'..'n-1' drawn with networkx."""
    m = min(m, n * (n - 1) // 2)
    if connected:
        m = max(m, n - 1)
    while True:
        G = nx.gnm_random_graph(n, m, seed=rng.randrange(2**31))
        if not connected or nx.is_connected(G):
            break
    return Graph.build(
        [(str(u), str(v), rng.randint(1, cap_max)) for u, v in G.edges()],
        vertices=[str(i) for i in range(n)],
    )


def random_instance(seed: int, n: int, m: int, cap_max: int = 3, budget: int = 2) -> Instance:
    rng = random.Random(seed)
    g = random_graph(rng, n, m, cap_max)
    return Instance(g, rng.randrange(n), min(budget, n - 1))


def drug_network_path() -> Path | None:
    path = Path(os.environ.get("VIMAX_DRUG_NETWORK", DATA / "drug_network.txt"))
    return path if path.exists() else None


DRUG_MISSING = (
    "drug-network call records not found: put them at tests/data/drug_network.txt "
    "or point VIMAX_DRUG_NETWORK at the file"
)

# criterion number -> (PASS/FAIL, title, detail), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[number]
        line = f"[{status}] {number:2d}. {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
