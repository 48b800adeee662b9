import random
from fractions import Fraction

import pytest

from haargpd.graphspace import MultiGraph, cycle, doubled_edge, path_graph, random_connected_graph, rose

R1 = rose(1)
R2 = rose(2)
D2 = doubled_edge()
C3 = cycle(3)
TREE4 = path_graph(4)

NAMED = {"R1": R1, "R2": R2, "D2": D2, "C3": C3}


def random_graphs(count=3, seed=2024):
    rng = random.Random(seed)
    return [random_connected_graph(rng, max_vertices=5, max_edges=7, min_vertices=2) for _ in range(count)]


def random_positive_nu(rng, n):
    return {u: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for u in range(n)}


@pytest.fixture(params=sorted(NAMED))
def named_graph(request):
    return NAMED[request.param]


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call":
                lines.append((rep.nodeid, outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for nodeid, outcome in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {nodeid.split('::')[-1]}")
