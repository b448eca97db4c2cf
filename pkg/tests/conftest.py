import random

import networkx as nx
import pytest

from vicsek.tree import validate_tree

ACCEPTANCE = []


def small_trees(max_n):
    """One representative per isomorphism class of trees on 1..max_n vertices."""
    out = [validate_tree(1, [])]
    for n in range(2, max_n + 1):
        for g in nx.nonisomorphic_trees(n):
            out.append(validate_tree(n, sorted(g.edges())))
    return out


def random_tree(n, rng):
    """Uniform-ish random labelled tree: attach each vertex to an earlier one, then relabel."""
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]
    rng.shuffle(edges)
    return validate_tree(n, edges)


def to_nx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edge_list())
    return g


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def trees_up_to_8():
    return small_trees(8)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and (report.when == "call" or report.failed):
        ACCEPTANCE.append((marker.args[0], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
