import itertools
import sys

import numpy as np
import pytest

from coopcrn.instances import line3, mesh5, one_relay, two_route
from coopcrn.topology import CrnTopology


def brute_feasible(topo: CrnTopology, vec) -> bool:
    """Feasibility straight from the definitions, sharing no code with the library."""
    vec = [bool(x) for x in vec]
    for i, j in topo.conflict_edges:
        if vec[i] and vec[j]:
            return False
    L = len(topo.relay_links)
    for n in topo.su_nodes + (topo.pu_dest,):
        load = sum(vec[e] for e, (u, v) in enumerate(topo.relay_links) if u == n or v == n)
        if n in topo.su_links:
            load += vec[L + topo.su_links.index(n)]
        if load > 1:
            return False
    out_src = sum(vec[e] for e, (u, _) in enumerate(topo.relay_links) if u == topo.pu_source)
    return out_src <= 1


def brute_feasible_set(topo: CrnTopology):
    nv = len(topo.relay_links) + len(topo.su_links)
    return [v for v in itertools.product((0, 1), repeat=nv) if brute_feasible(topo, v)]


def random_topology(rng: np.random.Generator, max_vertices: int = 12) -> CrnTopology:
    n_su = int(rng.integers(1, 5))
    su = tuple(range(1, n_su + 1))
    candidates = [("s", l) for l in su] + [(l, "d") for l in su]
    candidates += [(a, b) for a in su for b in su if a != b]
    budget = max_vertices - n_su
    k = int(rng.integers(1, min(budget, len(candidates)) + 1))
    picks = rng.choice(len(candidates), size=k, replace=False)
    relay = tuple(candidates[i] for i in sorted(picks))
    nv = len(relay) + n_su
    pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
    density = rng.uniform(0.0, 0.5)
    edges = frozenset(p for p in pairs if rng.random() < density)
    return CrnTopology(su, "s", "d", relay, su, edges)


@pytest.fixture
def one():
    return one_relay()


@pytest.fixture
def line():
    return line3()


@pytest.fixture
def mesh():
    return mesh5()


@pytest.fixture
def tworoute():
    return two_route()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
