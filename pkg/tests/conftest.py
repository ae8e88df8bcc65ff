"""Shared fixtures: named graphs, resolvers, and the generated corpora."""

from __future__ import annotations

import pytest

import corpora
from syncfactor.graphs import Graph
from syncfactor.resolvers import validate


@pytest.fixture
def m2():
    return Graph(1, [(0, 0), (0, 0)])


@pytest.fixture
def c2x2():
    return Graph(2, [(0, 1), (0, 1), (1, 0), (1, 0)])


@pytest.fixture
def k3():
    return Graph(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])


@pytest.fixture
def w3():
    return Graph(3, [(0, 1), (0, 2), (1, 2), (1, 2), (2, 0), (2, 0)])


@pytest.fixture
def t1():
    return Graph(2, [(0, 0), (0, 0), (0, 1), (1, 0)])


@pytest.fixture
def t2():
    return Graph(2, [(0, 0), (0, 1), (0, 1), (1, 0)])


@pytest.fixture
def t3():
    return Graph(2, [(0, 1), (0, 1), (0, 1), (1, 0)])


@pytest.fixture
def phi_w3(w3, m2):
    """The stable-pair resolver onto M2: colors alternate in edge-id order."""
    return validate(w3, m2, [0, 0, 0], [0, 1, 0, 1, 0, 1])


# -- generated corpora (session-scoped: several suites share them) -------------


@pytest.fixture(scope="session")
def sc_universe_4_8():
    """All strongly connected graphs with <= 4 vertices and <= 8 edges, up to
    isomorphism."""
    import oracles

    return oracles.sc_universe(4, 8)


@pytest.fixture(scope="session")
def sc_universe_4_7(sc_universe_4_8):
    return [g for g in sc_universe_4_8 if g.num_edges <= 7]


@pytest.fixture(scope="session")
def random_sc_corpus():
    return corpora.random_sc_graphs(500, seed=20260819, max_vertices=6, max_edges=12)


@pytest.fixture(scope="session")
def wab_corpus():
    return corpora.wab_nonbunchy_corpus(100, seed=7)


@pytest.fixture(scope="session")
def biresolving_corpus():
    return corpora.biresolving_nonbunchy_corpus(100, seed=11)


@pytest.fixture(scope="session")
def outdeg2_corpus():
    return corpora.random_outdegree2_aperiodic(200, seed=13)
