"""Seeded corpus generators shared by the unit and acceptance suites."""

from __future__ import annotations

import itertools
import random

from syncfactor.construct import find_biresolver
from syncfactor.graphs import Graph, is_strongly_connected, period
from syncfactor.minimal import classify

#: Minimal bases used by the structured corpus generators.  Every entry has
#: at least one multiplicity-2 cell so non-bunchy extensions exist.
M2 = Graph(1, [(0, 0), (0, 0)])
M3 = Graph(1, [(0, 0), (0, 0), (0, 0)])
T1 = Graph(2, [(0, 0), (0, 0), (0, 1), (1, 0)])
T2 = Graph(2, [(0, 0), (0, 1), (0, 1), (1, 0)])
T3 = Graph(2, [(0, 1), (0, 1), (0, 1), (1, 0)])


def random_sc_graph(rng: random.Random, max_vertices=6, max_edges=12) -> Graph:
    """One random strongly connected graph within the bounds."""
    while True:
        n = rng.randint(1, max_vertices)
        e = n + rng.randint(0, max_edges - n)
        if n == 1:
            degs = [max(e, 1)]
        else:
            cuts = sorted(rng.sample(range(1, e), n - 1))
            degs = [b - a for a, b in zip([0] + cuts, cuts + [e])]
        edges = [(v, rng.randrange(n)) for v in range(n) for _ in range(degs[v])]
        g = Graph(n, edges)
        if is_strongly_connected(g):
            return g


def random_sc_graphs(count, seed, max_vertices=6, max_edges=12):
    rng = random.Random(seed)
    return [random_sc_graph(rng, max_vertices, max_edges) for _ in range(count)]


def random_outdegree2_aperiodic(count, seed, max_vertices=8):
    """Strongly connected aperiodic graphs with every out-degree exactly 2."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_vertices)
        edges = [(v, rng.randrange(n)) for v in range(n) for _ in range(2)]
        g = Graph(n, edges)
        if is_strongly_connected(g) and period(g) == 1:
            out.append(g)
    return out


def _structured_wab_attempt(rng: random.Random) -> Graph:
    """One attempt at a weakly-almost-bunchy non-bunchy extension.

    Per base cell with multiplicity >= 2, a single anchor vertex gets two
    distinct targets (the only candidate for full spread) and every other
    fiber member sends the whole parallel bundle to one vertex.
    """
    m = rng.choice([M2, M3, T1, T2, T3])
    k = m.num_vertices
    mult = [[0] * k for _ in range(k)]
    for s, t in m.edges:
        mult[s][t] += 1
    extra = rng.randint(1, 4)
    n = k + extra
    vmap = list(range(k)) + [rng.randrange(k) for _ in range(extra)]
    rng.shuffle(vmap)
    fibers = [[v for v in range(n) if vmap[v] == i] for i in range(k)]
    if any(not f for f in fibers):
        return None
    # A spread-2 anchor needs a target fiber with at least two vertices.
    if not any(
        mult[i][j] >= 2 and len(fibers[j]) >= 2 for i in range(k) for j in range(k)
    ):
        return None
    anchors = {
        (i, j): rng.choice(fibers[i])
        for i in range(k)
        for j in range(k)
        if mult[i][j] >= 2
    }
    edges = []
    for v in range(n):
        i = vmap[v]
        for j in range(k):
            if not mult[i][j]:
                continue
            if mult[i][j] >= 2 and anchors[(i, j)] == v and len(fibers[j]) >= 2:
                first, second = rng.sample(fibers[j], 2)
                targets = [first, second] + [first] * (mult[i][j] - 2)
            else:
                targets = [rng.choice(fibers[j])] * mult[i][j]
            edges.extend((v, t) for t in targets)
    return Graph(n, edges)


def wab_nonbunchy_corpus(count, seed):
    """At least ``count`` weakly-almost-bunchy non-bunchy graphs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = _structured_wab_attempt(rng)
        if g is None or not is_strongly_connected(g):
            continue
        verdict = classify(g)
        if verdict.is_weakly_almost_bunchy and not verdict.is_bunchy:
            out.append(g)
    return out


def complete_digraph(n) -> Graph:
    return Graph(n, [(s, t) for s in range(n) for t in range(n) if s != t])


def _permutation_union_attempt(rng: random.Random) -> Graph:
    """Extension built from one random bijection per base edge.

    Equal fiber sizes plus per-edge bijections make every per-class in-count
    match the base's multiplicities, so a bi-resolver onto the base exists by
    construction; whether one exists onto the bunchy factor is checked by the
    caller.
    """
    m = rng.choice([M2, M3, T1])
    k = m.num_vertices
    size = rng.randint(2, 4)
    n = k * size
    order = list(range(n))
    rng.shuffle(order)
    fibers = [order[i * size : (i + 1) * size] for i in range(k)]
    edges = []
    for s, t in m.edges:
        image = list(fibers[t])
        rng.shuffle(image)
        edges.extend(zip(fibers[s], image))
    return Graph(n, sorted(edges))


def biresolving_nonbunchy_corpus(count, seed):
    """At least ``count`` (graph, bi-resolver onto the bunchy factor) pairs.

    Seeds with complete digraphs, then fills with permutation-union
    extensions filtered to be non-bunchy and to actually admit a bi-resolver.
    """
    rng = random.Random(seed)
    out = []
    for g in (complete_digraph(3), complete_digraph(4)):
        phi = find_biresolver(g)
        assert phi is not None
        out.append((g, phi))
    while len(out) < count:
        g = _permutation_union_attempt(rng)
        if not is_strongly_connected(g) or classify(g).is_bunchy:
            continue
        phi = find_biresolver(g)
        if phi is None:
            continue
        out.append((g, phi))
    return out


def enumerate_small_resolvers(g, h, bound=5_000):
    """All right resolvers g -> h when few, else a deterministic sample.

    The acceptance suites quantify over "enumerated resolvers"; graphs whose
    resolver count explodes past ``bound`` are covered by a seeded sample of
    the same per-group permutation space instead.
    """
    from syncfactor.experiments import enumerate_right_resolvers
    from syncfactor.errors import DeskScaleExceeded

    try:
        return enumerate_right_resolvers(g, h, bound=bound)
    except DeskScaleExceeded:
        from syncfactor.resolvers import random_right_resolver
        from syncfactor.minimal import compute_minimal_factor

        sigma = list(compute_minimal_factor(g).partition.classes)
        return [random_right_resolver(g, h, sigma, seed) for seed in range(64)]


def all_equitable_quotients(g):
    """Every (labels, quotient) pair over the equitable partitions of g."""
    import oracles

    for labels in oracles.set_partitions(g.num_vertices):
        if oracles.is_equitable(g, labels):
            yield labels, oracles.quotient_graph(g, labels)
