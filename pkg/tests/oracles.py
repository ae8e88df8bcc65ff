"""Independent brute-force oracles the test suite checks production code against.

Everything here is deliberately written from the definitions, by a different
route than the package takes: stability is decided by *forward* reachability
per pair (the package runs two backward closures over the whole pair graph),
synchronization by subset BFS, the coarsest equitable partition by
enumerating all vertex partitions, and period/connectivity via networkx.
Slow is fine; these only ever run at desk scale.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx

from syncfactor.graphs import Graph, canonical_form, is_strongly_connected


# -- pair-level stability (forward, per pair) ---------------------------------


def _pair_forward_moves(phi, pair):
    """Successor pairs of one unordered same-fiber pair, one per codomain edge."""
    image = phi.vertex_map[pair[0]]
    moves = []
    for e in phi.codomain.out_edges(image):
        a = phi.step(pair[0], e)
        b = phi.step(pair[1], e)
        moves.append(None if a == b else (min(a, b), max(a, b)))
    return moves


def oracle_pair_synchronizable(phi, pair):
    """Forward BFS from the pair; synchronizable iff some word collapses it."""
    if pair[0] == pair[1]:
        return True
    start = (min(pair), max(pair))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for q in _pair_forward_moves(phi, p):
                if q is None:
                    return True
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return False


def oracle_stable_pairs(phi):
    """Stable pairs straight from the definition.

    A pair is stable iff every pair forward-reachable from it (any prefix
    word u) is still synchronizable (some continuation v collapses it).
    """
    stable = set()
    for fiber in phi.fibers:
        for pair in itertools.combinations(sorted(fiber), 2):
            reachable = {pair}
            frontier = [pair]
            ok = True
            while frontier and ok:
                nxt = []
                for p in frontier:
                    for q in _pair_forward_moves(phi, p):
                        if q is not None and q not in reachable:
                            reachable.add(q)
                            nxt.append(q)
                frontier = nxt
            for p in reachable:
                if not oracle_pair_synchronizable(phi, p):
                    ok = False
                    break
            if ok:
                stable.add(pair)
    return frozenset(stable)


def oracle_is_synchronizing(phi):
    """Subset-BFS form: every fiber collapses to a singleton under some word."""
    for vertex, fiber in enumerate(phi.fibers):
        start = frozenset(fiber)
        if len(start) == 1:
            continue
        seen = {(vertex, start)}
        frontier = [(vertex, start)]
        collapsed = False
        while frontier and not collapsed:
            nxt = []
            for at, subset in frontier:
                for e in phi.codomain.out_edges(at):
                    image = frozenset(phi.step(v, e) for v in subset)
                    if len(image) == 1:
                        collapsed = True
                        break
                    state = (phi.codomain.target(e), image)
                    if state not in seen:
                        seen.add(state)
                        nxt.append(state)
                if collapsed:
                    break
            frontier = nxt
        if not collapsed:
            return False
    return True


# -- graph-level oracles -------------------------------------------------------


def _to_networkx(g: Graph):
    m = nx.MultiDiGraph()
    m.add_nodes_from(range(g.num_vertices))
    m.add_edges_from(g.edges)
    return m


def oracle_strongly_connected(g: Graph) -> bool:
    return nx.is_strongly_connected(_to_networkx(g))


def oracle_period(g: Graph) -> int:
    """gcd of all simple cycle lengths (closed walks decompose into them)."""
    lengths = [len(c) for c in nx.simple_cycles(_to_networkx(g))]
    return math.gcd(*lengths) if lengths else 0


def set_partitions(n):
    """All partitions of range(n) as canonical label tuples (labels[0] == 0)."""
    if n == 0:
        yield ()
        return

    def extend(labels, used):
        i = len(labels)
        if i == n:
            yield tuple(labels)
            return
        for c in range(used + 1):
            yield from extend(labels + [c], used)
        yield from extend(labels + [used + 1], used + 1)

    yield from extend([0], 0)


def is_equitable(g: Graph, labels) -> bool:
    """Every two same-class vertices have identical per-class out-edge counts."""
    k = max(labels) + 1
    signature = {}
    for v in range(g.num_vertices):
        counts = [0] * k
        for e in g.out_edges(v):
            counts[labels[g.target(e)]] += 1
        if labels[v] in signature:
            if signature[labels[v]] != counts:
                return False
        else:
            signature[labels[v]] = counts
    return True


def quotient_graph(g: Graph, labels) -> Graph:
    """Quotient of an equitable partition: per-class common counts as edges."""
    k = max(labels) + 1
    counts = {}
    for v in range(g.num_vertices):
        for e in g.out_edges(v):
            key = (labels[v], labels[g.target(e)])
            counts[key] = counts.get(key, 0) + 1
    edges = []
    class_size = [labels.count(c) for c in range(k)]
    for (c, d), total in sorted(counts.items()):
        assert total % class_size[c] == 0
        edges.extend([(c, d)] * (total // class_size[c]))
    return Graph(k, edges)


def oracle_coarsest_equitable(g: Graph):
    """Coarsest equitable partition by exhausting all vertex partitions."""
    best = None
    for labels in set_partitions(g.num_vertices):
        if is_equitable(g, labels):
            k = max(labels) + 1
            if best is None or k < best[0]:
                best = (k, [labels])
            elif k == best[0]:
                best[1].append(labels)
    assert best is not None and len(best[1]) == 1, "coarsest partition not unique"
    return best[1][0]


def exists_right_resolver(g: Graph, h: Graph) -> bool:
    """Whether some right resolver g -> h exists, checked from scratch.

    A vertex map admits one iff it is surjective and, per vertex, the
    out-edge counts into each class match the image vertex's counts exactly
    (groupwise bijections then exist).
    """
    for vmap in itertools.product(range(h.num_vertices), repeat=g.num_vertices):
        if len(set(vmap)) != h.num_vertices:
            continue
        ok = True
        for v in range(g.num_vertices):
            mine = {}
            for e in g.out_edges(v):
                d = vmap[g.target(e)]
                mine[d] = mine.get(d, 0) + 1
            theirs = {}
            for a in h.out_edges(vmap[v]):
                d = h.target(a)
                theirs[d] = theirs.get(d, 0) + 1
            if mine != theirs:
                ok = False
                break
        if ok:
            return True
    return False


# -- exhaustive small-graph universe -------------------------------------------


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sc_universe(max_vertices, max_edges):
    """One representative per isomorphism class of strongly connected graphs.

    Enumerates labeled graphs by out-degree composition and per-vertex target
    multisets, prunes by in-coverage, keeps the strongly connected ones, and
    deduplicates by canonical form.
    """
    seen = set()
    out = []
    for n in range(1, max_vertices + 1):
        for e in range(0 if n == 1 else n, max_edges + 1):
            degs = [(e,)] if n == 1 else list(_compositions(e, n))
            for deg in degs:
                pools = [
                    list(itertools.combinations_with_replacement(range(n), d))
                    for d in deg
                ]
                for rows in itertools.product(*pools):
                    if n > 1:
                        covered = set()
                        for row in rows:
                            covered.update(row)
                        if len(covered) < n:
                            continue
                    g = Graph(n, [(v, t) for v in range(n) for t in rows[v]])
                    if not is_strongly_connected(g):
                        continue
                    key = canonical_form(g)
                    if key not in seen:
                        seen.add(key)
                        out.append(g)
    return out


def same_partition(labels_a, labels_b):
    """True when two label vectors induce the same partition of the indices."""
    a_of, b_of = {}, {}
    for a, b in zip(labels_a, labels_b):
        if a_of.setdefault(a, b) != b or b_of.setdefault(b, a) != a:
            return False
    return True
