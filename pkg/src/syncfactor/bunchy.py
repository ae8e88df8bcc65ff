"""The largest bunchy factor reachable by a right resolver.

Among all bunchy graphs a given strongly connected graph maps onto by right
resolvers there is a greatest one; every right resolver onto a bunchy graph
factors through it.  It is obtained by gluing vertices: close the trivial
relation under "related vertices send their out-edges into any fixed class
of the canonical partition to related targets" and quotient by the result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TheoremViolation, UnsupportedInput
from .graphs import Graph, VertexPartition
from .minimal import classify, compute_minimal_factor
from .resolvers import RightResolver, compose


@dataclass(frozen=True)
class BunchyFactorResult:
    """Outcome of :func:`compute_bunchy_factor`.

    Fields
    ------
    graph : Graph
        The input.
    b_graph : Graph
        The maximal bunchy factor.
    classes : VertexPartition
        The canonical vertex map onto ``b_graph``.
    witness : RightResolver
        One right resolver realizing the factor.
    """

    graph: Graph
    b_graph: Graph
    classes: VertexPartition
    witness: RightResolver


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def compute_bunchy_factor(g: Graph) -> BunchyFactorResult:
    """Maximal bunchy factor of a strongly connected graph.

    Classes are numbered by smallest contained vertex.  The quotient's edges
    are emitted per source class in class order, then per minimal-factor
    target vertex in its canonical order, with the multiplicity dictated by
    the minimal factor; this makes the edge ids reproducible.

    Examples
    --------
    >>> k3 = Graph(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    >>> result = compute_bunchy_factor(k3)
    >>> result.b_graph.num_vertices, result.b_graph.num_edges
    (1, 2)
    >>> result.classes.classes
    (0, 0, 0)
    """
    minimal = compute_minimal_factor(g)
    sigma = minimal.partition.classes
    m = minimal.m_graph

    uf = _UnionFind(g.num_vertices)
    changed = True
    while changed:
        changed = False
        groups = {}
        for v in range(g.num_vertices):
            root = uf.find(v)
            for e in g.out_edges(v):
                t = g.target(e)
                groups.setdefault((root, sigma[t]), []).append(t)
        for targets in groups.values():
            first = targets[0]
            for t in targets[1:]:
                if uf.union(first, t):
                    changed = True

    labels = [uf.find(v) for v in range(g.num_vertices)]
    classes = VertexPartition.from_labels(g, labels)
    class_of = classes.classes
    k = classes.num_classes
    blocks = [list(classes.block(c)) for c in range(k)]

    for block in blocks:
        if len({sigma[v] for v in block}) != 1:
            raise TheoremViolation(
                "closure class not contained in one canonical class",
                {"graph": g.to_dict(), "block": block},
            )

    m_multiplicity = {}
    for s, t in m.edges:
        m_multiplicity[(s, t)] = m_multiplicity.get((s, t), 0) + 1

    b_edges = []
    edge_class_groups = {}
    for c in range(k):
        rep = blocks[c][0]
        target_class_of_m_vertex = {}
        for e in g.out_edges(rep):
            t = g.target(e)
            target_class_of_m_vertex[sigma[t]] = class_of[t]
        for j in range(m.num_vertices):
            mult = m_multiplicity.get((sigma[rep], j), 0)
            if mult == 0:
                continue
            if j not in target_class_of_m_vertex:
                raise TheoremViolation(
                    "class representative misses a minimal-factor target",
                    {"graph": g.to_dict(), "class": c, "m_vertex": j},
                )
            d = target_class_of_m_vertex[j]
            edge_class_groups[(c, d)] = list(
                range(len(b_edges), len(b_edges) + mult)
            )
            b_edges.extend([(c, d)] * mult)
    b_graph = Graph(k, b_edges)

    edge_map = [None] * g.num_edges
    for v in range(g.num_vertices):
        by_class = {}
        for e in g.out_edges(v):
            by_class.setdefault(class_of[g.target(e)], []).append(e)
        for d, domain_ids in sorted(by_class.items()):
            group = edge_class_groups.get((class_of[v], d))
            if group is None or len(group) != len(domain_ids):
                raise TheoremViolation(
                    "out-edge counts disagree with the quotient multiplicity",
                    {"graph": g.to_dict(), "vertex": v, "target_class": d},
                )
            for e, a in zip(domain_ids, group):
                edge_map[e] = a
    witness = RightResolver(g, b_graph, class_of, edge_map)

    verdict = classify(b_graph)
    if not verdict.is_bunchy:
        raise TheoremViolation(
            "closure quotient is not bunchy",
            {"graph": g.to_dict(), "quotient": b_graph.to_dict()},
        )
    return BunchyFactorResult(g, b_graph, classes, witness)


def factor_through_bunchy(phi: RightResolver) -> tuple[RightResolver, RightResolver]:
    """Split a right resolver onto a bunchy graph through the bunchy factor.

    Given ``phi`` from G onto a bunchy graph H, returns ``(psi, delta)`` with
    ``psi`` from G onto the maximal bunchy factor B of G, ``delta`` from B
    onto H, and ``compose(delta, psi) == phi``.

    Raises
    ------
    UnsupportedInput
        If the codomain of ``phi`` is not bunchy.
    """
    h = phi.codomain
    if not classify(h).is_bunchy:
        raise UnsupportedInput("factor_through_bunchy requires a bunchy codomain")
    bunchy = compute_bunchy_factor(phi.domain)
    b = bunchy.b_graph
    class_of = bunchy.classes.classes
    k = b.num_vertices

    delta_vertices = [None] * k
    for v in range(phi.domain.num_vertices):
        c = class_of[v]
        image = phi.vertex_map[v]
        if delta_vertices[c] is None:
            delta_vertices[c] = image
        elif delta_vertices[c] != image:
            raise TheoremViolation(
                "resolver onto a bunchy graph split a closure class",
                {"resolver": phi.to_dict(), "class": c},
            )

    b_groups = {}
    for a, (s, t) in enumerate(b.edges):
        b_groups.setdefault((s, t), []).append(a)
    h_groups = {}
    for a, (s, t) in enumerate(h.edges):
        h_groups.setdefault((s, t), []).append(a)

    delta_edges = [None] * b.num_edges
    h_position = {}
    for (s, t), ids in sorted(b_groups.items()):
        image_group = h_groups.get((delta_vertices[s], delta_vertices[t]), [])
        if len(image_group) != len(ids):
            raise TheoremViolation(
                "parallel-edge counts disagree between the bunchy factor and the codomain",
                {"resolver": phi.to_dict(), "b_group": (s, t)},
            )
        for position, (b_edge, h_edge) in enumerate(zip(ids, image_group)):
            delta_edges[b_edge] = h_edge
            h_position[(s, t, h_edge)] = ids[position]

    psi_edges = [None] * phi.domain.num_edges
    for e in range(phi.domain.num_edges):
        s = class_of[phi.domain.source(e)]
        t = class_of[phi.domain.target(e)]
        psi_edges[e] = h_position[(s, t, phi.edge_map[e])]

    psi = RightResolver(phi.domain, b, class_of, psi_edges)
    delta = RightResolver(b, h, delta_vertices, delta_edges)
    if compose(delta, psi) != phi:
        raise TheoremViolation(
            "factorization through the bunchy factor failed to recompose",
            {"resolver": phi.to_dict()},
        )
    return psi, delta
