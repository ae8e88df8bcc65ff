"""The least right-resolving factor of a graph, and bunchiness classification.

Every strongly connected graph has a unique smallest factor reachable by
right resolvers.  It is computed here by the classic degree-refinement loop:
start with all vertices in one class and repeatedly split classes by the
vector of out-edge counts into each current class until nothing moves.  The
resulting partition is the coarsest equitable one; its quotient is the
minimal factor and the quotient map's vertex part is canonical (it does not
depend on any choices, only the edge assignment does).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotStronglyConnected, TheoremViolation, UnsupportedInput
from .graphs import Graph, VertexPartition, is_strongly_connected
from .resolvers import RightResolver


def _refine(num_vertices, targets_of):
    """Coarsest equitable partition by iterated splitting.

    ``targets_of[v]`` lists the target of every out-edge of ``v`` (with
    multiplicity).  Returns a list of (round_created, sorted members) in a
    deterministic order; round 0 is the initial single class.
    """
    classes = [(0, list(range(num_vertices)))]
    class_of = [0] * num_vertices
    round_no = 0
    while True:
        round_no += 1
        changed = False
        new_classes = []
        for created, members in classes:
            signatures = {}
            for v in members:
                counts = [0] * len(classes)
                for t in targets_of[v]:
                    counts[class_of[t]] += 1
                signatures.setdefault(tuple(counts), []).append(v)
            if len(signatures) == 1:
                new_classes.append((created, members))
            else:
                changed = True
                groups = sorted(signatures.values(), key=lambda g: g[0])
                for group in groups:
                    new_classes.append((round_no, group))
        classes = new_classes
        for idx, (_, members) in enumerate(classes):
            for v in members:
                class_of[v] = idx
        if not changed:
            return classes


def _is_refinement_discrete(g):
    targets = [[g.target(e) for e in g.out_edges(v)] for v in range(g.num_vertices)]
    return len(_refine(g.num_vertices, targets)) == g.num_vertices


@dataclass(frozen=True)
class MinimalFactorResult:
    """Outcome of :func:`compute_minimal_factor`.

    Fields
    ------
    graph : Graph
        The input.
    m_graph : Graph
        The minimal factor.
    partition : VertexPartition
        The canonical vertex map onto ``m_graph``, as classes of ``graph``.
    witness : RightResolver
        One right resolver realizing the factor (its edge assignment pairs
        each vertex's out-edges with the parallel codomain edges in edge-id
        order; any other pairing works equally well).
    """

    graph: Graph
    m_graph: Graph
    partition: VertexPartition
    witness: RightResolver


def compute_minimal_factor(g: Graph) -> MinimalFactorResult:
    """Minimal right-resolving factor of a strongly connected graph.

    Classes of the returned partition are numbered by (refinement round in
    which the class appeared, smallest contained vertex), so repeated runs
    are identical.

    Examples
    --------
    >>> w3 = Graph(3, [(0, 1), (0, 2), (1, 2), (1, 2), (2, 0), (2, 0)])
    >>> result = compute_minimal_factor(w3)
    >>> result.m_graph.num_vertices, result.m_graph.num_edges
    (1, 2)
    >>> result.partition.classes
    (0, 0, 0)
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnected("the minimal factor is computed on strongly connected graphs")
    targets = [[g.target(e) for e in g.out_edges(v)] for v in range(g.num_vertices)]
    classes = _refine(g.num_vertices, targets)
    order = sorted(range(len(classes)), key=lambda i: (classes[i][0], min(classes[i][1])))
    class_of = [0] * g.num_vertices
    blocks = []
    for new_index, old_index in enumerate(order):
        members = sorted(classes[old_index][1])
        blocks.append(members)
        for v in members:
            class_of[v] = new_index
    k = len(blocks)

    counts = []
    for members in blocks:
        reference = None
        for v in members:
            row = [0] * k
            for t in targets[v]:
                row[class_of[t]] += 1
            if reference is None:
                reference = row
            elif row != reference:
                raise TheoremViolation(
                    "refinement fixed point is not equitable",
                    {"graph": g.to_dict(), "vertex": v},
                )
        counts.append(reference)

    m_edges = []
    for c in range(k):
        for d in range(k):
            m_edges.extend([(c, d)] * counts[c][d])
    m_graph = Graph(k, m_edges)

    partition = VertexPartition(g, class_of)
    witness = _groupwise_witness(g, m_graph, class_of)
    return MinimalFactorResult(g, m_graph, partition, witness)


def _groupwise_witness(g, h, class_of):
    """Right resolver with vertex map ``class_of``, pairing groups in id order."""
    edge_map = [None] * g.num_edges
    codomain_groups = {}
    for a, (s, t) in enumerate(h.edges):
        codomain_groups.setdefault((s, t), []).append(a)
    for v in range(g.num_vertices):
        by_target = {}
        for e in g.out_edges(v):
            by_target.setdefault(class_of[g.target(e)], []).append(e)
        for d, domain_ids in sorted(by_target.items()):
            for e, a in zip(domain_ids, codomain_groups[(class_of[v], d)]):
                edge_map[e] = a
    return RightResolver(g, h, class_of, edge_map)


def minimal_iso(m1: Graph, m2: Graph) -> bool:
    """Whether two minimal graphs are isomorphic, by joint refinement.

    Runs the refinement loop on the disjoint union; for minimal inputs the
    result pairs each vertex of one graph with at most one of the other, and
    the graphs are isomorphic exactly when the pairing is perfect and
    preserves all edge multiplicities.

    Raises
    ------
    UnsupportedInput
        If either input is not refinement-stable (i.e. not minimal); this
        test is only meaningful for minimal graphs.
    """
    for m in (m1, m2):
        if not _is_refinement_discrete(m):
            raise UnsupportedInput("minimal_iso requires refinement-stable (minimal) inputs")
    if m1.num_vertices != m2.num_vertices or m1.num_edges != m2.num_edges:
        return False
    n1 = m1.num_vertices
    total = n1 + m2.num_vertices
    targets = [[m1.target(e) for e in m1.out_edges(v)] for v in range(n1)]
    targets += [
        [m2.target(e) + n1 for e in m2.out_edges(v)] for v in range(m2.num_vertices)
    ]
    classes = _refine(total, targets)
    pairing = {}
    for _, members in classes:
        left = [v for v in members if v < n1]
        right = [v - n1 for v in members if v >= n1]
        if len(left) != 1 or len(right) != 1:
            return False
        pairing[left[0]] = right[0]
    image = sorted((pairing[s], pairing[t]) for s, t in m1.edges)
    return image == sorted(m2.edges)


@dataclass(frozen=True)
class BunchyClass:
    """Bunchiness classification of a graph relative to its minimal factor.

    A graph is *bunchy* when no vertex has two distinct followers in the same
    class of the canonical partition; *almost bunchy* when, for every pair of
    minimal-factor vertices (I, J), at most one vertex over I has two or more
    distinct followers over J; and *weakly almost bunchy* when, for every
    (I, J) joined by at least two parallel minimal-factor edges, at most one
    vertex over I spreads those edges over the full count of distinct
    followers.  The failure fields hold a witness tuple when a level fails.
    """

    is_bunchy: bool
    is_almost_bunchy: bool
    is_weakly_almost_bunchy: bool
    bunchy_failure: tuple | None = None
    almost_failure: tuple | None = None
    wab_failure: tuple | None = None


def classify(g: Graph) -> BunchyClass:
    """Classify ``g`` as bunchy / almost bunchy / weakly almost bunchy.

    Examples
    --------
    >>> c2x2 = Graph(2, [(0, 1), (0, 1), (1, 0), (1, 0)])
    >>> classify(c2x2).is_bunchy
    True
    >>> k3 = Graph(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    >>> (classify(k3).is_bunchy, classify(k3).is_weakly_almost_bunchy)
    (False, False)
    """
    result = compute_minimal_factor(g)
    class_of = result.partition.classes
    k = result.m_graph.num_vertices
    multiplicity = [[0] * k for _ in range(k)]
    for s, t in result.m_graph.edges:
        multiplicity[s][t] += 1

    spread = [
        {d: len({t for t in g.followers(v) if class_of[t] == d}) for d in range(k)}
        for v in range(g.num_vertices)
    ]

    bunchy_failure = None
    for v in range(g.num_vertices):
        for d in range(k):
            if spread[v][d] >= 2:
                targets = sorted({t for t in g.followers(v) if class_of[t] == d})
                bunchy_failure = (v, targets[0], targets[1])
                break
        if bunchy_failure:
            break

    almost_failure = None
    wab_failure = None
    for i in range(k):
        over_i = [v for v in range(g.num_vertices) if class_of[v] == i]
        for j in range(k):
            wide = [v for v in over_i if spread[v][j] >= 2]
            if len(wide) >= 2 and almost_failure is None:
                almost_failure = (i, j, wide[0], wide[1])
            if multiplicity[i][j] >= 2:
                full = [v for v in over_i if spread[v][j] == multiplicity[i][j]]
                if len(full) >= 2 and wab_failure is None:
                    wab_failure = (i, j, full[0], full[1])

    is_bunchy = bunchy_failure is None
    is_almost = almost_failure is None
    is_wab = wab_failure is None
    if is_bunchy and not is_almost or is_almost and not is_wab:
        raise TheoremViolation(
            "bunchiness hierarchy violated", {"graph": g.to_dict()}
        )
    return BunchyClass(is_bunchy, is_almost, is_wab, bunchy_failure, almost_failure, wab_failure)
