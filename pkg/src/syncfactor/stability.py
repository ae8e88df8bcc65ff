"""Stability analysis of right resolvers.

Two same-fiber vertices are *synchronizable* when some codomain word routes
them to a common vertex, and *stable* when every codomain word leaving their
shared image keeps them synchronizable.  Stability is an equivalence on each
fiber and is respected by following edges; the quotient by its classes is
again a graph and splits the resolver into a synchronizing part followed by
a part with trivial stability.  When those classes are the whole fibers the
resolver itself is called synchronizing.

Everything here works on the *pair graph*: nodes are unordered same-fiber
pairs plus an absorbing "collapsed" state, and each codomain edge moves a
pair by the unique lifts at its two members.  One backward search from the
collapsed state finds all synchronizable pairs together with shortest
collapse words; a second backward search from the non-synchronizable pairs
finds every pair that can be ruined, i.e. the non-stable ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (
    DeskScaleExceeded,
    NotStronglyConnected,
    TheoremViolation,
    UnsupportedInput,
)
from .graphs import Graph, Path, VertexPartition, is_strongly_connected
from .resolvers import RightResolver, compose, find_biresolving_edge_assignment

#: maximum domain size for the synchronized-set machinery
MSS_VERTEX_BOUND = 12
#: maximum fiber size for the synchronized-set machinery
MSS_FIBER_BOUND = 8


def _pair(a, b):
    return (a, b) if a < b else (b, a)


def _pair_nodes(phi):
    nodes = []
    for fiber in phi.fibers:
        for i in range(len(fiber)):
            for j in range(i + 1, len(fiber)):
                nodes.append((fiber[i], fiber[j]))
    return nodes


def _pair_moves(phi, nodes):
    """Forward and reverse adjacency of the pair graph.

    Returns ``(succ, rev)`` where ``succ[p]`` lists ``(codomain_edge, q)``
    with ``q`` the successor pair or ``None`` for the collapsed state, and
    ``rev[q]`` lists ``(codomain_edge, p)`` for each such move.
    """
    h = phi.codomain
    succ = {}
    rev = {None: []}
    for p in nodes:
        rev[p] = []
    for p in nodes:
        a, b = p
        image = phi.vertex_map[a]
        moves = []
        for x in h.out_edges(image):
            na = phi.step(a, x)
            nb = phi.step(b, x)
            q = None if na == nb else _pair(na, nb)
            moves.append((x, q))
        succ[p] = moves
    for p in nodes:
        for x, q in succ[p]:
            rev[q].append((x, p))
    return succ, rev


def _backward_closure(rev, sources):
    """All keys of ``rev`` from which some source is reachable forward.

    ``sources`` seeds the search; the result maps each found node to its
    BFS predecessor move ``(edge, successor)`` (``None`` for seeds).  Moves
    are explored in the deterministic order ``rev`` was built in, so the
    recorded shortest witnesses are reproducible.
    """
    found = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        cur = queue.popleft()
        for x, p in rev[cur]:
            if p not in found:
                found[p] = (x, cur)
                queue.append(p)
    return found


def _word_to_sources(found, node):
    word = []
    while found[node] is not None:
        x, node = found[node]
        word.append(x)
    return tuple(word)


def pair_synchronizable(phi: RightResolver, pair: tuple[int, int]):
    """Whether a same-fiber pair can be routed together, with a witness.

    Returns ``(True, word)`` with a shortest collapsing word (codomain edge
    ids starting at the pair's image) or ``(False, None)``.

    Examples
    --------
    >>> w3 = Graph(3, [(0, 1), (0, 2), (1, 2), (1, 2), (2, 0), (2, 0)])
    >>> m2 = Graph(1, [(0, 0), (0, 0)])
    >>> phi = RightResolver(w3, m2, [0, 0, 0], [0, 1, 0, 1, 0, 1])
    >>> pair_synchronizable(phi, (0, 1))
    (True, (1,))
    """
    a, b = pair
    g = phi.domain
    if a == b:
        if not 0 <= a < g.num_vertices:
            raise UnsupportedInput("pair out of range")
        return True, ()
    if not (0 <= a < g.num_vertices and 0 <= b < g.num_vertices):
        raise UnsupportedInput("pair out of range")
    if phi.vertex_map[a] != phi.vertex_map[b]:
        raise UnsupportedInput("pair_synchronizable needs a same-fiber pair")
    nodes = _pair_nodes(phi)
    _, rev = _pair_moves(phi, nodes)
    found = _backward_closure(rev, [None])
    key = _pair(a, b)
    if key not in found:
        return False, None
    return True, _word_to_sources(found, key)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Outcome of :func:`compute_stability`.

    Fields
    ------
    resolver : RightResolver
        The analyzed resolver.
    stable_pairs : frozenset
        All stable unordered same-fiber pairs ``(a, b)`` with ``a < b``.
    partition : VertexPartition
        Stability classes of the domain (classes numbered by smallest
        member; vertices in singleton fibers are singleton classes).
    synchronizing : bool
        True when every same-fiber pair is stable.
    witness_words : dict
        For every synchronizable pair, a shortest collapsing word.
    """

    resolver: RightResolver
    stable_pairs: frozenset
    partition: VertexPartition
    synchronizing: bool
    witness_words: dict = field(repr=False)


def compute_stability(phi: RightResolver) -> StabilityReport:
    """Full stability analysis of ``phi``.

    The transitivity of the computed relation and its compatibility with
    following edges are verified on the result and raise
    :class:`TheoremViolation` if they fail; they are never silently
    repaired.

    Raises
    ------
    NotStronglyConnected
        If the domain is not strongly connected.
    """
    g = phi.domain
    if not is_strongly_connected(g):
        raise NotStronglyConnected("stability is defined over strongly connected domains")
    nodes = _pair_nodes(phi)
    succ, rev = _pair_moves(phi, nodes)
    sync_found = _backward_closure(rev, [None])
    bad = [p for p in nodes if p not in sync_found]
    doomed = _backward_closure(rev, bad)
    doomed.pop(None, None)
    stable = frozenset(p for p in nodes if p not in doomed)

    labels = list(range(g.num_vertices))

    def root(v):
        while labels[v] != v:
            labels[v] = labels[labels[v]]
            v = labels[v]
        return v

    for a, b in sorted(stable):
        ra, rb = root(a), root(b)
        if ra != rb:
            labels[max(ra, rb)] = min(ra, rb)
    partition = VertexPartition.from_labels(g, [root(v) for v in range(g.num_vertices)])

    for c in range(partition.num_classes):
        block = partition.block(c)
        for i in range(len(block)):
            for j in range(i + 1, len(block)):
                if (block[i], block[j]) not in stable:
                    raise TheoremViolation(
                        "stability relation is not transitive",
                        {"resolver": phi.to_dict(), "pair": (block[i], block[j])},
                    )
    for p in stable:
        for x, q in succ[p]:
            if q is not None and q not in stable:
                raise TheoremViolation(
                    "stability relation is not respected by following edges",
                    {"resolver": phi.to_dict(), "pair": p, "codomain_edge": x},
                )

    witness_words = {
        p: _word_to_sources(sync_found, p) for p in nodes if p in sync_found
    }
    return StabilityReport(
        resolver=phi,
        stable_pairs=stable,
        partition=partition,
        synchronizing=len(stable) == len(nodes),
        witness_words=witness_words,
    )


def is_synchronizing(phi: RightResolver) -> bool:
    """Whether every same-fiber pair of ``phi`` is stable.

    Equivalent to every same-fiber pair being synchronizable, which needs
    just one backward search over the pair graph; this is the fast path the
    sampling experiments rely on.
    """
    nodes = _pair_nodes(phi)
    _, rev = _pair_moves(phi, nodes)
    found = _backward_closure(rev, [None])
    return len(found) == len(nodes) + 1


def stability_quotient(phi: RightResolver):
    """Quotient of the domain by stability classes, with the resolver split.

    Returns ``(q, psi, delta)`` where ``q`` is the quotient graph, ``psi``
    maps the domain onto ``q``, ``delta`` maps ``q`` onto the original
    codomain, ``compose(delta, psi) == phi``, ``psi`` is synchronizing and
    ``delta`` has trivial stability.  The last two facts are guaranteed by
    the theory and are asserted; violations raise :class:`TheoremViolation`.
    """
    report = compute_stability(phi)
    g = phi.domain
    h = phi.codomain
    partition = report.partition
    k = partition.num_classes
    class_of = partition.classes

    reps = [partition.block(c)[0] for c in range(k)]
    images = [phi.vertex_map[rep] for rep in reps]

    q_edges = []
    q_edge_id = {}
    for c in range(k):
        block = partition.block(c)
        for x in h.out_edges(images[c]):
            successors = {class_of[phi.step(v, x)] for v in block}
            if len(successors) != 1:
                raise TheoremViolation(
                    "stability classes have no common successor class",
                    {"resolver": phi.to_dict(), "class": c, "codomain_edge": x},
                )
            q_edge_id[(c, x)] = len(q_edges)
            q_edges.append((c, successors.pop()))
    q = Graph(k, q_edges)

    psi_edges = [
        q_edge_id[(class_of[g.source(e)], phi.edge_map[e])] for e in range(g.num_edges)
    ]
    psi = RightResolver(g, q, list(class_of), psi_edges)

    delta_edges = [None] * len(q_edges)
    for (c, x), qe in q_edge_id.items():
        delta_edges[qe] = x
    delta = RightResolver(q, h, images, delta_edges)

    if compose(delta, psi) != phi:
        raise TheoremViolation(
            "stability quotient failed to recompose", {"resolver": phi.to_dict()}
        )
    if not is_synchronizing(psi):
        raise TheoremViolation(
            "resolver onto the stability quotient is not synchronizing",
            {"resolver": phi.to_dict()},
        )
    if compute_stability(delta).stable_pairs:
        raise TheoremViolation(
            "stability quotient has residual stable pairs",
            {"resolver": phi.to_dict()},
        )
    return q, psi, delta


@dataclass(frozen=True)
class MinimalImage:
    """A minimal image reached from one fiber.

    ``word`` is a codomain path starting at ``fiber_vertex``; ``image`` is
    the set the fiber shrinks to after following it, and no word can shrink
    it further.
    """

    fiber_vertex: int
    word: tuple
    image: frozenset


def minimal_images(phi: RightResolver):
    """A minimal image for every fiber, by greedy pairwise collapsing.

    Repeatedly routes the smallest synchronizable pair of the moving set
    together until no pair of the set is synchronizable.  All returned
    images have the same size (a law checked in tests, not here).
    """
    g = phi.domain
    if not is_strongly_connected(g):
        raise NotStronglyConnected("minimal images are defined over strongly connected domains")
    nodes = _pair_nodes(phi)
    _, rev = _pair_moves(phi, nodes)
    found = _backward_closure(rev, [None])

    results = []
    for fiber_vertex, fiber in enumerate(phi.fibers):
        current = set(fiber)
        word = []
        while True:
            members = sorted(current)
            move = None
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    if (members[i], members[j]) in found:
                        move = _word_to_sources(found, (members[i], members[j]))
                        break
                if move:
                    break
            if not move:
                break
            word.extend(move)
            current = {_walk(phi, v, move) for v in current}
        results.append(MinimalImage(fiber_vertex, tuple(word), frozenset(current)))
    return tuple(results)


def _walk(phi, vertex, word):
    for x in word:
        vertex = phi.step(vertex, x)
    return vertex


def fiber_collapse_word(phi: RightResolver, fiber_vertex: int):
    """A word routing the whole fiber of ``fiber_vertex`` to one vertex.

    Returns a codomain word (edge ids starting at ``fiber_vertex``) or
    ``None`` when the fiber cannot be fully collapsed.  For a synchronizing
    resolver this succeeds on every fiber.
    """
    record = minimal_images(phi)[fiber_vertex]
    return record.word if len(record.image) == 1 else None


def _check_desk_scale(phi):
    g = phi.domain
    if g.num_vertices > MSS_VERTEX_BOUND:
        raise DeskScaleExceeded(
            f"synchronized-set analysis is limited to {MSS_VERTEX_BOUND} vertices"
        )
    for fiber in phi.fibers:
        if len(fiber) > MSS_FIBER_BOUND:
            raise DeskScaleExceeded(
                f"synchronized-set analysis is limited to fibers of size {MSS_FIBER_BOUND}"
            )


def _synchronized_sets(phi):
    """All synchronized sets with shortest defining words and reach data.

    A set is synchronized when it is ``word . vertex`` for some codomain
    word: the set of all vertices routed to ``vertex`` by ``word``.  They
    are exactly the sets reachable from singletons by single-edge backward
    steps, which is how they are enumerated (breadth-first, so recorded
    defining words are shortest).  Returns ``(words, maxreach)`` keyed by
    frozenset; ``maxreach[S]`` is the largest size of a synchronized set
    reachable from ``S`` by backward steps, the yardstick for maximality.
    """
    g = phi.domain
    h = phi.codomain
    back = {}
    for e in range(g.num_edges):
        back.setdefault(phi.edge_map[e], {}).setdefault(g.target(e), []).append(
            g.source(e)
        )

    words = {}
    edges_out = {}
    queue = deque()
    for v in range(g.num_vertices):
        s = frozenset([v])
        words[s] = ()
        queue.append(s)
    while queue:
        s = queue.popleft()
        image = phi.vertex_map[next(iter(s))]
        moves = []
        for x in h.in_edges(image):
            table = back.get(x, {})
            pre = set()
            for v in s:
                pre.update(table.get(v, ()))
            if not pre:
                continue
            p = frozenset(pre)
            moves.append(p)
            if p not in words:
                words[p] = (x,) + words[s]
                queue.append(p)
        edges_out[s] = moves

    maxreach = {s: len(s) for s in words}
    changed = True
    while changed:
        changed = False
        for s, moves in edges_out.items():
            best = maxreach[s]
            for p in moves:
                if maxreach[p] > best:
                    best = maxreach[p]
            if best > maxreach[s]:
                maxreach[s] = best
                changed = True
    return words, maxreach


def maximal_synchronized_sets(phi: RightResolver, fiber_vertex: int):
    """All maximal synchronized sets inside one fiber, sorted.

    A synchronized set contained in the fiber of ``fiber_vertex`` is maximal
    when no synchronized set reachable from it by backward steps is larger.

    Raises
    ------
    DeskScaleExceeded
        If the domain has more than 12 vertices or some fiber exceeds 8.
    """
    _check_desk_scale(phi)
    g = phi.domain
    if not (0 <= fiber_vertex < phi.codomain.num_vertices):
        raise UnsupportedInput("fiber_vertex out of range")
    if not is_strongly_connected(g):
        raise NotStronglyConnected("synchronized sets are defined over strongly connected domains")
    words, maxreach = _synchronized_sets(phi)
    fiber = set(phi.fibers[fiber_vertex])
    result = [
        s
        for s in words
        if s <= fiber and maxreach[s] == len(s)
    ]
    return sorted(result, key=sorted)


def mss_partition_word(phi: RightResolver, fiber_vertex: int) -> Path:
    """A word partitioning one fiber into maximal synchronized sets.

    Requires the hypothesis that some bi-resolver with the same vertex map
    exists (checked by search).  Returns a codomain :class:`Path` starting
    at ``fiber_vertex`` whose classes-by-endpoint on the fiber are exactly
    maximal synchronized sets.  The construction extends the word by
    ``word + route + word`` until the classes cover the fiber; the number of
    covered classes provably grows each round, which is asserted.
    """
    _check_desk_scale(phi)
    g = phi.domain
    h = phi.codomain
    if not (0 <= fiber_vertex < h.num_vertices):
        raise UnsupportedInput("fiber_vertex out of range")
    if not is_strongly_connected(g):
        raise NotStronglyConnected("synchronized sets are defined over strongly connected domains")
    if find_biresolving_edge_assignment(g, h, list(phi.vertex_map)) is None:
        raise UnsupportedInput(
            "mss_partition_word requires some bi-resolver with the same vertex map to exist"
        )

    words, maxreach = _synchronized_sets(phi)
    fiber = phi.fibers[fiber_vertex]
    fiber_set = set(fiber)
    mss = {
        s
        for s in words
        if s <= fiber_set and maxreach[s] == len(s)
    }
    if not mss:
        raise TheoremViolation(
            "fiber contains no maximal synchronized set",
            {"resolver": phi.to_dict(), "fiber_vertex": fiber_vertex},
        )

    word = words[min(mss, key=sorted)]
    previous_covered = -1
    for _ in range(len(fiber) + 2):
        endpoints = {}
        for v in fiber:
            endpoints.setdefault(_walk(phi, v, word), []).append(v)
        classes = [frozenset(c) for c in endpoints.values()]
        full = [c for c in classes if c in mss]
        covered = sum(len(c) for c in full)
        if covered <= previous_covered:
            raise TheoremViolation(
                "partition word stopped making progress",
                {"resolver": phi.to_dict(), "fiber_vertex": fiber_vertex},
            )
        previous_covered = covered
        if covered == len(fiber):
            return Path(h, word, anchor=fiber_vertex)
        missing = min(v for v in fiber if not any(v in c for c in full))
        anchor_class = min(full, key=sorted)
        anchor_end = _walk(phi, min(anchor_class), word)
        route = _domain_route(g, anchor_end, missing)
        word = word + tuple(phi.edge_map[e] for e in route) + word
    raise TheoremViolation(
        "partition word did not stabilize in the predicted number of rounds",
        {"resolver": phi.to_dict(), "fiber_vertex": fiber_vertex},
    )


def _domain_route(g, start, goal):
    """Edge ids of a shortest path from ``start`` to ``goal`` in ``g``."""
    if start == goal:
        return ()
    parents = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            t = g.target(e)
            if t not in parents:
                parents[t] = (e, v)
                if t == goal:
                    edges = []
                    while parents[t] is not None:
                        e, t = parents[t]
                        edges.append(e)
                    return tuple(reversed(edges))
                queue.append(t)
    raise NotStronglyConnected(f"no path from {start} to {goal}")
