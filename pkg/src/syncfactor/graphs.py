"""Finite directed multigraphs with positional edge identity.

Graphs here may have loops and parallel edges.  Vertices are ``0..n-1`` and
every edge has an id equal to its position in the edge sequence, so two
parallel edges are distinct objects.  This positional identity is what edge
maps of resolvers are expressed against, which is why the type is a frozen
dataclass rather than an adjacency structure: the edge order *is* data.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .errors import GraphFormatError, NotStronglyConnected, DeskScaleExceeded

#: Largest vertex count accepted by the brute-force isomorphism check.
BRUTE_FORCE_ISO_BOUND = 8


@dataclass(frozen=True)
class Graph:
    """A directed multigraph on vertices ``0..num_vertices-1``.

    Parameters
    ----------
    num_vertices : int
        Number of vertices; must be positive.
    edges : sequence of (int, int)
        Edge list as (source, target) pairs.  The position of a pair is the
        edge's id.  Loops and repeated pairs are allowed.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, num_vertices, edges):
        if not isinstance(num_vertices, int) or num_vertices <= 0:
            raise GraphFormatError(f"num_vertices must be a positive int, got {num_vertices!r}")
        normalized = []
        for k, pair in enumerate(edges):
            pair = tuple(pair)
            if len(pair) != 2:
                raise GraphFormatError(f"edge {k} is not a (source, target) pair: {pair!r}")
            s, t = pair
            if not (isinstance(s, int) and isinstance(t, int)):
                raise GraphFormatError(f"edge {k} has non-integer endpoints: {pair!r}")
            if not (0 <= s < num_vertices and 0 <= t < num_vertices):
                raise GraphFormatError(
                    f"edge {k} = {pair!r} references a vertex outside 0..{num_vertices - 1}"
                )
            normalized.append((s, t))
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", tuple(normalized))

    # -- basic accessors ---------------------------------------------------

    @property
    def num_edges(self):
        return len(self.edges)

    def source(self, edge_id):
        return self.edges[edge_id][0]

    def target(self, edge_id):
        return self.edges[edge_id][1]

    @cached_property
    def _out(self):
        table = [[] for _ in range(self.num_vertices)]
        for k, (s, _) in enumerate(self.edges):
            table[s].append(k)
        return tuple(tuple(ids) for ids in table)

    @cached_property
    def _in(self):
        table = [[] for _ in range(self.num_vertices)]
        for k, (_, t) in enumerate(self.edges):
            table[t].append(k)
        return tuple(tuple(ids) for ids in table)

    def out_edges(self, vertex):
        """Ids of edges leaving ``vertex``, in increasing edge-id order."""
        return self._out[vertex]

    def in_edges(self, vertex):
        """Ids of edges entering ``vertex``, in increasing edge-id order."""
        return self._in[vertex]

    def out_degree(self, vertex):
        return len(self._out[vertex])

    def in_degree(self, vertex):
        return len(self._in[vertex])

    def followers(self, vertex):
        """Sorted tuple of distinct targets of out-edges of ``vertex``.

        Examples
        --------
        >>> Graph(3, [(0, 1), (0, 1), (0, 2)]).followers(0)
        (1, 2)
        """
        return tuple(sorted({self.edges[e][1] for e in self._out[vertex]}))

    def edge_multiset(self):
        """Counter of (source, target) pairs, forgetting edge identity."""
        return Counter(self.edges)

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        return {"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise GraphFormatError(f"graph payload must be an object, got {type(data).__name__}")
        missing = {"num_vertices", "edges"} - set(data)
        if missing:
            raise GraphFormatError(f"graph payload is missing keys: {sorted(missing)}")
        return cls(data["num_vertices"], data["edges"])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed graph JSON: {exc}") from exc
        return cls.from_dict(data)


def is_strongly_connected(g: Graph) -> bool:
    """Whether every vertex reaches every other along directed paths.

    A single vertex with no edges counts as strongly connected.

    Examples
    --------
    >>> is_strongly_connected(Graph(2, [(0, 1), (1, 0)]))
    True
    >>> is_strongly_connected(Graph(2, [(0, 1)]))
    False
    """
    return (
        len(_reachable(g, 0, forward=True)) == g.num_vertices
        and len(_reachable(g, 0, forward=False)) == g.num_vertices
    )


def _reachable(g, start, forward):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        ids = g.out_edges(v) if forward else g.in_edges(v)
        for e in ids:
            w = g.target(e) if forward else g.source(e)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def period(g: Graph) -> int:
    """Gcd of all cycle lengths of a strongly connected graph.

    Computed from breadth-first levels: for every edge ``u -> v`` the value
    ``|level(u) + 1 - level(v)|`` contributes to the gcd.

    Raises
    ------
    NotStronglyConnected
        If ``g`` is not strongly connected.
    GraphFormatError
        If ``g`` has no edges (no cycles, so no period).
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnected("period is only defined for strongly connected graphs")
    if g.num_edges == 0:
        raise GraphFormatError("period is undefined for an edgeless graph")
    level = {0: 0}
    queue = [0]
    while queue:
        next_queue = []
        for u in queue:
            for e in g.out_edges(u):
                v = g.target(e)
                if v not in level:
                    level[v] = level[u] + 1
                    next_queue.append(v)
        queue = next_queue
    result = 0
    for u, v in g.edges:
        result = math.gcd(result, abs(level[u] + 1 - level[v]))
    return result


def brute_force_isomorphic(g1: Graph, g2: Graph, bound: int = BRUTE_FORCE_ISO_BOUND) -> bool:
    """Exact isomorphism test by trying all vertex permutations.

    Intended as a small-scale oracle; refuses graphs with more than ``bound``
    vertices.  Isomorphism here means a vertex bijection under which the
    multisets of (source, target) pairs agree (edge ids need not match).
    """
    if g1.num_vertices > bound or g2.num_vertices > bound:
        raise DeskScaleExceeded(
            f"brute-force isomorphism is limited to {bound} vertices"
        )
    if g1.num_vertices != g2.num_vertices or g1.num_edges != g2.num_edges:
        return False
    if sorted(map(g1.out_degree, range(g1.num_vertices))) != sorted(
        map(g2.out_degree, range(g2.num_vertices))
    ):
        return False
    if sorted(map(g1.in_degree, range(g1.num_vertices))) != sorted(
        map(g2.in_degree, range(g2.num_vertices))
    ):
        return False
    target = g2.edge_multiset()
    for perm in itertools.permutations(range(g1.num_vertices)):
        image = Counter((perm[s], perm[t]) for s, t in g1.edges)
        if image == target:
            return True
    return False


def canonical_form(g: Graph, bound: int = BRUTE_FORCE_ISO_BOUND):
    """Lexicographically least sorted edge tuple over all vertex relabelings.

    Two graphs are isomorphic iff their canonical forms (and vertex counts)
    agree, so this is a dedup key for exhaustive small-graph sweeps.
    """
    if g.num_vertices > bound:
        raise DeskScaleExceeded(f"canonical_form is limited to {bound} vertices")
    best = None
    for perm in itertools.permutations(range(g.num_vertices)):
        form = tuple(sorted((perm[s], perm[t]) for s, t in g.edges))
        if best is None or form < best:
            best = form
    return (g.num_vertices, best)


@dataclass(frozen=True)
class Path:
    """A finite directed path, possibly empty.

    Fields
    ------
    graph : Graph
        The graph the edge ids refer to.
    edge_ids : tuple of int
        Consecutive edges; each one's source must equal the previous one's
        target.
    anchor : int or None
        Start vertex.  Mandatory for the empty path (which otherwise has no
        location); for non-empty paths it defaults to the first edge's source
        and must agree with it when given.
    """

    graph: Graph
    edge_ids: tuple[int, ...]
    anchor: int | None = None

    def __init__(self, graph, edge_ids, anchor=None):
        edge_ids = tuple(edge_ids)
        for e in edge_ids:
            if not (0 <= e < graph.num_edges):
                raise GraphFormatError(f"path references missing edge id {e}")
        if not edge_ids:
            if anchor is None:
                raise GraphFormatError("an empty path needs an anchor vertex")
            if not (0 <= anchor < graph.num_vertices):
                raise GraphFormatError(f"path anchor {anchor} is not a vertex")
        else:
            if anchor is not None and anchor != graph.source(edge_ids[0]):
                raise GraphFormatError(
                    f"path anchor {anchor} disagrees with first edge source "
                    f"{graph.source(edge_ids[0])}"
                )
            for prev, nxt in zip(edge_ids, edge_ids[1:]):
                if graph.target(prev) != graph.source(nxt):
                    raise GraphFormatError(
                        f"edges {prev} and {nxt} are not consecutive"
                    )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "edge_ids", edge_ids)
        object.__setattr__(self, "anchor", anchor)

    def __len__(self):
        return len(self.edge_ids)

    @property
    def start(self):
        if self.edge_ids:
            return self.graph.source(self.edge_ids[0])
        return self.anchor

    @property
    def end(self):
        if self.edge_ids:
            return self.graph.target(self.edge_ids[-1])
        return self.anchor


@dataclass(frozen=True)
class VertexPartition:
    """A partition of a graph's vertices into classes ``0..k-1``.

    ``classes[v]`` is the class index of vertex ``v``.  Class indices must be
    contiguous starting at 0 (every index below the maximum is used).
    """

    graph: Graph
    classes: tuple[int, ...]

    def __init__(self, graph, classes):
        classes = tuple(classes)
        if len(classes) != graph.num_vertices:
            raise GraphFormatError(
                f"partition has {len(classes)} entries for {graph.num_vertices} vertices"
            )
        used = set(classes)
        if used != set(range(len(used))):
            raise GraphFormatError(f"class indices are not contiguous from 0: {sorted(used)}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "classes", classes)

    @property
    def num_classes(self):
        return max(self.classes) + 1 if self.classes else 0

    def block(self, class_index):
        """Sorted tuple of the vertices in one class."""
        return tuple(v for v, c in enumerate(self.classes) if c == class_index)

    def blocks(self):
        """All classes as sorted vertex tuples, indexed by class."""
        out = [[] for _ in range(self.num_classes)]
        for v, c in enumerate(self.classes):
            out[c].append(v)
        return [tuple(b) for b in out]

    @classmethod
    def from_blocks(cls, graph, blocks):
        classes = [None] * graph.num_vertices
        for idx, block in enumerate(blocks):
            for v in block:
                if classes[v] is not None:
                    raise GraphFormatError(f"vertex {v} appears in two blocks")
                classes[v] = idx
        if any(c is None for c in classes):
            missing = [v for v, c in enumerate(classes) if c is None]
            raise GraphFormatError(f"vertices missing from all blocks: {missing}")
        return cls(graph, classes)

    @classmethod
    def from_labels(cls, graph, labels):
        """Build a partition from arbitrary hashable labels per vertex.

        Classes are numbered by first occurrence along the vertex order, so
        the result is deterministic.
        """
        if len(labels) != graph.num_vertices:
            raise GraphFormatError("one label per vertex required")
        index = {}
        classes = []
        for lab in labels:
            if lab not in index:
                index[lab] = len(index)
            classes.append(index[lab])
        return cls(graph, classes)
