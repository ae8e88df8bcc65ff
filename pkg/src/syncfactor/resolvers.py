"""Right resolvers: out-edge-bijective surjective graph homomorphisms.

A right resolver from ``G`` to ``H`` is a pair of surjective maps (vertices
to vertices, edges to edges) that commute with sources and targets and
restrict to a bijection from the out-edges of every vertex of ``G`` onto the
out-edges of its image.  Walking a codomain path therefore lifts uniquely
forward from any vertex in the fiber over its start, which is what all the
synchronization machinery in this package is built on.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property

from .errors import DeskScaleExceeded, GraphFormatError, ResolverValidationError
from .graphs import Graph

#: Default bound on how many resolvers an exhaustive enumeration may yield.
ENUMERATION_BOUND = 500_000


@dataclass(frozen=True)
class RightResolver:
    """A validated right resolver.

    Construction runs the full validation (totality, homomorphism property,
    vertex and edge surjectivity, per-vertex out-edge bijectivity) and raises
    :class:`ResolverValidationError` naming the violated clause and a witness
    if any check fails, so every live instance is valid by construction.
    """

    domain: Graph
    codomain: Graph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    def __init__(self, domain, codomain, vertex_map, edge_map):
        vertex_map = tuple(vertex_map)
        edge_map = tuple(edge_map)
        if len(vertex_map) != domain.num_vertices:
            raise ResolverValidationError(
                f"vertex_map has {len(vertex_map)} entries for "
                f"{domain.num_vertices} domain vertices"
            )
        if len(edge_map) != domain.num_edges:
            raise ResolverValidationError(
                f"edge_map has {len(edge_map)} entries for {domain.num_edges} domain edges"
            )
        for v, image in enumerate(vertex_map):
            if not (isinstance(image, int) and 0 <= image < codomain.num_vertices):
                raise ResolverValidationError(
                    f"vertex_map[{v}] = {image!r} is not a codomain vertex"
                )
        for e, image in enumerate(edge_map):
            if not (isinstance(image, int) and 0 <= image < codomain.num_edges):
                raise ResolverValidationError(
                    f"edge_map[{e}] = {image!r} is not a codomain edge"
                )
        for e, image in enumerate(edge_map):
            s, t = domain.edges[e]
            si, ti = codomain.edges[image]
            if vertex_map[s] != si or vertex_map[t] != ti:
                raise ResolverValidationError(
                    f"homomorphism clause fails at edge {e}: it runs "
                    f"{s}->{t} with images {vertex_map[s]}->{vertex_map[t]}, "
                    f"but its edge image {image} runs {si}->{ti}"
                )
        if set(vertex_map) != set(range(codomain.num_vertices)):
            missing = sorted(set(range(codomain.num_vertices)) - set(vertex_map))
            raise ResolverValidationError(f"vertex map misses codomain vertices {missing}")
        if set(edge_map) != set(range(codomain.num_edges)):
            missing = sorted(set(range(codomain.num_edges)) - set(edge_map))
            raise ResolverValidationError(f"edge map misses codomain edges {missing}")
        for v in range(domain.num_vertices):
            images = [edge_map[e] for e in domain.out_edges(v)]
            expected = codomain.out_edges(vertex_map[v])
            if sorted(images) != sorted(expected):
                raise ResolverValidationError(
                    f"out-edge restriction at vertex {v} is not a bijection: "
                    f"images {sorted(images)} vs out-edges {sorted(expected)} "
                    f"of vertex {vertex_map[v]}"
                )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "vertex_map", vertex_map)
        object.__setattr__(self, "edge_map", edge_map)

    # -- derived tables ----------------------------------------------------

    @cached_property
    def _step(self):
        """Per domain vertex: codomain edge id -> (lifted edge id, next vertex)."""
        table = [dict() for _ in range(self.domain.num_vertices)]
        for e, (s, t) in enumerate(self.domain.edges):
            table[s][self.edge_map[e]] = (e, t)
        return table

    @cached_property
    def fibers(self):
        """Tuple of sorted vertex tuples: ``fibers[K]`` is the preimage of K."""
        out = [[] for _ in range(self.codomain.num_vertices)]
        for v, image in enumerate(self.vertex_map):
            out[image].append(v)
        return tuple(tuple(f) for f in out)

    def step(self, vertex, codomain_edge):
        """Follow the unique lift of one codomain edge; returns the next vertex."""
        return self._step[vertex][codomain_edge][1]

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        return {
            "domain": self.domain.to_dict(),
            "codomain": self.codomain.to_dict(),
            "vertex_map": list(self.vertex_map),
            "edge_map": list(self.edge_map),
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise GraphFormatError("resolver payload must be an object")
        missing = {"domain", "codomain", "vertex_map", "edge_map"} - set(data)
        if missing:
            raise GraphFormatError(f"resolver payload is missing keys: {sorted(missing)}")
        return cls(
            Graph.from_dict(data["domain"]),
            Graph.from_dict(data["codomain"]),
            data["vertex_map"],
            data["edge_map"],
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed resolver JSON: {exc}") from exc
        return cls.from_dict(data)


def validate(domain, codomain, vertex_map, edge_map) -> RightResolver:
    """Check candidate maps and return the resolver they form.

    Raises :class:`ResolverValidationError` naming the violated clause and a
    witness vertex/edge otherwise.
    """
    return RightResolver(domain, codomain, vertex_map, edge_map)


@dataclass(frozen=True)
class ResolverKind:
    """Which resolving properties a resolver enjoys.

    ``right_resolving`` is always true (enforced at construction); the
    interesting flags are ``left_resolving`` (in-edge restrictions are
    bijections at every vertex) and ``bi_resolving`` (both at once).
    """

    right_resolving: bool
    left_resolving: bool
    bi_resolving: bool


def kind(phi: RightResolver) -> ResolverKind:
    """Classify ``phi`` as right-/left-/bi-resolving.

    Examples
    --------
    A resolver is left-resolving when, at every vertex, distinct in-edges map
    to distinct codomain edges and every codomain in-edge is hit.
    """
    left = True
    for v in range(phi.domain.num_vertices):
        images = [phi.edge_map[e] for e in phi.domain.in_edges(v)]
        expected = phi.codomain.in_edges(phi.vertex_map[v])
        if sorted(images) != sorted(expected):
            left = False
            break
    return ResolverKind(right_resolving=True, left_resolving=left, bi_resolving=left)


def identity_resolver(g: Graph) -> RightResolver:
    """The identity maps on ``g`` as a right resolver."""
    return RightResolver(g, g, range(g.num_vertices), range(g.num_edges))


def compose(outer: RightResolver, inner: RightResolver) -> RightResolver:
    """The composite resolver ``outer ∘ inner``.

    ``inner`` maps G to K and ``outer`` maps K to H; the result maps G to H.
    """
    if inner.codomain != outer.domain:
        raise ResolverValidationError(
            "compose requires inner.codomain == outer.domain"
        )
    return RightResolver(
        inner.domain,
        outer.codomain,
        tuple(outer.vertex_map[v] for v in inner.vertex_map),
        tuple(outer.edge_map[e] for e in inner.edge_map),
    )


def lift_forward(phi: RightResolver, start, word):
    """Walk the unique lift of a codomain edge word from ``start``.

    Parameters
    ----------
    phi : RightResolver
    start : int
        Domain vertex to lift from.
    word : sequence of int
        Codomain edge ids forming a path that begins at ``start``'s image.

    Returns
    -------
    (int, tuple of int)
        Terminal domain vertex and the lifted domain edge ids.
    """
    here = start
    expected = phi.vertex_map[start]
    lifted = []
    for a in word:
        if phi.codomain.source(a) != expected:
            raise GraphFormatError(
                f"word is not a path from vertex {phi.vertex_map[start]}: "
                f"edge {a} leaves {phi.codomain.source(a)}, expected {expected}"
            )
        e, here = phi._step[here][a]
        lifted.append(e)
        expected = phi.codomain.target(a)
    return here, tuple(lifted)


def lift_backward(phi: RightResolver, word, end):
    """All domain vertices whose forward lift of ``word`` lands on ``end``.

    ``word`` must be a codomain path ending at ``end``'s image.  Returns a
    frozenset of domain vertices (possibly empty).
    """
    expected = phi.vertex_map[end]
    for a in reversed(word):
        if phi.codomain.target(a) != expected:
            raise GraphFormatError(
                f"word does not end at vertex {phi.vertex_map[end]}: "
                f"edge {a} enters {phi.codomain.target(a)}, expected {expected}"
            )
        expected = phi.codomain.source(a)
    current = {end}
    for a in reversed(word):
        previous = set()
        for e, image in enumerate(phi.edge_map):
            if image == a and phi.domain.target(e) in current:
                previous.add(phi.domain.source(e))
        current = previous
    return frozenset(current)


def vertex_map_compatible(g: Graph, h: Graph, vertex_map) -> bool:
    """Whether ``vertex_map`` can be the vertex part of a right resolver g -> h.

    The condition is the counting one: for every domain vertex, its out-edges
    grouped by image-of-target must match the codomain's parallel-edge
    multiplicities out of the vertex's image, and the map must be surjective.
    """
    vertex_map = tuple(vertex_map)
    if set(vertex_map) != set(range(h.num_vertices)):
        return False
    multiplicity = [[0] * h.num_vertices for _ in range(h.num_vertices)]
    for s, t in h.edges:
        multiplicity[s][t] += 1
    for v in range(g.num_vertices):
        counts = [0] * h.num_vertices
        for e in g.out_edges(v):
            counts[vertex_map[g.target(e)]] += 1
        if counts != multiplicity[vertex_map[v]]:
            return False
    return True


def _target_groups(g, h, vertex_map):
    """Per domain vertex: list of (domain edge ids, codomain edge ids) groups.

    Both sides of a group are sorted by edge id; the domain side collects the
    vertex's out-edges whose target maps onto the group's codomain target.
    """
    groups = []
    for v in range(g.num_vertices):
        by_target = {}
        for e in g.out_edges(v):
            by_target.setdefault(vertex_map[g.target(e)], []).append(e)
        vertex_groups = []
        for d in sorted(by_target):
            codomain_ids = [
                a for a in h.out_edges(vertex_map[v]) if h.target(a) == d
            ]
            vertex_groups.append((by_target[d], codomain_ids))
        groups.append(vertex_groups)
    return groups


def random_right_resolver(g: Graph, h: Graph, vertex_map, seed) -> RightResolver:
    """A uniformly random right resolver with the given vertex map.

    For each domain vertex and each group of its out-edges sharing a target
    image, a uniformly random bijection onto the parallel codomain edges is
    drawn.  All group choices are independent, so every right resolver with
    this vertex map is equally likely.  Deterministic in ``seed``.
    """
    vertex_map = tuple(vertex_map)
    if not vertex_map_compatible(g, h, vertex_map):
        raise ResolverValidationError(
            "vertex map is not compatible with any right resolver g -> h"
        )
    rng = random.Random(seed)
    edge_map = [None] * g.num_edges
    for vertex_groups in _target_groups(g, h, vertex_map):
        for domain_ids, codomain_ids in vertex_groups:
            shuffled = list(codomain_ids)
            rng.shuffle(shuffled)
            for e, a in zip(domain_ids, shuffled):
                edge_map[e] = a
    return RightResolver(g, h, vertex_map, edge_map)


def find_biresolving_edge_assignment(
    g: Graph, h: Graph, vertex_map, node_bound: int = 2_000_000
):
    """First bi-resolving edge assignment for a fixed vertex map, or None.

    Searches, by backtracking over the per-vertex groups of out-edges that
    share a target image, for an edge map that is left-resolving as well:
    no two in-edges of any domain vertex may receive the same image.  The
    search order is deterministic (vertices ascending, permutations in
    lexicographic order), so the first solution found is reproducible.

    Returns ``None`` when no bi-resolver with this vertex map exists, in
    particular when some vertex's in-degree differs from its image's.

    Raises
    ------
    DeskScaleExceeded
        If the backtracking visits more than ``node_bound`` nodes.
    """
    vertex_map = tuple(vertex_map)
    if not vertex_map_compatible(g, h, vertex_map):
        return None
    for v in range(g.num_vertices):
        if len(g.in_edges(v)) != len(h.in_edges(vertex_map[v])):
            return None

    slots = []
    for vertex_groups in _target_groups(g, h, vertex_map):
        slots.extend(vertex_groups)
    edge_map = [None] * g.num_edges
    used = set()
    visited = 0

    def assign(index):
        nonlocal visited
        if index == len(slots):
            return True
        visited += 1
        if visited > node_bound:
            raise DeskScaleExceeded(
                f"bi-resolver search exceeded {node_bound} nodes"
            )
        domain_ids, codomain_ids = slots[index]
        for permuted in itertools.permutations(codomain_ids):
            keys = [(g.target(e), a) for e, a in zip(domain_ids, permuted)]
            if any(key in used for key in keys):
                continue
            used.update(keys)
            for e, a in zip(domain_ids, permuted):
                edge_map[e] = a
            if assign(index + 1):
                return True
            used.difference_update(keys)
        return False

    if not assign(0):
        return None
    return RightResolver(g, h, vertex_map, edge_map)
