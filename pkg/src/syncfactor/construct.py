"""Constructions of synchronizing right resolvers.

The three builders here mirror the structure of the existence argument for
synchronizing resolvers onto the maximal bunchy factor:

* for weakly almost bunchy graphs a resolver onto the minimal factor with a
  guaranteed stable pair can be written down directly;
* when a bi-resolver onto the bunchy factor exists, swapping the two edges
  of any non-bunchiness witness creates a stable pair;
* :func:`synthesize_synchronizer` drives whichever of the two applies,
  quotients by stability, and repeats until the graph left is bunchy, then
  stitches the synchronizing pieces together.  Graphs outside both tracks
  are handled by seeded random search, which is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bunchy import compute_bunchy_factor, factor_through_bunchy
from .errors import (
    NotStronglyConnected,
    SynchronizerNotFound,
    TheoremViolation,
    UnsupportedInput,
)
from .experiments import derive_seed
from .graphs import (
    BRUTE_FORCE_ISO_BOUND,
    Graph,
    VertexPartition,
    brute_force_isomorphic,
    is_strongly_connected,
)
from .minimal import classify, compute_minimal_factor
from .resolvers import (
    RightResolver,
    compose,
    find_biresolving_edge_assignment,
    identity_resolver,
    kind,
    random_right_resolver,
)
from .stability import compute_stability, is_synchronizing, stability_quotient

#: Default number of random attempts before the fallback search gives up.
HEURISTIC_TRIAL_CAP = 10_000


@dataclass(frozen=True)
class NonBunchyWitness:
    """Two out-edges of one vertex with distinct followers in one class.

    ``parent`` is the smallest vertex carrying such a pair; ``edge_one`` and
    ``edge_two`` are the first offending out-edges in id order, and
    ``follower_one``/``follower_two`` their (distinct) targets, which lie in
    the same class of the canonical partition.
    """

    parent: int
    edge_one: int
    edge_two: int
    follower_one: int
    follower_two: int


def find_nonbunchy_witness(g: Graph) -> NonBunchyWitness | None:
    """Locate the canonical witness that ``g`` is not bunchy.

    Returns None exactly when ``g`` is bunchy (there is nothing to witness).
    The witness is deterministic: smallest parent vertex, then first
    offending edge pair in id order.
    """
    sigma = compute_minimal_factor(g).partition.classes
    for v in range(g.num_vertices):
        first_seen = {}
        for e in g.out_edges(v):
            t = g.target(e)
            d = sigma[t]
            if d not in first_seen:
                first_seen[d] = e
            elif g.target(first_seen[d]) != t:
                return NonBunchyWitness(v, first_seen[d], e, g.target(first_seen[d]), t)
    return None


def wab_stable_resolver(g: Graph) -> RightResolver:
    """A resolver onto the minimal factor with a guaranteed stable pair.

    Works for weakly almost bunchy graphs that are not bunchy.  Every vertex
    gets the edge-id-order assignment, except that the other vertices over
    the witness parent's class route a repeated-target pair of edges to the
    same two codomain edges the witness pair uses; this traps the witness
    followers in a common stability class, which is asserted.

    Raises
    ------
    UnsupportedInput
        If ``g`` is bunchy or not weakly almost bunchy.
    """
    verdict = classify(g)
    if verdict.is_bunchy:
        raise UnsupportedInput("graph is bunchy: it needs no stable-pair construction")
    if not verdict.is_weakly_almost_bunchy:
        raise UnsupportedInput("graph is not weakly almost bunchy")

    minimal = compute_minimal_factor(g)
    sigma = minimal.partition.classes
    witness = find_nonbunchy_witness(g)
    assert witness is not None  # not bunchy was checked above
    parent_class = sigma[witness.parent]
    target_class = sigma[witness.follower_one]

    multiplicity = sum(
        1
        for e in minimal.m_graph.out_edges(parent_class)
        if minimal.m_graph.target(e) == target_class
    )
    anchor = witness.parent
    for v in sorted(minimal.partition.block(parent_class)):
        followers = {
            g.target(e) for e in g.out_edges(v) if sigma[g.target(e)] == target_class
        }
        if len(followers) == multiplicity:
            anchor = v
            break
    if anchor != witness.parent:
        group = [e for e in g.out_edges(anchor) if sigma[g.target(e)] == target_class]
        edge_one = group[0]
        edge_two = next(e for e in group[1:] if g.target(e) != g.target(edge_one))
        witness = NonBunchyWitness(
            anchor, edge_one, edge_two, g.target(edge_one), g.target(edge_two)
        )

    base = minimal.witness
    edge_map = list(base.edge_map)
    image_one = edge_map[witness.edge_one]
    image_two = edge_map[witness.edge_two]

    for v in minimal.partition.block(parent_class):
        if v == witness.parent:
            continue
        group = [e for e in g.out_edges(v) if sigma[g.target(e)] == target_class]
        seen = {}
        forced = None
        for e in group:
            t = g.target(e)
            if t in seen:
                forced = (seen[t], e)
                break
            seen[t] = e
        if forced is None:
            raise TheoremViolation(
                "weak almost bunchiness promised a repeated follower",
                {"graph": g.to_dict(), "vertex": v},
            )
        codomain_ids = sorted(
            a for e in group for a in [base.edge_map[e]] if a not in (image_one, image_two)
        )
        remaining = iter(codomain_ids)
        for e in group:
            if e == forced[0]:
                edge_map[e] = image_one
            elif e == forced[1]:
                edge_map[e] = image_two
            else:
                edge_map[e] = next(remaining)

    phi = RightResolver(g, minimal.m_graph, list(sigma), edge_map)
    report = compute_stability(phi)
    key = tuple(sorted((witness.follower_one, witness.follower_two)))
    if key not in report.stable_pairs:
        raise TheoremViolation(
            "constructed resolver failed to stabilize the witness pair",
            {"resolver": phi.to_dict(), "pair": key},
        )
    return phi


def find_biresolver(g: Graph):
    """First bi-resolver from ``g`` onto its maximal bunchy factor, or None.

    The vertex map is fixed to the canonical class map; any bi-resolver onto
    the bunchy factor can be rearranged into one of this form, so fixing it
    loses nothing.  The search is the deterministic backtracking of
    :func:`syncfactor.resolvers.find_biresolving_edge_assignment`.
    """
    bunchy = compute_bunchy_factor(g)
    return find_biresolving_edge_assignment(
        g, bunchy.b_graph, list(bunchy.classes.classes)
    )


def biresolving_swap(g: Graph, phi: RightResolver) -> RightResolver:
    """Swap the witness edges of a bi-resolver to create a stable pair.

    ``phi`` must be bi-resolving from ``g`` onto a bunchy graph and ``g``
    must not be bunchy.  The two witness edges then have the same image
    vertex on both ends, so exchanging their images is again a right
    resolver; the witness followers become stable, and the resolver induced
    on the stability quotient is bi-resolving.  Both facts are asserted.
    """
    if phi.domain != g:
        raise UnsupportedInput("resolver does not start at the given graph")
    if not kind(phi).bi_resolving:
        raise UnsupportedInput("biresolving_swap needs a bi-resolving input")
    if not classify(phi.codomain).is_bunchy:
        raise UnsupportedInput("biresolving_swap needs a bunchy codomain")
    witness = find_nonbunchy_witness(g)
    if witness is None:
        raise UnsupportedInput("graph is bunchy: there is no witness pair to swap")

    if phi.vertex_map[witness.follower_one] != phi.vertex_map[witness.follower_two]:
        raise TheoremViolation(
            "witness followers are separated by a resolver onto a bunchy graph",
            {"resolver": phi.to_dict(), "witness": witness.__dict__},
        )
    edge_map = list(phi.edge_map)
    edge_map[witness.edge_one], edge_map[witness.edge_two] = (
        edge_map[witness.edge_two],
        edge_map[witness.edge_one],
    )
    swapped = RightResolver(g, phi.codomain, list(phi.vertex_map), edge_map)

    report = compute_stability(swapped)
    key = tuple(sorted((witness.follower_one, witness.follower_two)))
    if key not in report.stable_pairs:
        raise TheoremViolation(
            "swapped bi-resolver failed to stabilize the witness pair",
            {"resolver": swapped.to_dict(), "pair": key},
        )
    _, _, delta = stability_quotient(swapped)
    if not kind(delta).bi_resolving:
        raise TheoremViolation(
            "stability quotient of a swapped bi-resolver is not bi-resolving",
            {"resolver": swapped.to_dict()},
        )
    return swapped


@dataclass(frozen=True)
class SynthesisStep:
    """One round of the synthesis loop.

    ``route`` is ``"wab"``, ``"swap"`` or ``"heuristic"``; ``resolver`` is
    the stable-pair resolver chosen for the round, ``partition`` its
    stability classes, and ``quotient`` the graph the loop continues with.
    """

    route: str
    resolver: RightResolver
    partition: VertexPartition
    quotient: Graph


@dataclass(frozen=True)
class SynthesisTrace:
    """Outcome of :func:`synthesize_synchronizer`.

    ``final`` is a synchronizing right resolver from the input graph onto
    its maximal bunchy factor; ``steps`` records the rounds that produced
    it, and ``used_heuristic`` flags whether any round fell back to random
    search instead of a guaranteed construction.
    """

    graph: Graph
    steps: tuple
    final: RightResolver
    used_heuristic: bool


def synthesize_synchronizer(
    g: Graph, seed: int = 0, heuristic_cap: int = HEURISTIC_TRIAL_CAP
) -> SynthesisTrace:
    """Build a synchronizing right resolver from ``g`` onto its bunchy factor.

    Each round picks a resolver with a guaranteed stable pair (weakly
    almost bunchy construction if possible, otherwise a bi-resolver swap,
    otherwise seeded random search), quotients by stability, and repeats on
    the quotient, which is strictly smaller.  When the quotient is bunchy,
    the composition of the synchronizing round maps is factored through the
    maximal bunchy factor and the result asserted synchronizing.

    Raises
    ------
    SynchronizerNotFound
        If a round had to fall back to random search and no synchronizing
        resolver was found within ``heuristic_cap`` attempts.  The offending
        graph rides along in the error payload.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnected("synthesis needs a strongly connected graph")
    initial_wab = classify(g).is_weakly_almost_bunchy
    current = g
    steps = []
    maps = []
    used_heuristic = False
    expect_biresolving = False

    for _ in range(g.num_vertices + 1):
        verdict = classify(current)
        if verdict.is_bunchy:
            break
        if verdict.is_weakly_almost_bunchy:
            route = "wab"
            phi = wab_stable_resolver(current)
        else:
            bi = find_biresolver(current)
            if bi is not None:
                route = "swap"
                phi = biresolving_swap(current, bi)
            elif expect_biresolving:
                raise TheoremViolation(
                    "quotient after a swap round lost its bi-resolver",
                    {"graph": current.to_dict()},
                )
            else:
                route = "heuristic"
                used_heuristic = True
                phi = _heuristic_resolver(current, seed, len(steps), heuristic_cap)

        report = compute_stability(phi)
        if report.partition.num_classes == current.num_vertices:
            raise TheoremViolation(
                "round resolver has trivial stability",
                {"resolver": phi.to_dict(), "route": route},
            )
        quotient, psi, _ = stability_quotient(phi)
        if initial_wab and not classify(quotient).is_weakly_almost_bunchy:
            raise TheoremViolation(
                "stability quotient left the weakly almost bunchy class",
                {"graph": current.to_dict(), "quotient": quotient.to_dict()},
            )
        if route == "swap":
            expect_biresolving = True
            if (
                current.num_vertices <= BRUTE_FORCE_ISO_BOUND
                and quotient.num_vertices <= BRUTE_FORCE_ISO_BOUND
            ):
                before = compute_bunchy_factor(current).b_graph
                after = compute_bunchy_factor(quotient).b_graph
                if not brute_force_isomorphic(before, after):
                    raise TheoremViolation(
                        "bunchy factor changed across a swap round",
                        {"graph": current.to_dict(), "quotient": quotient.to_dict()},
                    )
        else:
            expect_biresolving = False
        steps.append(SynthesisStep(route, phi, report.partition, quotient))
        maps.append(psi)
        current = quotient
    else:
        raise TheoremViolation(
            "synthesis did not terminate within the vertex count",
            {"graph": g.to_dict()},
        )

    total = identity_resolver(g)
    for psi in maps:
        total = compose(psi, total)
    final, _ = factor_through_bunchy(total)
    if not is_synchronizing(final):
        raise TheoremViolation(
            "synthesized resolver onto the bunchy factor is not synchronizing",
            {"resolver": final.to_dict()},
        )
    return SynthesisTrace(g, tuple(steps), final, used_heuristic)


def _heuristic_resolver(current, seed, step_index, trial_cap):
    """Seeded random search for a synchronizing resolver onto the bunchy factor."""
    bunchy = compute_bunchy_factor(current)
    vertex_map = list(bunchy.classes.classes)
    for trial in range(trial_cap):
        phi = random_right_resolver(
            current,
            bunchy.b_graph,
            vertex_map,
            derive_seed(seed, "synthesis", step_index, trial),
        )
        if is_synchronizing(phi):
            return phi
    raise SynchronizerNotFound(
        f"no synchronizing resolver found in {trial_cap} random attempts",
        graph_payload=current.to_dict(),
    )
