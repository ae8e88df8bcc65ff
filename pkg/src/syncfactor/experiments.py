"""Seeded sampling experiments and exhaustive desk-scale searches.

Everything here is deterministic given its seed: worker seeds are derived by
hashing, not by sharing generator state, so results are identical whether a
table runs on one process or many.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from dataclasses import dataclass
from multiprocessing import Pool

from .errors import (
    BudgetExceeded,
    DeskScaleExceeded,
    NotStronglyConnected,
    TheoremViolation,
    UnsupportedInput,
)
from .graphs import Graph, canonical_form, is_strongly_connected
from .minimal import compute_minimal_factor, minimal_iso
from .bunchy import compute_bunchy_factor
from .resolvers import (
    ENUMERATION_BOUND,
    RightResolver,
    _target_groups,
    random_right_resolver,
    vertex_map_compatible,
)
from .stability import is_synchronizing

#: Default number of rejection-sampling attempts for one extension draw.
SAMPLE_BUDGET = 10_000
#: Default cap on estimation trials for one graph.
TRIAL_CAP = 10_000
#: Largest graph probe_og_uniqueness will accept.
PROBE_VERTEX_BOUND = 6


def derive_seed(master, *parts) -> int:
    """A child seed derived by hashing, stable across platforms and runs.

    Hash-derived seeds keep parallel and sequential runs identical: each
    unit of work gets a seed depending only on the master seed and its own
    coordinates, never on how many draws other units made.
    """
    text = repr((master,) + parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "big")


@dataclass(frozen=True)
class ExtensionSpec:
    """Parameters for drawing one random extension of a minimal graph.

    ``m_graph`` must be minimal (refinement-stable) and strongly connected;
    ``num_vertices`` is the size of the extension to draw.
    """

    m_graph: Graph
    num_vertices: int
    seed: int


def sample_extension(spec: ExtensionSpec, budget: int = SAMPLE_BUDGET) -> Graph:
    """Draw a random strongly connected extension of a minimal graph.

    Uniform over labeled extensions: every assignment of a fiber to each
    vertex together with a choice, per vertex and per base vertex, of a
    multiset of targets in the matching fiber (sizes dictated by the base's
    out-edges) is equally likely.  In other words the draw is uniform over
    adjacency matrices whose canonical partition quotient is the base.
    Draws are rejected until the result is strongly connected.  The minimal
    factor of the result provably equals the base, which is asserted.

    Raises
    ------
    BudgetExceeded
        If no strongly connected draw appears within ``budget`` attempts.
    """
    m = spec.m_graph
    n = spec.num_vertices
    if not is_strongly_connected(m):
        raise UnsupportedInput("the base of an extension must be strongly connected")
    base_minimal = compute_minimal_factor(m)
    if base_minimal.m_graph.num_vertices != m.num_vertices:
        raise UnsupportedInput("the base of an extension must be minimal")
    if n < m.num_vertices:
        raise UnsupportedInput("an extension cannot have fewer vertices than its base")
    rng = random.Random(spec.seed)
    k = m.num_vertices
    multiplicity = [[0] * k for _ in range(k)]
    for s, t in m.edges:
        multiplicity[s][t] += 1

    size_vectors = []
    weights = []
    for cuts in itertools.combinations(range(1, n), k - 1):
        sizes = [b - a for a, b in zip((0,) + cuts, cuts + (n,))]
        weight = math.factorial(n)
        for size in sizes:
            weight //= math.factorial(size)
        for i in range(k):
            per_vertex = 1
            for j in range(k):
                if multiplicity[i][j]:
                    per_vertex *= math.comb(
                        sizes[j] + multiplicity[i][j] - 1, multiplicity[i][j]
                    )
            weight *= per_vertex**sizes[i]
        size_vectors.append(sizes)
        weights.append(weight)

    for _ in range(budget):
        sizes = rng.choices(size_vectors, weights=weights)[0]
        order = list(range(n))
        rng.shuffle(order)
        fibers = []
        start = 0
        for size in sizes:
            fibers.append(sorted(order[start : start + size]))
            start += size
        vertex_map = [None] * n
        for i, fiber in enumerate(fibers):
            for v in fiber:
                vertex_map[v] = i
        edges = []
        for v in range(n):
            for j in range(k):
                mult = multiplicity[vertex_map[v]][j]
                if not mult:
                    continue
                pool = list(
                    itertools.combinations_with_replacement(fibers[j], mult)
                )
                for t in pool[rng.randrange(len(pool))]:
                    edges.append((v, t))
        g = Graph(n, edges)
        if is_strongly_connected(g):
            result = compute_minimal_factor(g)
            if not minimal_iso(result.m_graph, m):
                raise TheoremViolation(
                    "sampled extension has an unexpected minimal factor",
                    {"graph": g.to_dict(), "base": m.to_dict()},
                )
            return g
    raise BudgetExceeded(
        f"no strongly connected extension found in {budget} attempts"
    )


@dataclass(frozen=True)
class SyncProbabilityEstimate:
    """How often random resolvers onto the bunchy factor synchronize.

    ``p_hat`` is ``successes / trials``.  When ``capped`` is true the trial
    cap was hit before reaching the requested success count, so ``p_hat``
    is only a partial estimate.
    """

    successes: int
    trials: int
    p_hat: float
    capped: bool


def estimate_sync_probability(
    g: Graph,
    successes: int = 100,
    trial_cap: int = TRIAL_CAP,
    seed: int = 0,
) -> SyncProbabilityEstimate:
    """Estimate the probability that a random resolver onto B(g) synchronizes.

    Draws uniformly random right resolvers with the canonical vertex map
    onto the maximal bunchy factor until ``successes`` of them synchronize
    (inverse-binomial stopping) or ``trial_cap`` draws are spent.
    """
    if successes < 1:
        raise UnsupportedInput("at least one success is required")
    if trial_cap < 1:
        raise UnsupportedInput("the trial cap must be positive")
    bunchy = compute_bunchy_factor(g)
    vertex_map = list(bunchy.classes.classes)
    hits = 0
    trials = 0
    while hits < successes and trials < trial_cap:
        phi = random_right_resolver(
            g, bunchy.b_graph, vertex_map, derive_seed(seed, "trial", trials)
        )
        trials += 1
        if is_synchronizing(phi):
            hits += 1
    return SyncProbabilityEstimate(
        successes=hits,
        trials=trials,
        p_hat=hits / trials,
        capped=hits < successes,
    )


@dataclass(frozen=True)
class ExperimentRecord:
    """One sampled graph's estimate inside a table experiment."""

    graph_id: int
    p_hat: float
    trials: int
    capped: bool


@dataclass(frozen=True)
class TableExperimentResult:
    """Outcome of :func:`run_table_experiment`."""

    m_name: str
    num_vertices: int
    graphs: int
    successes: int
    trial_cap: int
    seed: int
    mean_p: float
    records: tuple


def _table_record(args):
    m, n, successes, trial_cap, seed, index = args
    g = sample_extension(ExtensionSpec(m, n, derive_seed(seed, "graph", index)))
    estimate = estimate_sync_probability(
        g, successes=successes, trial_cap=trial_cap, seed=derive_seed(seed, "est", index)
    )
    return ExperimentRecord(
        graph_id=index,
        p_hat=estimate.p_hat,
        trials=estimate.trials,
        capped=estimate.capped,
    )


def run_table_experiment(
    m: Graph,
    num_vertices: int,
    graphs: int = 1000,
    successes: int = 100,
    trial_cap: int = TRIAL_CAP,
    seed: int = 0,
    workers: int = 1,
    m_name: str = "m",
) -> TableExperimentResult:
    """Mean synchronization probability over random extensions of ``m``.

    Samples ``graphs`` extensions with ``num_vertices`` vertices and runs
    :func:`estimate_sync_probability` on each.  Per-graph seeds are derived
    from ``seed`` and the graph index, so the result does not depend on
    ``workers``.
    """
    if graphs < 1:
        raise UnsupportedInput("at least one graph is required")
    jobs = [(m, num_vertices, successes, trial_cap, seed, i) for i in range(graphs)]
    if workers > 1:
        with Pool(workers) as pool:
            records = pool.map(_table_record, jobs)
    else:
        records = [_table_record(job) for job in jobs]
    mean_p = sum(r.p_hat for r in records) / graphs
    return TableExperimentResult(
        m_name=m_name,
        num_vertices=num_vertices,
        graphs=graphs,
        successes=successes,
        trial_cap=trial_cap,
        seed=seed,
        mean_p=mean_p,
        records=tuple(records),
    )


def table_csv(result: TableExperimentResult) -> str:
    """One-row summary CSV: ``m_name,n,graphs,mean_p``."""
    return (
        "m_name,n,graphs,mean_p\n"
        f"{result.m_name},{result.num_vertices},{result.graphs},{result.mean_p}\n"
    )


def records_csv(records) -> str:
    """Per-graph CSV: ``graph_id,p_hat,trials,capped``."""
    lines = ["graph_id,p_hat,trials,capped"]
    for r in records:
        lines.append(f"{r.graph_id},{r.p_hat},{r.trials},{r.capped}")
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str):
    """Inverse of :func:`records_csv`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != "graph_id,p_hat,trials,capped":
        raise UnsupportedInput("not a records CSV: bad header")
    records = []
    for line in lines[1:]:
        graph_id, p_hat, trials, capped = line.split(",")
        records.append(
            ExperimentRecord(int(graph_id), float(p_hat), int(trials), capped == "True")
        )
    return records


def histogram_csv(p_hats, bins: int = 20, below_one: bool = False) -> str:
    """Fixed-width histogram CSV over [0, 1]: ``bin_lo,bin_hi,count``.

    The last bin is closed on the right so 1.0 lands in it; ``below_one``
    drops exact-1.0 values first (useful because they usually dominate).
    """
    if bins < 1:
        raise UnsupportedInput("at least one bin is required")
    p_hats = list(p_hats)
    if not p_hats:
        raise UnsupportedInput("no probabilities to bin")
    counts = [0] * bins
    for p in p_hats:
        if not 0.0 <= p <= 1.0:
            raise UnsupportedInput(f"probability {p} outside [0, 1]")
        if below_one and p == 1.0:
            continue
        counts[min(int(p * bins), bins - 1)] += 1
    lines = ["bin_lo,bin_hi,count"]
    for i in range(bins):
        lines.append(f"{i / bins},{(i + 1) / bins},{counts[i]}")
    return "\n".join(lines) + "\n"


def enumerate_right_resolvers(g: Graph, h: Graph, bound: int = ENUMERATION_BOUND):
    """All right resolvers from ``g`` onto ``h``, in deterministic order.

    Iterates over all compatible vertex maps and, for each, all per-group
    bijections of out-edges onto their image groups.

    Raises
    ------
    DeskScaleExceeded
        If the total count would exceed ``bound``.
    """
    if h.num_vertices**g.num_vertices > 10_000_000:
        raise DeskScaleExceeded("vertex-map space too large to enumerate")
    compatible = []
    total = 0
    for candidate in itertools.product(range(h.num_vertices), repeat=g.num_vertices):
        if not vertex_map_compatible(g, h, candidate):
            continue
        count = 1
        for vertex_groups in _target_groups(g, h, candidate):
            for domain_ids, _ in vertex_groups:
                count *= math.factorial(len(domain_ids))
        total += count
        if total > bound:
            raise DeskScaleExceeded(
                f"more than {bound} right resolvers to enumerate"
            )
        compatible.append(candidate)

    resolvers = []
    for vertex_map in compatible:
        slots = []
        for vertex_groups in _target_groups(g, h, vertex_map):
            slots.extend(vertex_groups)
        for combo in itertools.product(
            *(itertools.permutations(codomain_ids) for _, codomain_ids in slots)
        ):
            edge_map = [None] * g.num_edges
            for (domain_ids, _), permuted in zip(slots, combo):
                for e, a in zip(domain_ids, permuted):
                    edge_map[e] = a
            resolvers.append(RightResolver(g, h, vertex_map, edge_map))
    return resolvers


def _set_partitions(n):
    """All partitions of range(n) as restricted-growth label strings."""
    labels = [0] * n

    def rec(i, mx):
        if i == n:
            yield tuple(labels)
            return
        for c in range(mx + 2):
            labels[i] = c
            yield from rec(i + 1, max(mx, c))

    yield from rec(1, 0) if n > 1 else iter([(0,)] if n == 1 else [()])


def _equitable_quotient(g, labels):
    """Quotient graph of an equitable partition, or None if not equitable.

    Classes are the partition blocks in label order (labels are restricted
    growth strings, so label order is smallest-member order); quotient
    edges are emitted per source class, then per target class, ascending.
    """
    k = max(labels) + 1
    rows = [None] * k
    for v in range(g.num_vertices):
        counts = [0] * k
        for e in g.out_edges(v):
            counts[labels[g.target(e)]] += 1
        if rows[labels[v]] is None:
            rows[labels[v]] = counts
        elif rows[labels[v]] != counts:
            return None
    edges = []
    for c in range(k):
        for d in range(k):
            edges.extend([(c, d)] * rows[c][d])
    return Graph(k, edges)


def _has_synchronizing_assignment(g, h, labels, bound):
    """Whether some right resolver ``g -> h`` with this vertex map synchronizes."""
    slots = []
    count = 1
    for vertex_groups in _target_groups(g, h, labels):
        for group in vertex_groups:
            slots.append(group)
            count *= math.factorial(len(group[0]))
    if count > bound:
        raise DeskScaleExceeded(f"more than {bound} assignments to search")
    for combo in itertools.product(
        *(itertools.permutations(codomain_ids) for _, codomain_ids in slots)
    ):
        edge_map = [None] * g.num_edges
        for (domain_ids, _), permuted in zip(slots, combo):
            for e, a in zip(domain_ids, permuted):
                edge_map[e] = a
        if is_synchronizing(RightResolver(g, h, labels, edge_map)):
            return True
    return False


def _synchronizing_factor_reps(g, bound):
    """Synchronizing factors of ``g`` up to isomorphism.

    Factors correspond to equitable partitions; a partition's quotient
    counts when some groupwise edge assignment synchronizes.  Returns a
    dict keyed by canonical form with a representative graph per class.
    """
    reps = {}
    for labels in _set_partitions(g.num_vertices):
        h = _equitable_quotient(g, labels)
        if h is None:
            continue
        key = canonical_form(h)
        if key in reps:
            continue
        if _has_synchronizing_assignment(g, h, list(labels), bound):
            reps[key] = h
    return reps


@dataclass(frozen=True)
class OgProbeReport:
    """Outcome of :func:`probe_og_uniqueness`.

    ``factors`` are the synchronizing factors of the graph up to
    isomorphism, ``minimal_factors`` the ones with no synchronizing factor
    other than themselves, and ``unique`` says whether exactly one minimal
    factor exists — the behaviour conjectured to hold always.
    """

    graph: Graph
    factors: tuple
    minimal_factors: tuple
    unique: bool


def probe_og_uniqueness(
    g: Graph,
    vertex_bound: int = PROBE_VERTEX_BOUND,
    resolver_bound: int = ENUMERATION_BOUND,
) -> OgProbeReport:
    """Exhaustively check uniqueness of the minimal synchronizing factor.

    Enumerates all synchronizing factors of ``g`` (via equitable
    partitions), then recursively finds which of them admit no synchronizing
    factor but themselves.  ``unique`` is the conjectured outcome; a report
    with ``unique=False`` is a genuine finding and should be kept.

    Raises
    ------
    DeskScaleExceeded
        If ``g`` has more than ``vertex_bound`` vertices.
    """
    if g.num_vertices > vertex_bound:
        raise DeskScaleExceeded(
            f"probe_og_uniqueness is limited to {vertex_bound} vertices"
        )
    if not is_strongly_connected(g):
        raise NotStronglyConnected("probe_og_uniqueness needs a strongly connected graph")

    factors = _synchronizing_factor_reps(g, resolver_bound)
    cache = {}
    minimal = []
    for key, h in sorted(factors.items()):
        if key not in cache:
            cache[key] = _synchronizing_factor_reps(h, resolver_bound)
        if set(cache[key]) == {key}:
            minimal.append(h)
    return OgProbeReport(
        graph=g,
        factors=tuple(h for _, h in sorted(factors.items())),
        minimal_factors=tuple(minimal),
        unique=len(minimal) == 1,
    )
