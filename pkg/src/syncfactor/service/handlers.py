"""One function per endpoint, shared by the HTTP app and the in-process CLI.

Handlers take a request model and return a response model.  They raise the
package's errors (``UsageError`` subclasses, ``TheoremViolation``) and leave
translating those to HTTP statuses or exit codes to the caller.
"""

from __future__ import annotations

from ..bunchy import compute_bunchy_factor
from ..construct import find_biresolver, synthesize_synchronizer
from ..experiments import (
    ExtensionSpec,
    estimate_sync_probability,
    histogram_csv,
    parse_records_csv,
    probe_og_uniqueness,
    records_csv,
    run_table_experiment,
    sample_extension,
    table_csv,
)
from ..graphs import is_strongly_connected, period
from ..minimal import classify, compute_minimal_factor
from ..stability import compute_stability
from . import schemas


def analyze(request: schemas.GraphRequest) -> schemas.AnalyzeResponse:
    g = request.graph.to_graph()
    connected = is_strongly_connected(g)
    if not connected:
        return schemas.AnalyzeResponse(
            num_vertices=g.num_vertices,
            num_edges=g.num_edges,
            strongly_connected=False,
        )
    verdict = classify(g)
    return schemas.AnalyzeResponse(
        num_vertices=g.num_vertices,
        num_edges=g.num_edges,
        strongly_connected=True,
        period=period(g) if g.num_edges else None,
        classification=schemas.ClassificationModel(
            is_bunchy=verdict.is_bunchy,
            is_almost_bunchy=verdict.is_almost_bunchy,
            is_weakly_almost_bunchy=verdict.is_weakly_almost_bunchy,
        ),
        minimal_vertices=compute_minimal_factor(g).m_graph.num_vertices,
        bunchy_vertices=compute_bunchy_factor(g).b_graph.num_vertices,
    )


def minimize(request: schemas.GraphRequest) -> schemas.MinimizeResponse:
    result = compute_minimal_factor(request.graph.to_graph())
    return schemas.MinimizeResponse(
        m_graph=schemas.GraphModel.from_graph(result.m_graph),
        partition=list(result.partition.classes),
        witness=schemas.ResolverModel.from_resolver(result.witness),
    )


def bunchy(request: schemas.GraphRequest) -> schemas.BunchyResponse:
    result = compute_bunchy_factor(request.graph.to_graph())
    return schemas.BunchyResponse(
        b_graph=schemas.GraphModel.from_graph(result.b_graph),
        classes=list(result.classes.classes),
        witness=schemas.ResolverModel.from_resolver(result.witness),
    )


def stability(request: schemas.StabilityRequest) -> schemas.StabilityResponse:
    report = compute_stability(request.resolver.to_resolver())
    return schemas.StabilityResponse(
        stable_pairs=sorted(report.stable_pairs),
        partition=list(report.partition.classes),
        synchronizing=report.synchronizing,
    )


def sync_prob(request: schemas.SyncProbRequest) -> schemas.SyncProbResponse:
    estimate = estimate_sync_probability(
        request.graph.to_graph(),
        successes=request.successes,
        trial_cap=request.trial_cap,
        seed=request.seed,
    )
    return schemas.SyncProbResponse(
        successes=estimate.successes,
        trials=estimate.trials,
        p_hat=estimate.p_hat,
        capped=estimate.capped,
    )


def table(request: schemas.TableRequest) -> schemas.TableResponse:
    result = run_table_experiment(
        request.m_graph.to_graph(),
        request.num_vertices,
        graphs=request.graphs,
        successes=request.successes,
        trial_cap=request.trial_cap,
        seed=request.seed,
        workers=request.workers,
        m_name=request.m_name,
    )
    return schemas.TableResponse(
        mean_p=result.mean_p,
        table_csv=table_csv(result),
        records_csv=records_csv(result.records),
        records=[
            schemas.RecordModel(
                graph_id=r.graph_id, p_hat=r.p_hat, trials=r.trials, capped=r.capped
            )
            for r in result.records
        ],
    )


def histogram(request: schemas.HistogramRequest) -> schemas.HistogramResponse:
    records = parse_records_csv(request.records_csv)
    return schemas.HistogramResponse(
        histogram_csv=histogram_csv(
            [r.p_hat for r in records], bins=request.bins, below_one=request.below_one
        )
    )


def search_biresolver(request: schemas.GraphRequest) -> schemas.SearchBiresolverResponse:
    phi = find_biresolver(request.graph.to_graph())
    if phi is None:
        return schemas.SearchBiresolverResponse(found=False)
    return schemas.SearchBiresolverResponse(
        found=True, resolver=schemas.ResolverModel.from_resolver(phi)
    )


def synthesize(request: schemas.SynthesizeRequest) -> schemas.SynthesizeResponse:
    trace = synthesize_synchronizer(
        request.graph.to_graph(),
        seed=request.seed,
        heuristic_cap=request.heuristic_cap,
    )
    return schemas.SynthesizeResponse(
        steps=[
            schemas.SynthesisStepModel(
                route=step.route,
                resolver=schemas.ResolverModel.from_resolver(step.resolver),
                partition=list(step.partition.classes),
                quotient=schemas.GraphModel.from_graph(step.quotient),
            )
            for step in trace.steps
        ],
        final=schemas.ResolverModel.from_resolver(trace.final),
        used_heuristic=trace.used_heuristic,
    )


def sample(request: schemas.SampleRequest) -> schemas.SampleResponse:
    g = sample_extension(
        ExtensionSpec(request.m_graph.to_graph(), request.num_vertices, request.seed)
    )
    return schemas.SampleResponse(graph=schemas.GraphModel.from_graph(g))


def probe_og(request: schemas.ProbeOgRequest) -> schemas.ProbeOgResponse:
    report = probe_og_uniqueness(request.graph.to_graph())
    return schemas.ProbeOgResponse(
        factors=[schemas.GraphModel.from_graph(h) for h in report.factors],
        minimal_factors=[
            schemas.GraphModel.from_graph(h) for h in report.minimal_factors
        ],
        unique=report.unique,
    )
