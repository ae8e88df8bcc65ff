"""Command-line front door.

Every subcommand goes through the service handlers, in-process by default
or against a remote instance with ``--server URL``, so the CLI and the
HTTP API cannot drift apart.  Human-readable summaries go to standard
output; machine formats (JSON, CSV) are written only via ``--out`` and
``--records-out``.  Runs with identical inputs and seed produce
byte-identical outputs.

Exit codes: 0 success, 1 user error, 2 theorem violation (the offending
instance is printed so it can be reported).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SynchronizerNotFound, TheoremViolation, UsageError
from .service import handlers, schemas

#: Seed used (and printed) when a randomized subcommand omits --seed.
DEFAULT_SEED = 0

_ENDPOINTS = {
    "analyze": (handlers.analyze, schemas.AnalyzeResponse),
    "minimize": (handlers.minimize, schemas.MinimizeResponse),
    "bunchy": (handlers.bunchy, schemas.BunchyResponse),
    "stability": (handlers.stability, schemas.StabilityResponse),
    "sync-prob": (handlers.sync_prob, schemas.SyncProbResponse),
    "table": (handlers.table, schemas.TableResponse),
    "histogram": (handlers.histogram, schemas.HistogramResponse),
    "search-biresolver": (handlers.search_biresolver, schemas.SearchBiresolverResponse),
    "synthesize": (handlers.synthesize, schemas.SynthesizeResponse),
    "sample": (handlers.sample, schemas.SampleResponse),
    "probe-og": (handlers.probe_og, schemas.ProbeOgResponse),
}


class _RemoteTheoremViolation(Exception):
    """A remote server reported a theorem violation; carries its body."""

    def __init__(self, body):
        super().__init__(body.get("message", "theorem violation"))
        self.body = body


def _call(args, endpoint, request):
    """Run one endpoint in-process or against ``--server``."""
    handler, response_type = _ENDPOINTS[endpoint]
    if not getattr(args, "server", None):
        return handler(request)
    import httpx

    response = httpx.post(
        args.server.rstrip("/") + "/" + endpoint,
        json=request.model_dump(),
        timeout=None,
    )
    if response.status_code == 200:
        return response_type.model_validate(response.json())
    body = response.json()
    if body.get("error") == "theorem-violation":
        raise _RemoteTheoremViolation(body)
    raise UsageError(f"server rejected the request: {body.get('message', body)}")


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_graph(path) -> schemas.GraphModel:
    from .graphs import Graph

    return schemas.GraphModel.from_graph(Graph.from_json(_read_text(path)))


def _load_resolver(path) -> schemas.ResolverModel:
    from .resolvers import RightResolver

    return schemas.ResolverModel.from_resolver(
        RightResolver.from_json(_read_text(path))
    )


def _write_out(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump(model) -> str:
    return json.dumps(model.model_dump(), indent=2, sort_keys=True) + "\n"


def _graph_line(graph: schemas.GraphModel) -> str:
    return json.dumps(graph.model_dump(), separators=(",", ":"))


def _print_seed(args):
    print(f"seed: {args.seed}")


# -- subcommand implementations ---------------------------------------------


def _cmd_analyze(args):
    result = _call(args, "analyze", schemas.GraphRequest(graph=_load_graph(args.graph)))
    print(f"vertices: {result.num_vertices}")
    print(f"edges: {result.num_edges}")
    print(f"strongly connected: {'yes' if result.strongly_connected else 'no'}")
    if result.strongly_connected:
        if result.period is not None:
            print(f"period: {result.period}")
        c = result.classification
        print(f"bunchy: {'yes' if c.is_bunchy else 'no'}")
        print(f"almost bunchy: {'yes' if c.is_almost_bunchy else 'no'}")
        print(f"weakly almost bunchy: {'yes' if c.is_weakly_almost_bunchy else 'no'}")
        print(f"minimal factor vertices: {result.minimal_vertices}")
        print(f"bunchy factor vertices: {result.bunchy_vertices}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_minimize(args):
    result = _call(args, "minimize", schemas.GraphRequest(graph=_load_graph(args.graph)))
    print(f"minimal factor: {_graph_line(result.m_graph)}")
    print(f"partition: {result.partition}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_bunchy(args):
    result = _call(args, "bunchy", schemas.GraphRequest(graph=_load_graph(args.graph)))
    print(f"bunchy factor: {_graph_line(result.b_graph)}")
    print(f"classes: {result.classes}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_stability(args):
    result = _call(
        args, "stability", schemas.StabilityRequest(resolver=_load_resolver(args.resolver))
    )
    print(f"stable pairs: {len(result.stable_pairs)}")
    print(f"stability classes: {result.partition}")
    print(f"synchronizing: {'yes' if result.synchronizing else 'no'}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_sync_prob(args):
    _print_seed(args)
    result = _call(
        args,
        "sync-prob",
        schemas.SyncProbRequest(
            graph=_load_graph(args.graph),
            successes=args.successes,
            trial_cap=args.trials_cap,
            seed=args.seed,
        ),
    )
    print(f"p_hat: {result.p_hat} ({result.successes}/{result.trials})")
    print(f"capped: {'yes' if result.capped else 'no'}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_table(args):
    _print_seed(args)
    result = _call(
        args,
        "table",
        schemas.TableRequest(
            m_graph=_load_graph(args.m),
            num_vertices=args.n,
            graphs=args.graphs,
            successes=args.successes,
            trial_cap=args.trials_cap,
            seed=args.seed,
            workers=args.workers,
            m_name=args.m_name,
        ),
    )
    capped = sum(1 for r in result.records if r.capped)
    print(f"mean_p: {result.mean_p}")
    print(f"capped records: {capped}")
    if args.out:
        _write_out(args.out, result.table_csv)
    if args.records_out:
        _write_out(args.records_out, result.records_csv)
    return 0


def _cmd_histogram(args):
    result = _call(
        args,
        "histogram",
        schemas.HistogramRequest(
            records_csv=_read_text(args.records),
            bins=args.bins,
            below_one=args.below_one,
        ),
    )
    total = sum(int(line.split(",")[2]) for line in result.histogram_csv.splitlines()[1:])
    print(f"bins: {args.bins}")
    print(f"counted records: {total}")
    if args.out:
        _write_out(args.out, result.histogram_csv)
    return 0


def _cmd_search_biresolver(args):
    result = _call(
        args, "search-biresolver", schemas.GraphRequest(graph=_load_graph(args.graph))
    )
    if not result.found:
        print("bi-resolver: none")
    else:
        print("bi-resolver: found")
        print(f"edge map: {result.resolver.edge_map}")
        if args.out:
            _write_out(args.out, _dump(result.resolver))
    return 0


def _cmd_synthesize(args):
    _print_seed(args)
    result = _call(
        args,
        "synthesize",
        schemas.SynthesizeRequest(
            graph=_load_graph(args.graph),
            seed=args.seed,
            heuristic_cap=args.heuristic_cap,
        ),
    )
    print(f"rounds: {[step.route for step in result.steps]}")
    print(f"final edge map: {result.final.edge_map}")
    print(f"used heuristic: {'yes' if result.used_heuristic else 'no'}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_sample(args):
    _print_seed(args)
    result = _call(
        args,
        "sample",
        schemas.SampleRequest(
            m_graph=_load_graph(args.m), num_vertices=args.n, seed=args.seed
        ),
    )
    print(f"graph: {_graph_line(result.graph)}")
    if args.out:
        _write_out(args.out, result.graph.to_graph().to_json() + "\n")
    return 0


def _cmd_probe_og(args):
    result = _call(args, "probe-og", schemas.GraphRequest(graph=_load_graph(args.graph)))
    print(f"synchronizing factors: {len(result.factors)}")
    print(f"minimal synchronizing factors: {len(result.minimal_factors)}")
    print(f"unique: {'yes' if result.unique else 'no'}")
    if args.out:
        _write_out(args.out, _dump(result))
    return 0


def _cmd_serve(args):
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# -- parser ------------------------------------------------------------------


def _add_common(sub, out=True, server=True):
    if out:
        sub.add_argument("--out", help="write the machine-readable result here")
    if server:
        sub.add_argument("--server", help="base URL of a running service instance")


def _add_seed(sub):
    sub.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"random seed (default {DEFAULT_SEED}, printed for reproducibility)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncfactor",
        description="Analyses, constructions and experiments for right resolvers.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", help="connectivity, period, classification")
    p.add_argument("graph", help="graph JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("minimize", help="minimal right-resolving factor")
    p.add_argument("graph", help="graph JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("bunchy", help="maximal bunchy factor")
    p.add_argument("graph", help="graph JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_bunchy)

    p = sub.add_parser("stability", help="stability report for a resolver")
    p.add_argument("resolver", help="resolver JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("sync-prob", help="synchronization probability estimate")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--successes", type=int, default=100)
    p.add_argument("--trials-cap", type=int, default=10_000)
    _add_seed(p)
    _add_common(p)
    p.set_defaults(func=_cmd_sync_prob)

    p = sub.add_parser("table", help="mean estimate over random extensions")
    p.add_argument("--m", required=True, help="minimal base graph JSON file")
    p.add_argument("--n", type=int, required=True, help="extension vertex count")
    p.add_argument("--graphs", type=int, default=1000)
    p.add_argument("--successes", type=int, default=100)
    p.add_argument("--trials-cap", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--m-name", default="m", help="row label in the table CSV")
    p.add_argument("--records-out", help="write the per-graph records CSV here")
    _add_seed(p)
    _add_common(p)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("histogram", help="bin per-graph estimates from a records CSV")
    p.add_argument("records", help="records CSV file")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument(
        "--below-one",
        action="store_true",
        help="drop estimates equal to exactly 1.0 before binning",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("search-biresolver", help="bi-resolver onto the bunchy factor")
    p.add_argument("graph", help="graph JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_search_biresolver)

    p = sub.add_parser("synthesize", help="build a synchronizing resolver")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--heuristic-cap", type=int, default=10_000)
    _add_seed(p)
    _add_common(p)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("sample", help="draw one random extension of a minimal graph")
    p.add_argument("--m", required=True, help="minimal base graph JSON file")
    p.add_argument("--n", type=int, required=True, help="extension vertex count")
    _add_seed(p)
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("probe-og", help="uniqueness of the minimal synchronizing factor")
    p.add_argument("graph", help="graph JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_probe_og)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad arguments; that is a user error here.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        if exc.payload is not None:
            print(json.dumps(exc.payload, indent=2, sort_keys=True), file=sys.stderr)
        return 2
    except _RemoteTheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        if exc.body.get("instance") is not None:
            print(
                json.dumps(exc.body["instance"], indent=2, sort_keys=True),
                file=sys.stderr,
            )
        return 2
    except SynchronizerNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.graph_payload is not None:
            print(json.dumps(exc.graph_payload, sort_keys=True), file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
