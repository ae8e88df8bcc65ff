"""FastAPI application exposing every analysis as a POST endpoint.

Error contract: ``UsageError`` subclasses become 400 responses whose body
names the error kind; ``TheoremViolation`` becomes a 500 with kind
``theorem-violation`` and the offending instance attached, because it means
a proved statement failed on concrete data and must never be hidden.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import SynchronizerNotFound, TheoremViolation, UsageError
from . import handlers, schemas

app = FastAPI(title="syncfactor")


def _kind(exc: Exception) -> str:
    name = type(exc).__name__
    out = [name[0].lower()]
    for ch in name[1:]:
        if ch.isupper():
            out.append("-")
        out.append(ch.lower())
    return "".join(out)


@app.exception_handler(UsageError)
async def usage_error_handler(request: Request, exc: UsageError):
    body = {"error": _kind(exc), "message": str(exc)}
    if isinstance(exc, SynchronizerNotFound) and exc.graph_payload is not None:
        body["graph"] = exc.graph_payload
    return JSONResponse(status_code=400, content=body)


@app.exception_handler(TheoremViolation)
async def theorem_violation_handler(request: Request, exc: TheoremViolation):
    return JSONResponse(
        status_code=500,
        content={
            "error": "theorem-violation",
            "message": str(exc),
            "instance": exc.payload,
        },
    )


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/analyze")
def analyze(request: schemas.GraphRequest) -> schemas.AnalyzeResponse:
    return handlers.analyze(request)


@app.post("/minimize")
def minimize(request: schemas.GraphRequest) -> schemas.MinimizeResponse:
    return handlers.minimize(request)


@app.post("/bunchy")
def bunchy(request: schemas.GraphRequest) -> schemas.BunchyResponse:
    return handlers.bunchy(request)


@app.post("/stability")
def stability(request: schemas.StabilityRequest) -> schemas.StabilityResponse:
    return handlers.stability(request)


@app.post("/sync-prob")
def sync_prob(request: schemas.SyncProbRequest) -> schemas.SyncProbResponse:
    return handlers.sync_prob(request)


@app.post("/table")
def table(request: schemas.TableRequest) -> schemas.TableResponse:
    return handlers.table(request)


@app.post("/histogram")
def histogram(request: schemas.HistogramRequest) -> schemas.HistogramResponse:
    return handlers.histogram(request)


@app.post("/search-biresolver")
def search_biresolver(
    request: schemas.GraphRequest,
) -> schemas.SearchBiresolverResponse:
    return handlers.search_biresolver(request)


@app.post("/synthesize")
def synthesize(request: schemas.SynthesizeRequest) -> schemas.SynthesizeResponse:
    return handlers.synthesize(request)


@app.post("/sample")
def sample(request: schemas.SampleRequest) -> schemas.SampleResponse:
    return handlers.sample(request)


@app.post("/probe-og")
def probe_og(request: schemas.ProbeOgRequest) -> schemas.ProbeOgResponse:
    return handlers.probe_og(request)
