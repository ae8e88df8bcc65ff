"""Request/response models for the service endpoints."""

from __future__ import annotations

from pydantic import BaseModel

from ..graphs import Graph
from ..resolvers import RightResolver, validate


class GraphModel(BaseModel):
    num_vertices: int
    edges: list[tuple[int, int]]

    @classmethod
    def from_graph(cls, g: Graph) -> "GraphModel":
        return cls(num_vertices=g.num_vertices, edges=list(g.edges))

    def to_graph(self) -> Graph:
        return Graph(self.num_vertices, self.edges)


class ResolverModel(BaseModel):
    domain: GraphModel
    codomain: GraphModel
    vertex_map: list[int]
    edge_map: list[int]

    @classmethod
    def from_resolver(cls, phi: RightResolver) -> "ResolverModel":
        return cls(
            domain=GraphModel.from_graph(phi.domain),
            codomain=GraphModel.from_graph(phi.codomain),
            vertex_map=list(phi.vertex_map),
            edge_map=list(phi.edge_map),
        )

    def to_resolver(self) -> RightResolver:
        return validate(
            self.domain.to_graph(),
            self.codomain.to_graph(),
            self.vertex_map,
            self.edge_map,
        )


class GraphRequest(BaseModel):
    graph: GraphModel


class ClassificationModel(BaseModel):
    is_bunchy: bool
    is_almost_bunchy: bool
    is_weakly_almost_bunchy: bool


class AnalyzeResponse(BaseModel):
    num_vertices: int
    num_edges: int
    strongly_connected: bool
    period: int | None = None
    classification: ClassificationModel | None = None
    minimal_vertices: int | None = None
    bunchy_vertices: int | None = None


class MinimizeResponse(BaseModel):
    m_graph: GraphModel
    partition: list[int]
    witness: ResolverModel


class BunchyResponse(BaseModel):
    b_graph: GraphModel
    classes: list[int]
    witness: ResolverModel


class StabilityRequest(BaseModel):
    resolver: ResolverModel


class StabilityResponse(BaseModel):
    stable_pairs: list[tuple[int, int]]
    partition: list[int]
    synchronizing: bool


class SyncProbRequest(BaseModel):
    graph: GraphModel
    successes: int = 100
    trial_cap: int = 10_000
    seed: int = 0


class SyncProbResponse(BaseModel):
    successes: int
    trials: int
    p_hat: float
    capped: bool


class TableRequest(BaseModel):
    m_graph: GraphModel
    num_vertices: int
    graphs: int = 1000
    successes: int = 100
    trial_cap: int = 10_000
    seed: int = 0
    workers: int = 1
    m_name: str = "m"


class RecordModel(BaseModel):
    graph_id: int
    p_hat: float
    trials: int
    capped: bool


class TableResponse(BaseModel):
    mean_p: float
    table_csv: str
    records_csv: str
    records: list[RecordModel]


class HistogramRequest(BaseModel):
    records_csv: str
    bins: int = 20
    below_one: bool = False


class HistogramResponse(BaseModel):
    histogram_csv: str


class SearchBiresolverResponse(BaseModel):
    found: bool
    resolver: ResolverModel | None = None


class SynthesizeRequest(BaseModel):
    graph: GraphModel
    seed: int = 0
    heuristic_cap: int = 10_000


class SynthesisStepModel(BaseModel):
    route: str
    resolver: ResolverModel
    partition: list[int]
    quotient: GraphModel


class SynthesizeResponse(BaseModel):
    steps: list[SynthesisStepModel]
    final: ResolverModel
    used_heuristic: bool


class SampleRequest(BaseModel):
    m_graph: GraphModel
    num_vertices: int
    seed: int = 0


class SampleResponse(BaseModel):
    graph: GraphModel


class ProbeOgRequest(BaseModel):
    graph: GraphModel


class ProbeOgResponse(BaseModel):
    factors: list[GraphModel]
    minimal_factors: list[GraphModel]
    unique: bool
