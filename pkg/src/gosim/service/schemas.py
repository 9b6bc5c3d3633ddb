"""Request and response models for the HTTP service.

Paths in requests are resolved on the machine the service runs on; the
command layer writes report files there and responses carry the numbers a
client would print. NaN never crosses the wire: undefined cells are null.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class BuildRequest(BaseModel):
    obo: str
    gaf: str
    out_dir: str
    drop_evidence: list[str] | None = None
    drop_root_only: bool = True
    namespaces: list[str] | None = None


class BuildResponse(BaseModel):
    manifest: str
    fingerprint: str
    namespaces: dict[str, dict]
    elapsed_seconds: float


class TermPair(BaseModel):
    term1: str
    term2: str


class TermSimRequest(BaseModel):
    workspace: str
    measure: str
    pairs: list[TermPair] = Field(default_factory=list)
    pairs_file: str | None = None
    out: str | None = None


class TermSimRow(BaseModel):
    term1: str
    term2: str
    namespace: str
    value: float


class TermSimResponse(BaseModel):
    measure: str
    rows: list[TermSimRow]
    out: str | None = None


class GenePair(BaseModel):
    gene1: str
    gene2: str


class ProtSimRequest(BaseModel):
    workspace: str
    namespace: str
    measure: str
    strategy: str
    pairs: list[GenePair] = Field(default_factory=list)
    pairs_file: str | None = None
    out: str | None = None


class ProtSimRow(BaseModel):
    gene1: str
    gene2: str
    value: float


class ProtSimResponse(BaseModel):
    namespace: str
    measure: str
    strategy: str
    rows: list[ProtSimRow]
    out: str | None = None


class MatrixRequest(BaseModel):
    workspace: str
    namespace: str
    measure: str
    strategy: str
    out: str
    genes_file: str | None = None
    workers: int = 1
    formats: list[str] = Field(default_factory=lambda: ["binary"])


class MatrixResponse(BaseModel):
    namespace: str
    measure: str
    strategy: str
    genes: int
    excluded: int
    stats: dict
    paths: dict[str, str]
    elapsed_seconds: float


class CorrelateRequest(BaseModel):
    matrix: str
    blast: str | None = None
    expression: str | None = None
    n_intervals: int = 50
    out: str | None = None


class IntervalRow(BaseModel):
    index: int
    low: float
    high: float
    count: int
    mean_semantic: float | None
    mean_external: float | None


class CorrelateResponse(BaseModel):
    source: str
    pearson_r: float
    n_pairs: int
    non_empty: int
    n_intervals: int
    one_directional: int = 0
    intervals: list[IntervalRow]
    out: str | None = None


class PredictRequest(BaseModel):
    bp: str
    cc: str
    bp_min: float = 0.7
    cc_min: float = 0.8
    complexes: str | None = None
    out: str | None = None


class CoverageSummary(BaseModel):
    complexes: int
    fully_covered: int


class PredictResponse(BaseModel):
    bp_min: float
    cc_min: float
    shared_genes: int
    edges: int
    proteins: int
    components: int
    largest_component: int
    coverage: CoverageSummary | None = None
    edges_out: str | None = None
    coverage_out: str | None = None


class ZScoreRequest(BaseModel):
    positives: str
    bp: str
    cc: str
    n_samples: int = 1000
    seed: int = 42
    workers: int = 1
    out: str | None = None


class ZScoreResponse(BaseModel):
    n_samples: int
    sample_size: int
    seed: int
    universe: int
    positives_used: int
    positives_dropped: int
    observed: list[list[int]]
    random_mean: list[list[float]]
    random_sd: list[list[float]]
    z: list[list[float | None]]
    out: str | None = None


class RocRequest(BaseModel):
    positives: str
    bp: str
    cc: str
    combine: str = "mean"
    repeats: int = 10
    seed: int = 42
    workers: int = 1
    out: str | None = None


class RocResponse(BaseModel):
    combine: str
    repeats: int
    seed: int
    n_positives: int
    n_negatives: int
    positives_dropped: int
    aucs: list[float]
    auc_mean: float
    auc_sd: float
    out: str | None = None


class HistRequest(BaseModel):
    matrices: list[str]
    scheme: str
    pairs: str | None = None
    out: str | None = None


class HistogramModel(BaseModel):
    scheme: str
    counts: list[int]
    labels: list[str]
    n_values: int
    excluded: int


class ChiRow(BaseModel):
    label_a: str
    label_b: str
    statistic: float
    p_value: float


class HistResponse(BaseModel):
    scheme: str
    histograms: dict[str, HistogramModel]
    chi: list[ChiRow]
    out: str | None = None
