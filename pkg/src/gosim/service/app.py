"""HTTP service exposing the command layer.

One route per pipeline stage; loaded workspaces are cached per manifest
digest so repeated queries against the same build skip re-parsing. Domain
errors map to HTTP 400 with a payload distinguishing validation from data
problems; anything unexpected maps to 500. Exit-code-minded clients can
rely on ``error.kind``.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, pipeline, tables
from ..errors import GosimError, MissingArtifact, ValidationError
from ..workspace import MANIFEST_NAME, Workspace, file_sha256, load_workspace
from . import schemas

_CACHE_SLOTS = 8


def _none_if_nan(value: float) -> float | None:
    return None if math.isnan(value) else value


def create_app() -> FastAPI:
    app = FastAPI(title="gosim", version=__version__)
    app.state.workspaces = OrderedDict()

    def workspace_for(path: str) -> Workspace:
        root = Path(path)
        manifest = root / MANIFEST_NAME
        if not manifest.is_file():
            raise MissingArtifact(str(manifest), "run build first")
        key = (str(root.resolve()), file_sha256(manifest))
        cache: OrderedDict = app.state.workspaces
        if key not in cache:
            if len(cache) >= _CACHE_SLOTS:
                cache.popitem(last=False)
            cache[key] = load_workspace(root)
        cache.move_to_end(key)
        return cache[key]

    def term_pairs(req: schemas.TermSimRequest) -> list[tuple[str, str]]:
        pairs = [(p.term1, p.term2) for p in req.pairs]
        if req.pairs_file:
            pairs.extend(tables.read_term_pairs(req.pairs_file))
        if not pairs:
            raise ValidationError("no term pairs given")
        return pairs

    def gene_pairs(req: schemas.ProtSimRequest) -> list[tuple[str, str]]:
        pairs = [(p.gene1, p.gene2) for p in req.pairs]
        if req.pairs_file:
            pairs.extend(tables.read_pair_list(req.pairs_file))
        if not pairs:
            raise ValidationError("no gene pairs given")
        return pairs

    @app.exception_handler(GosimError)
    async def domain_error(request: Request, exc: GosimError) -> JSONResponse:
        kind = "validation" if isinstance(exc, ValidationError) else "data"
        return JSONResponse(status_code=400, content={"error": {
            "kind": kind, "type": type(exc).__name__, "message": str(exc)}})

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=500, content={"error": {
            "kind": "internal", "type": type(exc).__name__, "message": str(exc)}})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/workspaces/build", response_model=schemas.BuildResponse)
    def build(req: schemas.BuildRequest) -> schemas.BuildResponse:
        result = pipeline.run_build(
            req.obo, req.gaf, req.out_dir,
            drop_evidence=req.drop_evidence,
            drop_root_only=req.drop_root_only,
            namespaces=req.namespaces)
        return schemas.BuildResponse(
            manifest=str(result.manifest_path),
            fingerprint=result.fingerprint,
            namespaces=result.namespaces,
            elapsed_seconds=result.elapsed)

    @app.post("/termsim", response_model=schemas.TermSimResponse)
    def termsim(req: schemas.TermSimRequest) -> schemas.TermSimResponse:
        workspace = workspace_for(req.workspace)
        rows = pipeline.run_termsim(workspace, req.measure, term_pairs(req),
                                    out=req.out)
        return schemas.TermSimResponse(
            measure=req.measure,
            rows=[schemas.TermSimRow(term1=r.term1, term2=r.term2,
                                     namespace=r.namespace, value=r.value)
                  for r in rows],
            out=req.out)

    @app.post("/protsim", response_model=schemas.ProtSimResponse)
    def protsim(req: schemas.ProtSimRequest) -> schemas.ProtSimResponse:
        workspace = workspace_for(req.workspace)
        rows = pipeline.run_protsim(workspace, req.namespace, req.measure,
                                    req.strategy, gene_pairs(req), out=req.out)
        first = rows[0]
        return schemas.ProtSimResponse(
            namespace=first.namespace,
            measure=first.measure,
            strategy=first.strategy,
            rows=[schemas.ProtSimRow(gene1=r.gene1, gene2=r.gene2,
                                     value=r.value) for r in rows],
            out=req.out)

    @app.post("/matrix", response_model=schemas.MatrixResponse)
    def matrix(req: schemas.MatrixRequest) -> schemas.MatrixResponse:
        workspace = workspace_for(req.workspace)
        genes = tables.read_gene_list(req.genes_file) if req.genes_file else None
        result = pipeline.run_matrix(
            workspace, req.namespace, req.measure, req.strategy, req.out,
            genes=genes, workers=req.workers, formats=req.formats)
        return schemas.MatrixResponse(
            namespace=result.matrix.namespace,
            measure=result.matrix.measure,
            strategy=result.matrix.strategy,
            genes=len(result.matrix.genes),
            excluded=result.matrix.excluded,
            stats=result.matrix.stats,
            paths={name: str(p) for name, p in result.paths.items()},
            elapsed_seconds=result.elapsed)

    @app.post("/correlate", response_model=schemas.CorrelateResponse)
    def correlate(req: schemas.CorrelateRequest) -> schemas.CorrelateResponse:
        result = pipeline.run_correlate(
            req.matrix, blast=req.blast, expression=req.expression,
            n_intervals=req.n_intervals, out=req.out)
        report = result.report
        return schemas.CorrelateResponse(
            source=result.source,
            pearson_r=report.pearson_r,
            n_pairs=report.n_pairs,
            non_empty=report.non_empty,
            n_intervals=report.n_intervals,
            one_directional=result.one_directional,
            intervals=[schemas.IntervalRow(
                index=s.index, low=s.low, high=s.high, count=s.count,
                mean_semantic=_none_if_nan(s.mean_semantic),
                mean_external=_none_if_nan(s.mean_external))
                for s in report.intervals],
            out=str(result.out) if result.out else None)

    @app.post("/predict", response_model=schemas.PredictResponse)
    def predict(req: schemas.PredictRequest) -> schemas.PredictResponse:
        result = pipeline.run_predict(
            req.bp, req.cc, bp_min=req.bp_min, cc_min=req.cc_min,
            complexes=req.complexes, out=req.out)
        prediction = result.prediction
        coverage = None
        if result.coverage is not None:
            coverage = schemas.CoverageSummary(
                complexes=result.coverage.complexes,
                fully_covered=result.coverage.fully_covered)
        return schemas.PredictResponse(
            bp_min=prediction.bp_min,
            cc_min=prediction.cc_min,
            shared_genes=prediction.shared_genes,
            edges=len(prediction.edges),
            proteins=prediction.proteins,
            components=prediction.components,
            largest_component=prediction.largest_component,
            coverage=coverage,
            edges_out=str(result.edges_out) if result.edges_out else None,
            coverage_out=str(result.coverage_out) if result.coverage_out
            else None)

    @app.post("/zscore", response_model=schemas.ZScoreResponse)
    def zscore(req: schemas.ZScoreRequest) -> schemas.ZScoreResponse:
        result = pipeline.run_zscore(
            req.positives, req.bp, req.cc, n_samples=req.n_samples,
            seed=req.seed, workers=req.workers, out=req.out)
        grid = result.grid
        return schemas.ZScoreResponse(
            n_samples=grid.n_samples,
            sample_size=grid.sample_size,
            seed=grid.seed,
            universe=grid.universe,
            positives_used=grid.positives_used,
            positives_dropped=grid.positives_dropped,
            observed=grid.observed.astype(int).tolist(),
            random_mean=grid.random_mean.tolist(),
            random_sd=grid.random_sd.tolist(),
            z=[[_none_if_nan(v) for v in row] for row in grid.z.tolist()],
            out=str(result.out) if result.out else None)

    @app.post("/roc", response_model=schemas.RocResponse)
    def roc(req: schemas.RocRequest) -> schemas.RocResponse:
        result = pipeline.run_roc(
            req.positives, req.bp, req.cc, combine=req.combine,
            repeats=req.repeats, seed=req.seed, workers=req.workers,
            out=req.out)
        report = result.report
        return schemas.RocResponse(
            combine=report.combine,
            repeats=report.repeats,
            seed=report.seed,
            n_positives=report.n_positives,
            n_negatives=report.n_negatives,
            positives_dropped=report.positives_dropped,
            aucs=report.aucs,
            auc_mean=report.auc_mean,
            auc_sd=report.auc_sd,
            out=str(result.out) if result.out else None)

    @app.post("/hist", response_model=schemas.HistResponse)
    def hist(req: schemas.HistRequest) -> schemas.HistResponse:
        result = pipeline.run_hist(req.matrices, req.scheme, pairs=req.pairs,
                                   out=req.out)
        return schemas.HistResponse(
            scheme=req.scheme,
            histograms={
                label: schemas.HistogramModel(
                    scheme=h.scheme,
                    counts=h.counts.tolist(),
                    labels=list(h.labels),
                    n_values=h.n_values,
                    excluded=h.excluded)
                for label, h in result.histograms.items()},
            chi=[schemas.ChiRow(label_a=a, label_b=b, statistic=stat, p_value=p)
                 for (a, b), (stat, p) in sorted(result.chi.items())],
            out=str(result.out) if result.out else None)

    return app
