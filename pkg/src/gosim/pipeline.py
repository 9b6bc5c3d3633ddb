"""Command layer shared by the CLI and the HTTP service.

Each ``run_*`` function loads its inputs, computes one stage, and (when an
output path is given) writes a report TSV opening with ``# key<TAB>value``
metadata lines, so every report is self-describing and byte-stable given
(inputs, parameters, seed). Volatile facts live in a separate run manifest
JSON written next to each report: wall time, absolute paths and content
digests of inputs and outputs. The report bytes never depend on the clock
or on worker count.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import analysis, tables
from .annotations import DEFAULT_DROP_EVIDENCE
from .errors import EmptySet, ValidationError
from .proteinsim import ScoreMatrix, all_pairs, load_score_matrix, protein_sim, \
    resolve_strategy
from .termsim import resolve_measure
from .workspace import Workspace, build_workspace, file_sha256, load_workspace, \
    save_workspace

DEFAULT_WORKERS = 1


# ---------------------------------------------------------------------------
# report and manifest plumbing


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_report(meta: Mapping[str, object], columns: Sequence[str],
                  rows: Iterable[Sequence[object]]) -> str:
    lines = [f"# {key}\t{_fmt(value)}" for key, value in meta.items()]
    lines.append("\t".join(columns))
    for row in rows:
        lines.append("\t".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_run_manifest(report_path: Path, command: str, params: Mapping[str, object],
                       inputs: Mapping[str, Path | str],
                       outputs: Mapping[str, Path | str],
                       elapsed: float) -> Path:
    manifest = {
        "command": command,
        "params": dict(params),
        "inputs": {
            name: {"path": str(p), "sha256": file_sha256(p)}
            for name, p in sorted(inputs.items())
        },
        "outputs": {
            name: {"path": str(p), "sha256": file_sha256(p)}
            for name, p in sorted(outputs.items())
        },
        "wall_time_seconds": round(elapsed, 6),
    }
    path = report_path.with_name(report_path.name + ".run.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


class _Timer:
    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.start


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


# ---------------------------------------------------------------------------
# build


@dataclass
class BuildResult:
    manifest_path: Path
    fingerprint: str
    namespaces: dict
    elapsed: float


def run_build(obo_path: Path | str, gaf_path: Path | str, out_dir: Path | str, *,
              drop_evidence: Iterable[str] | None = None,
              drop_root_only: bool = True,
              namespaces: list[str] | None = None) -> BuildResult:
    """Parse ontology + annotations and persist the derived artifacts."""
    with _Timer() as timer:
        evidence = DEFAULT_DROP_EVIDENCE if drop_evidence is None \
            else frozenset(code.strip().upper() for code in drop_evidence
                           if code.strip())
        workspace = build_workspace(obo_path, gaf_path, drop_evidence=evidence,
                                    drop_root_only=drop_root_only,
                                    namespaces=namespaces)
        manifest_path = save_workspace(workspace, out_dir)
    write_run_manifest(
        manifest_path, "build",
        params=workspace.meta["params"],
        inputs={"obo": obo_path, "gaf": gaf_path},
        outputs={"manifest": manifest_path},
        elapsed=timer.elapsed)
    return BuildResult(
        manifest_path=manifest_path,
        fingerprint=workspace.fingerprint,
        namespaces=workspace.meta["namespaces"],
        elapsed=timer.elapsed)


def open_workspace(workspace_dir: Path | str) -> Workspace:
    return load_workspace(workspace_dir)


# ---------------------------------------------------------------------------
# term and protein similarity


@dataclass
class TermSimRow:
    term1: str
    term2: str
    namespace: str
    value: float


def run_termsim(workspace: Workspace, measure: str,
                pairs: Iterable[tuple[str, str]], *,
                out: Path | str | None = None) -> list[TermSimRow]:
    measure = resolve_measure(measure)
    rows = []
    for t1, t2 in pairs:
        value, namespace = workspace.term_similarity(measure, t1, t2)
        rows.append(TermSimRow(t1, t2, namespace, value))
    if out is not None:
        out = Path(out)
        _ensure_parent(out)
        with _Timer() as timer:
            out.write_text(render_report(
                {"command": "termsim", "measure": measure,
                 "fingerprint": workspace.fingerprint, "pairs": len(rows)},
                ("term1", "term2", "namespace", "value"),
                ((r.term1, r.term2, r.namespace, r.value) for r in rows),
            ), encoding="utf-8")
        write_run_manifest(out, "termsim",
                           params={"measure": measure, "pairs": len(rows)},
                           inputs={}, outputs={"report": out},
                           elapsed=timer.elapsed)
    return rows


@dataclass
class ProtSimRow:
    gene1: str
    gene2: str
    namespace: str
    measure: str
    strategy: str
    value: float


def _gene_terms_of(workspace: Workspace, namespace: str, gene: str) -> frozenset[str]:
    data = workspace.data(namespace)
    terms = data.gene_terms.get(gene)
    if not terms:
        raise EmptySet(
            f"gene {gene!r} has no annotations in {data.namespace}")
    return terms


def run_protsim(workspace: Workspace, namespace: str, measure: str, strategy: str,
                pairs: Iterable[tuple[str, str]], *,
                out: Path | str | None = None) -> list[ProtSimRow]:
    measure = resolve_measure(measure)
    strategy = resolve_strategy(strategy)
    data = workspace.data(namespace)
    rows = []
    for g1, g2 in pairs:
        value = protein_sim(
            data.engine,
            _gene_terms_of(workspace, namespace, g1),
            _gene_terms_of(workspace, namespace, g2),
            measure, strategy)
        rows.append(ProtSimRow(g1, g2, data.namespace, measure, strategy, value))
    if out is not None:
        out = Path(out)
        _ensure_parent(out)
        with _Timer() as timer:
            out.write_text(render_report(
                {"command": "protsim", "namespace": data.namespace,
                 "measure": measure, "strategy": strategy,
                 "fingerprint": workspace.fingerprint, "pairs": len(rows)},
                ("gene1", "gene2", "value"),
                ((r.gene1, r.gene2, r.value) for r in rows),
            ), encoding="utf-8")
        write_run_manifest(out, "protsim",
                           params={"namespace": data.namespace,
                                   "measure": measure, "strategy": strategy},
                           inputs={}, outputs={"report": out},
                           elapsed=timer.elapsed)
    return rows


@dataclass
class MatrixResult:
    matrix: ScoreMatrix
    paths: dict[str, Path]
    elapsed: float


def run_matrix(workspace: Workspace, namespace: str, measure: str, strategy: str,
               out: Path | str, *, genes: list[str] | None = None,
               workers: int = DEFAULT_WORKERS,
               formats: Sequence[str] = ("binary",)) -> MatrixResult:
    """All-pairs score matrix for every annotated gene of one namespace."""
    measure = resolve_measure(measure)
    strategy = resolve_strategy(strategy)
    for fmt in formats:
        if fmt not in ("binary", "tsv"):
            raise ValidationError(f"unknown matrix format {fmt!r}")
    data = workspace.data(namespace)
    out = Path(out)
    _ensure_parent(out)
    with _Timer() as timer:
        matrix = all_pairs(data.engine, data.gene_terms, measure, strategy,
                           genes=genes, workers=workers,
                           fingerprint=workspace.fingerprint)
        paths: dict[str, Path] = {}
        if "binary" in formats:
            matrix.save(out)
            paths["binary"] = out
        if "tsv" in formats:
            tsv_path = out.with_name(out.name + ".tsv") if "binary" in formats \
                else out
            matrix.to_tsv(tsv_path)
            paths["tsv"] = tsv_path
    report_path = paths.get("binary") or paths["tsv"]
    write_run_manifest(
        report_path, "matrix",
        params={"namespace": data.namespace, "measure": measure,
                "strategy": strategy, "workers": workers,
                "genes": len(matrix.genes),
                "fingerprint": workspace.fingerprint,
                "stats": matrix.stats},
        inputs={}, outputs={name: p for name, p in paths.items()},
        elapsed=timer.elapsed)
    return MatrixResult(matrix=matrix, paths=paths, elapsed=timer.elapsed)


# ---------------------------------------------------------------------------
# correlation against external signals


@dataclass
class CorrelateResult:
    report: analysis.BinnedCorrelationReport
    source: str
    out: Path | None
    one_directional: int = 0


def run_correlate(matrix_path: Path | str, *, blast: Path | str | None = None,
                  expression: Path | str | None = None,
                  n_intervals: int = 50,
                  out: Path | str | None = None) -> CorrelateResult:
    """Interval-binned correlation of a score matrix with an external signal."""
    if (blast is None) == (expression is None):
        raise ValidationError("provide exactly one of blast or expression input")
    matrix = load_score_matrix(matrix_path)

    one_directional = 0
    if blast is not None:
        hits = tables.read_blast_table(blast)
        seq = analysis.sequence_similarity(hits)
        external = seq.scores
        source = "blast"
        one_directional = seq.one_directional
        source_path = Path(blast)
    else:
        expr = tables.read_expression_matrix(expression)
        external = analysis.expression_correlation(expr)
        source = "expression"
        source_path = Path(expression)

    dataset = analysis.pair_dataset(matrix, external, label=source)
    report = analysis.binned_correlation(dataset, n_intervals=n_intervals)

    out_path: Path | None = None
    if out is not None:
        out_path = Path(out)
        _ensure_parent(out_path)
        meta = {
            "command": "correlate",
            "source": source,
            "matrix_measure": matrix.measure,
            "matrix_strategy": matrix.strategy,
            "fingerprint": matrix.fingerprint,
            "n_intervals": report.n_intervals,
            "n_pairs": report.n_pairs,
            "non_empty": report.non_empty,
            "pearson_r": report.pearson_r,
        }
        if source == "blast":
            meta["one_directional"] = one_directional
        with _Timer() as timer:
            out_path.write_text(render_report(
                meta,
                ("interval", "low", "high", "count", "mean_semantic",
                 "mean_external"),
                ((s.index, s.low, s.high, s.count, s.mean_semantic,
                  s.mean_external) for s in report.intervals),
            ), encoding="utf-8")
        write_run_manifest(
            out_path, "correlate",
            params={"source": source, "n_intervals": n_intervals},
            inputs={"matrix": matrix_path, source: source_path},
            outputs={"report": out_path},
            elapsed=timer.elapsed)
    return CorrelateResult(report=report, source=source, out=out_path,
                           one_directional=one_directional)


# ---------------------------------------------------------------------------
# interaction prediction


@dataclass
class PredictResult:
    prediction: analysis.PpiPrediction
    coverage: analysis.ComplexCoverageReport | None
    edges_out: Path | None
    coverage_out: Path | None


def run_predict(bp_path: Path | str, cc_path: Path | str, *,
                bp_min: float = 0.7, cc_min: float = 0.8,
                complexes: Path | str | None = None,
                out: Path | str | None = None) -> PredictResult:
    """Predict interactions from BP and CC matrices; optional complex report."""
    bp = load_score_matrix(bp_path)
    cc = load_score_matrix(cc_path)
    with _Timer() as timer:
        prediction = analysis.predict_ppi(bp, cc, bp_min=bp_min, cc_min=cc_min)
        coverage = None
        if complexes is not None:
            coverage = analysis.complex_coverage(
                tables.read_complexes(complexes), prediction)

    edges_out = coverage_out = None
    if out is not None:
        edges_out = Path(out)
        _ensure_parent(edges_out)
        meta = {
            "command": "predict",
            "bp_min": bp_min,
            "cc_min": cc_min,
            "bp_fingerprint": bp.fingerprint,
            "cc_fingerprint": cc.fingerprint,
            "shared_genes": prediction.shared_genes,
            "edges": len(prediction.edges),
            "proteins": prediction.proteins,
            "components": prediction.components,
            "largest_component": prediction.largest_component,
        }
        edges_out.write_text(render_report(
            meta,
            ("gene1", "gene2", "bp_value", "cc_value"),
            prediction.edges,
        ), encoding="utf-8")
        outputs = {"edges": edges_out}
        inputs = {"bp": bp_path, "cc": cc_path}
        if coverage is not None:
            coverage_out = edges_out.with_name(edges_out.stem + ".complexes.tsv")
            coverage_out.write_text(render_report(
                {"command": "predict.coverage",
                 "complexes": coverage.complexes,
                 "fully_covered": coverage.fully_covered},
                ("complex_id", "size", "members_predicted", "fully_covered"),
                ((r.complex_id, r.size, r.members_predicted, r.fully_covered)
                 for r in coverage.rows),
            ), encoding="utf-8")
            outputs["coverage"] = coverage_out
            inputs["complexes"] = complexes
        write_run_manifest(edges_out, "predict",
                           params={"bp_min": bp_min, "cc_min": cc_min},
                           inputs=inputs, outputs=outputs,
                           elapsed=timer.elapsed)
    return PredictResult(prediction=prediction, coverage=coverage,
                         edges_out=edges_out, coverage_out=coverage_out)


# ---------------------------------------------------------------------------
# significance grid and ROC


@dataclass
class ZScoreResult:
    grid: analysis.ZScoreGrid
    out: Path | None


def run_zscore(positives_path: Path | str, bp_path: Path | str,
               cc_path: Path | str, *, n_samples: int = 1000,
               seed: int = analysis.DEFAULT_SEED,
               workers: int = DEFAULT_WORKERS,
               out: Path | str | None = None) -> ZScoreResult:
    positives = tables.read_pair_list(positives_path)
    bp = load_score_matrix(bp_path)
    cc = load_score_matrix(cc_path)
    with _Timer() as timer:
        grid = analysis.zscore_significance(
            positives, bp, cc, n_samples=n_samples, seed=seed, workers=workers)

    out_path: Path | None = None
    if out is not None:
        out_path = Path(out)
        _ensure_parent(out_path)
        rows = []
        for i in range(10):
            for j in range(10):
                rows.append((i, j,
                             int(grid.observed[i, j]),
                             float(grid.random_mean[i, j]),
                             float(grid.random_sd[i, j]),
                             float(grid.z[i, j])))
        out_path.write_text(render_report(
            {"command": "zscore",
             "n_samples": grid.n_samples,
             "sample_size": grid.sample_size,
             "seed": grid.seed,
             "universe": grid.universe,
             "positives_used": grid.positives_used,
             "positives_dropped": grid.positives_dropped,
             "bp_fingerprint": bp.fingerprint,
             "cc_fingerprint": cc.fingerprint},
            ("bp_bin", "cc_bin", "observed", "random_mean", "random_sd", "z"),
            rows,
        ), encoding="utf-8")
        write_run_manifest(out_path, "zscore",
                           params={"n_samples": n_samples, "seed": seed},
                           inputs={"positives": positives_path,
                                   "bp": bp_path, "cc": cc_path},
                           outputs={"report": out_path},
                           elapsed=timer.elapsed)
    return ZScoreResult(grid=grid, out=out_path)


@dataclass
class RocResult:
    report: analysis.RocReport
    out: Path | None


def run_roc(positives_path: Path | str, bp_path: Path | str, cc_path: Path | str,
            *, combine: str = "mean", repeats: int = 10,
            seed: int = analysis.DEFAULT_SEED, workers: int = DEFAULT_WORKERS,
            out: Path | str | None = None) -> RocResult:
    positives = tables.read_pair_list(positives_path)
    bp = load_score_matrix(bp_path)
    cc = load_score_matrix(cc_path)
    with _Timer() as timer:
        report = analysis.roc_auc(positives, bp, cc, combine=combine,
                                  repeats=repeats, seed=seed, workers=workers)

    out_path: Path | None = None
    if out is not None:
        out_path = Path(out)
        _ensure_parent(out_path)
        out_path.write_text(render_report(
            {"command": "roc",
             "combine": report.combine,
             "repeats": report.repeats,
             "seed": report.seed,
             "n_positives": report.n_positives,
             "n_negatives": report.n_negatives,
             "positives_dropped": report.positives_dropped,
             "auc_mean": report.auc_mean,
             "auc_sd": report.auc_sd,
             "bp_fingerprint": bp.fingerprint,
             "cc_fingerprint": cc.fingerprint},
            ("repeat", "auc"),
            ((r, auc) for r, auc in enumerate(report.aucs)),
        ), encoding="utf-8")
        write_run_manifest(out_path, "roc",
                           params={"combine": combine, "repeats": repeats,
                                   "seed": seed},
                           inputs={"positives": positives_path,
                                   "bp": bp_path, "cc": cc_path},
                           outputs={"report": out_path},
                           elapsed=timer.elapsed)
    return RocResult(report=report, out=out_path)


# ---------------------------------------------------------------------------
# histograms


@dataclass
class HistResult:
    histograms: dict[str, analysis.Histogram]
    chi: dict[tuple[str, str], tuple[float, float]]
    out: Path | None


def _matrix_scores(matrix: ScoreMatrix) -> np.ndarray:
    values = matrix.condensed_for(list(matrix.genes))
    return values[np.isfinite(values)]


def run_hist(matrix_paths: Sequence[Path | str], scheme: str, *,
             pairs: Path | str | None = None,
             out: Path | str | None = None) -> HistResult:
    """Score distributions under one binning scheme, plus chi-square contrasts.

    With one matrix the histogram covers every scorable off-diagonal pair;
    with two, both distributions are compared. A labeled pair file instead
    splits the first matrix's scores by category, one histogram each, with
    chi-square between every category pair.
    """
    if not 1 <= len(matrix_paths) <= 2:
        raise ValidationError("provide one or two score matrices")
    if pairs is not None and len(matrix_paths) != 1:
        raise ValidationError("labeled pairs work with exactly one matrix")

    matrices = [load_score_matrix(p) for p in matrix_paths]
    histograms: dict[str, analysis.Histogram] = {}

    with _Timer() as timer:
        if pairs is not None:
            matrix = matrices[0]
            known = set(matrix.genes)
            for label, pair_list in sorted(tables.read_labeled_pairs(pairs).items()):
                values = [matrix.value(g1, g2) for g1, g2 in pair_list
                          if g1 in known and g2 in known]
                finite = [v for v in values if math.isfinite(v)]
                histograms[label] = analysis.histogram(finite, scheme)
        else:
            for index, matrix in enumerate(matrices):
                label = matrix.namespace or f"matrix{index + 1}"
                if label in histograms:
                    label = f"{label}#{index + 1}"
                histograms[label] = analysis.histogram(
                    _matrix_scores(matrix), scheme)

        chi: dict[tuple[str, str], tuple[float, float]] = {}
        labels = sorted(histograms)
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                chi[(a, b)] = analysis.chi_square(histograms[a], histograms[b])

    out_path: Path | None = None
    if out is not None:
        out_path = Path(out)
        _ensure_parent(out_path)
        meta: dict[str, object] = {"command": "hist", "scheme": scheme}
        for (a, b), (stat, p) in sorted(chi.items()):
            meta[f"chi_square {a}~{b}"] = f"statistic={_fmt(stat)},p={_fmt(p)}"
        rows = []
        for label in sorted(histograms):
            hist = histograms[label]
            for index, count in enumerate(hist.counts.tolist()):
                rows.append((label, index, hist.labels[index], count))
        out_path.write_text(render_report(
            meta, ("label", "bin", "bin_label", "count"), rows,
        ), encoding="utf-8")
        inputs = {f"matrix{i + 1}": p for i, p in enumerate(matrix_paths)}
        if pairs is not None:
            inputs["pairs"] = pairs
        write_run_manifest(out_path, "hist",
                           params={"scheme": scheme},
                           inputs=inputs, outputs={"report": out_path},
                           elapsed=timer.elapsed)
    return HistResult(histograms=histograms, chi=chi, out=out_path)
