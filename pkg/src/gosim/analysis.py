"""Evaluation pipeline over protein similarity scores.

Sequence and expression reference signals, interval-binned correlation,
fixed-scheme histograms with chi-square comparison, interaction
prediction with complex coverage, Z-score significance grids and
repeat-sampled ROC/AUC. Every sampling routine takes an explicit seed and
derives one independent generator per repeat from (seed, repeat index),
so results do not depend on execution order or worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import inf, nan
from typing import Iterable, Mapping

import numpy as np
from scipy import stats as spstats

from .errors import (
    DataError,
    DegenerateRange,
    EmptyInput,
    EmptyIntersection,
    IncompatibleHistograms,
    InsufficientNegatives,
    InsufficientUniverse,
    NoNeighbors,
    NonPositiveScore,
    TooFewConditions,
    TooFewIntervalsNonEmpty,
)
from .proteinsim import ScoreMatrix

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42

Pair = tuple[str, str]


def canonical_pair(gene1: str, gene2: str) -> Pair:
    return (gene1, gene2) if gene1 <= gene2 else (gene2, gene1)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float((xc * xc).sum()) * float((yc * yc).sum()))
    if denom == 0.0:
        return nan
    r = float((xc * yc).sum()) / denom
    return max(-1.0, min(1.0, r))


def sample_without_replacement(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Uniform sample of ``k`` distinct integers from range(n), sorted.

    Rejection sampling in draw order keeps the sample unbiased; a dense
    request falls back to a partial permutation.
    """
    if k > n:
        raise ValueError(f"cannot draw {k} distinct values from {n}")
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if 3 * k >= n:
        return np.sort(rng.permutation(n)[:k].astype(np.int64))
    seen: set[int] = set()
    out: list[int] = []
    while len(out) < k:
        for v in rng.integers(0, n, size=(k - len(out)) + 8).tolist():
            if v not in seen:
                seen.add(v)
                out.append(v)
                if len(out) == k:
                    break
    return np.sort(np.array(out, dtype=np.int64))


def _repeat_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


# ---------------------------------------------------------------------------
# sequence similarity from BLAST bit scores


@dataclass
class SequenceSimilarityResult:
    """log10 mean bidirectional bit score per unordered protein pair."""

    scores: dict[Pair, float]
    one_directional: int = 0


def sequence_similarity(hits: Iterable[tuple[str, str, float]]) -> SequenceSimilarityResult:
    """Fold directed BLAST hits into one score per unordered pair.

    Multiple hits in one direction keep the best bit score. Self hits are
    ignored. With both directions present the pair scores
    log10((s12 + s21) / 2); with only one, log10 of that single score,
    counted as a warning.
    """
    best: dict[tuple[str, str], float] = {}
    for query, subject, score in hits:
        if query == subject:
            continue
        score = float(score)
        if score <= 0.0:
            raise NonPositiveScore(f"{query} -> {subject} scored {score}")
        key = (query, subject)
        if score > best.get(key, -inf):
            best[key] = score

    scores: dict[Pair, float] = {}
    one_directional = 0
    for (query, subject), forward in sorted(best.items()):
        pair = canonical_pair(query, subject)
        if pair in scores:
            continue
        backward = best.get((subject, query))
        if backward is None:
            one_directional += 1
            logger.warning("pair %s/%s has a hit in one direction only", *pair)
            scores[pair] = math.log10(forward)
        else:
            scores[pair] = math.log10((forward + backward) / 2.0)
    return SequenceSimilarityResult(scores, one_directional)


# ---------------------------------------------------------------------------
# interval-binned correlation


@dataclass
class PairDataset:
    """Aligned semantic and external values for a set of gene pairs."""

    pairs: list[Pair]
    semantic: np.ndarray
    external: np.ndarray
    label: str = ""


def pair_dataset(matrix: ScoreMatrix, external: Mapping[Pair, float],
                 label: str = "") -> PairDataset:
    """Join a score matrix with an external pair map on shared pairs."""
    pairs: list[Pair] = []
    semantic: list[float] = []
    outside: list[float] = []
    n = len(matrix.genes)
    k = 0
    values = matrix.values
    for i in range(n):
        k += 1  # skip the diagonal cell
        for j in range(i + 1, n):
            v = values[k]
            k += 1
            if math.isnan(v):
                continue
            pair = canonical_pair(matrix.genes[i], matrix.genes[j])
            ext = external.get(pair)
            if ext is None:
                continue
            pairs.append(pair)
            semantic.append(float(v))
            outside.append(float(ext))
    return PairDataset(pairs, np.array(semantic), np.array(outside), label)


@dataclass
class IntervalStat:
    index: int
    low: float
    high: float
    count: int
    mean_semantic: float
    mean_external: float


@dataclass
class BinnedCorrelationReport:
    n_intervals: int
    n_pairs: int
    non_empty: int
    pearson_r: float
    intervals: list[IntervalStat]


def binned_correlation(dataset: PairDataset, n_intervals: int = 50) -> BinnedCorrelationReport:
    """Pearson correlation between interval means of a pair dataset.

    The semantic range [min, max] is cut into ``n_intervals`` equal
    intervals (last one closed on both sides); the correlation is taken
    over the per-interval means of both signals, empty intervals skipped.
    """
    semantic = np.asarray(dataset.semantic, dtype=np.float64)
    external = np.asarray(dataset.external, dtype=np.float64)
    if semantic.size == 0:
        raise DegenerateRange("dataset holds no pairs")
    lo = float(semantic.min())
    hi = float(semantic.max())
    if lo == hi:
        raise DegenerateRange(
            "all semantic values are identical; widen the input or check "
            "that the matrix was built with the intended measure")
    width = (hi - lo) / n_intervals
    idx = np.minimum(((semantic - lo) / width).astype(np.int64), n_intervals - 1)

    counts = np.bincount(idx, minlength=n_intervals)
    sum_sem = np.bincount(idx, weights=semantic, minlength=n_intervals)
    sum_ext = np.bincount(idx, weights=external, minlength=n_intervals)

    non_empty = int((counts > 0).sum())
    if non_empty < 3:
        raise TooFewIntervalsNonEmpty(non_empty)

    mask = counts > 0
    mean_sem = np.full(n_intervals, nan)
    mean_ext = np.full(n_intervals, nan)
    mean_sem[mask] = sum_sem[mask] / counts[mask]
    mean_ext[mask] = sum_ext[mask] / counts[mask]
    r = _pearson(mean_sem[mask], mean_ext[mask])

    intervals = [
        IntervalStat(
            index=i,
            low=lo + i * width,
            high=hi if i == n_intervals - 1 else lo + (i + 1) * width,
            count=int(counts[i]),
            mean_semantic=float(mean_sem[i]),
            mean_external=float(mean_ext[i]),
        )
        for i in range(n_intervals)
    ]
    return BinnedCorrelationReport(
        n_intervals=n_intervals,
        n_pairs=int(semantic.size),
        non_empty=non_empty,
        pearson_r=r,
        intervals=intervals,
    )


# ---------------------------------------------------------------------------
# expression profile correlation


@dataclass
class ExpressionMatrix:
    """Genes by conditions, NaN marking missing measurements."""

    genes: tuple[str, ...]
    values: np.ndarray
    conditions: tuple[str, ...] = ()


def expression_correlation(matrix: ExpressionMatrix, *,
                           max_missing_frac: float = 0.1,
                           knn_k: int = 10,
                           min_conditions: int = 50) -> dict[Pair, float]:
    """Pairwise Pearson correlation of imputed expression profiles.

    Genes missing more than ``max_missing_frac`` of their conditions are
    dropped. Remaining holes are imputed with the mean value, at that
    condition, of the ``knn_k`` nearest genes by Euclidean distance over
    mutually observed conditions; only originally observed values feed
    the imputation, so the result is order-independent.
    """
    values = np.asarray(matrix.values, dtype=np.float64)
    n_genes, n_conditions = values.shape
    if n_conditions < min_conditions:
        raise TooFewConditions(n_conditions, min_conditions)

    observed = ~np.isnan(values)
    keep = observed.sum(axis=1) >= (1.0 - max_missing_frac) * n_conditions
    kept_idx = np.nonzero(keep)[0]
    if kept_idx.size < 2:
        return {}

    original = values[kept_idx]
    genes = [matrix.genes[i] for i in kept_idx]
    obs = observed[kept_idx]
    imputed = original.copy()

    for row in range(len(genes)):
        holes = np.nonzero(~obs[row])[0]
        if holes.size == 0:
            continue
        diffs = np.where(obs & obs[row], original - original[row], 0.0)
        dist2 = (diffs * diffs).sum(axis=1)
        usable = (obs & obs[row]).any(axis=1)
        usable[row] = False
        # stable sort keeps gene order as the tie-break on equal distance
        order = [c for c in np.argsort(dist2, kind="stable") if usable[c]]
        for cond in holes:
            donors = [c for c in order if obs[c, cond]][:knn_k]
            if not donors:
                raise NoNeighbors(genes[row], int(cond))
            imputed[row, cond] = float(original[donors, cond].mean())

    out: dict[Pair, float] = {}
    for i in range(len(genes)):
        for j in range(i + 1, len(genes)):
            out[canonical_pair(genes[i], genes[j])] = _pearson(imputed[i], imputed[j])
    return out


# ---------------------------------------------------------------------------
# histograms and chi-square comparison


HISTOGRAM_SCHEMES = ("bins21_zero_first", "bins5_range", "bins10_unit")

_UNIT_EPS = 1e-9


@dataclass
class Histogram:
    scheme: str
    counts: np.ndarray
    labels: tuple[str, ...]
    n_values: int
    excluded: int = 0


def _unit_bin_indices(values: np.ndarray) -> np.ndarray:
    """Fixed (i/10, (i+1)/10] bins: 0..9 for values in (0, 1], -1 for an
    exact zero, -2 for anything unbinnable (negative or NaN)."""
    idx = np.full(values.shape, -2, dtype=np.int64)
    zero = values == 0.0
    idx[zero] = -1
    positive = values > 0.0
    scaled = np.ceil(values[positive] * 10.0 - _UNIT_EPS) - 1.0
    idx[positive] = np.clip(scaled, 0, 9).astype(np.int64)
    return idx


def histogram(values: Iterable[float], scheme: str) -> Histogram:
    """Count values under one of the fixed binning schemes.

    bins21_zero_first: bin 0 holds exact zeros; 20 equal bins span the
    nonzero range, right-closed with the minimum folded into bin 1.
    bins5_range: 5 equal bins over [min, max], left-closed.
    bins10_unit: a zero bin plus the fixed unit-interval tenths (i/10,
    (i+1)/10]; negative values are excluded and counted.
    """
    data = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                      dtype=np.float64)
    data = data[~np.isnan(data)]
    n_values = int(data.size)
    if n_values == 0:
        raise EmptyInput("histogram needs at least one finite value")

    if scheme == "bins21_zero_first":
        counts = np.zeros(21, dtype=np.int64)
        zeros = data == 0.0
        counts[0] = int(zeros.sum())
        nonzero = data[~zeros]
        if nonzero.size:
            lo = float(nonzero.min())
            hi = float(nonzero.max())
            if lo == hi:
                counts[1] = nonzero.size
                labels = ["0"] + [f"bin{k}" for k in range(1, 21)]
            else:
                width = (hi - lo) / 20.0
                k = np.ceil((nonzero - lo) / width - _UNIT_EPS).astype(np.int64)
                k = np.clip(k, 1, 20)
                counts[1:] = np.bincount(k, minlength=21)[1:]
                labels = ["0"] + [
                    f"({lo + (b - 1) * width:.6g},{lo + b * width:.6g}]"
                    for b in range(1, 21)
                ]
            return Histogram(scheme, counts, tuple(labels), n_values)
        labels = ["0"] + [f"bin{k}" for k in range(1, 21)]
        return Histogram(scheme, counts, tuple(labels), n_values)

    if scheme == "bins5_range":
        counts = np.zeros(5, dtype=np.int64)
        labels: list[str] = [f"bin{k}" for k in range(5)]
        if data.size:
            lo = float(data.min())
            hi = float(data.max())
            if lo == hi:
                counts[0] = data.size
            else:
                width = (hi - lo) / 5.0
                idx = np.clip(((data - lo) / width).astype(np.int64), 0, 4)
                counts = np.bincount(idx, minlength=5).astype(np.int64)
                labels = [
                    f"[{lo + k * width:.6g},{lo + (k + 1) * width:.6g})"
                    for k in range(5)
                ]
                labels[4] = f"[{lo + 4 * width:.6g},{hi:.6g}]"
        return Histogram(scheme, counts, tuple(labels), n_values)

    if scheme == "bins10_unit":
        idx = _unit_bin_indices(data)
        counts = np.zeros(11, dtype=np.int64)
        counts[0] = int((idx == -1).sum())
        unit = idx[idx >= 0]
        counts[1:] = np.bincount(unit, minlength=10)
        excluded = int((idx == -2).sum())
        labels = ("0",) + tuple(f"({k / 10:.1f},{(k + 1) / 10:.1f}]" for k in range(10))
        return Histogram(scheme, counts, labels, n_values, excluded)

    raise DataError(
        f"unknown histogram scheme {scheme!r}; expected one of {HISTOGRAM_SCHEMES}")


def chi_square(hist_a: Histogram, hist_b: Histogram) -> tuple[float, float]:
    """Chi-square statistic and p-value for two comparable histograms.

    ``hist_b`` is scaled to the total of ``hist_a`` to form expectations;
    zero-expectation bins merge into their right neighbor (the last one
    merges left). Degrees of freedom = merged bins - 1.
    """
    if hist_a.scheme != hist_b.scheme or len(hist_a.counts) != len(hist_b.counts):
        raise IncompatibleHistograms(
            f"cannot compare {hist_a.scheme}/{len(hist_a.counts)} bins with "
            f"{hist_b.scheme}/{len(hist_b.counts)} bins")
    total_a = float(hist_a.counts.sum())
    total_b = float(hist_b.counts.sum())
    if total_a == 0.0 or total_b == 0.0:
        raise IncompatibleHistograms("cannot compare an empty histogram")

    observed = hist_a.counts.astype(np.float64)
    expected = hist_b.counts.astype(np.float64) * (total_a / total_b)

    merged_obs: list[float] = []
    merged_exp: list[float] = []
    carry_o = carry_e = 0.0
    for o, e in zip(observed, expected):
        o += carry_o
        e += carry_e
        if e == 0.0:
            carry_o, carry_e = o, e
            continue
        merged_obs.append(o)
        merged_exp.append(e)
        carry_o = carry_e = 0.0
    if carry_o:
        merged_obs[-1] += carry_o

    obs = np.array(merged_obs)
    exp = np.array(merged_exp)
    statistic = float(((obs - exp) ** 2 / exp).sum())
    df = len(obs) - 1
    if df <= 0:
        return statistic, 1.0
    return statistic, float(spstats.chi2.sf(statistic, df))


# ---------------------------------------------------------------------------
# interaction prediction and complex coverage


@dataclass
class PpiPrediction:
    """Edges passing both namespace thresholds, with component structure."""

    edges: list[tuple[str, str, float, float]]
    bp_min: float
    cc_min: float
    shared_genes: int
    proteins: int
    components: int
    largest_component: int


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        parent = self.parent.setdefault(x, x)
        if parent != x:
            self.parent[x] = parent = self.find(parent)
        return parent

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def predict_ppi(bp: ScoreMatrix, cc: ScoreMatrix,
                bp_min: float = 0.7, cc_min: float = 0.8) -> PpiPrediction:
    """Predict interactions: both scores strictly above their thresholds."""
    shared = sorted(set(bp.genes) & set(cc.genes))
    if not shared:
        raise EmptyIntersection("score matrices share no gene")
    bp_vals = bp.condensed_for(shared)
    cc_vals = cc.condensed_for(shared)
    mask = (bp_vals > bp_min) & (cc_vals > cc_min)

    left, right = np.triu_indices(len(shared), k=1)
    uf = _UnionFind()
    edges: list[tuple[str, str, float, float]] = []
    for k in np.nonzero(mask)[0]:
        g1, g2 = shared[left[k]], shared[right[k]]
        edges.append((g1, g2, float(bp_vals[k]), float(cc_vals[k])))
        uf.union(g1, g2)

    endpoints = {g for edge in edges for g in edge[:2]}
    component_sizes: dict[str, int] = {}
    for gene in endpoints:
        root = uf.find(gene)
        component_sizes[root] = component_sizes.get(root, 0) + 1

    sizes = list(component_sizes.values())
    return PpiPrediction(
        edges=edges,
        bp_min=bp_min,
        cc_min=cc_min,
        shared_genes=len(shared),
        proteins=len(endpoints),
        components=len(sizes),
        largest_component=max(sizes) if sizes else 0,
    )


@dataclass
class ComplexCoverageRow:
    complex_id: str
    size: int
    members_predicted: int
    fully_covered: bool


@dataclass
class ComplexCoverageReport:
    rows: list[ComplexCoverageRow]
    complexes: int
    fully_covered: int


def complex_coverage(complexes: Mapping[str, Iterable[str]],
                     prediction: PpiPrediction) -> ComplexCoverageReport:
    """How many known complexes have every member among predicted edges."""
    endpoints = {g for edge in prediction.edges for g in edge[:2]}
    rows = []
    for complex_id in sorted(complexes):
        members = set(complexes[complex_id])
        found = len(members & endpoints)
        rows.append(ComplexCoverageRow(
            complex_id=complex_id,
            size=len(members),
            members_predicted=found,
            fully_covered=found == len(members),
        ))
    return ComplexCoverageReport(
        rows=rows,
        complexes=len(rows),
        fully_covered=sum(r.fully_covered for r in rows),
    )


# ---------------------------------------------------------------------------
# Z-score significance grid


@dataclass
class ZScoreGrid:
    """10 x 10 grid over (BP bin, CC bin) with sampling statistics."""

    observed: np.ndarray
    random_mean: np.ndarray
    random_sd: np.ndarray
    z: np.ndarray
    n_samples: int
    sample_size: int
    seed: int
    universe: int
    positives_used: int
    positives_dropped: int


def _aligned_pair_arrays(bp: ScoreMatrix, cc: ScoreMatrix,
                         gene_universe: Iterable[str] | None):
    shared = set(bp.genes) & set(cc.genes)
    if gene_universe is not None:
        shared &= set(gene_universe)
    genes = sorted(shared)
    if not genes:
        raise EmptyIntersection("score matrices share no usable gene")
    bp_vals = bp.condensed_for(genes)
    cc_vals = cc.condensed_for(genes)
    finite = np.isfinite(bp_vals) & np.isfinite(cc_vals)
    return genes, bp_vals, cc_vals, finite


def _pair_offsets(genes: list[str], pairs: Iterable[Pair]):
    pos = {g: i for i, g in enumerate(genes)}
    m = len(genes)
    offsets = []
    dropped = 0
    seen: set[int] = set()
    for g1, g2 in pairs:
        i = pos.get(g1)
        j = pos.get(g2)
        if i is None or j is None or i == j:
            dropped += 1
            continue
        if i > j:
            i, j = j, i
        # off-diagonal condensed offset matching numpy.triu_indices order
        k = i * m - i * (i + 1) // 2 + (j - i - 1)
        if k in seen:
            dropped += 1
            continue
        seen.add(k)
        offsets.append(k)
    return np.array(sorted(offsets), dtype=np.int64), dropped


def zscore_significance(positive_pairs: Iterable[Pair], bp: ScoreMatrix,
                        cc: ScoreMatrix, *, gene_universe: Iterable[str] | None = None,
                        n_samples: int = 1000, seed: int = DEFAULT_SEED,
                        workers: int = 1) -> ZScoreGrid:
    """Z-score of observed pair counts against random sampling, per cell.

    Every scorable pair (finite in both matrices) maps to a (BP, CC) cell
    through the fixed unit-interval tenths; zero scores map nowhere, in
    both the observed set and the random samples. Each sample draws
    exactly as many pairs as the observed set, without replacement, from
    the scorable universe; sample r uses its own generator seeded with
    (seed, r). Cells whose sampling deviation is zero have no Z and carry
    NaN.
    """
    positives = [canonical_pair(*p) for p in positive_pairs]
    genes, bp_vals, cc_vals, finite = _aligned_pair_arrays(bp, cc, gene_universe)

    universe = np.nonzero(finite)[0]
    cells = np.full(bp_vals.shape, -1, dtype=np.int64)
    bp_bins = _unit_bin_indices(bp_vals[universe])
    cc_bins = _unit_bin_indices(cc_vals[universe])
    valid = (bp_bins >= 0) & (cc_bins >= 0)
    cells[universe[valid]] = bp_bins[valid] * 10 + cc_bins[valid]

    offsets, dropped = _pair_offsets(genes, positives)
    in_universe = offsets[finite[offsets]] if offsets.size else offsets
    dropped += int(offsets.size - in_universe.size)
    sample_size = int(in_universe.size)
    if sample_size == 0:
        raise DataError("no positive pair is scorable in both matrices")
    if sample_size > universe.size:
        raise InsufficientUniverse(int(universe.size), sample_size)

    pos_cells = cells[in_universe]
    observed = np.bincount(pos_cells[pos_cells >= 0], minlength=100)[:100]

    sample_counts = np.zeros((n_samples, 100), dtype=np.int64)

    def run_sample(r: int) -> None:
        rng = _repeat_rng(seed, r)
        picked = universe[sample_without_replacement(rng, universe.size, sample_size)]
        chosen = cells[picked]
        sample_counts[r] = np.bincount(chosen[chosen >= 0], minlength=100)[:100]

    if workers <= 1:
        for r in range(n_samples):
            run_sample(r)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_sample, range(n_samples)))

    random_mean = sample_counts.mean(axis=0)
    random_sd = sample_counts.std(axis=0, ddof=1) if n_samples > 1 \
        else np.zeros(100)
    z = np.full(100, nan)
    defined = random_sd > 0.0
    z[defined] = (observed[defined] - random_mean[defined]) / random_sd[defined]

    return ZScoreGrid(
        observed=observed.reshape(10, 10),
        random_mean=random_mean.reshape(10, 10),
        random_sd=random_sd.reshape(10, 10),
        z=z.reshape(10, 10),
        n_samples=n_samples,
        sample_size=sample_size,
        seed=seed,
        universe=int(universe.size),
        positives_used=sample_size,
        positives_dropped=dropped,
    )


# ---------------------------------------------------------------------------
# ROC / AUC


COMBINE_MODES = ("mean", "min", "product")


def rank_auc(positive_scores: np.ndarray, negative_scores: np.ndarray) -> float:
    """AUC via the rank-sum identity with average ranks on ties."""
    positive_scores = np.asarray(positive_scores, dtype=np.float64)
    negative_scores = np.asarray(negative_scores, dtype=np.float64)
    n_pos = positive_scores.size
    n_neg = negative_scores.size
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes must be non-empty")
    ranks = spstats.rankdata(np.concatenate([positive_scores, negative_scores]))
    r_pos = float(ranks[:n_pos].sum())
    return (r_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _combine(bp_vals: np.ndarray, cc_vals: np.ndarray, mode: str) -> np.ndarray:
    if mode == "mean":
        return (bp_vals + cc_vals) / 2.0
    if mode == "min":
        return np.minimum(bp_vals, cc_vals)
    if mode == "product":
        return bp_vals * cc_vals
    raise DataError(f"unknown combine mode {mode!r}; expected one of {COMBINE_MODES}")


@dataclass
class RocReport:
    aucs: list[float]
    auc_mean: float
    auc_sd: float
    combine: str
    repeats: int
    seed: int
    n_positives: int
    n_negatives: int
    positives_dropped: int


def roc_auc(positive_pairs: Iterable[Pair], bp: ScoreMatrix, cc: ScoreMatrix, *,
            gene_universe: Iterable[str] | None = None, combine: str = "mean",
            repeats: int = 10, seed: int = DEFAULT_SEED,
            workers: int = 1) -> RocReport:
    """Mean AUC of positives against freshly sampled negative pair sets.

    Scores combine the BP and CC values per pair (default: mean). Each
    repeat draws negatives uniformly without replacement from the
    scorable non-positive pairs, one draw per repeat, equal in size to
    the positive set. Each repeat seeds its own generator from
    (seed, repeat), so results do not depend on ``workers``.
    """
    positives = [canonical_pair(*p) for p in positive_pairs]
    genes, bp_vals, cc_vals, finite = _aligned_pair_arrays(bp, cc, gene_universe)
    combined = _combine(bp_vals, cc_vals, combine)

    offsets, dropped = _pair_offsets(genes, positives)
    in_universe = offsets[finite[offsets]] if offsets.size else offsets
    dropped += int(offsets.size - in_universe.size)
    n_pos = int(in_universe.size)
    if n_pos == 0:
        raise DataError("no positive pair is scorable in both matrices")

    candidate_mask = finite.copy()
    candidate_mask[in_universe] = False
    candidates = np.nonzero(candidate_mask)[0]
    if candidates.size < n_pos:
        raise InsufficientNegatives(int(candidates.size), n_pos)

    pos_scores = combined[in_universe]

    def one_repeat(r: int) -> float:
        rng = _repeat_rng(seed, r)
        chosen = candidates[sample_without_replacement(rng, candidates.size, n_pos)]
        return rank_auc(pos_scores, combined[chosen])

    if workers > 1 and repeats > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            aucs = list(pool.map(one_repeat, range(repeats)))
    else:
        aucs = [one_repeat(r) for r in range(repeats)]

    return RocReport(
        aucs=aucs,
        auc_mean=float(np.mean(aucs)),
        auc_sd=float(np.std(aucs, ddof=1)) if len(aucs) > 1 else 0.0,
        combine=combine,
        repeats=repeats,
        seed=seed,
        n_positives=n_pos,
        n_negatives=n_pos,
        positives_dropped=dropped,
    )
