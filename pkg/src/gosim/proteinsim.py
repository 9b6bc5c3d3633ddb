"""Protein-level similarity: aggregate term measures over annotation sets.

Gene products are compared through their *direct* annotation sets (no
ancestor closure; the measures already look upward). The all-pairs path
memoizes term-pair scores behind an unordered key, so annotation sets
that recur across genes are only priced once.
"""

from __future__ import annotations

import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import inf, nan
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptySet, GosimError, MissingArtifact, ValidationError
from .termsim import TermSimilarity, resolve_measure

#: Closed vocabulary of aggregation strategies.
STRATEGIES = ("maximum", "average", "best_match_average")

_STRATEGY_ALIASES = {
    "max": "maximum",
    "avg": "average",
    "mean": "average",
    "bma": "best_match_average",
}

_MAGIC = b"GSM1"


def resolve_strategy(name: str) -> str:
    cleaned = name.strip().lower().replace("-", "_")
    cleaned = _STRATEGY_ALIASES.get(cleaned, cleaned)
    if cleaned not in STRATEGIES:
        raise ValidationError(
            f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return cleaned


def term_to_set_sim(engine: TermSimilarity, measure: str, term: str,
                    terms: Iterable[str]) -> float:
    """Best score between ``term`` and any member of ``terms``."""
    terms = tuple(terms)
    if not terms:
        raise EmptySet("cannot compare a term against an empty annotation set")
    return max(engine.score(measure, term, other) for other in terms)


def protein_sim(engine: TermSimilarity, go1: Iterable[str], go2: Iterable[str],
                measure: str, strategy: str) -> float:
    """Similarity of two annotation sets under an aggregation strategy.

    maximum: best single term pair.
    average: mean over the full m*n cross product.
    best_match_average: mean of every term's best match, both directions
    pooled: (sum of row maxima + sum of column maxima) / (m + n).
    """
    measure = resolve_measure(measure)
    strategy = resolve_strategy(strategy)
    t1 = tuple(sorted(set(go1)))
    t2 = tuple(sorted(set(go2)))
    if not t1 or not t2:
        raise EmptySet("both annotation sets must be non-empty")

    score = engine.score
    if strategy == "maximum":
        return max(score(measure, a, b) for a in t1 for b in t2)
    if strategy == "average":
        total = sum(score(measure, a, b) for a in t1 for b in t2)
        return total / (len(t1) * len(t2))
    row_sum = sum(max(score(measure, a, b) for b in t2) for a in t1)
    col_sum = sum(max(score(measure, a, b) for a in t1) for b in t2)
    return (row_sum + col_sum) / (len(t1) + len(t2))


# ---------------------------------------------------------------------------
# score matrices


@dataclass
class ScoreMatrix:
    """Symmetric gene-by-gene score matrix, condensed with the diagonal.

    ``values[offset(i, j)]`` holds the score of genes i <= j; excluded
    cells are NaN and counted in ``excluded``.
    """

    genes: tuple[str, ...]
    values: np.ndarray
    measure: str
    strategy: str
    namespace: str = ""
    fingerprint: str = ""
    excluded: int = 0
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = len(self.genes) * (len(self.genes) + 1) // 2
        if len(self.values) != expected:
            raise ValidationError(
                f"condensed storage needs {expected} cells, got {len(self.values)}")
        self._pos = {g: i for i, g in enumerate(self.genes)}

    def _offset(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        n = len(self.genes)
        return i * n - i * (i - 1) // 2 + (j - i)

    def value(self, gene1: str, gene2: str) -> float:
        return float(self.values[self._offset(self._pos[gene1], self._pos[gene2])])

    def __contains__(self, gene: str) -> bool:
        return gene in self._pos

    def iter_pairs(self):
        """Yield (gene1, gene2, value) for every i <= j cell."""
        n = len(self.genes)
        k = 0
        for i in range(n):
            for j in range(i, n):
                yield self.genes[i], self.genes[j], float(self.values[k])
                k += 1

    def condensed_for(self, genes: list[str]) -> np.ndarray:
        """Off-diagonal condensed values for ``genes`` in the given order.

        Entry k of the result corresponds to the k-th (i < j) pair of the
        supplied list, matching :func:`numpy.triu_indices` ordering.
        """
        pos = np.fromiter((self._pos[g] for g in genes), dtype=np.int64)
        m = len(genes)
        left, right = np.triu_indices(m, k=1)
        a = pos[left]
        b = pos[right]
        i = np.minimum(a, b)
        j = np.maximum(a, b)
        n = len(self.genes)
        return self.values[i * n - i * (i - 1) // 2 + (j - i)]

    # -- persistence --------------------------------------------------------

    def _meta(self) -> dict:
        return {
            "measure": self.measure,
            "strategy": self.strategy,
            "namespace": self.namespace,
            "fingerprint": self.fingerprint,
            "excluded": self.excluded,
            "stats": self.stats,
        }

    def to_tsv(self, path: Path | str) -> None:
        """Write all i <= j cells as (gene1, gene2, value) TSV."""
        lines = [
            f"# measure\t{self.measure}",
            f"# strategy\t{self.strategy}",
            f"# namespace\t{self.namespace}",
            f"# fingerprint\t{self.fingerprint}",
            f"# genes\t{len(self.genes)}",
            f"# excluded\t{self.excluded}",
        ]
        for key in sorted(self.stats):
            lines.append(f"# {key}\t{self.stats[key]!r}")
        lines.append("gene1\tgene2\tvalue")
        for g1, g2, v in self.iter_pairs():
            lines.append(f"{g1}\t{g2}\t{v!r}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def save(self, path: Path | str) -> None:
        """Binary artifact: magic, JSON header, little-endian float64 cells."""
        header = dict(self._meta(), genes=list(self.genes))
        blob = json.dumps(header, sort_keys=True).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", len(blob)))
            fh.write(blob)
            fh.write(self.values.astype("<f8", copy=False).tobytes())

    @classmethod
    def load(cls, path: Path | str) -> "ScoreMatrix":
        path = Path(path)
        if not path.is_file():
            raise MissingArtifact(str(path))
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic == _MAGIC:
                (size,) = struct.unpack("<I", fh.read(4))
                header = json.loads(fh.read(size).decode("utf-8"))
                values = np.frombuffer(fh.read(), dtype="<f8").astype(np.float64)
        if magic != _MAGIC:
            return _matrix_from_tsv(path)
        return cls(
            genes=tuple(header["genes"]),
            values=values,
            measure=header["measure"],
            strategy=header["strategy"],
            namespace=header.get("namespace", ""),
            fingerprint=header.get("fingerprint", ""),
            excluded=header.get("excluded", 0),
            stats=header.get("stats", {}),
        )


def _matrix_from_tsv(path: Path) -> ScoreMatrix:
    meta: dict[str, str] = {}
    cells: dict[tuple[str, str], float] = {}
    genes: list[str] = []
    seen: set[str] = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("\t")
            meta[key] = value
            continue
        if not line.strip() or line.startswith("gene1\t"):
            continue
        g1, g2, raw = line.split("\t")
        for g in (g1, g2):
            if g not in seen:
                seen.add(g)
                genes.append(g)
        cells[(g1, g2)] = float(raw)
    if not genes:
        raise MissingArtifact(str(path), "no matrix rows")
    n = len(genes)
    pos = {g: i for i, g in enumerate(genes)}
    values = np.full(n * (n + 1) // 2, nan)
    for (g1, g2), v in cells.items():
        i, j = sorted((pos[g1], pos[g2]))
        values[i * n - i * (i - 1) // 2 + (j - i)] = v
    return ScoreMatrix(
        genes=tuple(genes),
        values=values,
        measure=meta.get("measure", ""),
        strategy=meta.get("strategy", ""),
        namespace=meta.get("namespace", ""),
        fingerprint=meta.get("fingerprint", ""),
        excluded=int(meta.get("excluded", "0") or 0),
    )


def load_score_matrix(path: Path | str) -> ScoreMatrix:
    """Read a matrix artifact, binary or TSV, sniffing the format."""
    return ScoreMatrix.load(path)


# ---------------------------------------------------------------------------
# all-pairs computation


def _row_chunks(n: int, workers: int) -> list[tuple[int, int]]:
    # Contiguous row ranges holding a near-equal number of condensed cells.
    if n == 0:
        return []
    workers = max(1, min(int(workers), n))
    target = n * (n + 1) / 2 / workers
    chunks: list[tuple[int, int]] = []
    start, acc = 0, 0
    for i in range(n):
        acc += n - i
        if acc >= target and len(chunks) < workers - 1:
            chunks.append((start, i + 1))
            start, acc = i + 1, 0
    chunks.append((start, n))
    return chunks


def _score_rows(rows: tuple[int, int], n: int, tsets, vocab, score,
                strategy: str, memo: dict, values: np.ndarray):
    hits = misses = excluded = 0
    width = len(vocab)
    memo_get = memo.get

    def pairval(a: int, b: int) -> float:
        nonlocal hits, misses
        key = a * width + b if a <= b else b * width + a
        v = memo_get(key)
        if v is None:
            v = score(vocab[a], vocab[b])
            memo[key] = v
            misses += 1
        else:
            hits += 1
        return v

    if strategy == "maximum":
        def cell(ta, tb):
            return max(pairval(a, b) for a in ta for b in tb)
    elif strategy == "average":
        def cell(ta, tb):
            return sum(pairval(a, b) for a in ta for b in tb) / (len(ta) * len(tb))
    else:
        def cell(ta, tb):
            col_best = [-inf] * len(tb)
            total = 0.0
            for a in ta:
                row_best = -inf
                for k, b in enumerate(tb):
                    v = pairval(a, b)
                    if v > row_best:
                        row_best = v
                    if v > col_best[k]:
                        col_best[k] = v
                total += row_best
            return (total + sum(col_best)) / (len(ta) + len(tb))

    for i in range(rows[0], rows[1]):
        ta = tsets[i]
        base = i * n - i * (i - 1) // 2
        for j in range(i, n):
            tb = tsets[j]
            if not ta or not tb:
                excluded += 1
                continue
            try:
                values[base + (j - i)] = cell(ta, tb)
            except GosimError:
                excluded += 1
    return hits, misses, excluded


def all_pairs(engine: TermSimilarity, gene_terms: Mapping[str, Iterable[str]],
              measure: str, strategy: str, *, genes: Iterable[str] | None = None,
              workers: int = 1, fingerprint: str = "") -> ScoreMatrix:
    """Score every gene pair (including self pairs) into a ScoreMatrix.

    ``gene_terms`` maps each gene to its direct annotation terms; terms
    the measure cannot score are filtered per gene, and genes left with
    nothing become excluded (NaN) cells. Results are bitwise identical
    for any ``workers`` count: term-pair scores are pure functions and
    every cell lands in its own slot.
    """
    measure = resolve_measure(measure)
    strategy = resolve_strategy(strategy)
    order = tuple(genes) if genes is not None else tuple(sorted(gene_terms))

    usable: list[tuple[str, ...]] = []
    for gene in order:
        terms = sorted({t for t in gene_terms.get(gene, ())
                        if engine.supports(measure, t)})
        usable.append(tuple(terms))

    vocab = sorted({t for terms in usable for t in terms})
    tindex = {t: k for k, t in enumerate(vocab)}
    tsets = [tuple(tindex[t] for t in terms) for terms in usable]

    n = len(order)
    values = np.full(n * (n + 1) // 2, nan)
    memo: dict[int, float] = {}
    score = engine.scorer(measure)

    chunks = _row_chunks(n, workers)
    if len(chunks) <= 1:
        results = [_score_rows(chunks[0], n, tsets, vocab, score, strategy,
                               memo, values)] if chunks else []
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [pool.submit(_score_rows, chunk, n, tsets, vocab, score,
                                   strategy, memo, values)
                       for chunk in chunks]
            results = [f.result() for f in futures]

    hits = sum(r[0] for r in results)
    misses = sum(r[1] for r in results)
    excluded = sum(r[2] for r in results)
    lookups = hits + misses
    stats = {
        "memo_hits": hits,
        "memo_misses": misses,
        "memo_hit_rate": hits / lookups if lookups else 0.0,
        "distinct_terms": len(vocab),
    }
    return ScoreMatrix(
        genes=order,
        values=values,
        measure=measure,
        strategy=strategy,
        namespace=engine.namespace,
        fingerprint=fingerprint,
        excluded=excluded,
        stats=stats,
    )
