"""Independent reference implementations for cross-checking.

Everything here recomputes from first principles with recursive walks
over a plain parents map; none of the package's indices, caches or
topological orders are reused. Formulas are restated, not imported.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from typing import Iterable, Mapping

import numpy as np


class BruteOracle:
    """Brute-force semantic similarity over a parents map and direct sets."""

    def __init__(self, parents: Mapping[str, Iterable[str]],
                 direct: Mapping[str, Iterable[str]]):
        self.parents = {t: frozenset(ps) for t, ps in parents.items()}
        self.direct = {g: frozenset(ts) for g, ts in direct.items()}
        self.children: dict[str, set[str]] = defaultdict(set)
        for term, ps in self.parents.items():
            for p in ps:
                self.children[p].add(term)
        roots = [t for t, ps in self.parents.items() if not ps]
        assert len(roots) == 1, "oracle needs a single-root DAG"
        self.root = roots[0]
        self._aos: dict[str, frozenset[str]] = {}
        self._genes: dict[str, frozenset[str]] = {}

    # -- structure ---------------------------------------------------------

    def ancestors_or_self(self, term: str) -> frozenset[str]:
        if term not in self._aos:
            acc = {term}
            for p in self.parents[term]:
                acc |= self.ancestors_or_self(p)
            self._aos[term] = frozenset(acc)
        return self._aos[term]

    def depth_longest(self, term: str) -> int:
        if not self.parents[term]:
            return 0
        return 1 + max(self.depth_longest(p) for p in self.parents[term])

    def depth_shortest(self, term: str) -> int:
        if not self.parents[term]:
            return 0
        return 1 + min(self.depth_shortest(p) for p in self.parents[term])

    def leaf_span(self, term: str) -> int:
        kids = self.children.get(term, set())
        if not kids:
            return 0
        return 1 + max(self.leaf_span(k) for k in kids)

    def max_depth(self) -> int:
        return max(self.depth_longest(t) for t in self.parents)

    def up_distance(self, term: str, ancestor: str) -> int:
        # BFS upward; shortest edge count
        queue = deque([(term, 0)])
        seen = {term}
        while queue:
            node, dist = queue.popleft()
            if node == ancestor:
                return dist
            for p in self.parents[node]:
                if p not in seen:
                    seen.add(p)
                    queue.append((p, dist + 1))
        raise AssertionError(f"{ancestor} is not above {term}")

    # -- counts ------------------------------------------------------------

    def genes_at_or_below(self, term: str) -> frozenset[str]:
        if term not in self._genes:
            acc = {g for g, ts in self.direct.items() if term in ts}
            for k in self.children.get(term, set()):
                acc |= self.genes_at_or_below(k)
            self._genes[term] = frozenset(acc)
        return self._genes[term]

    def total(self) -> int:
        return len(self.genes_at_or_below(self.root))

    def prob(self, term: str) -> float:
        return len(self.genes_at_or_below(term)) / self.total()

    def ic(self, term: str) -> float:
        return -math.log(self.prob(term))

    # -- shared ancestors ----------------------------------------------------

    def common_ancestors(self, t1: str, t2: str) -> frozenset[str]:
        return self.ancestors_or_self(t1) & self.ancestors_or_self(t2)

    def mica(self, t1: str, t2: str) -> str:
        ranked = sorted(
            self.common_ancestors(t1, t2),
            key=lambda a: (self.prob(a), -self.depth_longest(a), a),
        )
        return ranked[0]

    def mrca(self, t1: str, t2: str) -> str:
        ranked = sorted(
            self.common_ancestors(t1, t2),
            key=lambda a: (-self.depth_longest(a), self.prob(a), a),
        )
        return ranked[0]

    # -- term measures -------------------------------------------------------

    def measure(self, name: str, t1: str, t2: str) -> float:
        return getattr(self, f"_m_{name}")(t1, t2)

    def _m_resnik(self, t1, t2):
        return self.ic(self.mica(t1, t2))

    def _m_lin(self, t1, t2):
        denom = self.ic(t1) + self.ic(t2)
        if denom == 0.0:
            return 0.0
        return 2.0 * self.ic(self.mica(t1, t2)) / denom

    def _m_adjusted_resnik(self, t1, t2):
        return self._m_resnik(t1, t2) * self._m_lin(t1, t2)

    def _m_jiang(self, t1, t2):
        dist = self.ic(t1) + self.ic(t2) - 2.0 * self.ic(self.mica(t1, t2))
        return 1.0 / (1.0 + dist)

    def _m_gic(self, t1, t2):
        s1 = self.ancestors_or_self(t1)
        s2 = self.ancestors_or_self(t2)
        union = sum(self.ic(t) for t in sorted(s1 | s2))
        inter = sum(self.ic(t) for t in sorted(s1 & s2))
        return inter / union

    def _m_rss(self, t1, t2):
        anchor = self.mrca(t1, t2)
        alpha = self.depth_longest(anchor)
        beta = max(self.leaf_span(t1), self.leaf_span(t2))
        gamma = self.up_distance(t1, anchor) + self.up_distance(t2, anchor)
        if alpha + beta == 0:
            return 0.0
        d = self.max_depth()
        return d / (d + gamma) * alpha / (alpha + beta)

    def _m_relevance_lin(self, t1, t2):
        denom = self.ic(t1) + self.ic(t2)
        best = 0.0
        for a in self.common_ancestors(t1, t2):
            part = 2.0 * self.ic(a) / denom if denom else 0.0
            best = max(best, part * (1.0 - self.prob(a)))
        return best

    def _m_relevance_jiang(self, t1, t2):
        return self._m_jiang(t1, t2) * (1.0 - self.prob(self.mica(t1, t2)))

    def _m_simic_lin(self, t1, t2):
        coeff = 1.0 - 1.0 / (1.0 + self.ic(self.mica(t1, t2)))
        return self._m_lin(t1, t2) * coeff

    def _m_simic_jiang(self, t1, t2):
        coeff = 1.0 - 1.0 / (1.0 + self.ic(self.mica(t1, t2)))
        return self._m_jiang(t1, t2) * coeff

    # -- protein aggregation ---------------------------------------------------

    def protein(self, measure: str, strategy: str,
                go1: Iterable[str], go2: Iterable[str]) -> float:
        t1 = sorted(set(go1))
        t2 = sorted(set(go2))
        grid = [[self.measure(measure, a, b) for b in t2] for a in t1]
        if strategy == "maximum":
            return max(v for row in grid for v in row)
        if strategy == "average":
            return sum(v for row in grid for v in row) / (len(t1) * len(t2))
        rows = sum(max(row) for row in grid)
        cols = sum(max(grid[i][j] for i in range(len(t1))) for j in range(len(t2)))
        return (rows + cols) / (len(t1) + len(t2))


def auc_trapezoid(pos_scores, neg_scores) -> float:
    """Area under the empirical ROC curve, tied groups stepped diagonally."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    scores = np.concatenate([pos, neg])
    labels = np.concatenate([np.ones(pos.size), np.zeros(neg.size)])
    order = np.argsort(-scores, kind="stable")
    scores = scores[order]
    labels = labels[order]

    tpr = [0.0]
    fpr = [0.0]
    tp = fp = 0.0
    i = 0
    while i < scores.size:
        j = i
        while j < scores.size and scores[j] == scores[i]:
            j += 1
        block = labels[i:j].sum()
        tp += block
        fp += (j - i) - block
        tpr.append(tp / pos.size)
        fpr.append(fp / neg.size)
        i = j

    area = 0.0
    for k in range(1, len(tpr)):
        area += (fpr[k] - fpr[k - 1]) * (tpr[k] + tpr[k - 1]) / 2.0
    return area


def random_fixture(rng: np.random.Generator, n_terms: int = 50,
                   n_genes: int = 40, max_parents: int = 3,
                   max_terms_per_gene: int = 4):
    """Random single-root DAG plus direct annotation sets.

    Terms are created in index order and may only point at earlier terms,
    which guarantees acyclicity; every gene gets at least one term.
    """
    ids = [f"RND:{i:07d}" for i in range(n_terms)]
    parents: dict[str, set[str]] = {ids[0]: set()}
    for i in range(1, n_terms):
        k = int(rng.integers(1, max_parents + 1))
        picks = rng.choice(i, size=min(k, i), replace=False)
        parents[ids[i]] = {ids[int(p)] for p in picks}

    direct: dict[str, set[str]] = {}
    for g in range(n_genes):
        k = int(rng.integers(1, max_terms_per_gene + 1))
        picks = rng.choice(n_terms, size=k, replace=False)
        direct[f"g{g:04d}"] = {ids[int(t)] for t in picks}
    return parents, direct


def fixture_obo(parents: Mapping[str, Iterable[str]],
                namespace: str = "biological_process") -> str:
    """Render a parents map as OBO text for the package parser."""
    lines = ["format-version: 1.2"]
    for term in sorted(parents):
        lines.append("")
        lines.append("[Term]")
        lines.append(f"id: {term}")
        lines.append(f"name: {term.lower()}")
        lines.append(f"namespace: {namespace}")
        for p in sorted(parents[term]):
            lines.append(f"is_a: {p}")
    return "\n".join(lines) + "\n"
