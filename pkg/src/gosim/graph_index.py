"""Precomputed topological indices over one ontology DAG.

Everything downstream (term measures, protein aggregation, the analysis
pipeline) reads from this index; it is built once per namespace and never
mutated afterwards, so concurrent readers need no locking.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .errors import UnannotatedTerm, UnknownTerm
from .ontology import OntologyDag

#: Depth conventions. ``longest`` counts the longest root-to-term path,
#: which keeps specific terms deep even when a shortcut edge exists.
DEPTH_MODES = ("longest", "shortest")


@dataclass(frozen=True)
class RssComponents:
    """Topological ingredients of the RSS measure for one term pair.

    alpha: depth of the deepest common ancestor (MRCA).
    beta:  larger of the two terms' leaf spans.
    gamma: sum of the shortest up-distances from each term to the MRCA.
    max_depth: namespace-wide maximum depth.
    """

    alpha: int
    beta: int
    gamma: int
    max_depth: int


class DagIndex:
    """Ancestor sets, depths, leaf spans and up-distances for a DAG."""

    def __init__(self, dag: OntologyDag, depth_mode: str = "longest"):
        if depth_mode not in DEPTH_MODES:
            raise ValueError(f"depth_mode must be one of {DEPTH_MODES}")
        self.dag = dag
        self.depth_mode = depth_mode

        order = dag.topological_order()
        pick = max if depth_mode == "longest" else min

        ancestors: dict[str, frozenset[str]] = {}
        depth: dict[str, int] = {}
        up_dist: dict[str, dict[str, int]] = {}
        for term in order:
            parents = [p for p, _rel in dag.terms[term].parents]
            if not parents:
                ancestors[term] = frozenset()
                depth[term] = 0
                up_dist[term] = {}
                continue
            acc: set[str] = set()
            dists: dict[str, int] = {}
            for parent in parents:
                acc.add(parent)
                acc |= ancestors[parent]
                candidate = 1
                if candidate < dists.get(parent, inf):
                    dists[parent] = candidate
                for ancestor, d in up_dist[parent].items():
                    if d + 1 < dists.get(ancestor, inf):
                        dists[ancestor] = d + 1
            ancestors[term] = frozenset(acc)
            depth[term] = pick(depth[p] for p in parents) + 1
            up_dist[term] = dists

        leaf_span: dict[str, int] = {}
        for term in reversed(order):
            kids = dag.children[term]
            leaf_span[term] = max(leaf_span[k] for k in kids) + 1 if kids else 0

        self.ancestors = ancestors
        self.ancestors_or_self = {
            t: anc | {t} for t, anc in ancestors.items()
        }
        self.depth = depth
        self.leaf_span = leaf_span
        self.up_dist = up_dist
        self.max_depth = max(depth.values())

    # -- lookups ------------------------------------------------------------

    def _check(self, term: str) -> None:
        if term not in self.dag.terms:
            raise UnknownTerm(term)

    def ancestors_of(self, term: str) -> frozenset[str]:
        """Proper ancestors of ``term`` (the term itself excluded)."""
        self._check(term)
        return self.ancestors[term]

    def common_ancestors(self, t1: str, t2: str) -> frozenset[str]:
        """Shared ancestors with each term included as its own ancestor."""
        self._check(t1)
        self._check(t2)
        return self.ancestors_or_self[t1] & self.ancestors_or_self[t2]

    def up_distance(self, term: str, ancestor: str) -> int:
        """Shortest edge distance from ``term`` up to ``ancestor``."""
        self._check(term)
        if term == ancestor:
            return 0
        try:
            return self.up_dist[term][ancestor]
        except KeyError:
            raise UnknownTerm(ancestor) from None

    # -- shared-ancestor selections ------------------------------------------

    def mica(self, t1: str, t2: str, ic) -> str:
        """Most informative common ancestor under ``ic``.

        Ties on probability prefer the deeper term, then the smaller id, so
        the choice is unique and reproducible.
        """
        if not ic.knows(t1):
            raise UnannotatedTerm(t1)
        if not ic.knows(t2):
            raise UnannotatedTerm(t2)
        common = self.common_ancestors(t1, t2)
        prob = ic.prob
        depth = self.depth
        # Unannotated candidates sort behind every annotated one (prob <= 1).
        return min(common, key=lambda a: (prob.get(a, 2.0), -depth[a], a))

    def mrca(self, t1: str, t2: str, ic=None) -> str:
        """Deepest common ancestor; probability then id break depth ties."""
        common = self.common_ancestors(t1, t2)
        prob = ic.prob if ic is not None else {}
        depth = self.depth
        return min(common, key=lambda a: (-depth[a], prob.get(a, inf), a))

    def rss_components(self, t1: str, t2: str, ic=None) -> RssComponents:
        """Alpha, beta, gamma and max depth for the RSS measure."""
        anchor = self.mrca(t1, t2, ic)
        return RssComponents(
            alpha=self.depth[anchor],
            beta=max(self.leaf_span[t1], self.leaf_span[t2]),
            gamma=self.up_distance(t1, anchor) + self.up_distance(t2, anchor),
            max_depth=self.max_depth,
        )
