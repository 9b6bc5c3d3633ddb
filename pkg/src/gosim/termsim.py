"""Semantic similarity measures between two ontology terms.

Ten measures share one engine. All are symmetric. ``resnik`` and
``adjusted_resnik`` live on [0, inf); every other measure is bounded in
[0, 1]. The engine is single-namespace: asking about a term outside its
DAG raises UnknownTerm, and cross-namespace routing happens one layer up
(see :mod:`gosim.workspace`).
"""

from __future__ import annotations

from .errors import UnannotatedTerm, UnknownTerm, ValidationError, ZeroUnion
from .graph_index import DagIndex
from .infocontent import IcTable

#: Closed vocabulary of measure names, as accepted by the CLI and service.
MEASURES = (
    "resnik",
    "adjusted_resnik",
    "lin",
    "jiang",
    "gic",
    "rss",
    "relevance_lin",
    "relevance_jiang",
    "simic_lin",
    "simic_jiang",
)

#: Measures whose values stay within [0, 1].
BOUNDED_MEASURES = frozenset(MEASURES) - {"resnik", "adjusted_resnik"}

#: Measures that work from graph structure alone, without annotation counts.
STRUCTURE_ONLY_MEASURES = frozenset({"rss"})


def resolve_measure(name: str) -> str:
    """Normalize a measure name; hyphens are accepted for underscores."""
    cleaned = name.strip().lower().replace("-", "_")
    if cleaned not in MEASURES:
        raise ValidationError(
            f"unknown measure {name!r}; expected one of {', '.join(MEASURES)}")
    return cleaned


class TermSimilarity:
    """Term-pair similarity engine over one DAG index and its IC table.

    ``ic`` may be omitted only when nothing but structure-only measures
    will be asked for.
    """

    def __init__(self, index: DagIndex, ic: IcTable | None = None):
        self.index = index
        self.ic = ic
        self._dispatch = {
            "resnik": self.resnik,
            "adjusted_resnik": self.adjusted_resnik,
            "lin": self.lin,
            "jiang": self.jiang,
            "gic": self.gic,
            "rss": self.rss,
            "relevance_lin": lambda a, b: self.relevance(a, b, flavor="lin"),
            "relevance_jiang": lambda a, b: self.relevance(a, b, flavor="jiang"),
            "simic_lin": lambda a, b: self.simic(a, b, flavor="lin"),
            "simic_jiang": lambda a, b: self.simic(a, b, flavor="jiang"),
        }

    @property
    def namespace(self) -> str:
        return self.index.dag.namespace

    def score(self, measure: str, t1: str, t2: str) -> float:
        """Dispatch to one of the named measures."""
        return self._dispatch[resolve_measure(measure)](t1, t2)

    def scorer(self, measure: str):
        """Bound callable for one measure, skipping per-call dispatch."""
        return self._dispatch[resolve_measure(measure)]

    def supports(self, measure: str, term: str) -> bool:
        """Whether ``term`` can be scored under ``measure``."""
        if term not in self.index.dag.terms:
            return False
        if measure in STRUCTURE_ONLY_MEASURES:
            return True
        return self.ic is not None and self.ic.knows(term)

    # -- shared plumbing ------------------------------------------------------

    def _require_ic(self, t1: str, t2: str) -> IcTable:
        if t1 not in self.index.dag.terms:
            raise UnknownTerm(t1)
        if t2 not in self.index.dag.terms:
            raise UnknownTerm(t2)
        if self.ic is None:
            raise ValidationError("this engine was built without an IC table")
        if not self.ic.knows(t1):
            raise UnannotatedTerm(t1)
        if not self.ic.knows(t2):
            raise UnannotatedTerm(t2)
        return self.ic

    def _mica_ic(self, t1: str, t2: str) -> float:
        return self.ic.ic[self.index.mica(t1, t2, self.ic)]

    # -- measures -------------------------------------------------------------

    def resnik(self, t1: str, t2: str) -> float:
        """IC of the most informative common ancestor. Range [0, inf)."""
        self._require_ic(t1, t2)
        return self._mica_ic(t1, t2)

    def lin(self, t1: str, t2: str) -> float:
        """2 * IC(MICA) / (IC(t1) + IC(t2)), with the 0/0 root case -> 0."""
        ic = self._require_ic(t1, t2)
        denom = ic.ic[t1] + ic.ic[t2]
        if denom == 0.0:
            return 0.0
        return 2.0 * self._mica_ic(t1, t2) / denom

    def jiang(self, t1: str, t2: str) -> float:
        """1 / (1 + IC(t1) + IC(t2) - 2 * IC(MICA)). Range (0, 1]."""
        ic = self._require_ic(t1, t2)
        distance = ic.ic[t1] + ic.ic[t2] - 2.0 * self._mica_ic(t1, t2)
        return 1.0 / (1.0 + distance)

    def gic(self, t1: str, t2: str) -> float:
        """IC-weighted Jaccard overlap of the two ancestor-or-self sets.

        Terms with zero IC (the root) contribute nothing to either sum.
        An all-zero union has no defined overlap and raises ZeroUnion.
        """
        ic = self._require_ic(t1, t2)
        set1 = self.index.ancestors_or_self[t1]
        set2 = self.index.ancestors_or_self[t2]
        values = ic.ic
        union_sum = sum(values[t] for t in sorted(set1 | set2))
        if union_sum == 0.0:
            raise ZeroUnion(f"ancestor union of {t1} and {t2} carries zero IC")
        inter_sum = sum(values[t] for t in sorted(set1 & set2))
        return inter_sum / union_sum

    def rss(self, t1: str, t2: str) -> float:
        """Purely topological similarity in [0, 1].

        With alpha the MRCA depth, beta the larger leaf span, gamma the
        summed up-distances to the MRCA and D the namespace max depth:

            rss = D / (D + gamma) * alpha / (alpha + beta)

        Two terms whose only shared ancestor is the root score 0.
        """
        if t1 not in self.index.dag.terms:
            raise UnknownTerm(t1)
        if t2 not in self.index.dag.terms:
            raise UnknownTerm(t2)
        parts = self.index.rss_components(t1, t2, self.ic)
        if parts.alpha + parts.beta == 0:
            return 0.0
        reach = parts.max_depth / (parts.max_depth + parts.gamma)
        return reach * parts.alpha / (parts.alpha + parts.beta)

    def relevance(self, t1: str, t2: str, flavor: str = "lin") -> float:
        """Rarity-weighted similarity. Range [0, 1).

        The ``lin`` flavor maximizes, over every common ancestor ``a``,
        the Lin ratio taken at ``a`` times (1 - prob(a)); the maximizing
        ancestor need not be the MICA. The ``jiang`` flavor scales the
        Jiang value by (1 - prob(MICA)).
        """
        ic = self._require_ic(t1, t2)
        if flavor == "jiang":
            anchor = self.index.mica(t1, t2, self.ic)
            return self.jiang(t1, t2) * (1.0 - ic.prob[anchor])
        if flavor != "lin":
            raise ValidationError(f"unknown relevance flavor {flavor!r}")
        denom = ic.ic[t1] + ic.ic[t2]
        best = 0.0
        for ancestor in self.index.common_ancestors(t1, t2):
            part = 2.0 * ic.ic[ancestor] / denom if denom else 0.0
            value = part * (1.0 - ic.prob[ancestor])
            if value > best:
                best = value
        return best

    def simic(self, t1: str, t2: str, flavor: str = "lin") -> float:
        """Base measure damped by how common the MICA is. Range [0, 1).

        simic = base(t1, t2) * (1 - 1 / (1 + IC(MICA))). A shallow MICA
        (IC near 0) crushes the score towards 0; a deep one leaves the
        base nearly untouched.
        """
        ic = self._require_ic(t1, t2)
        if flavor == "lin":
            base = self.lin(t1, t2)
        elif flavor == "jiang":
            base = self.jiang(t1, t2)
        else:
            raise ValidationError(f"unknown simic flavor {flavor!r}")
        anchor_ic = self._mica_ic(t1, t2)
        return base * (1.0 - 1.0 / (1.0 + anchor_ic))

    def adjusted_resnik(self, t1: str, t2: str) -> float:
        """Resnik scaled by Lin: keeps IC units but respects term depth."""
        self._require_ic(t1, t2)
        return self.resnik(t1, t2) * self.lin(t1, t2)
