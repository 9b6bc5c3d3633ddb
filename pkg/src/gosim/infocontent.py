"""Annotation probabilities and information content.

prob(t) = cumulative_count(t) / total over distinct genes, and
IC(t) = -ln(prob(t)). Natural logarithm throughout. Terms with zero
cumulative count have no defined probability and are left out of the
table; querying them raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .annotations import AnnotationCorpus
from .errors import UnannotatedTerm, UndefinedProbability, UnknownTerm, ZeroTotal


def probability(term: str, corpus: AnnotationCorpus) -> float:
    """Annotation probability of ``term``: cumulative count over total."""
    if term not in corpus.cumulative_count:
        raise UnknownTerm(term)
    if corpus.total == 0:
        raise ZeroTotal(f"corpus for {corpus.namespace} has no annotated gene")
    count = corpus.cumulative_count[term]
    if count == 0:
        raise UndefinedProbability(term)
    return count / corpus.total


@dataclass
class IcTable:
    """Probability and information content for every annotated term."""

    namespace: str
    total: int
    cumulative: dict[str, int]
    prob: dict[str, float]
    ic: dict[str, float]

    def knows(self, term: str) -> bool:
        return term in self.ic

    def probability_of(self, term: str) -> float:
        try:
            return self.prob[term]
        except KeyError:
            raise UnannotatedTerm(term) from None

    def information_content(self, term: str) -> float:
        """IC(t) = -ln(prob(t)); raises for zero-probability terms."""
        try:
            return self.ic[term]
        except KeyError:
            raise UndefinedProbability(term) from None

    def __len__(self) -> int:
        return len(self.ic)


def build_ic_table(corpus: AnnotationCorpus) -> IcTable:
    """Tabulate probability and IC for all terms with nonzero counts."""
    if corpus.total == 0:
        raise ZeroTotal(f"corpus for {corpus.namespace} has no annotated gene")
    cumulative = {t: n for t, n in corpus.cumulative_count.items() if n > 0}
    total = corpus.total
    prob = {t: n / total for t, n in cumulative.items()}
    ic = {t: 0.0 if p == 1.0 else -math.log(p) for t, p in prob.items()}
    return IcTable(
        namespace=corpus.namespace,
        total=total,
        cumulative=cumulative,
        prob=prob,
        ic=ic,
    )


def information_content(table: IcTable, term: str) -> float:
    return table.information_content(term)


# -- persistence -------------------------------------------------------------

_HEADER = ("term", "cumulative_count", "probability", "information_content")


def write_ic_tsv(table: IcTable, path: Path | str) -> None:
    """Write the table as TSV; floats use shortest round-trip formatting."""
    lines = [f"# namespace\t{table.namespace}", f"# total\t{table.total}",
             "\t".join(_HEADER)]
    for term in sorted(table.ic):
        lines.append("\t".join((
            term,
            str(table.cumulative[term]),
            repr(table.prob[term]),
            repr(table.ic[term]),
        )))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_ic_tsv(path: Path | str) -> IcTable:
    namespace = ""
    total = 0
    cumulative: dict[str, int] = {}
    prob: dict[str, float] = {}
    ic: dict[str, float] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# namespace\t"):
            namespace = line.split("\t", 1)[1]
        elif line.startswith("# total\t"):
            total = int(line.split("\t", 1)[1])
        elif line.startswith("#") or line.startswith("term\t"):
            continue
        elif line.strip():
            term, count, p, i = line.split("\t")
            cumulative[term] = int(count)
            prob[term] = float(p)
            ic[term] = float(i)
    return IcTable(namespace=namespace, total=total, cumulative=cumulative,
                   prob=prob, ic=ic)
