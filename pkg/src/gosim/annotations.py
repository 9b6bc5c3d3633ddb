"""GAF annotation parsing and annotation corpus construction.

The corpus counts are *distinct-gene* counts: a gene annotated to several
descendants of a term contributes exactly once to that term's cumulative
count. Probabilities and information content build on these counts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Union

from .errors import EmptyCorpus, MalformedLine
from .ontology import OboDocument, OntologyDag, resolve_namespace

logger = logging.getLogger(__name__)

#: Evidence codes filtered out of a corpus unless the caller overrides.
DEFAULT_DROP_EVIDENCE = frozenset({"IEA"})

_MIN_COLUMNS = 15

Source = Union[str, bytes, Path, IO]


@dataclass(frozen=True)
class AnnotationRecord:
    """One gene-to-term assignment read from a GAF line."""

    gene: str
    term: str
    evidence: str
    aspect: str = ""
    qualifier: str = ""


@dataclass
class GafSummary:
    lines: int = 0
    records: int = 0
    dropped_not: int = 0
    unknown_terms: int = 0
    obsolete_terms: int = 0


@dataclass
class GafResult:
    records: list[AnnotationRecord]
    summary: GafSummary


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8").splitlines()
    if isinstance(source, bytes):
        return source.decode("utf-8").splitlines()
    if isinstance(source, str):
        return source.splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _resolvers(ontology) -> tuple[list[OntologyDag], frozenset[str]]:
    if isinstance(ontology, OntologyDag):
        return [ontology], frozenset()
    if isinstance(ontology, OboDocument):
        return list(ontology.dags), frozenset(ontology.obsolete)
    return list(ontology), frozenset()


def read_gaf(source: Source, ontology) -> GafResult:
    """Parse GAF 2.x lines into annotation records.

    ``ontology`` is an :class:`OntologyDag`, an :class:`OboDocument`, or an
    iterable of DAGs; term ids are canonicalized through alt_id aliases.
    Records whose qualifier contains NOT are dropped. A record whose term
    id resolves nowhere is kept untouched and counted as a warning, so the
    corpus builder can exclude it later.

    The gene key is the first pipe-separated synonym of column 11, falling
    back to the column 3 symbol, then to the column 2 object id.
    """
    dags, obsolete = _resolvers(ontology)
    summary = GafSummary()
    records: list[AnnotationRecord] = []

    for number, raw in enumerate(_lines(source), start=1):
        if not raw.strip() or raw.startswith("!"):
            continue
        summary.lines += 1
        cols = raw.rstrip("\n").split("\t")
        if len(cols) < _MIN_COLUMNS:
            raise MalformedLine(number, f"{len(cols)} columns, {_MIN_COLUMNS} required")

        qualifier = cols[3].strip()
        if "NOT" in qualifier.split("|"):
            summary.dropped_not += 1
            continue

        term = cols[4].strip()
        if not term:
            raise MalformedLine(number, "empty term id column")
        resolved = None
        for dag in dags:
            resolved = dag.resolve(term)
            if resolved is not None:
                break
        if resolved is None:
            if term in obsolete:
                summary.obsolete_terms += 1
                logger.warning("line %d: term %s is obsolete", number, term)
            else:
                summary.unknown_terms += 1
                logger.warning("line %d: unknown term %s", number, term)
            resolved = term

        synonyms = [s for s in cols[10].split("|") if s.strip()]
        gene = synonyms[0].strip() if synonyms else cols[2].strip()
        if not gene:
            gene = cols[1].strip()
        if not gene:
            raise MalformedLine(number, "no usable gene identifier")

        records.append(AnnotationRecord(
            gene=gene,
            term=resolved,
            evidence=cols[6].strip(),
            aspect=cols[8].strip(),
            qualifier=qualifier,
        ))
        summary.records += 1

    return GafResult(records, summary)


def parse_gaf(source: Source, ontology) -> list[AnnotationRecord]:
    """Parse a GAF file; see :func:`read_gaf` for the rules applied."""
    return read_gaf(source, ontology).records


@dataclass
class CorpusSummary:
    input_records: int = 0
    dropped_evidence: int = 0
    skipped_unknown: int = 0
    root_only_genes: int = 0
    duplicate_pairs: int = 0


@dataclass
class AnnotationCorpus:
    """Direct and cumulative annotation counts for one namespace.

    ``cumulative_count[t]`` is the number of *distinct* genes annotated to
    ``t`` or to any descendant of ``t``; it is defined for every term of
    the companion DAG and is monotone non-decreasing towards the root.
    ``total`` equals the root's cumulative count.
    """

    namespace: str
    direct: dict[str, frozenset[str]]
    direct_count: dict[str, int]
    cumulative_count: dict[str, int]
    total: int
    summary: CorpusSummary = field(default_factory=CorpusSummary)

    @property
    def genes(self) -> tuple[str, ...]:
        return tuple(sorted(self.direct))

    @property
    def annotation_count(self) -> int:
        return sum(len(terms) for terms in self.direct.values())


def build_corpus(records: Iterable[AnnotationRecord], dag: OntologyDag, *,
                 drop_evidence: frozenset[str] = DEFAULT_DROP_EVIDENCE,
                 drop_root_only: bool = True) -> AnnotationCorpus:
    """Aggregate annotation records into a corpus over ``dag``.

    Records with a dropped evidence code or a term outside the DAG are
    excluded (and counted). Duplicate (gene, term) pairs collapse to one.
    When ``drop_root_only`` is set, genes whose only surviving annotation
    is the namespace root are removed entirely.
    """
    summary = CorpusSummary()
    direct: dict[str, set[str]] = {}
    for record in records:
        summary.input_records += 1
        if record.evidence in drop_evidence:
            summary.dropped_evidence += 1
            continue
        term = dag.resolve(record.term)
        if term is None:
            summary.skipped_unknown += 1
            continue
        bucket = direct.setdefault(record.gene, set())
        if term in bucket:
            summary.duplicate_pairs += 1
        else:
            bucket.add(term)

    if drop_root_only:
        root_only = [g for g, terms in direct.items() if terms == {dag.root}]
        for gene in root_only:
            del direct[gene]
        summary.root_only_genes = len(root_only)

    if not direct:
        raise EmptyCorpus(f"no annotation survived filtering in {dag.namespace}")

    frozen = {gene: frozenset(terms) for gene, terms in direct.items()}
    direct_count: dict[str, int] = {}
    for terms in frozen.values():
        for term in terms:
            direct_count[term] = direct_count.get(term, 0) + 1

    cumulative = _cumulative_gene_counts(frozen, dag)
    return AnnotationCorpus(
        namespace=dag.namespace,
        direct=frozen,
        direct_count=direct_count,
        cumulative_count=cumulative,
        total=cumulative[dag.root],
        summary=summary,
    )


def _cumulative_gene_counts(direct: Mapping[str, frozenset[str]],
                            dag: OntologyDag) -> dict[str, int]:
    # Walk children before parents, unioning distinct-gene sets upward.
    at_term: dict[str, set[str]] = {t: set() for t in dag.terms}
    for gene, terms in direct.items():
        for term in terms:
            at_term[term].add(gene)

    gene_sets: dict[str, set[str]] = {}
    for term in reversed(dag.topological_order()):
        genes = set(at_term[term])
        for child in dag.children[term]:
            genes |= gene_sets[child]
        gene_sets[term] = genes
    return {term: len(genes) for term, genes in gene_sets.items()}


def split_records_by_aspect(records: Iterable[AnnotationRecord]) -> dict[str, list[AnnotationRecord]]:
    """Group records by their GAF aspect column, mapped to full namespace names."""
    out: dict[str, list[AnnotationRecord]] = {}
    for record in records:
        namespace = resolve_namespace(record.aspect) if record.aspect else ""
        out.setdefault(namespace, []).append(record)
    return out
