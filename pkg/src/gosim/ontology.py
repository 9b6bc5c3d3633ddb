"""OBO ontology parsing and per-namespace DAG construction.

Only ``is_a`` and ``part_of`` edges enter the graph; the regulates family
of relationships is counted and dropped. Obsolete terms are retained in
the parse result for alias resolution but never become DAG nodes, and
their parent links are discarded.
"""

from __future__ import annotations

import logging
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import (
    CycleDetected,
    DanglingParent,
    MalformedStanza,
    MissingRoot,
    UnknownTerm,
)

logger = logging.getLogger(__name__)

BIOLOGICAL_PROCESS = "biological_process"
MOLECULAR_FUNCTION = "molecular_function"
CELLULAR_COMPONENT = "cellular_component"

#: Short aliases accepted anywhere a namespace is named. GAF aspect codes
#: (P/F/C) are included so annotation files can be routed directly.
NAMESPACE_ALIASES = {
    "BP": BIOLOGICAL_PROCESS,
    "P": BIOLOGICAL_PROCESS,
    "MF": MOLECULAR_FUNCTION,
    "F": MOLECULAR_FUNCTION,
    "CC": CELLULAR_COMPONENT,
    "C": CELLULAR_COMPONENT,
}

IS_A = "is_a"
PART_OF = "part_of"
EDGE_RELATIONS = (IS_A, PART_OF)

_TERM_ID_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*:[0-9]+$")

Source = Union[str, bytes, Path, IO]


def resolve_namespace(name: str) -> str:
    """Map a namespace alias (BP, MF, CC, GAF aspect codes) to its full name."""
    cleaned = name.strip()
    return NAMESPACE_ALIASES.get(cleaned.upper(), cleaned.lower())


def is_term_id(value: str) -> bool:
    """True when ``value`` looks like ``PREFIX:digits``."""
    return bool(_TERM_ID_RE.match(value))


@dataclass(frozen=True)
class Term:
    """One ontology term. ``parents`` holds (parent id, relation) pairs."""

    id: str
    name: str
    namespace: str
    parents: tuple[tuple[str, str], ...] = ()
    alt_ids: tuple[str, ...] = ()
    obsolete: bool = False


@dataclass
class LoadSummary:
    """Counts collected while reading one OBO document."""

    stanzas: int = 0
    terms: int = 0
    obsolete_terms: int = 0
    alt_ids: int = 0
    dropped_relationships: Counter = field(default_factory=Counter)


class OntologyDag:
    """Rooted DAG of the non-obsolete terms of a single namespace.

    Construction validates referential integrity (DanglingParent),
    acyclicity (CycleDetected) and root uniqueness (MissingRoot).
    """

    def __init__(self, namespace: str, terms: dict[str, Term],
                 alt_ids: dict[str, str] | None = None):
        self.namespace = namespace
        self.terms = dict(terms)
        self.alt_ids = dict(alt_ids or {})

        children: dict[str, list[str]] = {t: [] for t in self.terms}
        for term in self.terms.values():
            for parent, _rel in term.parents:
                if parent not in self.terms:
                    raise DanglingParent(term.id, parent)
                children[parent].append(term.id)
        self.children = {t: tuple(sorted(c)) for t, c in children.items()}

        self._topo = self._topological_order()
        roots = [t for t, term in self.terms.items() if not term.parents]
        if len(roots) != 1:
            raise MissingRoot(namespace, roots)
        self.root = roots[0]

    def _topological_order(self) -> tuple[str, ...]:
        # Kahn's algorithm, parents before children; leftovers sit on a cycle.
        pending = {t: len(term.parents) for t, term in self.terms.items()}
        queue = deque(sorted(t for t, n in pending.items() if n == 0))
        order: list[str] = []
        while queue:
            term = queue.popleft()
            order.append(term)
            for child in sorted(c for c in self.children[term]):
                pending[child] -= 1
                if pending[child] == 0:
                    queue.append(child)
        if len(order) != len(self.terms):
            raise CycleDetected(t for t, n in pending.items() if n > 0)
        return tuple(order)

    # -- queries ----------------------------------------------------------

    def __contains__(self, term_id: str) -> bool:
        return term_id in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def edge_count(self) -> int:
        return sum(len(t.parents) for t in self.terms.values())

    def resolve(self, term_id: str) -> str | None:
        """Canonical id for ``term_id`` (following alt_id aliases), or None."""
        if term_id in self.terms:
            return term_id
        return self.alt_ids.get(term_id)

    def parents_of(self, term_id: str) -> tuple[tuple[str, str], ...]:
        try:
            return self.terms[term_id].parents
        except KeyError:
            raise UnknownTerm(term_id) from None

    def topological_order(self) -> tuple[str, ...]:
        """Term ids with every parent before its children; root first."""
        return self._topo

    # -- serialization ------------------------------------------------------

    def to_obo(self) -> str:
        """Canonical OBO text: stanzas sorted by term id, fixed tag order."""
        out = StringIO()
        out.write("format-version: 1.2\n")
        for term_id in sorted(self.terms):
            out.write("\n")
            _write_stanza(out, self.terms[term_id])
        return out.getvalue()


def _write_stanza(out: StringIO, term: Term) -> None:
    out.write("[Term]\n")
    out.write(f"id: {term.id}\n")
    out.write(f"name: {term.name}\n")
    out.write(f"namespace: {term.namespace}\n")
    for alt in sorted(term.alt_ids):
        out.write(f"alt_id: {alt}\n")
    is_a = sorted(p for p, rel in term.parents if rel == IS_A)
    other = sorted((rel, p) for p, rel in term.parents if rel != IS_A)
    for parent in is_a:
        out.write(f"is_a: {parent}\n")
    for rel, parent in other:
        out.write(f"relationship: {rel} {parent}\n")
    if term.obsolete:
        out.write("is_obsolete: true\n")


@dataclass
class OboDocument:
    """Everything read from one OBO file."""

    dags: list[OntologyDag]
    obsolete: dict[str, Term]
    alt_ids: dict[str, str]
    summary: LoadSummary

    def dag(self, namespace: str) -> OntologyDag:
        wanted = resolve_namespace(namespace)
        for dag in self.dags:
            if dag.namespace == wanted:
                return dag
        raise UnknownTerm(f"namespace:{namespace}")

    def namespace_of(self, term_id: str) -> str | None:
        for dag in self.dags:
            if dag.resolve(term_id) is not None:
                return dag.namespace
        return None


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


def _clean_value(raw: str) -> str:
    # Drop the trailing OBO comment and any {trailing=modifier} block.
    value = raw.split(" !", 1)[0].strip()
    if value.endswith("}") and " {" in value:
        value = value[: value.rindex(" {")].strip()
    return value


class _StanzaReader:
    """Splits OBO text into header lines and [Type] stanzas with line numbers."""

    def __init__(self, lines: Iterable[str]):
        self.header: list[tuple[int, str]] = []
        self.stanzas: list[tuple[str, int, list[tuple[int, str]]]] = []
        current: list[tuple[int, str]] | None = None
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = []
                self.stanzas.append((line[1:-1], number, current))
            elif current is None:
                self.header.append((number, line))
            else:
                current.append((number, line))


def read_obo(source: Source) -> OboDocument:
    """Parse an OBO 1.2 document into per-namespace DAGs.

    Unknown stanza types and unknown tags are tolerated and skipped.
    Relationship types outside ``is_a``/``part_of`` are dropped and counted
    in the load summary.
    """
    reader = _StanzaReader(_lines(source))
    summary = LoadSummary()

    default_namespace = "other"
    for _number, line in reader.header:
        if line.startswith("default-namespace:"):
            default_namespace = line.split(":", 1)[1].strip()

    all_terms: dict[str, Term] = {}
    for kind, start, lines in reader.stanzas:
        summary.stanzas += 1
        if kind != "Term":
            continue
        term = _parse_term_stanza(start, lines, default_namespace, summary)
        if term.id in all_terms:
            raise MalformedStanza(start, f"duplicate term id {term.id}")
        all_terms[term.id] = term

    alt_ids: dict[str, str] = {}
    for term in all_terms.values():
        for alt in term.alt_ids:
            if alt in all_terms or alt in alt_ids:
                raise MalformedStanza(0, f"alt_id {alt} claimed more than once")
            alt_ids[alt] = term.id
    summary.alt_ids = len(alt_ids)

    obsolete = {t.id: t for t in all_terms.values() if t.obsolete}
    summary.obsolete_terms = len(obsolete)
    if obsolete:
        logger.warning("dropped %d obsolete terms from the graph", len(obsolete))

    live: dict[str, dict[str, Term]] = {}
    for term in all_terms.values():
        if term.obsolete:
            continue
        live.setdefault(term.namespace, {})[term.id] = term
    summary.terms = sum(len(terms) for terms in live.values())

    dags = []
    for namespace in sorted(live):
        terms = live[namespace]
        local_alts = {a: c for a, c in alt_ids.items() if c in terms}
        dags.append(OntologyDag(namespace, terms, local_alts))
    return OboDocument(dags, obsolete, alt_ids, summary)


def _parse_term_stanza(start: int, lines: list[tuple[int, str]],
                       default_namespace: str, summary: LoadSummary) -> Term:
    term_id = None
    name = ""
    namespace = None
    parents: list[tuple[str, str]] = []
    alt_ids: list[str] = []
    obsolete = False

    for number, line in lines:
        if ":" not in line:
            raise MalformedStanza(number, f"tag line without colon: {line!r}")
        tag, raw = line.split(":", 1)
        tag = tag.strip()
        value = _clean_value(raw)
        if tag == "id":
            if term_id is not None:
                raise MalformedStanza(number, "duplicate id tag")
            if not is_term_id(value):
                raise MalformedStanza(number, f"invalid term id {value!r}")
            term_id = value
        elif tag == "name":
            name = value
        elif tag == "namespace":
            namespace = value
        elif tag == "alt_id":
            alt_ids.append(value)
        elif tag == "is_a":
            if not is_term_id(value):
                raise MalformedStanza(number, f"invalid is_a target {value!r}")
            parents.append((value, IS_A))
        elif tag == "relationship":
            parts = value.split()
            if len(parts) != 2:
                raise MalformedStanza(number, f"invalid relationship {value!r}")
            relation, target = parts
            if relation in EDGE_RELATIONS:
                if not is_term_id(target):
                    raise MalformedStanza(
                        number, f"invalid relationship target {target!r}")
                parents.append((target, relation))
            else:
                summary.dropped_relationships[relation] += 1
        elif tag == "is_obsolete":
            obsolete = value.lower() == "true"
        # any other tag is tolerated and skipped

    if term_id is None:
        raise MalformedStanza(start, "[Term] stanza without id")
    if obsolete:
        parents = []
    return Term(
        id=term_id,
        name=name,
        namespace=namespace or default_namespace,
        parents=tuple(sorted(set(parents))),
        alt_ids=tuple(sorted(set(alt_ids))),
        obsolete=obsolete,
    )


def parse_obo(source: Source) -> list[OntologyDag]:
    """Parse OBO text into one validated DAG per namespace found."""
    return read_obo(source).dags
