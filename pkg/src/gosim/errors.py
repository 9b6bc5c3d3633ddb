"""Exception types shared across the package.

Two families matter to callers: :class:`ValidationError` for unusable
configuration, paths, or vocabulary values, and :class:`DataError` for
inputs that were read successfully but cannot be processed. The CLI maps
them to exit codes 1 and 2 respectively; anything else is an internal
error (exit code 3).
"""

from __future__ import annotations


class GosimError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(GosimError):
    """Invalid configuration, path, or vocabulary value."""


class DataError(GosimError):
    """Input data that violates a contract of the operation."""


# ---------------------------------------------------------------------------
# ontology parsing and DAG construction


class MalformedStanza(DataError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class CycleDetected(DataError):
    def __init__(self, terms):
        self.terms = tuple(sorted(terms))
        super().__init__(
            "ontology graph is not acyclic; terms on a cycle: "
            + ", ".join(self.terms)
        )


class MissingRoot(DataError):
    def __init__(self, namespace: str, candidates=()):
        self.namespace = namespace
        self.candidates = tuple(sorted(candidates))
        if not self.candidates:
            detail = "no parentless term found"
        else:
            detail = "parentless terms: " + ", ".join(self.candidates)
        super().__init__(f"namespace {namespace!r} has no unique root; {detail}")


class DanglingParent(DataError):
    def __init__(self, child: str, parent: str):
        self.child = child
        self.parent = parent
        super().__init__(f"term {child} references missing parent {parent}")


# ---------------------------------------------------------------------------
# annotation parsing and corpus construction


class MalformedLine(DataError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptyCorpus(DataError):
    """No annotation survived filtering."""


# ---------------------------------------------------------------------------
# probabilities and information content


class UnknownTerm(DataError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"unknown term id {term!r}")


class ZeroTotal(DataError):
    """The corpus root has zero cumulative annotations."""


class UndefinedProbability(DataError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"term {term} has zero annotation probability")


class UnannotatedTerm(DataError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"term {term} has no annotation in the corpus")


# ---------------------------------------------------------------------------
# similarity measures


class DifferentNamespace(DataError):
    def __init__(self, term1: str, ns1: str, term2: str, ns2: str):
        self.terms = (term1, term2)
        self.namespaces = (ns1, ns2)
        super().__init__(
            f"terms live in different namespaces: {term1} ({ns1}) vs {term2} ({ns2})"
        )


class ZeroUnion(DataError):
    """Union of ancestor sets carries zero total information content."""


class EmptySet(DataError):
    """A gene product has no usable annotation set."""


# ---------------------------------------------------------------------------
# analysis pipeline


class NonPositiveScore(DataError):
    def __init__(self, detail: str):
        super().__init__(f"bit score must be positive: {detail}")


class DegenerateRange(DataError):
    """All values are identical; nothing to bin."""


class TooFewIntervalsNonEmpty(DataError):
    def __init__(self, non_empty: int, required: int = 3):
        self.non_empty = non_empty
        super().__init__(
            f"only {non_empty} non-empty intervals; at least {required} required"
        )


class TooFewConditions(DataError):
    def __init__(self, conditions: int, required: int):
        self.conditions = conditions
        super().__init__(
            f"expression matrix has {conditions} conditions; "
            f"at least {required} required"
        )


class NoNeighbors(DataError):
    def __init__(self, gene: str, condition: int):
        self.gene = gene
        self.condition = condition
        super().__init__(
            f"no neighbor with an observed value at condition {condition} "
            f"to impute gene {gene}"
        )


class EmptyInput(DataError):
    """An operation that needs at least one value received none."""


class IncompatibleHistograms(DataError):
    """Histogram pair cannot be compared (different binning or empty)."""


class EmptyIntersection(DataError):
    """No gene is shared between the two score matrices."""


class InsufficientUniverse(DataError):
    def __init__(self, universe: int, needed: int):
        self.universe = universe
        self.needed = needed
        super().__init__(
            f"universe of scorable pairs has {universe} members; "
            f"{needed} needed to draw a sample without replacement"
        )


class InsufficientNegatives(DataError):
    def __init__(self, available: int, needed: int):
        self.available = available
        self.needed = needed
        super().__init__(
            f"only {available} scorable non-positive pairs available; "
            f"{needed} needed"
        )


# ---------------------------------------------------------------------------
# workspaces and command plumbing


class MissingArtifact(ValidationError):
    def __init__(self, path: str, detail: str = ""):
        self.path = str(path)
        message = f"artifact not found or unreadable: {path}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
