"""Ontology-based semantic similarity for terms and gene products.

Core flow: parse an OBO ontology and a GAF annotation file, build
per-namespace DAG indices and information-content tables, score term
pairs under ten measures, aggregate to gene products, and evaluate the
scores against sequence, expression, interaction and complex data.
"""

__version__ = "0.1.0"

from .annotations import (
    AnnotationCorpus,
    AnnotationRecord,
    build_corpus,
    parse_gaf,
    read_gaf,
)
from .errors import DataError, GosimError, ValidationError
from .graph_index import DagIndex, RssComponents
from .infocontent import IcTable, build_ic_table, information_content, probability
from .ontology import OboDocument, OntologyDag, Term, parse_obo, read_obo
from .proteinsim import (
    STRATEGIES,
    ScoreMatrix,
    all_pairs,
    load_score_matrix,
    protein_sim,
    term_to_set_sim,
)
from .termsim import BOUNDED_MEASURES, MEASURES, TermSimilarity
from .workspace import Workspace, build_workspace, load_workspace, save_workspace

__all__ = [
    "AnnotationCorpus",
    "AnnotationRecord",
    "BOUNDED_MEASURES",
    "DagIndex",
    "DataError",
    "GosimError",
    "IcTable",
    "MEASURES",
    "OboDocument",
    "OntologyDag",
    "RssComponents",
    "STRATEGIES",
    "ScoreMatrix",
    "Term",
    "TermSimilarity",
    "ValidationError",
    "Workspace",
    "all_pairs",
    "build_corpus",
    "build_ic_table",
    "build_workspace",
    "information_content",
    "load_score_matrix",
    "load_workspace",
    "parse_gaf",
    "parse_obo",
    "probability",
    "protein_sim",
    "read_gaf",
    "read_obo",
    "save_workspace",
    "term_to_set_sim",
    "__version__",
]
