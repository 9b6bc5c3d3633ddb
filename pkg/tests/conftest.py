from pathlib import Path

import pytest

from gosim.annotations import build_corpus, read_gaf
from gosim.graph_index import DagIndex
from gosim.infocontent import build_ic_table
from gosim.ontology import read_obo
from gosim.termsim import TermSimilarity

DATA = Path(__file__).parent / "data"

#: Letter aliases for the toy BP terms, used throughout the tests.
T = {
    "R": "TOY:0000001",
    "A": "TOY:0000002",
    "B": "TOY:0000003",
    "C": "TOY:0000004",
    "D": "TOY:0000005",
    "E": "TOY:0000006",
}


@pytest.fixture(scope="session")
def toy_document():
    return read_obo(DATA / "toy.obo")


@pytest.fixture(scope="session")
def bp_dag(toy_document):
    return toy_document.dag("biological_process")


@pytest.fixture(scope="session")
def toy_gaf(toy_document):
    return read_gaf(DATA / "toy.gaf", toy_document)


@pytest.fixture(scope="session")
def bp_corpus(toy_gaf, bp_dag):
    return build_corpus(toy_gaf.records, bp_dag)


@pytest.fixture(scope="session")
def bp_index(bp_dag):
    return DagIndex(bp_dag)


@pytest.fixture(scope="session")
def bp_ic(bp_corpus):
    return build_ic_table(bp_corpus)


@pytest.fixture(scope="session")
def bp_engine(bp_index, bp_ic):
    return TermSimilarity(bp_index, bp_ic)
