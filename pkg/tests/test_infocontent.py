import math

import numpy as np
import pytest

from gosim.annotations import build_corpus, parse_gaf
from gosim.errors import UnannotatedTerm, UndefinedProbability, UnknownTerm
from gosim.infocontent import (
    build_ic_table,
    information_content,
    probability,
    read_ic_tsv,
    write_ic_tsv,
)
from gosim.ontology import parse_obo

from conftest import T
from oracles import BruteOracle, fixture_obo, random_fixture


class TestProbability:
    def test_toy_values(self, bp_corpus):
        assert probability(T["R"], bp_corpus) == 1.0
        assert probability(T["A"], bp_corpus) == 0.5
        assert probability(T["C"], bp_corpus) == 0.375
        assert probability(T["E"], bp_corpus) == 0.125

    def test_unknown_term(self, bp_corpus):
        with pytest.raises(UnknownTerm):
            probability("TOY:4444444", bp_corpus)

    def test_zero_count_term_has_no_probability(self, toy_gaf, bp_dag):
        # annotate only the B branch so the A subtree keeps zero counts
        records = [r for r in toy_gaf.records if r.term == T["B"]]
        corpus = build_corpus(records, bp_dag)
        with pytest.raises(UndefinedProbability):
            probability(T["C"], corpus)


class TestIcTable:
    def test_natural_log_values(self, bp_ic):
        assert bp_ic.information_content(T["R"]) == 0.0
        assert bp_ic.information_content(T["A"]) == pytest.approx(
            math.log(2), abs=1e-12)
        assert bp_ic.information_content(T["C"]) == pytest.approx(
            0.9808292530117262, abs=1e-12)
        assert bp_ic.information_content(T["E"]) == pytest.approx(
            math.log(8), abs=1e-12)

    def test_zero_count_terms_excluded(self, toy_gaf, bp_dag):
        records = [r for r in toy_gaf.records if r.term == T["B"]]
        table = build_ic_table(build_corpus(records, bp_dag))
        assert not table.knows(T["C"])
        with pytest.raises(UndefinedProbability):
            table.information_content(T["C"])
        with pytest.raises(UnannotatedTerm):
            table.probability_of(T["C"])

    def test_root_ic_zero_and_monotone(self, bp_ic, bp_dag):
        assert bp_ic.information_content(bp_dag.root) == 0.0
        for term in bp_ic.ic:
            for parent, _rel in bp_dag.parents_of(term):
                assert bp_ic.ic[parent] <= bp_ic.ic[term]

    def test_round_trip_tsv(self, bp_ic, tmp_path):
        path = tmp_path / "ic.tsv"
        write_ic_tsv(bp_ic, path)
        clone = read_ic_tsv(path)
        assert clone.namespace == bp_ic.namespace
        assert clone.total == bp_ic.total
        assert clone.prob == bp_ic.prob
        assert clone.ic == bp_ic.ic
        assert clone.cumulative == bp_ic.cumulative

    def test_module_level_helper(self, bp_ic):
        assert information_content(bp_ic, T["A"]) == bp_ic.ic[T["A"]]


class TestAgainstOracle:
    @pytest.mark.parametrize("seed", range(3))
    def test_random_corpora(self, seed, bp_dag):
        rng = np.random.default_rng(2000 + seed)
        parents, direct = random_fixture(rng, n_terms=25, n_genes=30)
        oracle = BruteOracle(parents, direct)
        dag = parse_obo(fixture_obo(parents))[0]
        records = _records(direct)
        corpus = build_corpus(parse_gaf(records, dag), dag,
                              drop_evidence=frozenset(), drop_root_only=False)
        table = build_ic_table(corpus)
        assert table.total == oracle.total()
        for term in dag.terms:
            if not table.knows(term):
                assert len(oracle.genes_at_or_below(term)) == 0
                continue
            assert table.prob[term] == pytest.approx(oracle.prob(term), abs=1e-12)
            assert table.ic[term] == pytest.approx(oracle.ic(term), abs=1e-12)


def _records(direct):
    line = ("X\t{gene}\t{gene}\t\t{term}\tREF:1\tEXP\t\tP\t\t{gene}\t"
            "protein\ttaxon:1\t20200101\tX\t\t")
    return "\n".join(line.format(gene=g, term=t)
                     for g in sorted(direct) for t in sorted(direct[g]))
