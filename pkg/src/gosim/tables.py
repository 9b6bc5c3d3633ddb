"""Readers for the tabular input formats of the analysis pipeline.

All readers skip blank lines and lines starting with '#' or '!'. Columns
are tab-separated unless noted.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .analysis import ExpressionMatrix, Pair, canonical_pair
from .errors import MalformedLine, MissingArtifact

logger = logging.getLogger(__name__)


def _rows(path: Path | str):
    path = Path(path)
    if not path.is_file():
        raise MissingArtifact(str(path))
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#") or line.startswith("!"):
            continue
        yield number, line.split("\t")


def read_blast_table(path: Path | str, *, query_col: int = 0, subject_col: int = 1,
                     score_col: int = 11) -> list[tuple[str, str, float]]:
    """Directed (query, subject, bit score) hits from BLAST tabular output.

    Defaults match outfmt 6, where the bit score is the last of twelve
    columns; the column indices are configurable for trimmed files.
    """
    hits: list[tuple[str, str, float]] = []
    needed = max(query_col, subject_col, score_col) + 1
    for number, cols in _rows(path):
        if len(cols) < needed:
            raise MalformedLine(number, f"{len(cols)} columns, {needed} required")
        try:
            score = float(cols[score_col])
        except ValueError:
            raise MalformedLine(number, f"bad bit score {cols[score_col]!r}") from None
        hits.append((cols[query_col].strip(), cols[subject_col].strip(), score))
    return hits


def read_expression_matrix(path: Path | str) -> ExpressionMatrix:
    """Gene rows by condition columns; empty or 'NA' cells are missing.

    The first row must be a header naming the conditions; its first cell
    is ignored.
    """
    rows = list(_rows(path))
    if not rows:
        raise MalformedLine(0, "empty expression matrix")
    header = rows[0][1]
    conditions = tuple(header[1:])
    genes: list[str] = []
    values: list[list[float]] = []
    for number, cols in rows[1:]:
        if len(cols) != len(conditions) + 1:
            raise MalformedLine(
                number, f"{len(cols) - 1} cells, {len(conditions)} conditions")
        genes.append(cols[0].strip())
        row = []
        for cell in cols[1:]:
            cell = cell.strip()
            row.append(float("nan") if cell in ("", "NA", "NaN", "nan") else float(cell))
        values.append(row)
    return ExpressionMatrix(
        genes=tuple(genes),
        values=np.array(values, dtype=np.float64),
        conditions=conditions,
    )


def read_pair_list(path: Path | str) -> list[Pair]:
    """Unordered gene pairs, one per line (extra columns tolerated)."""
    pairs: list[Pair] = []
    for number, cols in _rows(path):
        if len(cols) < 2:
            raise MalformedLine(number, "need two gene columns")
        pairs.append(canonical_pair(cols[0].strip(), cols[1].strip()))
    return pairs


def read_labeled_pairs(path: Path | str) -> dict[str, list[Pair]]:
    """Gene pairs with a category label in the third column.

    Used for ortholog pair files whose categories are IO, HS, LS and NS;
    any label string is accepted.
    """
    out: dict[str, list[Pair]] = {}
    for number, cols in _rows(path):
        if len(cols) < 3:
            raise MalformedLine(number, "need gene1, gene2 and a label column")
        label = cols[2].strip()
        out.setdefault(label, []).append(
            canonical_pair(cols[0].strip(), cols[1].strip()))
    return out


def read_complexes(path: Path | str) -> dict[str, frozenset[str]]:
    """Complex membership as (complex id, gene) rows.

    Complexes with fewer than two distinct members are dropped with a log
    note, matching the evaluation's minimum useful size.
    """
    members: dict[str, set[str]] = {}
    for number, cols in _rows(path):
        if len(cols) < 2:
            raise MalformedLine(number, "need complex id and gene columns")
        members.setdefault(cols[0].strip(), set()).add(cols[1].strip())
    small = [cid for cid, genes in members.items() if len(genes) < 2]
    for cid in small:
        del members[cid]
    if small:
        logger.info("dropped %d complexes with fewer than 2 members", len(small))
    return {cid: frozenset(genes) for cid, genes in members.items()}


def read_gene_list(path: Path | str) -> list[str]:
    """Gene ids from the first column, one per line."""
    return [cols[0].strip() for _, cols in _rows(path)]


def read_term_pairs(path: Path | str) -> list[tuple[str, str]]:
    """Ordered term id pairs, one per line."""
    pairs: list[tuple[str, str]] = []
    for number, cols in _rows(path):
        if len(cols) < 2:
            raise MalformedLine(number, "need two term columns")
        pairs.append((cols[0].strip(), cols[1].strip()))
    return pairs
