"""Build, persist and reload the per-namespace working set.

A workspace bundles, for each namespace: the validated DAG, its
topological index, the IC table and each gene's direct annotation set.
Building is the expensive step; everything after construction is
immutable, so one workspace can serve concurrent readers. On disk a
workspace is a directory of canonical artifacts plus a manifest whose
fingerprint covers the input bytes and build parameters, making rebuilds
from unchanged inputs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__ as _version
from .annotations import (
    DEFAULT_DROP_EVIDENCE,
    AnnotationCorpus,
    build_corpus,
    read_gaf,
)
from .errors import DifferentNamespace, MissingArtifact, UnknownTerm
from .graph_index import DagIndex
from .infocontent import IcTable, build_ic_table, read_ic_tsv, write_ic_tsv
from .ontology import OntologyDag, read_obo, resolve_namespace
from .termsim import TermSimilarity

MANIFEST_NAME = "manifest.json"


def file_sha256(path: Path | str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _params_fingerprint(obo_sha: str, gaf_sha: str, params: dict) -> str:
    payload = json.dumps(
        {"obo": obo_sha, "gaf": gaf_sha, "params": params}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class NamespaceData:
    """Everything needed to answer queries within one namespace."""

    dag: OntologyDag
    index: DagIndex
    ic: IcTable
    gene_terms: dict[str, frozenset[str]]
    engine: TermSimilarity = field(init=False)

    def __post_init__(self):
        self.engine = TermSimilarity(self.index, self.ic)

    @property
    def namespace(self) -> str:
        return self.dag.namespace


@dataclass
class Workspace:
    """Immutable query context over one ontology + annotation build."""

    namespaces: dict[str, NamespaceData]
    fingerprint: str
    meta: dict

    def data(self, namespace: str) -> NamespaceData:
        wanted = resolve_namespace(namespace)
        try:
            return self.namespaces[wanted]
        except KeyError:
            known = ", ".join(sorted(self.namespaces))
            raise MissingArtifact(
                wanted, f"namespace not in workspace (has: {known})") from None

    def locate(self, term: str) -> tuple[str, str]:
        """(namespace, canonical id) for a term in any namespace."""
        for name, data in sorted(self.namespaces.items()):
            resolved = data.dag.resolve(term)
            if resolved is not None:
                return name, resolved
        raise UnknownTerm(term)

    def term_similarity(self, measure: str, t1: str, t2: str) -> tuple[float, str]:
        """Score a term pair, routing by namespace. Returns (value, namespace)."""
        ns1, c1 = self.locate(t1)
        ns2, c2 = self.locate(t2)
        if ns1 != ns2:
            raise DifferentNamespace(t1, ns1, t2, ns2)
        return self.namespaces[ns1].engine.score(measure, c1, c2), ns1


def build_workspace(obo_path: Path | str, gaf_path: Path | str, *,
                    drop_evidence: frozenset[str] = DEFAULT_DROP_EVIDENCE,
                    drop_root_only: bool = True,
                    namespaces: list[str] | None = None) -> Workspace:
    """Parse inputs and assemble the full query context in memory."""
    obo_path = Path(obo_path)
    gaf_path = Path(gaf_path)
    for path in (obo_path, gaf_path):
        if not path.is_file():
            raise MissingArtifact(str(path))

    document = read_obo(obo_path)
    gaf = read_gaf(gaf_path, document)

    wanted = None
    if namespaces:
        wanted = {resolve_namespace(n) for n in namespaces}

    built: dict[str, NamespaceData] = {}
    corpora: dict[str, AnnotationCorpus] = {}
    for dag in document.dags:
        if wanted is not None and dag.namespace not in wanted:
            continue
        records = [r for r in gaf.records if dag.resolve(r.term) is not None]
        if not records:
            continue
        corpus = build_corpus(records, dag, drop_evidence=drop_evidence,
                              drop_root_only=drop_root_only)
        index = DagIndex(dag)
        ic = build_ic_table(corpus)
        built[dag.namespace] = NamespaceData(
            dag=dag, index=index, ic=ic, gene_terms=dict(corpus.direct))
        corpora[dag.namespace] = corpus

    if not built:
        raise MissingArtifact(
            str(obo_path), "no namespace ended up with annotations")

    params = {
        "drop_evidence": sorted(drop_evidence),
        "drop_root_only": drop_root_only,
        "namespaces": sorted(wanted) if wanted is not None else None,
    }
    fingerprint = _params_fingerprint(
        file_sha256(obo_path), file_sha256(gaf_path), params)

    meta = {
        "version": _version,
        "fingerprint": fingerprint,
        "params": params,
        "inputs": {"obo": str(obo_path), "gaf": str(gaf_path)},
        "namespaces": {
            name: {
                "terms": len(data.dag),
                "edges": data.dag.edge_count,
                "genes": len(data.gene_terms),
                "annotations": corpora[name].annotation_count,
                "total": data.ic.total,
                "max_depth": data.index.max_depth,
            }
            for name, data in sorted(built.items())
        },
    }
    return Workspace(namespaces=built, fingerprint=fingerprint, meta=meta)


# ---------------------------------------------------------------------------
# persistence


def _genes_tsv(data: NamespaceData) -> str:
    lines = ["gene\tterms"]
    for gene in sorted(data.gene_terms):
        lines.append(f"{gene}\t{','.join(sorted(data.gene_terms[gene]))}")
    return "\n".join(lines) + "\n"


def save_workspace(workspace: Workspace, out_dir: Path | str) -> Path:
    """Write canonical per-namespace artifacts plus the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, dict[str, str]] = {}
    for name, data in sorted(workspace.namespaces.items()):
        obo_file = out / f"{name}.obo"
        ic_file = out / f"{name}.ic.tsv"
        genes_file = out / f"{name}.genes.tsv"
        obo_file.write_text(data.dag.to_obo(), encoding="utf-8")
        write_ic_tsv(data.ic, ic_file)
        genes_file.write_text(_genes_tsv(data), encoding="utf-8")
        files[name] = {
            "obo": obo_file.name,
            "ic": ic_file.name,
            "genes": genes_file.name,
        }
    manifest = dict(workspace.meta, files=files)
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path


def load_workspace(workspace_dir: Path | str) -> Workspace:
    """Reload a persisted workspace from its artifact directory."""
    root = Path(workspace_dir)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingArtifact(str(manifest_path))
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    namespaces: dict[str, NamespaceData] = {}
    for name, files in sorted(manifest.get("files", {}).items()):
        document = read_obo(root / files["obo"])
        dag = document.dag(name)
        ic = read_ic_tsv(root / files["ic"])
        gene_terms: dict[str, frozenset[str]] = {}
        for line in (root / files["genes"]).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("gene\t"):
                continue
            gene, terms = line.split("\t")
            gene_terms[gene] = frozenset(terms.split(","))
        namespaces[name] = NamespaceData(
            dag=dag, index=DagIndex(dag), ic=ic, gene_terms=gene_terms)

    if not namespaces:
        raise MissingArtifact(str(root), "manifest lists no namespaces")
    return Workspace(
        namespaces=namespaces,
        fingerprint=manifest.get("fingerprint", ""),
        meta=manifest,
    )
