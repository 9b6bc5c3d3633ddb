"""Command-line front end.

Every data command builds a JSON request and sends it to the service layer:
in-process by default (no socket involved), or to a remote instance when
``--server`` is given. Exit codes: 0 success, 1 validation problem, 2 data
problem, 3 internal failure. ``--config`` points at a JSON file whose
top-level scalars become defaults for every command and whose per-command
sections override them.
"""

from __future__ import annotations

import asyncio
import json
import os
import sys
from pathlib import Path

import click
import httpx

from .analysis import COMBINE_MODES, DEFAULT_SEED, HISTOGRAM_SCHEMES
from .errors import DataError, GosimError, ValidationError

_KIND_EXIT = {"validation": 1, "data": 2, "internal": 3}

_COMMANDS = ("build", "termsim", "protsim", "matrix", "correlate", "predict",
             "zscore", "roc", "hist", "serve")

_app_instance = None


class ServiceError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.message = message


def _service_app():
    global _app_instance
    if _app_instance is None:
        from .service import create_app
        _app_instance = create_app()
    return _app_instance


def _handle(response: httpx.Response) -> dict:
    if response.status_code == 200:
        return response.json()
    try:
        payload = response.json()
    except ValueError:
        payload = {}
    if response.status_code == 422:
        raise ServiceError(1, f"invalid request: {payload.get('detail')}")
    error = payload.get("error") or {}
    kind = error.get("kind", "internal")
    message = error.get("message", f"HTTP {response.status_code}")
    label = error.get("type", "Error")
    raise ServiceError(_KIND_EXIT.get(kind, 3), f"{label}: {message}")


def _post(ctx: click.Context, path: str, payload: dict) -> dict:
    server = ctx.obj.get("server")
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return _handle(client.post(path, json=payload))

    async def call() -> httpx.Response:
        transport = httpx.ASGITransport(app=_service_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://gosim.internal",
                                     timeout=None) as client:
            return await client.post(path, json=payload)

    return _handle(asyncio.run(call()))


def _default_workers() -> int:
    return os.cpu_count() or 1


def _configure(ctx: click.Context, param: click.Parameter, value: str | None):
    if value is None:
        return
    try:
        data = json.loads(Path(value).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"cannot read config {value!r}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("config must be a JSON object")
    shared = {k: v for k, v in data.items() if not isinstance(v, dict)}
    ctx.default_map = {
        name: {**shared, **data.get(name, {})} for name in _COMMANDS
    }


@click.group(name="gosim")
@click.option("--config", type=click.Path(), callback=_configure,
              is_eager=True, expose_value=False,
              help="JSON file with default options, per command or shared.")
@click.option("--server", envvar="GOSIM_SERVER", default=None,
              help="Base URL of a running service; default runs in-process.")
@click.version_option()
@click.pass_context
def cli(ctx: click.Context, server: str | None):
    """Ontology-based semantic similarity toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@cli.command()
@click.argument("obo", type=click.Path())
@click.argument("gaf", type=click.Path())
@click.option("--out-dir", "-o", required=True, type=click.Path(),
              help="Directory receiving the workspace artifacts.")
@click.option("--drop-evidence", default=None, metavar="CODES",
              help="Comma-separated evidence codes to drop [default: IEA]; "
                   "pass an empty string to keep everything.")
@click.option("--keep-root-only", is_flag=True,
              help="Keep genes annotated only at a namespace root.")
@click.option("--namespace", "namespaces", multiple=True,
              help="Restrict the build to these namespaces (repeatable).")
@click.pass_context
def build(ctx, obo, gaf, out_dir, drop_evidence, keep_root_only, namespaces):
    """Build DAG index and IC artifacts from an ontology and a GAF file."""
    payload: dict = {"obo": obo, "gaf": gaf, "out_dir": out_dir,
                     "drop_root_only": not keep_root_only}
    if drop_evidence is not None:
        payload["drop_evidence"] = drop_evidence.split(",")
    if namespaces:
        payload["namespaces"] = list(namespaces)
    data = _post(ctx, "/workspaces/build", payload)
    for name, info in sorted(data["namespaces"].items()):
        click.echo(
            f"{name}: {info['terms']} terms, {info['genes']} genes, "
            f"{info['annotations']} annotations "
            f"(total {info['total']}, max depth {info['max_depth']})")
    click.echo(f"fingerprint {data['fingerprint']}")
    click.echo(f"manifest {data['manifest']}")


@cli.command()
@click.argument("terms", nargs=-1)
@click.option("--workspace", "-w", required=True, type=click.Path())
@click.option("--measure", "-m", default="simic_lin", show_default=True)
@click.option("--pairs", type=click.Path(), default=None,
              help="TSV of term pairs for batch scoring.")
@click.option("--out", type=click.Path(), default=None,
              help="Write a report TSV here.")
@click.pass_context
def termsim(ctx, terms, workspace, measure, pairs, out):
    """Similarity of two terms (TERM1 TERM2) or of a batch (--pairs)."""
    if terms and len(terms) != 2:
        raise click.UsageError("give exactly two terms, or use --pairs")
    if not terms and not pairs:
        raise click.UsageError("give TERM1 TERM2 or --pairs FILE")
    payload = {"workspace": workspace, "measure": measure,
               "pairs": [{"term1": terms[0], "term2": terms[1]}] if terms
               else [],
               "pairs_file": pairs, "out": out}
    data = _post(ctx, "/termsim", payload)
    rows = data["rows"]
    if terms and not pairs:
        click.echo(f"{rows[0]['value']:.6f}")
    else:
        for row in rows:
            click.echo(f"{row['term1']}\t{row['term2']}\t{row['namespace']}\t"
                       f"{row['value']:.6f}")
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.argument("genes", nargs=-1)
@click.option("--workspace", "-w", required=True, type=click.Path())
@click.option("--namespace", "-n", required=True,
              help="Namespace (BP, MF, CC or full name).")
@click.option("--measure", "-m", default="simic_lin", show_default=True)
@click.option("--strategy", "-s", default="best_match_average",
              show_default=True)
@click.option("--pairs", type=click.Path(), default=None,
              help="TSV of gene pairs for batch scoring.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def protsim(ctx, genes, workspace, namespace, measure, strategy, pairs, out):
    """Similarity of two gene products (GENE1 GENE2) or a batch (--pairs)."""
    if genes and len(genes) != 2:
        raise click.UsageError("give exactly two genes, or use --pairs")
    if not genes and not pairs:
        raise click.UsageError("give GENE1 GENE2 or --pairs FILE")
    payload = {"workspace": workspace, "namespace": namespace,
               "measure": measure, "strategy": strategy,
               "pairs": [{"gene1": genes[0], "gene2": genes[1]}] if genes
               else [],
               "pairs_file": pairs, "out": out}
    data = _post(ctx, "/protsim", payload)
    rows = data["rows"]
    if genes and not pairs:
        click.echo(f"{rows[0]['value']:.6f}")
    else:
        for row in rows:
            click.echo(f"{row['gene1']}\t{row['gene2']}\t{row['value']:.6f}")
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.option("--workspace", "-w", required=True, type=click.Path())
@click.option("--namespace", "-n", required=True)
@click.option("--measure", "-m", default="simic_lin", show_default=True)
@click.option("--strategy", "-s", default="best_match_average",
              show_default=True)
@click.option("--out", "-o", required=True, type=click.Path(),
              help="Matrix file to write.")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["binary", "tsv"]), default=("binary",),
              show_default=True)
@click.option("--genes", "genes_file", type=click.Path(), default=None,
              help="Restrict to the genes listed in this file.")
@click.option("--workers", type=int, default=None,
              help="Worker threads [default: all cores].")
@click.pass_context
def matrix(ctx, workspace, namespace, measure, strategy, out, formats,
           genes_file, workers):
    """All-pairs protein similarity matrix for one namespace."""
    payload = {"workspace": workspace, "namespace": namespace,
               "measure": measure, "strategy": strategy, "out": out,
               "genes_file": genes_file,
               "workers": workers if workers else _default_workers(),
               "formats": list(formats)}
    data = _post(ctx, "/matrix", payload)
    stats = data["stats"]
    click.echo(
        f"{data['genes']} genes, excluded cells {data['excluded']}, "
        f"memo hit rate {stats.get('memo_hit_rate', 0.0):.3f}")
    for name, path in sorted(data["paths"].items()):
        click.echo(f"{name} {path}")


@cli.command()
@click.option("--matrix", "-x", "matrix_path", required=True,
              type=click.Path(), help="Score matrix file.")
@click.option("--blast", type=click.Path(), default=None,
              help="BLAST tabular hits (query, subject, ..., bit score).")
@click.option("--expression", type=click.Path(), default=None,
              help="Expression matrix TSV (genes x conditions).")
@click.option("--intervals", type=int, default=50, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def correlate(ctx, matrix_path, blast, expression, intervals, out):
    """Binned correlation of matrix scores against an external signal."""
    payload = {"matrix": matrix_path, "blast": blast,
               "expression": expression, "n_intervals": intervals,
               "out": out}
    data = _post(ctx, "/correlate", payload)
    click.echo(
        f"pearson_r {data['pearson_r']:.6f} over {data['non_empty']} "
        f"non-empty of {data['n_intervals']} intervals "
        f"({data['n_pairs']} pairs, source {data['source']})")
    if data.get("one_directional"):
        click.echo(f"one-directional hits: {data['one_directional']}",
                   err=True)
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.option("--bp", required=True, type=click.Path(),
              help="Biological-process score matrix.")
@click.option("--cc", required=True, type=click.Path(),
              help="Cellular-component score matrix.")
@click.option("--bp-min", type=float, default=0.7, show_default=True)
@click.option("--cc-min", type=float, default=0.8, show_default=True)
@click.option("--complexes", type=click.Path(), default=None,
              help="Complex membership TSV for a coverage report.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def predict(ctx, bp, cc, bp_min, cc_min, complexes, out):
    """Predict interacting pairs exceeding both namespace thresholds."""
    payload = {"bp": bp, "cc": cc, "bp_min": bp_min, "cc_min": cc_min,
               "complexes": complexes, "out": out}
    data = _post(ctx, "/predict", payload)
    click.echo(
        f"{data['edges']} edges between {data['proteins']} proteins "
        f"({data['components']} components, largest "
        f"{data['largest_component']}) at bp>{data['bp_min']} "
        f"cc>{data['cc_min']}")
    if data.get("coverage"):
        cov = data["coverage"]
        click.echo(f"complexes fully covered: {cov['fully_covered']} "
                   f"of {cov['complexes']}")
    for key in ("edges_out", "coverage_out"):
        if data.get(key):
            click.echo(f"report {data[key]}", err=True)


@cli.command()
@click.option("--positives", required=True, type=click.Path(),
              help="Known interacting pairs, TSV.")
@click.option("--bp", required=True, type=click.Path())
@click.option("--cc", required=True, type=click.Path())
@click.option("--samples", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--workers", type=int, default=None,
              help="Worker threads [default: all cores].")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def zscore(ctx, positives, bp, cc, samples, seed, workers, out):
    """Z-score grid of observed vs randomly sampled pair counts."""
    payload = {"positives": positives, "bp": bp, "cc": cc,
               "n_samples": samples, "seed": seed,
               "workers": workers if workers else _default_workers(),
               "out": out}
    data = _post(ctx, "/zscore", payload)
    flat = [v for row in data["z"] for v in row if v is not None]
    extreme = sum(1 for v in flat if abs(v) > 3.0)
    click.echo(
        f"{data['positives_used']} positives over a universe of "
        f"{data['universe']} pairs, {data['n_samples']} samples, "
        f"{len(flat)} defined cells, {extreme} with |z|>3")
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.option("--positives", required=True, type=click.Path())
@click.option("--bp", required=True, type=click.Path())
@click.option("--cc", required=True, type=click.Path())
@click.option("--combine", type=click.Choice(COMBINE_MODES), default="mean",
              show_default=True)
@click.option("--repeats", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--workers", type=int, default=None,
              help="Repeat-level parallelism [default: CPU count].")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def roc(ctx, positives, bp, cc, combine, repeats, seed, workers, out):
    """Mean ROC AUC of positives against sampled negative pair sets."""
    payload = {"positives": positives, "bp": bp, "cc": cc,
               "combine": combine, "repeats": repeats, "seed": seed,
               "workers": workers or _default_workers(), "out": out}
    data = _post(ctx, "/roc", payload)
    click.echo(f"auc {data['auc_mean']:.6f} +- {data['auc_sd']:.6f} "
               f"({data['repeats']} repeats, combine {data['combine']})")
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.option("--matrix", "-x", "matrices", multiple=True, required=True,
              type=click.Path(), help="Score matrix (repeat for two).")
@click.option("--scheme", type=click.Choice(HISTOGRAM_SCHEMES),
              default="bins10_unit", show_default=True)
@click.option("--pairs", type=click.Path(), default=None,
              help="Labeled pair TSV; splits scores by category.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def hist(ctx, matrices, scheme, pairs, out):
    """Score histograms plus chi-square contrasts between them."""
    payload = {"matrices": list(matrices), "scheme": scheme, "pairs": pairs,
               "out": out}
    data = _post(ctx, "/hist", payload)
    for label, info in sorted(data["histograms"].items()):
        click.echo(f"{label}: n={info['n_values']} "
                   f"counts={','.join(str(c) for c in info['counts'])}")
    for row in data["chi"]:
        click.echo(f"chi_square {row['label_a']} vs {row['label_b']}: "
                   f"statistic {row['statistic']:.6f} p {row['p_value']:.3g}")
    if out:
        click.echo(f"report {out}", err=True)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(_service_app(), host=host, port=port)


def run(argv: list[str] | None = None) -> int:
    """Dispatch and translate failures into documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ServiceError as exc:
        click.echo(f"error: {exc.message}", err=True)
        return exc.exit_code
    except ValidationError as exc:
        click.echo(f"error (validation): {exc}", err=True)
        return 1
    except DataError as exc:
        click.echo(f"error (data): {exc}", err=True)
        return 2
    except GosimError as exc:
        click.echo(f"error (data): {exc}", err=True)
        return 2
    except Exception as exc:
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 3


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
