import json

import numpy as np
import pytest

from gosim import cli
from gosim.proteinsim import ScoreMatrix

from conftest import DATA, T


@pytest.fixture(scope="module")
def ws(tmp_path_factory):
    out = tmp_path_factory.mktemp("ws")
    code = cli.run(["build", str(DATA / "toy.obo"), str(DATA / "toy.gaf"),
                    "-o", str(out)])
    assert code == 0
    return out


def _save_matrix(path, genes, fn, namespace="biological_process"):
    n = len(genes)
    vals = np.empty(n * (n + 1) // 2)
    k = 0
    for i in range(n):
        for j in range(i, n):
            vals[k] = fn(genes[i], genes[j])
            k += 1
    ScoreMatrix(tuple(genes), vals, "lin", "maximum", namespace).save(path)
    return path


@pytest.fixture(scope="module")
def matrices(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_mat")
    genes = tuple(f"p{i:02d}" for i in range(12))
    rng = np.random.default_rng(31)
    table = {}

    def fn(a, b):
        key = (a, b) if a <= b else (b, a)
        if key not in table:
            table[key] = 1.0 if a == b else float(rng.uniform(0.05, 1.0))
        return table[key]

    bp = _save_matrix(root / "bp.mat", genes, fn)
    cc = _save_matrix(root / "cc.mat", genes, fn,
                      namespace="cellular_component")
    pos = root / "pos.tsv"
    pos.write_text("p00\tp01\np02\tp03\np04\tp05\n")
    return {"bp": bp, "cc": cc, "pos": pos, "root": root}


class TestBuild:
    def test_reports_counts(self, tmp_path, capsys):
        code = cli.run(["build", str(DATA / "toy.obo"), str(DATA / "toy.gaf"),
                        "-o", str(tmp_path / "ws")])
        out = capsys.readouterr().out
        assert code == 0
        assert "biological_process: 6 terms, 8 genes, 8 annotations" in out
        assert "cellular_component" in out
        assert (tmp_path / "ws" / "manifest.json").is_file()

    def test_fingerprint_stable_across_rebuilds(self, tmp_path, capsys):
        args = ["build", str(DATA / "toy.obo"), str(DATA / "toy.gaf")]
        assert cli.run(args + ["-o", str(tmp_path / "a")]) == 0
        first = capsys.readouterr().out
        assert cli.run(args + ["-o", str(tmp_path / "b")]) == 0
        second = capsys.readouterr().out
        def fingerprint(text):
            line = next(l for l in text.splitlines()
                        if l.startswith("fingerprint"))
            return line.split()[1]

        assert fingerprint(first) == fingerprint(second)

    def test_missing_gaf_exits_1(self, tmp_path, capsys):
        code = cli.run(["build", str(DATA / "toy.obo"),
                        str(tmp_path / "absent.gaf"), "-o", str(tmp_path)])
        assert code == 1
        assert "absent.gaf" in capsys.readouterr().err


class TestTermSim:
    def test_single_pair_prints_value(self, ws, capsys):
        code = cli.run(["termsim", T["C"], T["D"], "-w", str(ws),
                        "-m", "lin"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.452997"

    def test_default_measure(self, ws, capsys):
        code = cli.run(["termsim", T["C"], T["D"], "-w", str(ws)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.185450"

    def test_batch_from_file(self, ws, tmp_path, capsys):
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text(f"{T['C']}\t{T['D']}\n{T['A']}\t{T['B']}\n")
        out = tmp_path / "sim.tsv"
        code = cli.run(["termsim", "-w", str(ws), "-m", "lin",
                        "--pairs", str(pairs), "--out", str(out)])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].split("\t")[-1] == "0.452997"
        assert out.is_file()

    def test_unknown_term_exits_2(self, ws, capsys):
        code = cli.run(["termsim", "TOY:9999999", T["D"], "-w", str(ws)])
        assert code == 2
        assert "UnknownTerm" in capsys.readouterr().err

    def test_odd_argument_count_exits_1(self, ws, capsys):
        code = cli.run(["termsim", T["C"], "-w", str(ws)])
        assert code == 1


class TestProtSim:
    def test_pair_value(self, ws, capsys):
        code = cli.run(["protsim", "g1", "g3", "-w", str(ws), "-n", "BP",
                        "-m", "lin", "-s", "bma"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.452997"

    def test_unannotated_gene_exits_2(self, ws, capsys):
        code = cli.run(["protsim", "g1", "ghost", "-w", str(ws), "-n", "BP",
                        "-m", "lin"])
        assert code == 2
        assert "ghost" in capsys.readouterr().err


class TestMatrix:
    def test_writes_binary_and_tsv(self, ws, tmp_path, capsys):
        out = tmp_path / "bp.mat"
        code = cli.run(["matrix", "-w", str(ws), "-n", "BP", "-m", "lin",
                        "-s", "bma", "-o", str(out),
                        "--format", "binary", "--format", "tsv"])
        stdout = capsys.readouterr().out
        assert code == 0
        assert out.is_file()
        assert out.with_name("bp.mat.tsv").is_file()
        assert "memo hit rate" in stdout
        assert (out.with_name("bp.mat.run.json")).is_file()


class TestConfig:
    def test_shared_scalar_becomes_default(self, ws, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"measure": "lin"}))
        code = cli.run(["--config", str(cfg), "termsim", T["C"], T["D"],
                        "-w", str(ws)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.452997"

    def test_section_overrides_shared(self, ws, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"measure": "lin",
                                   "termsim": {"measure": "resnik"}}))
        code = cli.run(["--config", str(cfg), "termsim", T["C"], T["D"],
                        "-w", str(ws)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0.693147"

    def test_unreadable_config_exits_1(self, tmp_path, capsys):
        code = cli.run(["--config", str(tmp_path / "nope.json"), "termsim",
                        T["C"], T["D"], "-w", str(tmp_path)])
        assert code == 1


class TestCorrelate:
    def test_blast_happy_path(self, matrices, tmp_path, capsys):
        genes = [f"p{i:02d}" for i in range(12)]
        rng = np.random.default_rng(5)
        lines = []
        for i, a in enumerate(genes):
            for b in genes[i + 1:]:
                s = float(rng.uniform(30.0, 400.0))
                row = ["*"] * 12
                row[0], row[1], row[11] = a, b, f"{s:.1f}"
                lines.append("\t".join(row))
                row = ["*"] * 12
                row[0], row[1], row[11] = b, a, f"{s * 1.1:.1f}"
                lines.append("\t".join(row))
        blast = tmp_path / "blast.tsv"
        blast.write_text("\n".join(lines) + "\n")
        out = tmp_path / "corr.tsv"
        code = cli.run(["correlate", "-x", str(matrices["bp"]),
                        "--blast", str(blast), "--intervals", "5",
                        "--out", str(out)])
        stdout = capsys.readouterr().out
        assert code == 0
        assert "pearson_r" in stdout
        assert out.is_file()
        header = [l for l in out.read_text().splitlines()
                  if l.startswith("# ")]
        keys = {l.split("\t")[0][2:] for l in header}
        assert {"command", "source", "pearson_r", "n_pairs"} <= keys

    def test_degenerate_scores_exit_2(self, tmp_path, capsys):
        genes = ("a", "b", "c", "d")
        flat = _save_matrix(tmp_path / "flat.mat", genes,
                            lambda x, y: 1.0 if x == y else 0.5)
        rows = []
        for i, g in enumerate(genes):
            for h in genes[i + 1:]:
                row = ["*"] * 12
                row[0], row[1], row[11] = g, h, "100.0"
                rows.append("\t".join(row))
        blast = tmp_path / "blast.tsv"
        blast.write_text("\n".join(rows) + "\n")
        code = cli.run(["correlate", "-x", str(flat), "--blast", str(blast)])
        assert code == 2
        assert "identical" in capsys.readouterr().err

    def test_requires_exactly_one_source(self, matrices, capsys):
        code = cli.run(["correlate", "-x", str(matrices["bp"])])
        assert code == 1


class TestPredictZscoreRocHist:
    def test_predict_writes_edges(self, matrices, tmp_path, capsys):
        out = tmp_path / "edges.tsv"
        code = cli.run(["predict", "--bp", str(matrices["bp"]),
                        "--cc", str(matrices["cc"]),
                        "--bp-min", "0.5", "--cc-min", "0.5",
                        "--out", str(out)])
        stdout = capsys.readouterr().out
        assert code == 0
        assert "edges between" in stdout
        assert out.is_file()
        assert out.with_name("edges.complexes.tsv").exists() is False

    def test_zscore_deterministic_across_workers(self, matrices, tmp_path,
                                                 capsys):
        def once(out, workers):
            code = cli.run(["zscore", "--positives", str(matrices["pos"]),
                            "--bp", str(matrices["bp"]),
                            "--cc", str(matrices["cc"]),
                            "--samples", "50", "--seed", "7",
                            "--workers", str(workers), "--out", str(out)])
            assert code == 0
            capsys.readouterr()
            return out.read_bytes()

        a = once(tmp_path / "z1.tsv", 1)
        b = once(tmp_path / "z2.tsv", 4)
        c = once(tmp_path / "z3.tsv", 1)
        assert a == b == c

    def test_roc_deterministic_and_seed_sensitive(self, matrices, tmp_path,
                                                  capsys):
        def once(out, seed):
            code = cli.run(["roc", "--positives", str(matrices["pos"]),
                            "--bp", str(matrices["bp"]),
                            "--cc", str(matrices["cc"]),
                            "--repeats", "4", "--seed", str(seed),
                            "--out", str(out)])
            assert code == 0
            assert "auc " in capsys.readouterr().out
            return out.read_bytes()

        a = once(tmp_path / "r1.tsv", 7)
        b = once(tmp_path / "r2.tsv", 7)
        c = once(tmp_path / "r3.tsv", 8)
        assert a == b
        assert a != c

    def test_run_manifest_records_inputs(self, matrices, tmp_path):
        out = tmp_path / "r.tsv"
        assert cli.run(["roc", "--positives", str(matrices["pos"]),
                        "--bp", str(matrices["bp"]),
                        "--cc", str(matrices["cc"]),
                        "--repeats", "2", "--out", str(out)]) == 0
        manifest = json.loads(out.with_name("r.tsv.run.json").read_text())
        assert manifest["command"] == "roc"
        assert manifest["params"]["seed"] == 42
        assert any(len(rec["sha256"]) == 64
                   for rec in manifest["inputs"].values())
        assert "wall_time_seconds" in manifest

    def test_hist_prints_counts(self, matrices, capsys):
        code = cli.run(["hist", "-x", str(matrices["bp"]),
                        "--scheme", "bins10_unit"])
        stdout = capsys.readouterr().out
        assert code == 0
        assert "n=66" in stdout


class TestMisc:
    def test_version_exits_0(self, capsys):
        assert cli.run(["--version"]) == 0
        assert "version" in capsys.readouterr().out
