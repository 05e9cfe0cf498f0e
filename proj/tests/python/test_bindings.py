"""Binding outputs compared field for field against the CLI."""

import csv
import io
import json
import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

import paratok

CLI = os.environ["PARATOK_CLI"]
TOY = Path(os.environ["PARATOK_FIXTURE_DIR"]) / "toy"


def cli(*args):
    return subprocess.run([CLI, *map(str, args)], check=True, capture_output=True,
                          text=True).stdout


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run") / "out"
    cli("run", "--config", TOY / "config.json", "--out", out)
    return out


@pytest.fixture(scope="module")
def rows():
    with open(TOY / "parallel.tsv", encoding="utf-8") as f:
        return [line.rstrip("\n").split("\t") for line in f]


def metric_value(text):
    return float(list(csv.DictReader(io.StringIO(text)))[0]["value"])


@pytest.mark.parametrize("lang", ["en", "ha", "[HA]"])
def test_encode_matches_cli(run_dir, rows, lang, tmp_path):
    tok = paratok.load(str(run_dir / "parallel"))
    col = 1 if "ha" in lang.lower() else 0
    lines = [r[col] for r in rows[1:]]
    src = tmp_path / "in.txt"
    src.write_text("\n".join(lines) + "\n", encoding="utf-8")
    expected = [json.loads(l) for l in cli("encode", "--parallel", run_dir / "parallel",
                                           "--lang", lang, "--input", src).splitlines()]
    assert [tok.encode(lang, l) for l in lines] == expected


def test_decode_round_trips(run_dir, rows):
    tok = paratok.load(str(run_dir / "parallel"))
    for en, ha in rows[1:]:
        assert tok.decode("en", tok.encode("en", en)["ids"]) == en
        assert tok.decode("ha", tok.encode("ha", ha)["ids"]) == ha


@pytest.mark.parametrize("lang", ["en", "ha"])
def test_fertility_matches_cli(run_dir, rows, lang):
    tok = paratok.load(str(run_dir / "parallel"))
    col = rows[0].index(lang)
    got = tok.fertility(lang, [r[col] for r in rows[1:]])
    want = metric_value(cli("metrics", "fertility", "--tokenizer", run_dir / "parallel",
                            "--lang", lang, "--corpus", TOY / "parallel.tsv"))
    assert got == want


@pytest.mark.parametrize("corpus_ratio", [False, True])
def test_parity_matches_cli(run_dir, corpus_ratio):
    tok = paratok.load(str(run_dir / "parallel"))
    got = tok.parity(str(TOY / "parallel.tsv"), "ha", "en", corpus_ratio)
    args = ["metrics", "parity", "--tokenizer", run_dir / "parallel", "--lang", "ha",
            "--reference", "en", "--corpus", TOY / "parallel.tsv"]
    if corpus_ratio:
        args.append("--corpus-ratio")
    assert got == metric_value(cli(*args))


def test_xsim_matches_cli(tmp_path):
    rng = np.random.default_rng(4)
    src, tgt = rng.standard_normal((8, 5)), rng.standard_normal((8, 5))
    for name, m in (("s.csv", src), ("t.csv", tgt)):
        np.savetxt(tmp_path / name, m, delimiter=",", fmt="%.17g")
    want = metric_value(cli("xsim", "--src", tmp_path / "s.csv", "--tgt",
                            tmp_path / "t.csv", "--k", 3))
    assert paratok.xsim(src, tgt, 3) == want
    assert paratok.xsim(np.eye(4), np.eye(4)) == 0.0


def test_single_vocab(run_dir):
    v = paratok.load_vocab(str(run_dir / "mono" / "en.vocab.txt"))
    assert v.decode(v.encode("the rice")["ids"]) == "the rice"


def test_errors_carry_primary_names(run_dir, tmp_path):
    with pytest.raises(paratok.FileNotFound):
        paratok.load(str(tmp_path / "missing"))
    tok = paratok.load(str(run_dir / "parallel"))
    with pytest.raises(paratok.UnknownLanguageToken):
        tok.encode("[XX]", "hello")
    with pytest.raises(paratok.ParatokError):
        paratok.xsim(np.eye(3), np.eye(4))
