"""End-to-end CLI flows, exit codes, config precedence, output formats."""

from __future__ import annotations

import json

import pytest

from fpdedup.cli import EXIT_CAP, EXIT_DATA, EXIT_OK, main
from fpdedup.signature import load_corpus_dir

from .conftest import REFERENCE_SIGNATURE_PATH


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus"
    rc = main(["generate", "--subjects", "120", "--dup", "0.1", "--seed", "21",
               "--minutiae-min", "20", "--minutiae-max", "35",
               "--out", str(corpus)])
    assert rc == EXIT_OK
    table = root / "table.tsv"
    rc = main(["index", "--corpus", str(corpus), "--out", str(table)])
    assert rc == EXIT_OK
    return root, corpus, table


def test_generate_writes_corpus_and_truth(generated):
    root, corpus, _ = generated
    records = load_corpus_dir(corpus)
    assert len(records) == 132
    truth = (corpus.parent / "corpus.truth.tsv").read_text().splitlines()
    assert len(truth) == 12
    assert all("\t" in line for line in truth)


def test_identify_finds_enrolled_record(generated, capsys):
    root, corpus, table = generated
    query = sorted(corpus.iterdir())[0]
    rc = main(["identify", "--query", str(query), "--table", str(table),
               "--corpus", str(corpus)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith(query.stem)
    assert out[0].split("\t") == [query.stem, "100.0000", "true"]
    assert out[-1].startswith("penetration\t")
    assert float(out[-1].split("\t")[1]) > 0.0


def test_dedup_report_and_stats(generated, capsys, tmp_path):
    root, corpus, table = generated
    report_path = tmp_path / "report.tsv"
    rc = main(["dedup", "--corpus", str(corpus), "--table", str(table),
               "--out", str(report_path)])
    assert rc == EXIT_OK
    lines = report_path.read_text().splitlines()
    assert lines[0] == "fpdedup-dedup-report v1"
    assert lines[-1].startswith("# summary: n=132")
    err = capsys.readouterr().err
    assert "duplicates=12" in err


def test_dedup_stdout_and_idempotent(generated, capsys):
    root, corpus, table = generated
    rc = main(["dedup", "--corpus", str(corpus), "--table", str(table)])
    assert rc == EXIT_OK
    first = capsys.readouterr().out
    rc = main(["dedup", "--corpus", str(corpus), "--table", str(table)])
    assert rc == EXIT_OK
    second = capsys.readouterr().out
    # byte-identical primary output, timing lines excluded
    strip = lambda text: [ln for ln in text.splitlines() if not ln.startswith("# summary")]
    assert strip(first) == strip(second)


def test_stats_csv_row(generated, capsys):
    root, corpus, table = generated
    rc = main(["stats", "--corpus", str(corpus), "--table", str(table),
               "--csv", "--name", "synth"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("FBD,Size,Nb class,Avg.")
    cells = out[1].split(",")
    assert cells[0] == "synth"
    assert cells[1] == "132"
    assert cells[9] == "12"


def test_dedup_with_oracle_agreement(generated, capsys):
    root, corpus, table = generated
    rc = main(["dedup", "--corpus", str(corpus), "--table", str(table),
               "--out", str(root / "r.tsv"), "--oracle"])
    assert rc == EXIT_OK
    assert "oracle agreement on shared-key pairs: yes" in capsys.readouterr().err


def test_oracle_groups(generated, capsys):
    root, corpus, _ = generated
    rc = main(["oracle", "--corpus", str(corpus)])
    assert rc == EXIT_OK
    captured = capsys.readouterr()
    groups = captured.out.splitlines()
    assert sum(1 for g in groups if "," in g) == 12
    assert "12 duplicates" in captured.err


def test_oracle_cap_exit_code(generated, capsys):
    root, corpus, _ = generated
    rc = main(["oracle", "--corpus", str(corpus), "--oracle-cap", "10"])
    assert rc == EXIT_CAP
    assert "cap" in capsys.readouterr().err


def test_index_empty_corpus_data_error(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    rc = main(["index", "--corpus", str(empty), "--out", str(tmp_path / "t.tsv")])
    assert rc == EXIT_DATA
    assert "empty corpus" in capsys.readouterr().err


def test_missing_file_data_error(tmp_path, capsys):
    rc = main(["identify", "--query", str(tmp_path / "nope.sig"),
               "--table", str(tmp_path / "nope.tsv"), "--corpus", str(tmp_path)])
    assert rc == EXIT_DATA


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["identify", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2


def test_estimate_published_forecast(capsys):
    rc = main(["estimate", "--n", "10000000", "--avg", "2", "--ms-per-cmp", "1"])
    assert rc == EXIT_OK
    out = dict(line.split("\t")[:2] for line in capsys.readouterr().out.splitlines())
    assert out["classes"] == "5000000"
    assert out["comparisons"] == "5000000"
    assert out["wall_ms"] == "5000000"
    assert out["wall_human"] == "1h23m20s"


def test_regress_published_fit(capsys):
    rc = main(["regress", "--predict", "10000000"])
    assert rc == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    values = {ln.split("\t")[0]: ln.split("\t")[1:] for ln in lines}
    assert float(values["slope"][0]) == pytest.approx(6.62936e-08, rel=1e-4)
    assert float(values["intercept"][0]) == pytest.approx(1.00177911, rel=1e-6)
    assert float(values["predict"][1]) == pytest.approx(1.664715563, rel=1e-6)


def test_regress_custom_points(tmp_path, capsys):
    points = tmp_path / "points.csv"
    points.write_text("0,1.0\n10,2.0\n")
    rc = main(["regress", "--points", str(points)])
    assert rc == EXIT_OK
    values = dict(ln.split("\t")[:2] for ln in capsys.readouterr().out.splitlines())
    assert float(values["slope"]) == pytest.approx(0.1)
    assert float(values["intercept"]) == pytest.approx(1.0)


def test_config_file_and_flag_precedence(generated, tmp_path, capsys):
    root, corpus, table = generated
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"score_threshold": 101}))  # invalid on purpose
    rc = main(["stats", "--corpus", str(corpus), "--table", str(table),
               "--config", str(config)])
    assert rc == EXIT_DATA  # config value applied -> rejected by validation
    capsys.readouterr()
    # flag overrides the config value back into range
    rc = main(["stats", "--corpus", str(corpus), "--table", str(table),
               "--config", str(config), "--threshold", "90"])
    assert rc == EXIT_OK


def test_config_unknown_key_rejected(generated, tmp_path, capsys):
    root, corpus, table = generated
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"no_such_key": 1}))
    rc = main(["stats", "--corpus", str(corpus), "--table", str(table),
               "--config", str(config)])
    assert rc == EXIT_DATA
    assert "unknown config keys" in capsys.readouterr().err


def test_help_lists_parameters(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["index", "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag, default in [("--grid-n", "5"), ("--min-edge", "15"), ("--max-edge", "100"),
                          ("--neighbors", "4"), ("--threshold", "90"), ("--min-matched", "0")]:
        assert flag in text
        assert default in text


def test_identify_query_from_reference_file(generated, capsys):
    # a query whose key exists nowhere in the corpus: no candidates
    root, corpus, table = generated
    rc = main(["identify", "--query", str(REFERENCE_SIGNATURE_PATH),
               "--table", str(table), "--corpus", str(corpus)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == ["penetration\t0.00000000"]


def test_bench_csv(capsys):
    rc = main(["bench", "--sizes", "120,240", "--reps", "1", "--seed", "33"])
    assert rc == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("size,nb_class,avg")
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "120"
    assert lines[2].split(",")[0] == "240"
