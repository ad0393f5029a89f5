import json
import os

import pytest

from pitchside import cli, synthetic


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli-corpus")
    return synthetic.generate_planted_corpus(root, seed=3, n_matches=12)


def write_config(tmp_path, corpus, eval_overrides=None, **top_overrides):
    out_dir = tmp_path / "out"
    eval_section = {"mode": "loocv", "dataset": "twitter", "model": "nb",
                    "orders": [2], "k": 3, "seed": 0}
    eval_section.update(eval_overrides or {})
    config = {
        "tweets": [str(p) for p in corpus["tweet_paths"]],
        "lexicon": str(corpus["lexicon"]),
        "schedule": str(corpus["schedule"]),
        "team_meta": str(corpus["team_meta"]),
        "prior_results": str(corpus["prior_results"]),
        "out_dir": str(out_dir),
        "eval": eval_section,
    }
    config.update(top_overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path), out_dir


# ---------------------------------------------------------------------------
# validation failures: exit code 2 plus one reason token on stderr


def test_missing_lexicon_reports_reason(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, lexicon=str(tmp_path / "absent.txt"))
    assert cli.main(["ingest", "--config", cfg]) == 2
    err = capsys.readouterr().err
    assert err.startswith("lexicon-not-found: ")
    assert "absent.txt" in err


def test_missing_config_file(tmp_path, capsys):
    assert cli.main(["ingest", "--config", str(tmp_path / "no.json")]) == 2
    assert capsys.readouterr().err.startswith("config-not-found: ")


def test_unparseable_config_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert cli.main(["ingest", "--config", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("config-invalid: ")


def test_unconfigured_tweets(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, tweets=[])
    assert cli.main(["ingest", "--config", cfg]) == 2
    assert capsys.readouterr().err.startswith("tweets-not-configured")


def test_bad_eval_setting(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, eval_overrides={"k": 99})
    assert cli.main(["evaluate", "--config", cfg]) == 2
    assert capsys.readouterr().err.startswith("eval-invalid: ")


def test_unknown_eval_key(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, eval_overrides={"folds": 10})
    assert cli.main(["evaluate", "--config", cfg]) == 2
    assert "config-invalid" in capsys.readouterr().err


def test_unknown_mode(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, eval_overrides={"mode": "bootstrap"})
    assert cli.main(["evaluate", "--config", cfg]) == 2
    assert "config-invalid" in capsys.readouterr().err


def test_missing_team_meta(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus, team_meta=str(tmp_path / "no.csv"))
    assert cli.main(["build", "--config", cfg]) == 2
    assert capsys.readouterr().err.startswith("team-meta-not-found: ")


def test_subcommand_required():
    with pytest.raises(SystemExit):
        cli.main([])


# ---------------------------------------------------------------------------
# the full chain on a small corpus


def test_ingest_prints_summary_and_writes_artifacts(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["ingest", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "total=" in out and "assigned=" in out
    assert "ashford" in out
    assert (out_dir / cli.DOCUMENTS_FILE).exists()
    assert (out_dir / cli.STATS_FILE).exists()


def test_ingest_cache_hit_and_force(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus)
    assert cli.main(["ingest", "--config", cfg]) == 0
    capsys.readouterr()
    assert cli.main(["ingest", "--config", cfg]) == 0
    assert "artifact up to date" in capsys.readouterr().out
    assert cli.main(["ingest", "--config", cfg, "--force"]) == 0
    assert "artifact up to date" not in capsys.readouterr().out


def test_cache_invalidated_when_inputs_change(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["ingest", "--config", cfg]) == 0
    lexicon_copy = tmp_path / "lexicon2.txt"
    lexicon_copy.write_text(open(corpus["lexicon"]).read() + "; trailing note\n")
    assert cli.main(["ingest", "--config", cfg, "--lexicon",
                     str(lexicon_copy)]) == 0
    out = capsys.readouterr().out
    assert "artifact up to date" not in out.splitlines()[-1]


def test_prep_builds_on_ingest(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["prep", "--config", cfg]) == 0
    assert "prepared 24 documents" in capsys.readouterr().out
    assert (out_dir / cli.PREPARED_FILE).exists()


def test_rank_writes_csv(tmp_path, corpus):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["rank", "--config", cfg]) == 0
    lines = (out_dir / cli.RANKING_FILE).read_text().splitlines()
    assert lines[0] == "rank,side,scorer,ngram,statistic,pvalue_or_mi"
    assert len(lines) > 1


def test_build_writes_instances(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["build", "--config", cfg]) == 0
    assert "12 instances, 0 excluded" in capsys.readouterr().out
    payload = json.loads((out_dir / cli.INSTANCES_FILE).read_text())
    assert len(payload["instances"]) == 12
    assert payload["orders"] == [2]


def test_evaluate_loocv_writes_reports(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["evaluate", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "loocv dataset=twitter model=nb" in out
    report = json.loads((out_dir / cli.REPORT_JSON).read_text())
    assert report["mode"] == "loocv"
    assert report["n_instances"] == 12
    assert 0.0 <= report["loocv"]["accuracy"] <= 1.0
    assert (out_dir / cli.REPORT_TEXT).read_text() == out


def test_evaluate_is_reproducible_across_runs_and_workers(tmp_path, corpus):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["evaluate", "--config", cfg]) == 0
    first = (out_dir / cli.REPORT_JSON).read_bytes()
    assert cli.main(["evaluate", "--config", cfg]) == 0
    assert (out_dir / cli.REPORT_JSON).read_bytes() == first
    assert cli.main(["evaluate", "--config", cfg, "--workers", "2"]) == 0
    assert (out_dir / cli.REPORT_JSON).read_bytes() == first


def test_flag_overrides_config(tmp_path, corpus):
    cfg, out_dir = write_config(tmp_path, corpus)
    assert cli.main(["evaluate", "--config", cfg, "--seed", "5",
                     "--model", "nb"]) == 0
    report = json.loads((out_dir / cli.REPORT_JSON).read_text())
    assert report["config"]["seed"] == 5


def test_evaluate_compare_mode(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus, eval_overrides={"mode": "compare"})
    assert cli.main(["evaluate", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "twitter" in out and "historical" in out and "combined" in out
    report = json.loads((out_dir / cli.REPORT_JSON).read_text())
    assert set(report["datasets"]) == {"twitter", "historical", "combined"}


def test_evaluate_k_sweep_writes_curve(tmp_path, corpus):
    cfg, out_dir = write_config(tmp_path, corpus,
                                eval_overrides={"mode": "k-sweep",
                                                "k_range": "1..3"})
    assert cli.main(["evaluate", "--config", cfg]) == 0
    lines = (out_dir / cli.CURVE_FILE).read_text().splitlines()
    assert lines[0] == "k,scorer,order,metric,value"
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "3"]


def test_evaluate_seed_sweep(tmp_path, corpus):
    cfg, out_dir = write_config(
        tmp_path, corpus,
        eval_overrides={"mode": "seed-sweep", "model": "rf", "rf_trees": 5,
                        "seeds": "0,1"})
    assert cli.main(["evaluate", "--config", cfg]) == 0
    report = json.loads((out_dir / cli.REPORT_JSON).read_text())
    assert report["n_seeds"] == 2
    assert "loocv_kappa" in report["aggregates"]


def test_bad_k_range_rejected(tmp_path, corpus, capsys):
    cfg, _ = write_config(tmp_path, corpus,
                          eval_overrides={"mode": "k-sweep", "k_range": "5..2"})
    assert cli.main(["evaluate", "--config", cfg]) == 2
    assert "config-invalid" in capsys.readouterr().err


def test_report_command_renders_saved_report(tmp_path, corpus, capsys):
    cfg, out_dir = write_config(tmp_path, corpus, eval_overrides={"mode": "compare"})
    assert cli.main(["evaluate", "--config", cfg]) == 0
    rendered = capsys.readouterr().out
    assert cli.main(["report", "--report",
                     str(out_dir / cli.REPORT_JSON)]) == 0
    assert capsys.readouterr().out == rendered


def test_report_command_missing_file(tmp_path, capsys):
    assert cli.main(["report", "--report", str(tmp_path / "no.json")]) == 2
    assert capsys.readouterr().err.startswith("report-not-found: ")


def test_config_via_environment_variable(tmp_path, corpus, monkeypatch, capsys):
    cfg, _ = write_config(tmp_path, corpus)
    monkeypatch.setenv(cli.CONFIG_ENV_VAR, cfg)
    assert cli.main(["ingest"]) == 0
    assert "total=" in capsys.readouterr().out


def test_tweets_directory_is_expanded(tmp_path, corpus, capsys):
    shard_dir = os.path.dirname(corpus["tweet_paths"][0])
    cfg, out_dir = write_config(tmp_path, corpus, tweets=[shard_dir])
    assert cli.main(["ingest", "--config", cfg]) == 0
    stats = json.loads((out_dir / cli.STATS_FILE).read_text())
    assert stats["assigned"] > 0
