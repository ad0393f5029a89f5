"""Command-line pipeline: ingest -> prep -> rank -> build -> evaluate -> report.

Configuration comes from a JSON file (``--config``, or the
PITCHSIDE_CONFIG environment variable for a default path); command-line
flags override file values. Validation failures exit with code 2 and a
single machine-parseable line on stderr of the form ``reason: detail``.
All outputs are written atomically, so a failed run never leaves a
partial report behind.
"""

import argparse
import json
import os
import sys
from datetime import timedelta

from . import evaluation, features, historical, ingest, pipeline
from .matches import ScheduleError, load_schedule
from .util import atomic_write_json, atomic_write_text, fingerprint, read_json

PROG = "pitchside"
CONFIG_ENV_VAR = "PITCHSIDE_CONFIG"

MODES = ("loocv", "compare", "k-sweep", "seed-sweep")

DOCUMENTS_FILE = "documents.json"
PREPARED_FILE = "prepared.json"
INSTANCES_FILE = "instances.json"
RANKING_FILE = "ranking.csv"
REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"
CURVE_FILE = "curve.csv"
STATS_FILE = "ingest_stats.json"


class CLIError(Exception):
    """Validation failure: ``reason`` is a stable machine-readable token."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


def _existing(path, reason: str) -> str:
    if path is None:
        raise CLIError(reason.replace("not-found", "not-configured"))
    if not os.path.exists(path):
        raise CLIError(reason, str(path))
    return str(path)


def _load_config(args) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return {}
    if not os.path.exists(path):
        raise CLIError("config-not-found", str(path))
    try:
        config = read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError("config-invalid", f"{path}: {exc}")
    if not isinstance(config, dict):
        raise CLIError("config-invalid", f"{path}: top level must be an object")
    return config


def _merge(config: dict, args, flat_keys, eval_keys) -> dict:
    """Overlay command-line flags onto the config dict."""
    merged = dict(config)
    merged.setdefault("eval", {})
    merged["eval"] = dict(merged["eval"])
    for key in flat_keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged[key] = value
    for key in eval_keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged["eval"][key] = value
    return merged


def _parse_orders(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(o) for o in text)
    parts = [p for p in str(text).replace("+", ",").split(",") if p]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise CLIError("config-invalid", f"bad orders value {text!r}")


def _parse_k_range(value):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        lo, hi = int(value[0]), int(value[1])
    else:
        text = str(value).replace("..", "-")
        try:
            lo_text, hi_text = text.split("-", 1)
            lo, hi = int(lo_text), int(hi_text)
        except ValueError:
            raise CLIError("config-invalid", f"bad k-range value {value!r}")
    if lo > hi:
        raise CLIError("config-invalid", f"empty k-range {value!r}")
    return list(range(lo, hi + 1))


def _parse_seeds(value):
    if isinstance(value, int):
        return list(range(value))
    if isinstance(value, (list, tuple)):
        return [int(s) for s in value]
    text = str(value)
    if text.isdigit():
        return list(range(int(text)))
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise CLIError("config-invalid", f"bad seeds value {value!r}")


def _window_policy(config: dict) -> ingest.WindowPolicy:
    window = config.get("window", {})
    try:
        return ingest.WindowPolicy(
            lookback=timedelta(days=float(window.get("lookback_days", 7))),
            include_post_kickoff=bool(window.get("include_post_kickoff", False)),
            post_gap=timedelta(hours=float(window.get("post_gap_hours", 3))),
        )
    except (TypeError, ValueError) as exc:
        raise CLIError("config-invalid", f"window section: {exc}")


def _eval_config(config: dict) -> evaluation.EvalConfig:
    section = config.get("eval", {})
    known = {"mode", "dataset", "model", "scorer", "orders", "k", "k_range",
             "min_df", "weighting", "selection", "rf_trees", "seed", "seeds"}
    unknown = set(section) - known
    if unknown:
        raise CLIError("config-invalid", f"unknown eval keys {sorted(unknown)}")
    try:
        return evaluation.EvalConfig(
            dataset=section.get("dataset", "twitter"),
            model=section.get("model", "rf"),
            scorer=section.get("scorer", "chi2"),
            orders=_parse_orders(section.get("orders", (1, 2))),
            k=int(section.get("k", 10)),
            min_df=int(section.get("min_df", 2)),
            weighting=section.get("weighting", "relfreq"),
            selection=section.get("selection", "per-fold"),
            rf_trees=int(section.get("rf_trees", 100)),
            seed=int(section.get("seed", 0)),
            workers=int(config.get("workers", 1)),
        ).validate()
    except evaluation.EvalError as exc:
        raise CLIError("eval-invalid", str(exc))


def _tweet_paths(config: dict) -> list:
    tweets = config.get("tweets")
    if not tweets:
        raise CLIError("tweets-not-configured")
    if isinstance(tweets, str):
        tweets = [tweets]
    paths = []
    for entry in tweets:
        entry = str(entry)
        if os.path.isdir(entry):
            names = sorted(os.listdir(entry))
            paths.extend(os.path.join(entry, n) for n in names
                         if n.endswith(".ndjson"))
        else:
            paths.append(entry)
    if not paths:
        raise CLIError("tweets-not-found", str(config.get("tweets")))
    for path in paths:
        if not os.path.exists(path):
            raise CLIError("tweets-not-found", path)
    return paths


def _out_dir(config: dict) -> str:
    out_dir = config.get("out_dir")
    if not out_dir:
        raise CLIError("out-dir-not-configured")
    os.makedirs(out_dir, exist_ok=True)
    return str(out_dir)


def _load_inputs(config: dict):
    lexicon_path = _existing(config.get("lexicon"), "lexicon-not-found")
    schedule_path = _existing(config.get("schedule"), "schedule-not-found")
    try:
        lexicon = ingest.load_lexicon(lexicon_path)
    except ingest.LexiconError as exc:
        raise CLIError("lexicon-invalid", str(exc))
    try:
        schedule = load_schedule(schedule_path)
    except ScheduleError as exc:
        raise CLIError("schedule-invalid", str(exc))
    return lexicon, schedule, lexicon_path, schedule_path


def _print_per_team(stats: ingest.IngestStats):
    print(f"total={stats.total} assigned={stats.assigned} "
          f"no_team={stats.no_team} multi_team={stats.multi_team} "
          f"ambiguous={stats.ambiguous} out_of_window={stats.out_of_window} "
          f"malformed={stats.malformed}")
    width = max((len(t) for t in stats.per_team), default=4)
    for team in sorted(stats.per_team):
        print(f"{team:<{width}}  {stats.per_team[team]:>9}")


def _run_ingest(config: dict, force: bool = False):
    lexicon, schedule, lexicon_path, schedule_path = _load_inputs(config)
    tweet_paths = _tweet_paths(config)
    out_dir = _out_dir(config)
    policy = _window_policy(config)
    workers = int(config.get("workers", 1))
    stamp = fingerprint(tweet_paths + [lexicon_path, schedule_path],
                        extra=config.get("window", {}))
    artifact_path = os.path.join(out_dir, DOCUMENTS_FILE)
    if not force and os.path.exists(artifact_path):
        try:
            payload = read_json(artifact_path)
        except (OSError, json.JSONDecodeError):
            payload = None
        if payload and payload.get("fingerprint") == stamp:
            documents, stats = pipeline.documents_from_payload(payload)
            return documents, stats, stamp, True
    try:
        documents, stats = ingest.ingest_corpus(tweet_paths, lexicon, schedule,
                                                policy=policy, workers=workers)
    except ingest.IngestError as exc:
        raise CLIError("ingest-error", str(exc))
    payload = pipeline.documents_to_payload(documents, stats)
    payload["fingerprint"] = stamp
    atomic_write_json(artifact_path, payload)
    atomic_write_json(os.path.join(out_dir, STATS_FILE), stats.as_dict())
    return documents, stats, stamp, False


def cmd_ingest(args) -> int:
    config = _merge(_load_config(args), args,
                    ("tweets", "lexicon", "schedule", "out_dir", "workers"), ())
    documents, stats, _, cached = _run_ingest(config, force=args.force)
    if cached:
        print("artifact up to date")
    _print_per_team(stats)
    return 0


def _run_prep(config: dict, force: bool = False):
    out_dir = _out_dir(config)
    prepared_path = os.path.join(out_dir, PREPARED_FILE)
    documents, stats, stamp, _ = _run_ingest(config, force=force)
    prep_settings = {"pos_filtering": bool(config.get("pos_filtering", True))}
    stamp = fingerprint((), extra={"base": stamp, "prep": prep_settings})
    if not force and os.path.exists(prepared_path):
        try:
            payload = read_json(prepared_path)
        except (OSError, json.JSONDecodeError):
            payload = None
        if payload and payload.get("fingerprint") == stamp:
            return pipeline.documents_from_payload(payload) + (stamp, True)
    lexicon, _, _, _ = _load_inputs(config)
    prepared = pipeline.prepare_documents(
        documents, lexicon=lexicon,
        pos_filtering=prep_settings["pos_filtering"])
    payload = pipeline.documents_to_payload(prepared, stats)
    payload["fingerprint"] = stamp
    atomic_write_json(prepared_path, payload)
    return prepared, stats, stamp, False


def cmd_prep(args) -> int:
    config = _merge(_load_config(args), args,
                    ("tweets", "lexicon", "schedule", "out_dir", "workers"), ())
    documents, _, _, cached = _run_prep(config, force=args.force)
    if cached:
        print("artifact up to date")
    print(f"prepared {len(documents)} documents")
    return 0


def _load_meta_and_prior(config: dict):
    meta = None
    prior = ()
    if config.get("team_meta"):
        meta_path = _existing(config["team_meta"], "team-meta-not-found")
        try:
            meta = historical.load_team_meta(meta_path)
        except historical.HistoryError as exc:
            raise CLIError("team-meta-invalid", str(exc))
    if config.get("prior_results"):
        prior_path = _existing(config["prior_results"], "prior-results-not-found")
        try:
            prior = load_schedule(prior_path)
        except ScheduleError as exc:
            raise CLIError("prior-results-invalid", str(exc))
    return meta, prior


def _build_instances(config: dict, force: bool = False) -> pipeline.InstanceSet:
    _, schedule, _, _ = _load_inputs(config)
    documents, _, _, _ = _run_prep(config, force=force)
    meta, prior = _load_meta_and_prior(config)
    eval_config = _eval_config(config)
    try:
        return pipeline.build_instances(documents, schedule, meta=meta,
                                        seed_matches=prior,
                                        orders=eval_config.orders)
    except (pipeline.PipelineError, historical.HistoryError) as exc:
        raise CLIError("pipeline-error", str(exc))


def cmd_rank(args) -> int:
    config = _merge(_load_config(args), args,
                    ("tweets", "lexicon", "schedule", "out_dir", "workers"),
                    ("scorer", "orders", "min_df"))
    out_dir = _out_dir(config)
    instance_set = _build_instances(config, force=args.force)
    eval_config = _eval_config(config)
    labels = [inst.label for inst in instance_set.instances]
    try:
        rankings = {
            "home": features.rank_from_counts(
                [i.home_counts for i in instance_set.instances], labels,
                scorer=eval_config.scorer, min_df=eval_config.min_df),
            "away": features.rank_from_counts(
                [i.away_counts for i in instance_set.instances], labels,
                scorer=eval_config.scorer, min_df=eval_config.min_df),
        }
    except ValueError as exc:
        raise CLIError("ranking-error", str(exc))
    path = os.path.join(out_dir, RANKING_FILE)
    features.write_ranking_csv(path, rankings, eval_config.scorer)
    print(f"wrote {path} ({len(rankings['home'])} home,"
          f" {len(rankings['away'])} away candidates)")
    return 0


def _instances_to_payload(instance_set: pipeline.InstanceSet) -> dict:
    rows = []
    for inst in instance_set.instances:
        rows.append({
            "match_id": inst.match_id,
            "label": inst.label,
            "home_counts": {" ".join(g): c for g, c in sorted(inst.home_counts.items())},
            "away_counts": {" ".join(g): c for g, c in sorted(inst.away_counts.items())},
            "historical": None if inst.historical is None else inst.historical.tolist(),
        })
    return {
        "format_version": pipeline.ARTIFACT_VERSION,
        "orders": list(instance_set.orders),
        "excluded_match_ids": list(instance_set.excluded_match_ids),
        "instances": rows,
    }


def _instances_from_payload(payload: dict) -> pipeline.InstanceSet:
    import numpy as np
    from collections import Counter

    if payload.get("format_version") != pipeline.ARTIFACT_VERSION:
        raise CLIError("artifact-invalid",
                       f"instances version {payload.get('format_version')!r}")
    instances = []
    for row in payload["instances"]:
        instances.append(pipeline.MatchInstance(
            match_id=row["match_id"],
            label=int(row["label"]),
            home_counts=Counter({tuple(k.split(" ")): v
                                 for k, v in row["home_counts"].items()}),
            away_counts=Counter({tuple(k.split(" ")): v
                                 for k, v in row["away_counts"].items()}),
            historical=None if row["historical"] is None
                       else np.asarray(row["historical"], dtype=np.float64),
        ))
    return pipeline.InstanceSet(instances=instances,
                                excluded_match_ids=list(payload["excluded_match_ids"]),
                                orders=tuple(payload["orders"]))


def cmd_build(args) -> int:
    config = _merge(_load_config(args), args,
                    ("tweets", "lexicon", "schedule", "team_meta",
                     "prior_results", "out_dir", "workers"), ("orders",))
    out_dir = _out_dir(config)
    instance_set = _build_instances(config, force=args.force)
    path = os.path.join(out_dir, INSTANCES_FILE)
    atomic_write_json(path, _instances_to_payload(instance_set))
    print(f"wrote {path} ({len(instance_set)} instances,"
          f" {len(instance_set.excluded_match_ids)} excluded)")
    return 0


def _resolve_instances(config: dict, force: bool) -> pipeline.InstanceSet:
    out_dir = _out_dir(config)
    path = os.path.join(out_dir, INSTANCES_FILE)
    if not force and os.path.exists(path):
        try:
            return _instances_from_payload(read_json(path))
        except (OSError, json.JSONDecodeError):
            pass
    return _build_instances(config, force=force)


def cmd_evaluate(args) -> int:
    config = _merge(_load_config(args), args,
                    ("tweets", "lexicon", "schedule", "team_meta",
                     "prior_results", "out_dir", "workers"),
                    ("mode", "dataset", "model", "scorer", "orders", "k",
                     "k_range", "min_df", "weighting", "selection", "rf_trees",
                     "seed", "seeds"))
    out_dir = _out_dir(config)
    eval_config = _eval_config(config)
    mode = config.get("eval", {}).get("mode", "compare")
    if mode not in MODES:
        raise CLIError("config-invalid", f"unknown mode {mode!r}")
    instance_set = _resolve_instances(config, force=args.force)
    try:
        if mode == "loocv":
            result = evaluation.loocv(instance_set, eval_config)
            report = {
                "mode": mode,
                "config": eval_config.report_dict(),
                "n_instances": len(instance_set),
                "excluded_match_ids": list(instance_set.excluded_match_ids),
                "excluded_count": len(instance_set.excluded_match_ids),
                "loocv": result.as_dict(),
            }
            text = (f"loocv dataset={eval_config.dataset} model={eval_config.model} "
                    f"accuracy={result.accuracy:.4f} kappa={result.kappa:.4f}\n")
        elif mode == "compare":
            report = evaluation.compare_datasets(instance_set, eval_config)
            report["mode"] = mode
            text = evaluation.render_report_text(report)
        elif mode == "seed-sweep":
            seeds = _parse_seeds(config.get("eval", {}).get("seeds", 10))
            report = evaluation.seed_sweep(instance_set, eval_config, seeds)
            report["mode"] = mode
            text = evaluation.render_seed_sweep_text(report)
        else:
            k_values = _parse_k_range(config.get("eval", {}).get("k_range", [1, 35]))
            rows = evaluation.k_sweep(instance_set, eval_config, k_values)
            report = {"mode": mode, "config": eval_config.report_dict(),
                      "rows": rows}
            evaluation.write_k_sweep_csv(os.path.join(out_dir, CURVE_FILE), rows)
            text = f"k-sweep over {len(rows)} points -> {CURVE_FILE}\n"
    except evaluation.EvalError as exc:
        raise CLIError("eval-invalid", str(exc))
    except pipeline.PipelineError as exc:
        raise CLIError("pipeline-error", str(exc))
    atomic_write_json(os.path.join(out_dir, REPORT_JSON), report)
    atomic_write_text(os.path.join(out_dir, REPORT_TEXT), text)
    sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    path = args.report
    if path is None:
        config = _merge(_load_config(args), args, ("out_dir",), ())
        path = os.path.join(_out_dir(config), REPORT_JSON)
    path = _existing(path, "report-not-found")
    try:
        report = read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError("report-invalid", f"{path}: {exc}")
    mode = report.get("mode")
    if mode == "compare":
        sys.stdout.write(evaluation.render_report_text(report))
    elif mode == "seed-sweep":
        sys.stdout.write(evaluation.render_seed_sweep_text(report))
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON config file (or set $"
                        + CONFIG_ENV_VAR + ")")
    parser.add_argument("--out-dir", help="output directory for artifacts")
    parser.add_argument("--workers", type=int, help="parallel worker count")
    parser.add_argument("--force", action="store_true",
                        help="ignore cached artifacts")


def _add_input_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--tweets", action="append",
                        help="tweet NDJSON file or directory (repeatable)")
    parser.add_argument("--lexicon", help="team hashtag lexicon file")
    parser.add_argument("--schedule", help="match schedule CSV")


def _add_eval_flags(parser: argparse.ArgumentParser, with_mode: bool = True):
    if with_mode:
        parser.add_argument("--mode", choices=MODES)
        parser.add_argument("--dataset", choices=evaluation.DATASETS)
        parser.add_argument("--model", choices=evaluation.MODELS)
        parser.add_argument("--selection", choices=evaluation.SELECTION_MODES)
        parser.add_argument("--weighting", choices=features.WEIGHTINGS)
        parser.add_argument("--k", type=int)
        parser.add_argument("--k-range", help="e.g. 1..35")
        parser.add_argument("--rf-trees", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--seeds", help="seed count or comma list")
    parser.add_argument("--scorer", choices=features.SCORERS)
    parser.add_argument("--orders", help="n-gram orders, e.g. 1,2")
    parser.add_argument("--min-df", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Football outcome prediction from tweet and club data.")
    commands = parser.add_subparsers(dest="command", required=True)

    p_ingest = commands.add_parser("ingest", help="parse tweets into match documents")
    _add_common(p_ingest)
    _add_input_flags(p_ingest)
    p_ingest.set_defaults(func=cmd_ingest)

    p_prep = commands.add_parser("prep", help="tokenize, tag-filter and stem documents")
    _add_common(p_prep)
    _add_input_flags(p_prep)
    p_prep.set_defaults(func=cmd_prep)

    p_rank = commands.add_parser("rank", help="export scored n-gram rankings")
    _add_common(p_rank)
    _add_input_flags(p_rank)
    _add_eval_flags(p_rank, with_mode=False)
    p_rank.set_defaults(func=cmd_rank)

    p_build = commands.add_parser("build", help="assemble per-match instances")
    _add_common(p_build)
    _add_input_flags(p_build)
    p_build.add_argument("--team-meta", help="club metadata CSV")
    p_build.add_argument("--prior-results", help="earlier results CSV seeding history")
    p_build.add_argument("--orders", help="n-gram orders, e.g. 1,2")
    p_build.set_defaults(func=cmd_build)

    p_eval = commands.add_parser("evaluate", help="run the configured evaluation")
    _add_common(p_eval)
    _add_input_flags(p_eval)
    p_eval.add_argument("--team-meta", help="club metadata CSV")
    p_eval.add_argument("--prior-results", help="earlier results CSV seeding history")
    _add_eval_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_report = commands.add_parser("report", help="render a report file")
    p_report.add_argument("--config")
    p_report.add_argument("--out-dir")
    p_report.add_argument("--report", help="report.json path")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"unexpected-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
