"""Operator entry point: one subcommand per pipeline stage.

Every command reads the config plus the store, writes store records, and
exits nonzero with a one-line diagnostic on error: 2 for configuration
problems, 3 for data problems, 4 for numeric failures. Re-running a
command with identical inputs and seed rewrites byte-identical records.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import plots
from .config import Config, load_config
from .errors import ConfigError, DataError, GazekitError, NumericError, StoreError
from .features import (
    LABELS,
    WHOLE_SESSION,
    dataset_from_record,
    dataset_to_record,
    build_profiles,
    make_dataset,
    profile_record,
    write_dataset,
)
from .heatmap import accumulate, grid_to_record, smooth, write_grid_text, write_pgm
from .ingest import FIXATION
from .ml import (
    ForestHyperparams,
    MlpHyperparams,
    evaluate,
    forest_to_dict,
    format_eval_table,
    mlp_to_dict,
    train_forest,
    train_mlp,
)
from .pipeline import load_session
from .service import FACTORS, PARAMETERS
from .stats import anova_by_factor
from .store import RecordKey, Store
from .synth import SynthConfig, generate_session
from .timeline import UNTAGGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazekit", description="gaze analytics pipeline"
    )
    parser.add_argument("--config", help="JSON config file (defaults documented in README)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, gaze: bool = True) -> None:
        if gaze:
            p.add_argument("--gaze", required=True, help="gaze export file or directory")
            p.add_argument("--meta", required=True, help="session metadata file")
        p.add_argument("--store", required=True, help="store root directory")
        p.add_argument("--session", required=True, help="session id")
        p.add_argument("--format", default="text", choices=("text", "json"))

    p = sub.add_parser("synth", help="generate a synthetic session")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--learners", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--enf-rate", type=float, default=None, dest="enf_rate")
    p.add_argument(
        "--script",
        default=None,
        help="activity script, e.g. Video:120000,Reading:120000,Assignment:60000",
    )
    p.add_argument("--format", default="text", choices=("text", "json"))

    p = sub.add_parser("ingest", help="parse and quality-filter a session")
    add_io(p)
    p.add_argument("--threshold", type=float, default=None, help="EyesNotFound exclusion fraction")

    p = sub.add_parser("tag", help="tag samples with activities, store segment reports")
    add_io(p)

    p = sub.add_parser("features", help="compute and store per-learner activity profiles")
    add_io(p)

    p = sub.add_parser("heatmap", help="build attention heatmaps")
    add_io(p)
    p.add_argument("--participant", default=None, help="only this learner")
    p.add_argument("--sigma", type=float, default=None, help="smoothing sigma in cells")
    p.add_argument("--out", default=None, help="also render figures + grids here")

    p = sub.add_parser("anova", help="one-way ANOVA over stored profiles")
    add_io(p, gaze=False)
    p.add_argument("--param", default=None, choices=PARAMETERS)
    p.add_argument("--factor", default=None, choices=FACTORS)
    p.add_argument("--activity", default=WHOLE_SESSION)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", default=None, help="also write a TSV table + box-plot figures here")

    p = sub.add_parser("dataset", help="build the labeled window dataset")
    add_io(p)
    p.add_argument("--window-ms", type=int, default=None, dest="window_ms")
    p.add_argument("--balance", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--class-cap", type=int, default=None, dest="class_cap")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="also write the delimited export here")

    p = sub.add_parser("train", help="train classifiers on the stored dataset")
    add_io(p, gaze=False)
    p.add_argument("--model", default="both", choices=("rf", "mlp", "both"))
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("evaluate", help="run an evaluation protocol and print the results table")
    add_io(p, gaze=False)
    p.add_argument("--model", default="both", choices=("rf", "mlp", "both"))
    p.add_argument("--protocol", default="split", choices=("split", "loocv"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="also write the table here")

    p = sub.add_parser("serve", help="serve the analytics API")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--session", default=None, help="session for the default model")
    p.add_argument("--model", default=None, help="default model name (rf or mlp)")
    return parser


def _seed(args: argparse.Namespace, cfg: Config) -> int:
    return args.seed if getattr(args, "seed", None) is not None else cfg.seed


def _emit(args: argparse.Namespace, text: str, payload: dict) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_synth(args: argparse.Namespace, cfg: Config) -> int:
    synth_cfg = SynthConfig()
    if args.learners is not None:
        synth_cfg.n_learners = args.learners
    synth_cfg.seed = args.seed if args.seed is not None else cfg.seed
    if args.enf_rate is not None:
        synth_cfg.eyes_not_found_rate = args.enf_rate
    if args.script is not None:
        try:
            parts = [item.split(":") for item in args.script.split(",") if item]
            synth_cfg.script = tuple((name, int(ms)) for name, ms in parts)
        except ValueError as exc:
            raise ConfigError(f"bad --script value {args.script!r}: {exc}") from exc
    result = generate_session(synth_cfg, args.out)
    _emit(
        args,
        f"synth: wrote {len(result.gaze_paths)} gaze exports and "
        f"{result.meta_path.name} under {args.out}",
        {
            "command": "synth",
            "learners": len(result.gaze_paths),
            "meta_path": str(result.meta_path),
            "gaze_paths": {pid: str(p) for pid, p in sorted(result.gaze_paths.items())},
            "seed": synth_cfg.seed,
        },
    )
    return 0


def cmd_ingest(args: argparse.Namespace, cfg: Config) -> int:
    if args.threshold is not None:
        cfg.ingest.enf_exclusion_threshold = args.threshold
    session = load_session(args.gaze, args.meta, cfg)
    store = Store(args.store)
    for q in session.quality:
        store.put(
            "report",
            RecordKey(args.session, q.participant_id, "quality"),
            {
                "participant_id": q.participant_id,
                "total_samples": q.total_samples,
                "eyes_not_found_fraction": q.eyes_not_found_fraction,
                "excluded": q.excluded,
                "reason": q.reason,
            },
        )
    included = len(session.learners)
    excluded = sum(1 for q in session.quality if q.excluded)
    if args.format == "text":
        for note in session.notes:
            print(f"note: {note}")
    _emit(
        args,
        f"ingest: {included} learner(s) included, {excluded} excluded",
        {
            "command": "ingest",
            "included": included,
            "excluded": excluded,
            "notes": session.notes,
        },
    )
    return 0


def cmd_tag(args: argparse.Namespace, cfg: Config) -> int:
    session = load_session(args.gaze, args.meta, cfg)
    store = Store(args.store)
    for ld in session.learners:
        untagged = sum(1 for t in ld.tagged if t.activity_id == UNTAGGED)
        store.put(
            "report",
            RecordKey(args.session, ld.meta.participant_id, "tagging"),
            {
                "participant_id": ld.meta.participant_id,
                "n_samples": len(ld.tagged),
                "n_untagged": untagged,
                "segments": [
                    {
                        "activity_id": s.activity_id,
                        "t_start": s.t_start,
                        "t_end": s.t_end,
                        "n_samples": s.n_samples,
                    }
                    for s in ld.segments
                ],
            },
        )
    _emit(
        args,
        f"tag: stored tagging reports for {len(session.learners)} learner(s)",
        {"command": "tag", "learners": len(session.learners)},
    )
    return 0


def cmd_features(args: argparse.Namespace, cfg: Config) -> int:
    session = load_session(args.gaze, args.meta, cfg)
    store = Store(args.store)
    n = 0
    for ld in session.learners:
        for profile in build_profiles(ld.meta.participant_id, ld.events, ld.intervals):
            store.put(
                "profile",
                RecordKey(args.session, profile.participant_id, f"profile-{profile.activity_id}"),
                profile_record(profile, ld.meta),
            )
            n += 1
    _emit(
        args,
        f"features: stored {n} profiles for {len(session.learners)} learner(s)",
        {"command": "features", "profiles": n, "learners": len(session.learners)},
    )
    return 0


def cmd_heatmap(args: argparse.Namespace, cfg: Config) -> int:
    session = load_session(args.gaze, args.meta, cfg)
    store = Store(args.store)
    sigma = args.sigma if args.sigma is not None else cfg.heatmap.sigma_cells
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    n = 0
    for ld in session.learners:
        pid = ld.meta.participant_id
        if args.participant and pid != args.participant:
            continue
        activities = sorted({iv.activity_id for iv in ld.intervals})
        for activity in ["all"] + activities:
            fixations = [
                e
                for e in ld.events
                if e.movement_type == FIXATION
                and (activity == "all" or e.activity_id == activity)
            ]
            # Both weightings are stored so viewers can toggle; the record
            # name carries the mode, duration being the unmarked default.
            for mode in ("duration", "count"):
                grid = accumulate(
                    fixations,
                    width_cells=cfg.heatmap.grid_w,
                    height_cells=cfg.heatmap.grid_h,
                    screen_w=cfg.heatmap.screen_w,
                    screen_h=cfg.heatmap.screen_h,
                    participant_id=pid,
                    activity_id="" if activity == "all" else activity,
                    weight_mode=mode,
                )
                grid = smooth(grid, sigma)
                name = f"heatmap-{activity}" if mode == "duration" else f"heatmap-count-{activity}"
                store.put("heatmap", RecordKey(args.session, pid, name), grid_to_record(grid))
                n += 1
                if out_dir and mode == cfg.heatmap.weight_mode:
                    stem = out_dir / f"{pid}-{activity}"
                    write_grid_text(grid, stem.with_suffix(".grid.tsv"))
                    write_pgm(grid, stem.with_suffix(".pgm"))
                    plots.save_heatmap_png(grid, stem.with_suffix(".png"))
    _emit(
        args,
        f"heatmap: stored {n} grids (sigma={sigma})",
        {"command": "heatmap", "grids": n, "sigma": sigma},
    )
    return 0


def _profiles_by(store: Store, session_id: str, activity: str) -> list[dict]:
    keys = store.list("profile", session_id)
    if not keys:
        raise DataError(f"no profiles stored for session {session_id!r}; run features first")
    rows = [store.get("profile", k) for k in keys]
    rows = [r for r in rows if r["activity_id"] == activity]
    if not rows:
        raise DataError(f"no profiles for activity {activity!r}")
    return rows


def cmd_anova(args: argparse.Namespace, cfg: Config) -> int:
    store = Store(args.store)
    alpha = args.alpha if args.alpha is not None else cfg.stats.alpha
    rows = _profiles_by(store, args.session, args.activity)
    params = [args.param] if args.param else list(PARAMETERS)
    factors = [args.factor] if args.factor else list(FACTORS)
    results = []
    for parameter in params:
        for factor in factors:
            groups: dict[str, list[float]] = {}
            for r in rows:
                level = r.get(factor)
                if level:
                    groups.setdefault(level, []).append(float(r[parameter]))
            result = anova_by_factor(groups, parameter=parameter, factor=factor, alpha=alpha)
            results.append(result)
            store.put(
                "anova",
                RecordKey(args.session, "", f"anova-{args.activity}-{parameter}-{factor}"),
                result.to_record(),
            )
    if args.format == "json":
        print(json.dumps([r.to_record() for r in results], indent=2, sort_keys=True))
    else:
        for r in results:
            verdict = "significant" if r.significant else "not significant"
            extra = f" [{r.flag}]" if r.flag else ""
            print(
                f"{r.parameter} by {r.factor}: F={r.F:.6g} df=({r.df1},{r.df2}) "
                f"p={r.p_value:.6g} -> {verdict} at alpha={r.alpha}{extra}"
            )
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        table = out_dir / f"anova-{args.activity}.tsv"
        with open(table, "w", encoding="utf-8") as fh:
            fh.write("parameter\tfactor\tk\tN\tF\tdf1\tdf2\tp_value\tsignificant\tflag\n")
            for r in results:
                fh.write(
                    f"{r.parameter}\t{r.factor}\t{r.k}\t{r.N}\t{r.F!r}\t{r.df1}\t{r.df2}"
                    f"\t{r.p_value!r}\t{int(r.significant)}\t{r.flag}\n"
                )
        for parameter in params:
            for factor in factors:
                series: dict[str, list[float]] = {}
                for r in rows:
                    level = r.get(factor)
                    if level:
                        series.setdefault(level, []).append(float(r[parameter]))
                plots.save_boxplot_png(
                    series,
                    parameter,
                    factor,
                    out_dir / f"boxplot-{args.activity}-{parameter}-{factor}.png",
                    activity=args.activity,
                )
    return 0


def cmd_dataset(args: argparse.Namespace, cfg: Config) -> int:
    session = load_session(args.gaze, args.meta, cfg)
    store = Store(args.store)
    window_ms = args.window_ms if args.window_ms is not None else cfg.features.window_ms
    balance = args.balance if args.balance is not None else cfg.dataset.balance
    class_cap = args.class_cap if args.class_cap is not None else cfg.dataset.class_cap
    dataset, report = make_dataset(
        ((ld.meta, ld.segments, ld.events) for ld in session.learners),
        window_ms=window_ms,
        balance=balance,
        seed=_seed(args, cfg),
        min_saccades=cfg.features.min_saccades,
        groups=cfg.features.prediction_groups,
        class_cap=class_cap,
    )
    store.put(
        "dataset",
        RecordKey(args.session, "", "windows"),
        dataset_to_record(dataset, report),
    )
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        write_dataset(dataset, out_path)
    counts = dataset.class_counts()
    _emit(
        args,
        f"dataset: {len(dataset.vectors)} windows "
        f"({', '.join(f'{k}={v}' for k, v in sorted(counts.items()))}); "
        f"{report.windows_discarded} discarded",
        {
            "command": "dataset",
            "windows": len(dataset.vectors),
            "class_counts": counts,
            "windows_discarded": report.windows_discarded,
            "learners_skipped": report.learners_skipped,
        },
    )
    return 0


def _load_dataset_arrays(store: Store, session_id: str):
    rec = store.get("dataset", RecordKey(session_id, "", "windows"))
    dataset = dataset_from_record(rec)
    return dataset.to_arrays()


def cmd_train(args: argparse.Namespace, cfg: Config) -> int:
    store = Store(args.store)
    X, y, _ = _load_dataset_arrays(store, args.session)
    seed = _seed(args, cfg)
    wanted = ("rf", "mlp") if args.model == "both" else (args.model,)
    for name in wanted:
        if name == "rf":
            hp = ForestHyperparams(
                n_trees=cfg.forest.n_trees,
                max_features=cfg.forest.max_features,
                min_leaf=cfg.forest.min_leaf,
                seed=seed,
            )
            model = train_forest(X, y, hp)
            payload = forest_to_dict(model)
            note = f"oob_accuracy={model.oob_accuracy:.3f}" if model.oob_accuracy else ""
        else:
            hp = MlpHyperparams(
                epochs=cfg.mlp.epochs,
                batch_size=cfg.mlp.batch_size,
                learning_rate=cfg.mlp.learning_rate,
                seed=seed,
            )
            model, std, losses = train_mlp(X, y, hp)
            payload = mlp_to_dict(model, std)
            payload["loss_curve"] = losses
            note = f"final_loss={losses[-1]:.6f}"
        store.put("model", RecordKey(args.session, "", name), payload)
        _emit(
            args,
            f"train: stored model {name!r} ({note})",
            {"command": "train", "model": name, "note": note, "seed": seed},
        )
    return 0


def cmd_evaluate(args: argparse.Namespace, cfg: Config) -> int:
    store = Store(args.store)
    X, y, learner_ids = _load_dataset_arrays(store, args.session)
    seed = _seed(args, cfg)
    protocol = "split75_25" if args.protocol == "split" else "loocv"
    wanted = ("rf", "mlp") if args.model == "both" else (args.model,)
    reports = []
    for name in wanted:
        report = evaluate(
            name,
            X,
            y,
            learner_ids,
            protocol=protocol,
            seed=seed,
            split_by=cfg.evaluation.split_by,
            loocv_unit=cfg.evaluation.loocv_unit,
            train_fraction=cfg.evaluation.train_fraction,
            forest_hp=ForestHyperparams(
                cfg.forest.n_trees, cfg.forest.max_features, cfg.forest.min_leaf, seed
            ),
            mlp_hp=MlpHyperparams(
                cfg.mlp.epochs, cfg.mlp.batch_size, cfg.mlp.learning_rate, seed
            ),
        )
        reports.append(report)
        store.put(
            "report",
            RecordKey(args.session, "", f"eval-{name}-{protocol}"),
            report.to_record(),
        )
    if args.format == "json":
        text = json.dumps([r.to_record() for r in reports], indent=2, sort_keys=True)
    else:
        text = format_eval_table(reports)
    print(text)
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text + "\n", encoding="utf-8")
    return 0


def cmd_serve(args: argparse.Namespace, cfg: Config) -> int:
    from .service import serve

    store = Store(args.store)
    default_model = None
    if args.session and args.model:
        default_model = (args.session, args.model)
    serve(store, host=args.host, port=args.port, default_model=default_model)
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "tag": cmd_tag,
    "features": cmd_features,
    "heatmap": cmd_heatmap,
    "anova": cmd_anova,
    "dataset": cmd_dataset,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "serve": cmd_serve,
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"gazekit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, StoreError) as exc:
        print(f"gazekit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"gazekit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GazekitError as exc:  # any stragglers
        print(f"gazekit: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
