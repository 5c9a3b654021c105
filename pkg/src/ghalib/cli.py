"""Command-line entry point wiring the pipeline end to end:
split -> analyze -> train/tune -> calibrate -> evaluate -> predict, plus
language-profile building and identification.

Exit codes: 0 success, 1 usage error, 2 data error. Every JSON artifact
embeds {tool_version, seed, config_digest}; every CSV starts with a "#"
comment carrying the same provenance. Flags override values from a JSON
config file given with --config, which override built-in defaults. The
environment variable GHALIB_SEED supplies the seed when neither does.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from ghalib import __version__
from ghalib._util import provenance
from ghalib.calibrate import sweep_threshold
from ghalib.corpus import (
    LANGUAGES,
    LabelSchema,
    SplitPlan,
    apply_split,
    load_corpus,
    stratified_split,
)
from ghalib.eda import STOPWORD_POLICIES, build_report, write_eda_reports
from ghalib.errors import DataError, GhalibError
from ghalib.features import hashed_tfidf, read_embedding_file
from ghalib.heads import TrainConfig, train_linear_svm, train_logistic, train_adaboost
from ghalib.heads.boosting import GbdtConfig, train_gbdt
from ghalib.heads.model import (
    HeadModel,
    load_model,
    predict_labels,
    predict_proba,
    save_model,
)
from ghalib.langid import (
    build_profile,
    identify,
    load_profiles,
    route,
    save_profiles,
)
from ghalib.metrics import confusion, macro_f1, report, write_report
from ghalib.tune import SearchSpace, random_search, write_study_log
from ghalib import figures


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- flag types ---------------------------------------------------------------


def _ratios_type(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios must be three comma-separated numbers")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratios {text!r}") from None
    return vals


def _unit_interval(lo: float, hi: float, allow_zero: bool = False):
    def parse(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        if allow_zero and v == 0.0:
            return v
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"value {v} outside [{lo}, {hi}]")
        return v

    return parse


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("value must be at least 1")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return v


# --- config / provenance plumbing ----------------------------------------------


def _load_config_file(path) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise DataError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"config file {p} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DataError(f"config file {p} must hold a JSON object")
    return doc


def _resolve(args, cfg: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        return cfg[key]
    return default


def _resolve_seed(args, cfg: dict) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get("GHALIB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"GHALIB_SEED must be an integer, got {env!r}") from None
    return 0


def _prov(seed: int, settings: dict) -> tuple[dict, str]:
    doc = provenance(seed, settings)
    comment = f"ghalib {__version__} seed={seed} config={doc['config_digest']}"
    return doc, comment


# --- shared loading helpers -----------------------------------------------------


def _load_labeled(path, fmt: str, task: str):
    schema = LabelSchema.for_task(task)
    records, rep = load_corpus(path, format=fmt, schema=schema)
    return records, rep, schema


def _load_plan(path) -> SplitPlan:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"splits file not found: {p}")
    return SplitPlan.load(p)


def _build_features(records, backend: str, ghem_path, dim: int, ngram_max: int):
    if backend == "ghem":
        if ghem_path is None:
            raise DataError("the ghem backend needs --ghem <file>")
        p = Path(ghem_path)
        if not p.is_file():
            raise DataError(f"embedding file not found: {p}")
        return read_embedding_file(p, [r.id for r in records])
    return hashed_tfidf(records, dim=dim, ngram_range=(1, ngram_max))


def _split_records(records, plan: SplitPlan):
    assigned = apply_split(records, plan)
    missing = [r.id for r in assigned if r.split is None]
    if missing:
        raise DataError(
            f"{len(missing)} records absent from the split plan (first: {missing[0]!r})"
        )
    return assigned


def _labels_of(records) -> list[int]:
    out = []
    for r in records:
        if r.label is None:
            raise DataError(f"record {r.id!r} has no label")
        out.append(r.label)
    return out


def _feature_settings(backend: str, dim: int, ngram_max: int) -> dict:
    if backend == "ghem":
        return {"backend": "ghem"}
    return {"backend": "tfidf", "dim": dim, "ngram_max": ngram_max}


def _read_model_doc(path) -> tuple[HeadModel, dict]:
    model = load_model(path)
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return model, doc


def _model_feature_config(doc: dict) -> dict:
    feats = doc.get("features")
    if not isinstance(feats, dict) or "backend" not in feats:
        raise DataError("model file lacks its feature configuration")
    return feats


def _features_for_model(records, feats: dict, ghem_path):
    return _build_features(
        records,
        feats["backend"],
        ghem_path,
        int(feats.get("dim", 4096)),
        int(feats.get("ngram_max", 2)),
    )


def _write_csv(path, header: list[str], rows, comment: str) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)


# --- subcommands ---------------------------------------------------------------


def cmd_split(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    task = _resolve(args, cfg, "task", "binary")
    fmt = _resolve(args, cfg, "format", "jsonl")
    ratios = _resolve(args, cfg, "ratios", (0.70, 0.15, 0.15))
    if not isinstance(ratios, tuple):
        ratios = _ratios_type(",".join(str(r) for r in ratios))

    settings = {"command": "split", "task": task, "ratios": list(ratios), "format": fmt}
    prov, _ = _prov(seed, settings)

    records, _, _ = _load_labeled(args.corpus, fmt, task)
    try:
        plan = stratified_split(records, ratios=ratios, seed=seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    plan.save(args.out, extra={"provenance": prov})
    counts = {s: len(plan.ids_for(s)) for s in ("train", "val", "test")}
    print(f"split: {counts['train']} train / {counts['val']} val / {counts['test']} test")
    if plan.degenerate_classes:
        print(f"split: degenerate classes routed to train: {plan.degenerate_classes}")
    return 0


def cmd_analyze(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    task = _resolve(args, cfg, "task", "binary")
    fmt = _resolve(args, cfg, "format", "jsonl")
    top_k = _resolve(args, cfg, "top_k", 10)
    stopwords = _resolve(args, cfg, "stopwords", "none")
    language = _resolve(args, cfg, "language", "all")

    settings = {
        "command": "analyze",
        "task": task,
        "top_k": top_k,
        "stopwords": stopwords,
        "language": language,
    }
    prov, comment = _prov(seed, settings)

    records, _, schema = _load_labeled(args.corpus, fmt, task)
    if language != "all":
        records = [r for r in records if r.language == language]
        if not records:
            raise DataError(f"no records with language {language!r}")

    rep = build_report(records, schema, k=top_k, language=language, stopword_policy=stopwords)
    out_dir = Path(args.out_dir)
    written = write_eda_reports(rep, out_dir, extra={"provenance": prov}, comment=comment)
    if args.figures:
        written.append(figures.render_distribution(rep, out_dir / "dist.png"))
        written.append(figures.render_lengths(rep, out_dir / "lengths.png"))
        written.append(figures.render_word_counts(rep, out_dir / "wordcount.png"))
    for p in written:
        print(f"analyze: wrote {p}")
    return 0


def _train_config_from(args, cfg: dict, schema: LabelSchema, seed: int) -> TrainConfig:
    hope_weight = _resolve(args, cfg, "hope_weight", 1.5)
    weights = tuple(1.0 if name == "NotHope" else float(hope_weight) for name in schema.labels)
    try:
        return TrainConfig(
            learning_rate=_resolve(args, cfg, "lr", 2e-5),
            epochs=_resolve(args, cfg, "epochs", 8),
            batch_size=_resolve(args, cfg, "batch_size", 16),
            warmup_ratio=_resolve(args, cfg, "warmup", 0.1),
            weight_decay=_resolve(args, cfg, "decay", 0.01),
            input_dropout=_resolve(args, cfg, "dropout", 0.0),
            class_weights=weights,
            seed=seed,
        )
    except ValueError as exc:
        raise DataError(f"bad training configuration: {exc}") from None


def _train_head(head: str, X, y, schema, train_cfg: TrainConfig, args, cfg, seed: int):
    if head == "logistic":
        return train_logistic(X, y, train_cfg, schema)
    if head == "linear_svm":
        return train_linear_svm(X, y, train_cfg, schema)
    if head == "adaboost":
        rounds = _resolve(args, cfg, "rounds", 50)
        return train_adaboost(X, y, rounds, schema, seed=seed)
    try:
        gb = GbdtConfig(
            rounds=_resolve(args, cfg, "rounds", 100),
            max_depth=_resolve(args, cfg, "max_depth", 3),
            min_leaf=_resolve(args, cfg, "min_leaf", 1),
            learning_rate=_resolve(args, cfg, "gbdt_lr", 0.1),
            seed=seed,
        )
    except ValueError as exc:
        raise DataError(f"bad gbdt configuration: {exc}") from None
    return train_gbdt(X, y, gb, schema)


def cmd_train(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    task = _resolve(args, cfg, "task", "binary")
    fmt = _resolve(args, cfg, "format", "jsonl")
    head = _resolve(args, cfg, "head", "logistic")
    backend = _resolve(args, cfg, "features", "tfidf")
    dim = _resolve(args, cfg, "dim", 4096)
    ngram_max = _resolve(args, cfg, "ngram_max", 2)

    records, _, schema = _load_labeled(args.corpus, fmt, task)
    plan = _load_plan(args.splits)
    assigned = _split_records(records, plan)
    train_records = [r for r in assigned if r.split == "train"]
    if not train_records:
        raise DataError("split plan assigns no records to train")

    feats_cfg = _feature_settings(backend, dim, ngram_max)
    settings = {"command": "train", "task": task, "head": head, "features": feats_cfg}
    prov, _ = _prov(seed, settings)

    X_all = _build_features(records, backend, args.ghem, dim, ngram_max)
    X_train = X_all.select([r.id for r in train_records])
    y_train = _labels_of(train_records)

    train_cfg = _train_config_from(args, cfg, schema, seed)
    model = _train_head(head, X_train, y_train, schema, train_cfg, args, cfg, seed)
    save_model(model, args.out, extra={"provenance": prov, "features": feats_cfg})
    print(f"train: {head} on {len(train_records)} records -> {args.out}")
    return 0


def _tune_groups(assigned, scope: str):
    if scope == "global":
        return [("all", assigned)]
    order = {lang: i for i, lang in enumerate(LANGUAGES)}
    langs = sorted({r.language for r in assigned}, key=lambda l: (order.get(l, len(order)), l))
    return [(lang, [r for r in assigned if r.language == lang]) for lang in langs]


def cmd_tune(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    task = _resolve(args, cfg, "task", "binary")
    fmt = _resolve(args, cfg, "format", "jsonl")
    head = _resolve(args, cfg, "head", "logistic")
    backend = _resolve(args, cfg, "features", "tfidf")
    dim = _resolve(args, cfg, "dim", 4096)
    ngram_max = _resolve(args, cfg, "ngram_max", 2)
    trials = _resolve(args, cfg, "trials", 30)
    scope = _resolve(args, cfg, "scope", "per_language")
    epochs = _resolve(args, cfg, "epochs", 8)
    hope_weight = _resolve(args, cfg, "hope_weight", 1.5)

    records, _, schema = _load_labeled(args.corpus, fmt, task)
    plan = _load_plan(args.splits)
    assigned = _split_records(records, plan)

    feats_cfg = _feature_settings(backend, dim, ngram_max)
    settings = {
        "command": "tune",
        "task": task,
        "head": head,
        "trials": trials,
        "scope": scope,
        "features": feats_cfg,
    }
    prov, _ = _prov(seed, settings)

    X_all = _build_features(records, backend, args.ghem, dim, ngram_max)
    weights = tuple(1.0 if name == "NotHope" else float(hope_weight) for name in schema.labels)
    space = SearchSpace(head)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ran_any = False
    for group_name, group in _tune_groups(assigned, scope):
        train_records = [r for r in group if r.split == "train"]
        val_records = [r for r in group if r.split == "val"]
        if not train_records or not val_records:
            print(f"tune: skipping {group_name}: missing train or val rows", file=sys.stderr)
            continue
        ran_any = True
        X_train = X_all.select([r.id for r in train_records])
        X_val = X_all.select([r.id for r in val_records])
        y_train = _labels_of(train_records)
        y_val = _labels_of(val_records)

        def train_fn(sample: dict):
            if head in ("logistic", "linear_svm"):
                tc = TrainConfig(
                    learning_rate=sample["learning_rate"],
                    epochs=epochs,
                    batch_size=sample["batch_size"],
                    warmup_ratio=sample["warmup_ratio"],
                    weight_decay=sample["weight_decay"],
                    input_dropout=sample["input_dropout"],
                    class_weights=weights,
                    seed=seed,
                )
                trainer = train_logistic if head == "logistic" else train_linear_svm
                return trainer(X_train, y_train, tc, schema)
            if head == "adaboost":
                return train_adaboost(X_train, y_train, sample["rounds"], schema, seed=seed)
            gb = GbdtConfig(rounds=sample["rounds"], max_depth=sample["max_depth"], seed=seed)
            return train_gbdt(X_train, y_train, gb, schema)

        def eval_fn(model) -> float:
            preds = predict_labels(model, X_val)
            return macro_f1(y_val, list(preds), schema.num_classes)

        best, results = random_search(space, budget=trials, seed=seed, train_fn=train_fn, eval_fn=eval_fn)
        suffix = "" if scope == "global" else f"_{group_name}"
        log_path = out_dir / f"study{suffix}.jsonl"
        write_study_log(results, log_path, extra={"provenance": prov, "group": group_name})
        if best.model is None:
            raise DataError(f"every tuning trial failed for group {group_name!r}")
        model_path = out_dir / f"best_model{suffix}.json"
        save_model(
            best.model,
            model_path,
            extra={
                "provenance": prov,
                "features": feats_cfg,
                "study": {
                    "trial_index": best.trial_index,
                    "objective": best.objective,
                    "config": best.config,
                    "group": group_name,
                },
            },
        )
        print(
            f"tune: {group_name}: best trial {best.trial_index} "
            f"macro_f1={best.objective:.4f} -> {model_path}"
        )
    if not ran_any:
        raise DataError("no tunable group had both train and val records")
    return 0


def cmd_calibrate(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    fmt = _resolve(args, cfg, "format", "jsonl")
    lo = _resolve(args, cfg, "lo", 0.3)
    hi = _resolve(args, cfg, "hi", 0.8)
    step = _resolve(args, cfg, "step", 0.01)

    model, doc = _read_model_doc(args.model)
    if model.schema.task != "binary":
        raise DataError("threshold calibration applies to binary models only")
    feats = _model_feature_config(doc)

    settings = {"command": "calibrate", "lo": lo, "hi": hi, "step": step, "features": feats}
    prov, _ = _prov(seed, settings)

    records, _, _ = _load_labeled(args.corpus, fmt, "binary")
    plan = _load_plan(args.splits)
    assigned = _split_records(records, plan)
    val_records = [r for r in assigned if r.split == "val"]
    if not val_records:
        raise DataError("split plan assigns no records to val")

    X_all = _features_for_model(records, feats, args.ghem)
    X_val = X_all.select([r.id for r in val_records])
    y_val = _labels_of(val_records)
    proba_hope = predict_proba(model, X_val)[:, 1]

    tc = sweep_threshold(list(proba_hope), y_val, lo=lo, hi=hi, step=step)
    model.threshold = tc
    save_model(model, args.out, extra={"provenance": prov, "features": feats})
    print(
        f"calibrate: threshold={tc.threshold:.2f} "
        f"val_macro_f1={tc.objective_value:.4f} -> {args.out}"
    )
    return 0


def cmd_evaluate(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    fmt = _resolve(args, cfg, "format", "jsonl")
    split = _resolve(args, cfg, "split", "test")

    model, doc = _read_model_doc(args.model)
    feats = _model_feature_config(doc)

    settings = {"command": "evaluate", "split": split, "features": feats}
    prov, comment = _prov(seed, settings)

    records, _, schema = _load_labeled(args.corpus, fmt, model.schema.task)
    plan = _load_plan(args.splits)
    assigned = _split_records(records, plan)
    chosen = [r for r in assigned if r.split == split]
    if not chosen:
        raise DataError(f"split plan assigns no records to {split!r}")

    X_all = _features_for_model(records, feats, args.ghem)
    X = X_all.select([r.id for r in chosen])
    y_true = _labels_of(chosen)
    y_pred = list(predict_labels(model, X))

    cm = confusion(y_true, y_pred, schema.num_classes)
    rep = report(cm, labels=schema.labels)
    out_dir = Path(args.out_dir)
    extra = {"provenance": prov, "split": split}
    if model.threshold is not None:
        extra["threshold"] = model.threshold.to_dict()
    write_report(out_dir, rep, cm, schema.labels, extra=extra, comment=comment)
    if args.figures:
        figures.render_confusion(cm, schema.labels, out_dir / "confusion.png")
    print(
        f"evaluate: {split} accuracy={rep.accuracy:.4f} "
        f"macro_f1={rep.macro_f1:.4f} -> {out_dir}"
    )
    return 0


def cmd_predict(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    fmt = _resolve(args, cfg, "format", "jsonl")

    model, doc = _read_model_doc(args.model)
    feats = _model_feature_config(doc)

    settings = {"command": "predict", "features": feats}
    prov, comment = _prov(seed, settings)

    # prediction inputs may carry labels; they are never read
    records, _ = load_corpus(args.corpus, format=fmt, ignore_labels=True)
    X = _features_for_model(records, feats, args.ghem)
    proba = predict_proba(model, X)
    labels = predict_labels(model, X)

    names = model.schema.labels
    header = ["id", "label"] + [f"p_{n}" for n in names]
    rows = []
    for i, rec in enumerate(records):
        rows.append([rec.id, names[labels[i]]] + [f"{p:.6f}" for p in proba[i]])
    _write_csv(args.out, header, rows, comment)
    print(f"predict: {len(records)} records -> {args.out}")
    return 0


def cmd_langid_build(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    fmt = _resolve(args, cfg, "format", "jsonl")

    settings = {"command": "langid-build", "format": fmt}
    prov, _ = _prov(seed, settings)

    records, _ = load_corpus(args.corpus, format=fmt, ignore_labels=True)
    by_lang: dict[str, list[str]] = {}
    for r in records:
        if r.language != "unknown":
            by_lang.setdefault(r.language, []).append(r.text)
    if not by_lang:
        raise DataError("corpus has no records with a known language tag")

    order = {lang: i for i, lang in enumerate(LANGUAGES)}
    profiles = [
        build_profile(texts, lang)
        for lang, texts in sorted(by_lang.items(), key=lambda kv: (order.get(kv[0], 99), kv[0]))
    ]
    save_profiles(profiles, args.out, extra={"provenance": prov})
    print(f"langid: built {len(profiles)} profiles -> {args.out}")
    return 0


def cmd_langid_identify(args) -> int:
    cfg = _load_config_file(args.config)
    seed = _resolve_seed(args, cfg)
    fmt = _resolve(args, cfg, "format", "jsonl")
    floor = _resolve(args, cfg, "floor", None)

    settings = {"command": "langid-identify", "floor": floor}
    prov, comment = _prov(seed, settings)

    p = Path(args.profiles)
    if not p.is_file():
        raise DataError(f"profiles file not found: {p}")
    profiles = load_profiles(p)

    records, _ = load_corpus(args.corpus, format=fmt, ignore_labels=True)
    rows = []
    for r in records:
        if floor is None:
            lang, score = identify(r.text, profiles)
        else:
            lang, score = identify(r.text, profiles, score_floor=floor)
        slot, _ = route(lang)
        rows.append([r.id, lang, f"{score:.6f}", slot])
    _write_csv(args.out, ["id", "language", "score", "slot"], rows, comment)
    print(f"langid: identified {len(rows)} records -> {args.out}")
    return 0


# --- parser construction ---------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--seed", type=int, help="run seed (default: GHALIB_SEED or 0)")
    p.add_argument("--jobs", type=_positive_int, default=1, help="parallelism cap (advisory)")


def _add_corpus(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="corpus", required=True, help="corpus file (jsonl or csv)")
    p.add_argument("--format", choices=("jsonl", "csv"), help="corpus format (default jsonl)")


def _add_feature_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", choices=("tfidf", "ghem"), help="feature backend (default tfidf)")
    p.add_argument("--ghem", help="embedding file for the ghem backend")
    p.add_argument("--dim", type=_positive_int, help="tfidf hash dimension (default 4096)")
    p.add_argument("--ngram-max", dest="ngram_max", type=_positive_int, help="word n-gram order (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ghalib", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ghalib {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("split", help="stratified train/val/test split")
    _add_corpus(p)
    p.add_argument("--task", choices=("binary", "multi"))
    p.add_argument("--ratios", type=_ratios_type, help="three ratios, e.g. 0.7,0.15,0.15")
    p.add_argument("--out", required=True, help="split plan JSON")
    _add_common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("analyze", help="corpus statistics and plot-ready tables")
    _add_corpus(p)
    p.add_argument("--task", choices=("binary", "multi"))
    p.add_argument("--language", help="restrict to one language (default all)")
    p.add_argument("--top-k", dest="top_k", type=_positive_int, help="tokens per class (default 10)")
    p.add_argument("--stopwords", choices=STOPWORD_POLICIES)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--figures", action="store_true", help="also render PNG charts")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("train", help="train one classifier head")
    _add_corpus(p)
    p.add_argument("--splits", required=True, help="split plan from `ghalib split`")
    p.add_argument("--task", choices=("binary", "multi"))
    p.add_argument("--head", choices=("logistic", "linear_svm", "adaboost", "gbdt"))
    _add_feature_flags(p)
    p.add_argument("--lr", type=_positive_float, help="learning rate (default 2e-5)")
    p.add_argument("--epochs", type=_positive_int, help="training epochs (default 8)")
    p.add_argument("--batch-size", dest="batch_size", type=int, choices=(4, 8, 16))
    p.add_argument("--warmup", type=_unit_interval(0.0, 0.3), help="warmup ratio in [0, 0.3]")
    p.add_argument("--decay", type=_unit_interval(0.0, 0.1), help="weight decay in [0, 0.1]")
    p.add_argument(
        "--dropout",
        type=_unit_interval(0.1, 0.3, allow_zero=True),
        help="input dropout in [0.1, 0.3], or 0 to disable",
    )
    p.add_argument("--hope-weight", dest="hope_weight", type=_positive_float,
                   help="loss weight for hope classes (default 1.5)")
    p.add_argument("--rounds", type=_positive_int, help="boosting rounds (adaboost/gbdt)")
    p.add_argument("--max-depth", dest="max_depth", type=_positive_int, help="gbdt tree depth")
    p.add_argument("--min-leaf", dest="min_leaf", type=_positive_int, help="gbdt min rows per leaf")
    p.add_argument("--gbdt-lr", dest="gbdt_lr", type=_positive_float, help="gbdt shrinkage (default 0.1)")
    p.add_argument("--out", required=True, help="model JSON")
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tune", help="random search maximizing validation macro-F1")
    _add_corpus(p)
    p.add_argument("--splits", required=True)
    p.add_argument("--task", choices=("binary", "multi"))
    p.add_argument("--head", choices=("logistic", "linear_svm", "adaboost", "gbdt"))
    _add_feature_flags(p)
    p.add_argument("--trials", type=_positive_int, help="search budget (default 30)")
    p.add_argument("--scope", choices=("per_language", "global"),
                   help="one study per language, or one over the whole corpus")
    p.add_argument("--epochs", type=_positive_int, help="epochs per trial (default 8)")
    p.add_argument("--hope-weight", dest="hope_weight", type=_positive_float)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("calibrate", help="tune the binary decision threshold on val")
    _add_corpus(p)
    p.add_argument("--splits", required=True)
    p.add_argument("--model", required=True, help="trained binary model JSON")
    p.add_argument("--ghem", help="embedding file when the model uses the ghem backend")
    p.add_argument("--lo", type=_unit_interval(0.0, 1.0), help="grid start (default 0.3)")
    p.add_argument("--hi", type=_unit_interval(0.0, 1.0), help="grid end (default 0.8)")
    p.add_argument("--step", type=_positive_float, help="grid step (default 0.01)")
    p.add_argument("--out", required=True, help="calibrated model JSON")
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="score a model on one split")
    _add_corpus(p)
    p.add_argument("--splits", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--ghem", help="embedding file when the model uses the ghem backend")
    p.add_argument("--split", choices=("train", "val", "test"), help="default test")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--figures", action="store_true", help="also render confusion.png")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="label new records; input labels are never read")
    _add_corpus(p)
    p.add_argument("--model", required=True)
    p.add_argument("--ghem", help="embedding file when the model uses the ghem backend")
    p.add_argument("--out", required=True, help="predictions CSV")
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("langid", help="character n-gram language identification")
    lang_sub = p.add_subparsers(dest="langid_command", required=True, parser_class=_Parser)

    b = lang_sub.add_parser("build", help="build profiles from a language-tagged corpus")
    _add_corpus(b)
    b.add_argument("--out", required=True, help="profiles JSON")
    _add_common(b)
    b.set_defaults(func=cmd_langid_build)

    i = lang_sub.add_parser("identify", help="identify record languages")
    _add_corpus(i)
    i.add_argument("--profiles", required=True)
    i.add_argument("--floor", type=float, help="unknown-language score floor (default -7.0)")
    i.add_argument("--out", required=True, help="identifications CSV")
    _add_common(i)
    i.set_defaults(func=cmd_langid_identify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except GhalibError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
