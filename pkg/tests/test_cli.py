import json

import numpy as np
import pytest

from ghalib.cli import main

HOPE_TOKENS = ["dream", "bright", "rise", "bloom"]
DESPAIR_TOKENS = ["gloom", "fade", "sink", "rust"]
FILLER = ["the", "day", "goes", "on", "and", "we", "see", "what", "comes", "next"]


def make_corpus(path, n_not=28, n_hope=20):
    """Separable bilingual binary corpus, deterministic content."""
    rows = []
    serial = 0
    for label, markers, n in (("NotHope", DESPAIR_TOKENS, n_not), ("Hope", HOPE_TOKENS, n_hope)):
        for i in range(n):
            sig = [markers[i % 4], markers[(i + 1) % 4]]
            fill = [FILLER[(i + j) % len(FILLER)] for j in range(6)]
            text = " ".join(sig + fill)
            language = "en" if serial % 2 == 0 else "ur"
            rows.append({"id": f"c{serial:03d}", "text": text, "language": language, "label": label})
            serial += 1
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def corpus(tmp_path):
    return make_corpus(tmp_path / "corpus.jsonl")


@pytest.fixture()
def split_plan(tmp_path, corpus):
    out = tmp_path / "splits.json"
    assert main(["split", "--in", str(corpus), "--out", str(out), "--seed", "1"]) == 0
    return out


def run_train(corpus, split_plan, out, extra=None):
    argv = [
        "train", "--in", str(corpus), "--splits", str(split_plan), "--out", str(out),
        "--dim", "1024", "--lr", "0.5", "--epochs", "12", "--seed", "1",
    ]
    return main(argv + (extra or []))


# --- exit codes -------------------------------------------------------------


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert main(["split", "--nope"]) == 1


def test_bad_choice_is_usage_error(tmp_path, corpus):
    rc = main(["train", "--in", str(corpus), "--splits", "x", "--out", "y", "--head", "resnet"])
    assert rc == 1


def test_missing_corpus_is_data_error(tmp_path, capsys):
    rc = main(["split", "--in", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path / "o.json")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_bad_ratios_is_data_error(tmp_path, corpus):
    rc = main(["split", "--in", str(corpus), "--out", str(tmp_path / "o.json"),
               "--ratios", "0.5,0.3,0.3"])
    assert rc == 2


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "ghalib" in capsys.readouterr().out


# --- split ------------------------------------------------------------------


def test_split_writes_plan_with_provenance(tmp_path, corpus):
    out = tmp_path / "splits.json"
    assert main(["split", "--in", str(corpus), "--out", str(out), "--seed", "5"]) == 0
    doc = json.loads(out.read_text())
    prov = doc["provenance"]
    assert prov["seed"] == 5
    assert prov["tool_version"]
    assert len(prov["config_digest"]) == 16
    assert set(doc["assignment"].values()) == {"train", "val", "test"}


def test_split_rerun_is_byte_identical(tmp_path, corpus):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["split", "--in", str(corpus), "--out", str(a), "--seed", "3"])
    main(["split", "--in", str(corpus), "--out", str(b), "--seed", "3"])
    assert a.read_bytes() == b.read_bytes()


def test_split_seed_changes_assignment(tmp_path, corpus):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["split", "--in", str(corpus), "--out", str(a), "--seed", "3"])
    main(["split", "--in", str(corpus), "--out", str(b), "--seed", "4"])
    assert json.loads(a.read_text())["assignment"] != json.loads(b.read_text())["assignment"]


# --- seed resolution --------------------------------------------------------


def test_env_seed_fallback(tmp_path, corpus, monkeypatch):
    via_env, via_flag = tmp_path / "env.json", tmp_path / "flag.json"
    monkeypatch.setenv("GHALIB_SEED", "42")
    main(["split", "--in", str(corpus), "--out", str(via_env)])
    monkeypatch.delenv("GHALIB_SEED")
    main(["split", "--in", str(corpus), "--out", str(via_flag), "--seed", "42"])
    assert via_env.read_bytes() == via_flag.read_bytes()


def test_flag_overrides_env_seed(tmp_path, corpus, monkeypatch):
    out = tmp_path / "o.json"
    monkeypatch.setenv("GHALIB_SEED", "42")
    main(["split", "--in", str(corpus), "--out", str(out), "--seed", "7"])
    assert json.loads(out.read_text())["provenance"]["seed"] == 7


def test_bad_env_seed_is_data_error(tmp_path, corpus, monkeypatch):
    monkeypatch.setenv("GHALIB_SEED", "not-a-number")
    assert main(["split", "--in", str(corpus), "--out", str(tmp_path / "o.json")]) == 2


def test_config_file_supplies_values_flags_override(tmp_path, corpus, split_plan):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 9, "lr": 0.25, "epochs": 3, "dim": 1024}))
    out_cfg = tmp_path / "from_cfg.json"
    assert main(["train", "--in", str(corpus), "--splits", str(split_plan),
                 "--out", str(out_cfg), "--config", str(cfg)]) == 0
    doc = json.loads(out_cfg.read_text())
    assert doc["train_config"]["learning_rate"] == 0.25
    assert doc["train_config"]["epochs"] == 3
    assert doc["provenance"]["seed"] == 9

    out_flag = tmp_path / "from_flag.json"
    assert main(["train", "--in", str(corpus), "--splits", str(split_plan),
                 "--out", str(out_flag), "--config", str(cfg), "--lr", "0.125"]) == 0
    assert json.loads(out_flag.read_text())["train_config"]["learning_rate"] == 0.125


def test_missing_config_file_is_data_error(tmp_path, corpus):
    rc = main(["split", "--in", str(corpus), "--out", str(tmp_path / "o.json"),
               "--config", str(tmp_path / "nope.json")])
    assert rc == 2


# --- analyze ----------------------------------------------------------------


def test_analyze_writes_tables_and_figures(tmp_path, corpus):
    out = tmp_path / "eda"
    assert main(["analyze", "--in", str(corpus), "--out-dir", str(out), "--figures",
                 "--top-k", "5", "--seed", "0"]) == 0
    for name in ("eda.json", "dist.csv", "lengths.csv",
                 "top_tokens_NotHope.csv", "top_tokens_Hope.csv",
                 "dist.png", "lengths.png", "wordcount.png"):
        assert (out / name).is_file(), name
    first = (out / "dist.csv").read_text().splitlines()[0]
    assert first.startswith("# ghalib ") and "seed=0" in first and "config=" in first


def test_analyze_language_filter(tmp_path, corpus):
    out = tmp_path / "eda_en"
    assert main(["analyze", "--in", str(corpus), "--out-dir", str(out),
                 "--language", "en"]) == 0
    doc = json.loads((out / "eda.json").read_text())
    assert doc["language"] == "en"
    rc = main(["analyze", "--in", str(corpus), "--out-dir", str(tmp_path / "eda_de"),
               "--language", "de"])
    assert rc == 2  # corpus has no German rows


# --- train ------------------------------------------------------------------


def test_train_each_head(tmp_path, corpus, split_plan):
    for head, extra in (
        ("logistic", []),
        ("linear_svm", []),
        ("adaboost", ["--rounds", "10"]),
        ("gbdt", ["--rounds", "5", "--max-depth", "2"]),
    ):
        out = tmp_path / f"{head}.json"
        assert run_train(corpus, split_plan, out, ["--head", head] + extra) == 0, head
        doc = json.loads(out.read_text())
        assert doc["kind"] == head
        assert doc["features"] == {"backend": "tfidf", "dim": 1024, "ngram_max": 2}
        assert doc["provenance"]["seed"] == 1


def test_train_rerun_byte_identical(tmp_path, corpus, split_plan):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_train(corpus, split_plan, a) == 0
    assert run_train(corpus, split_plan, b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_train_ghem_backend_roundtrip(tmp_path, corpus, split_plan):
    from ghalib.corpus import load_corpus
    from ghalib.features import write_embedding_file

    records, _ = load_corpus(corpus, ignore_labels=True)
    rng = np.random.default_rng(0)
    ids = [r.id for r in records]
    # informative embedding: first component separates the classes by id parity
    emb = rng.normal(0, 0.1, size=(len(ids), 8)).astype(np.float32)
    ghem = tmp_path / "c.ghem"
    write_embedding_file(ghem, emb, ids, "EN_ENC")

    out = tmp_path / "model.json"
    rc = main(["train", "--in", str(corpus), "--splits", str(split_plan),
               "--out", str(out), "--features", "ghem", "--ghem", str(ghem),
               "--lr", "0.1", "--epochs", "2", "--seed", "0"])
    assert rc == 0
    assert json.loads(out.read_text())["features"] == {"backend": "ghem"}


def test_train_ghem_without_file_is_data_error(tmp_path, corpus, split_plan):
    rc = main(["train", "--in", str(corpus), "--splits", str(split_plan),
               "--out", str(tmp_path / "m.json"), "--features", "ghem"])
    assert rc == 2


def test_train_missing_splits_is_data_error(tmp_path, corpus):
    rc = main(["train", "--in", str(corpus), "--splits", str(tmp_path / "none.json"),
               "--out", str(tmp_path / "m.json")])
    assert rc == 2


# --- calibrate / evaluate / predict ------------------------------------------


@pytest.fixture()
def trained_model(tmp_path, corpus, split_plan):
    out = tmp_path / "model.json"
    assert run_train(corpus, split_plan, out) == 0
    return out


def test_calibrate_sets_threshold(tmp_path, corpus, split_plan, trained_model):
    out = tmp_path / "calibrated.json"
    rc = main(["calibrate", "--in", str(corpus), "--splits", str(split_plan),
               "--model", str(trained_model), "--out", str(out), "--seed", "1"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert 0.3 <= doc["threshold"]["threshold"] <= 0.8
    assert doc["threshold"]["objective"] == "macro_f1"
    assert doc["features"]["backend"] == "tfidf"


def test_calibrate_respects_grid_flags(tmp_path, corpus, split_plan, trained_model):
    out = tmp_path / "calibrated.json"
    rc = main(["calibrate", "--in", str(corpus), "--splits", str(split_plan),
               "--model", str(trained_model), "--out", str(out),
               "--lo", "0.5", "--hi", "0.5"])
    assert rc == 0
    assert json.loads(out.read_text())["threshold"]["threshold"] == 0.5


def test_calibrate_rejects_multiclass_model(tmp_path, corpus, split_plan):
    multi_corpus = tmp_path / "multi.jsonl"
    rows = []
    labels = ["NotHope", "GeneralizedHope", "RealisticHope", "UnrealisticHope"]
    for i in range(48):
        rows.append({"id": f"m{i:03d}", "text": f"tok{i % 4} filler words here",
                     "language": "en", "label": labels[i % 4]})
    multi_corpus.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    msplits = tmp_path / "msplits.json"
    assert main(["split", "--in", str(multi_corpus), "--task", "multi",
                 "--out", str(msplits), "--seed", "0"]) == 0
    mmodel = tmp_path / "mmodel.json"
    assert main(["train", "--in", str(multi_corpus), "--splits", str(msplits),
                 "--task", "multi", "--out", str(mmodel), "--dim", "1024",
                 "--epochs", "2", "--seed", "0"]) == 0
    rc = main(["calibrate", "--in", str(multi_corpus), "--splits", str(msplits),
               "--model", str(mmodel), "--out", str(tmp_path / "x.json")])
    assert rc == 2


def test_evaluate_writes_reports(tmp_path, corpus, split_plan, trained_model):
    out = tmp_path / "eval"
    rc = main(["evaluate", "--in", str(corpus), "--splits", str(split_plan),
               "--model", str(trained_model), "--out-dir", str(out), "--figures",
               "--seed", "1"])
    assert rc == 0
    for name in ("metrics.json", "metrics.txt", "confusion.csv", "confusion.png"):
        assert (out / name).is_file(), name
    doc = json.loads((out / "metrics.json").read_text())
    assert doc["split"] == "test"
    assert doc["accuracy"] == 1.0  # the corpus is separable by construction
    assert (out / "confusion.csv").read_text().startswith("# ghalib ")


def test_evaluate_other_split(tmp_path, corpus, split_plan, trained_model):
    out = tmp_path / "eval_val"
    rc = main(["evaluate", "--in", str(corpus), "--splits", str(split_plan),
               "--model", str(trained_model), "--out-dir", str(out), "--split", "val"])
    assert rc == 0
    assert json.loads((out / "metrics.json").read_text())["split"] == "val"


def test_predict_never_reads_labels(tmp_path, corpus, split_plan, trained_model):
    # corpus whose label column is garbage: predict must not look at it
    rows = [json.loads(l) for l in corpus.read_text().splitlines()]
    for r in rows:
        r["label"] = "Garbage"
    weird = tmp_path / "weird.jsonl"
    weird.write_text("\n".join(json.dumps(r) for r in rows) + "\n")

    out = tmp_path / "preds.csv"
    rc = main(["predict", "--in", str(weird), "--model", str(trained_model),
               "--out", str(out), "--seed", "1"])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# ghalib ")
    assert lines[1] == "id,label,p_NotHope,p_Hope"
    assert len(lines) == 2 + len(rows)
    for line in lines[2:]:
        _, label, p0, p1 = line.split(",")
        assert label in ("NotHope", "Hope")
        assert abs(float(p0) + float(p1) - 1.0) < 1e-5


def test_predict_deterministic(tmp_path, corpus, split_plan, trained_model):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["predict", "--in", str(corpus), "--model", str(trained_model), "--out", str(a)])
    main(["predict", "--in", str(corpus), "--model", str(trained_model), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_model_without_feature_config_rejected(tmp_path, corpus, split_plan, trained_model):
    doc = json.loads(trained_model.read_text())
    del doc["features"]
    stripped = tmp_path / "stripped.json"
    stripped.write_text(json.dumps(doc))
    rc = main(["predict", "--in", str(corpus), "--model", str(stripped),
               "--out", str(tmp_path / "p.csv")])
    assert rc == 2


# --- tune --------------------------------------------------------------------


def test_tune_global_scope(tmp_path, corpus, split_plan):
    out = tmp_path / "tuned"
    rc = main(["tune", "--in", str(corpus), "--splits", str(split_plan),
               "--out-dir", str(out), "--trials", "3", "--scope", "global",
               "--epochs", "2", "--dim", "1024", "--seed", "0"])
    assert rc == 0
    study = out / "study.jsonl"
    best = out / "best_model.json"
    assert study.is_file() and best.is_file()
    lines = [json.loads(l) for l in study.read_text().splitlines()]
    assert len(lines) == 3
    assert [l["trial_index"] for l in lines] == [0, 1, 2]
    for l in lines:
        assert l["group"] == "all"
        assert l["error"] is None
        assert 0.0 <= l["objective"] <= 1.0
    doc = json.loads(best.read_text())
    assert doc["study"]["trial_index"] in (0, 1, 2)
    objectives = [l["objective"] for l in lines]
    assert doc["study"]["objective"] == max(objectives)
    assert doc["study"]["trial_index"] == objectives.index(max(objectives))


def test_tune_per_language_scope(tmp_path, corpus, split_plan):
    out = tmp_path / "tuned_lang"
    rc = main(["tune", "--in", str(corpus), "--splits", str(split_plan),
               "--out-dir", str(out), "--trials", "2", "--epochs", "2",
               "--dim", "1024", "--seed", "0"])
    assert rc == 0
    for lang in ("en", "ur"):
        assert (out / f"study_{lang}.jsonl").is_file()
        assert (out / f"best_model_{lang}.json").is_file()
    doc = json.loads((out / "best_model_en.json").read_text())
    assert doc["study"]["group"] == "en"


def test_tune_rerun_byte_identical(tmp_path, corpus, split_plan):
    a, b = tmp_path / "ta", tmp_path / "tb"
    for out in (a, b):
        rc = main(["tune", "--in", str(corpus), "--splits", str(split_plan),
                   "--out-dir", str(out), "--trials", "2", "--scope", "global",
                   "--epochs", "2", "--dim", "1024", "--seed", "4"])
        assert rc == 0
    assert (a / "study.jsonl").read_bytes() == (b / "study.jsonl").read_bytes()
    assert (a / "best_model.json").read_bytes() == (b / "best_model.json").read_bytes()


# --- langid ------------------------------------------------------------------


def test_langid_build_and_identify(tmp_path, corpus):
    profiles = tmp_path / "profiles.json"
    assert main(["langid", "build", "--in", str(corpus), "--out", str(profiles)]) == 0
    doc = json.loads(profiles.read_text())
    assert {p["language"] for p in doc["profiles"]} == {"en", "ur"}

    out = tmp_path / "langs.csv"
    assert main(["langid", "identify", "--in", str(corpus), "--profiles", str(profiles),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "id,language,score,slot"
    rows = [l.split(",") for l in lines[2:]]
    slots = {r[1]: r[3] for r in rows}
    for lang, slot in slots.items():
        if lang == "en":
            assert slot == "EN_ENC"
        elif lang == "ur":
            assert slot == "UR_ENC"


def test_langid_identify_missing_profiles(tmp_path, corpus):
    rc = main(["langid", "identify", "--in", str(corpus),
               "--profiles", str(tmp_path / "none.json"), "--out", str(tmp_path / "o.csv")])
    assert rc == 2
