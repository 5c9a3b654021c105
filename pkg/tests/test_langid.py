import math

import pytest

from ghalib.errors import DataError
from ghalib.langid import (
    ROUTING,
    LangProfile,
    build_profile,
    char_ngrams,
    identify,
    load_profiles,
    route,
    save_profiles,
)


def test_char_ngrams_window():
    assert char_ngrams("abc", 1, 2) == ["a", "b", "c", "ab", "bc"]
    assert char_ngrams("ab", 3, 3) == []


def test_profile_frequencies_sum_to_one():
    prof = build_profile(["the cat", "a dog"], "en")
    assert sum(prof.table.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(v > 0 for v in prof.table.values())


def test_profile_worked_counts():
    # "ab": grams a, b, ab -> each 1/3
    prof = build_profile(["ab"], "en")
    assert prof.table == {"a": pytest.approx(1 / 3), "b": pytest.approx(1 / 3), "ab": pytest.approx(1 / 3)}


def test_profile_duplication_invariant():
    # tripling the corpus leaves relative frequencies unchanged
    once = build_profile(["water under the bridge"], "en")
    thrice = build_profile(["water under the bridge"] * 3, "en")
    assert set(once.table) == set(thrice.table)
    for g, f in once.table.items():
        assert thrice.table[g] == pytest.approx(f, abs=1e-12)


def test_profile_normalizes_text():
    prof = build_profile(["ABC"], "en")
    assert "a" in prof.table and "A" not in prof.table


def test_profile_rejects_empty():
    with pytest.raises(DataError):
        build_profile([], "en")


def make_profiles():
    en = build_profile(
        ["the quick brown fox jumps over the lazy dog", "hope is the thing with feathers"], "en"
    )
    es = build_profile(
        ["el rapido zorro marron salta sobre el perro", "la esperanza es lo ultimo que se pierde"],
        "es",
    )
    de = build_profile(
        ["der schnelle braune fuchs springt uber den faulen hund", "die hoffnung stirbt zuletzt"],
        "de",
    )
    ur = build_profile(["امید زندگی کی سب سے بڑی طاقت ہے", "وقت کے ساتھ سب کچھ بدل جاتا ہے"], "ur")
    return [en, es, de, ur]


def test_identify_separates_scripts_and_languages():
    profiles = make_profiles()
    assert identify("the fox jumps over the dog", profiles)[0] == "en"
    assert identify("el zorro salta sobre el perro", profiles)[0] == "es"
    assert identify("der fuchs springt uber den hund", profiles)[0] == "de"
    assert identify("امید سب سے بڑی طاقت ہے", profiles)[0] == "ur"


def test_identify_unknown_below_floor():
    profiles = make_profiles()
    lang, score = identify("the fox", profiles, score_floor=0.0)
    assert lang == "unknown"
    assert score < 0.0


def test_identify_score_is_mean_log_frequency():
    # single profile, fully seen text: score must equal the hand-built mean
    prof = build_profile(["ab"], "en")
    grams = char_ngrams("ab", 1, 3)
    epsilon = 1.0 / (1.0 + len(prof.table))
    expected = sum(
        math.log(prof.table[g]) if prof.table.get(g, 0.0) > epsilon else math.log(epsilon)
        for g in grams
    ) / len(grams)
    lang, score = identify("ab", [prof], score_floor=-100.0)
    assert lang == "en"
    assert score == pytest.approx(expected, abs=1e-12)


def test_identify_tie_breaks_in_fixed_order():
    # two profiles with identical tables score identically; en wins over de
    table = build_profile(["zz"], "en").table
    a = LangProfile("de", (1, 3), dict(table))
    b = LangProfile("en", (1, 3), dict(table))
    lang, _ = identify("zz", [a, b], score_floor=-100.0)
    assert lang == "en"
    # and es wins over de under the same tie
    c = LangProfile("es", (1, 3), dict(table))
    lang, _ = identify("zz", [a, c], score_floor=-100.0)
    assert lang == "es"


def test_identify_rejects_empty_inputs():
    with pytest.raises(DataError):
        identify("text", [])
    with pytest.raises(DataError):
        identify("   ", make_profiles())


def test_self_accuracy_on_fixture(multilang_records):
    by_lang = {}
    for rec in multilang_records:
        by_lang.setdefault(rec.language, []).append(rec.text)
    profiles = [build_profile(texts, lang) for lang, texts in sorted(by_lang.items())]
    hits = sum(1 for r in multilang_records if identify(r.text, profiles)[0] == r.language)
    assert hits / len(multilang_records) >= 0.98


def test_held_out_accuracy_on_fixture(multilang_records):
    by_lang = {}
    for rec in multilang_records:
        by_lang.setdefault(rec.language, []).append(rec.text)
    profiles = [build_profile(texts[:80], lang) for lang, texts in sorted(by_lang.items())]
    held = [(lang, t) for lang, texts in sorted(by_lang.items()) for t in texts[80:]]
    hits = sum(1 for lang, t in held if identify(t, profiles)[0] == lang)
    assert hits / len(held) >= 0.98


def test_routing_map_exact():
    assert ROUTING == {"ur": "UR_ENC", "en": "EN_ENC", "de": "EURO_ENC", "es": "EURO_ENC"}
    assert route("ur") == ("UR_ENC", False)
    assert route("en") == ("EN_ENC", False)
    assert route("de") == ("EURO_ENC", False)
    assert route("es") == ("EURO_ENC", False)


def test_routing_unknown_falls_back_with_flag():
    assert route("unknown") == ("EN_ENC", True)
    assert route("unknown", default_slot="EURO_ENC") == ("EURO_ENC", True)


def test_profiles_roundtrip(tmp_path):
    profiles = make_profiles()
    p = tmp_path / "profiles.json"
    save_profiles(profiles, p)
    loaded = load_profiles(p)
    assert [q.language for q in loaded] == [q.language for q in profiles]
    for got, want in zip(loaded, profiles):
        assert got.table == want.table
        assert got.ngram_range == want.ngram_range


def test_profiles_file_is_byte_stable(tmp_path):
    profiles = make_profiles()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_profiles(profiles, a)
    save_profiles(profiles, b)
    assert a.read_bytes() == b.read_bytes()
