"""Regenerate the bundled corpus fixtures.

Both corpora are synthetic and separable by construction: every record
carries two class-signature tokens plus language-typical filler words, so
classifier heads can reach perfect separation and the language identifier
sees realistic character n-gram profiles. Output is deterministic; the
fixtures are committed, this script only documents and reproduces them.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FILLERS = {
    "en": [
        "the", "people", "in", "our", "community", "city", "school", "children",
        "friends", "work", "life", "story", "morning", "evening", "family",
        "neighbours", "street", "garden", "winter", "summer", "voices",
        "letters", "music", "and", "with", "this", "that", "today",
    ],
    "es": [
        "la", "gente", "de", "nuestra", "comunidad", "ciudad", "escuela",
        "los", "niños", "amigos", "trabajo", "vida", "historia", "mañana",
        "tarde", "familia", "vecinos", "calle", "jardín", "invierno",
        "verano", "voces", "cartas", "música", "para", "con", "una", "hoy",
    ],
    "de": [
        "die", "menschen", "in", "unserer", "gemeinschaft", "stadt", "schule",
        "kinder", "freunde", "arbeit", "leben", "geschichte", "morgen",
        "abend", "familie", "nachbarn", "straße", "garten", "winter",
        "sommer", "stimmen", "briefe", "musik", "und", "mit", "eine", "heute",
    ],
    "ur": [
        "لوگ", "ہمارے", "شہر", "اسکول", "بچے", "دوست", "کام", "زندگی",
        "کہانی", "صبح", "شام", "خاندان", "پڑوسی", "گلی", "باغ", "سردی",
        "گرمی", "آوازیں", "خط", "موسیقی", "محلہ", "میں", "کے", "اور",
    ],
}

MULTI_SIGNATURES = {
    ("en", "NotHope"): ["despair", "gloom"],
    ("en", "GeneralizedHope"): ["hope", "someday"],
    ("en", "RealisticHope"): ["plan", "steady"],
    ("en", "UnrealisticHope"): ["miracle", "overnight"],
    ("es", "NotHope"): ["desesperanza", "tristeza"],
    ("es", "GeneralizedHope"): ["esperanza", "ilusión"],
    ("es", "RealisticHope"): ["meta", "constancia"],
    ("es", "UnrealisticHope"): ["milagro", "fantasía"],
    ("de", "NotHope"): ["verzweiflung", "düsternis"],
    ("de", "GeneralizedHope"): ["hoffnung", "zuversicht"],
    ("de", "RealisticHope"): ["ziel", "ausdauer"],
    ("de", "UnrealisticHope"): ["wunder", "hirngespinst"],
    ("ur", "NotHope"): ["مایوسی", "نااُمیدی"],
    ("ur", "GeneralizedHope"): ["امید", "آس"],
    ("ur", "RealisticHope"): ["منصوبہ", "محنت"],
    ("ur", "UnrealisticHope"): ["معجزہ", "خواب"],
}

BINARY_SIGNATURES = {
    ("en", "NotHope"): ["despair", "gloom"],
    ("en", "Hope"): ["hope", "optimism"],
    ("ur", "NotHope"): ["مایوسی", "اندھیرا"],
    ("ur", "Hope"): ["امید", "روشنی"],
}

MULTI_COUNTS = [("NotHope", 40), ("GeneralizedHope", 30), ("RealisticHope", 18), ("UnrealisticHope", 12)]
BINARY_COUNTS = [("NotHope", 120), ("Hope", 80)]


def _make_text(rng: random.Random, language: str, signature: list[str]) -> str:
    n_fill = rng.randint(6, 12)
    words = list(signature) + [rng.choice(FILLERS[language]) for _ in range(n_fill)]
    rng.shuffle(words)
    return " ".join(words)


def _build(name: str, languages: list[str], counts, signatures, seed: int) -> dict:
    rng = random.Random(seed)
    rows = []
    for language in languages:
        serial = 0
        for label, n in counts:
            for _ in range(n):
                rows.append(
                    {
                        "id": f"{language}-{serial:03d}",
                        "text": _make_text(rng, language, signatures[(language, label)]),
                        "language": language,
                        "label": label,
                    }
                )
                serial += 1

    path = FIXTURES / f"{name}.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    per_language = Counter(r["language"] for r in rows)
    per_class = Counter(r["label"] for r in rows)
    per_language_class = Counter(f"{r['language']}/{r['label']}" for r in rows)
    manifest = {
        "file": path.name,
        "total": len(rows),
        "per_language": dict(sorted(per_language.items())),
        "per_class": dict(sorted(per_class.items())),
        "per_language_class": dict(sorted(per_language_class.items())),
        "generator_seed": seed,
    }
    (FIXTURES / f"{name}.manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return manifest


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    m1 = _build("multilang_400", ["en", "ur", "es", "de"], MULTI_COUNTS, MULTI_SIGNATURES, seed=20250801)
    m2 = _build("bilingual_binary_400", ["en", "ur"], BINARY_COUNTS, BINARY_SIGNATURES, seed=20250802)
    print(json.dumps(m1["per_class"], sort_keys=True))
    print(json.dumps(m2["per_class"], sort_keys=True))


if __name__ == "__main__":
    main()
