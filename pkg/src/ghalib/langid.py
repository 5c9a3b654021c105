"""Character n-gram language identification and encoder-slot routing.

Each supported language gets a profile of relative character 1-3-gram
frequencies built from normalized text. Identification scores a text
against every profile by the length-normalized sum of log smoothed
frequencies (add-one smoothing over the union vocabulary) and falls back
to "unknown" below a score floor. Routing maps languages onto the
per-language encoder slots: Urdu and English each get a dedicated slot,
German and Spanish share the European one.

A corpus-provided language field always overrides identification;
identification only fills gaps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ghalib.corpus import normalize_text
from ghalib.errors import DataError

ENCODER_SLOTS = ("UR_ENC", "EN_ENC", "EURO_ENC")
ROUTING = {"ur": "UR_ENC", "en": "EN_ENC", "de": "EURO_ENC", "es": "EURO_ENC"}

# canonical tie-break order for identification
PROFILE_ORDER = ("en", "ur", "es", "de")

NGRAM_RANGE = (1, 3)
DEFAULT_SCORE_FLOOR = -7.0


@dataclass
class LangProfile:
    language: str
    ngram_range: tuple[int, int]
    table: dict[str, float]  # gram -> relative frequency

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "ngram_range": list(self.ngram_range),
            "table": self.table,
        }

    @staticmethod
    def from_dict(d: dict) -> "LangProfile":
        return LangProfile(d["language"], tuple(d["ngram_range"]), dict(d["table"]))


def char_ngrams(text: str, lo: int = 1, hi: int = 3) -> list[str]:
    grams = []
    for n in range(lo, hi + 1):
        grams.extend(text[i : i + n] for i in range(len(text) - n + 1))
    return grams


def build_profile(texts: Sequence[str], language: str) -> LangProfile:
    """Count character 1-3-grams over the normalized texts and reduce to
    relative frequencies."""
    if not texts:
        raise DataError("cannot build a language profile from zero texts")
    counts: dict[str, int] = {}
    total = 0
    for text in texts:
        for g in char_ngrams(normalize_text(text, language), *NGRAM_RANGE):
            counts[g] = counts.get(g, 0) + 1
            total += 1
    if total == 0:
        raise DataError(f"no n-grams extracted for language {language!r}")
    return LangProfile(language, NGRAM_RANGE, {g: c / total for g, c in counts.items()})


def identify(
    text: str,
    profiles: Sequence[LangProfile],
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> tuple[str, float]:
    """Most likely language of ``text`` plus its average log score.

    The score for a profile is the mean over the text's n-grams of the log
    smoothed frequency: a gram scores its stored relative frequency, floored
    at the union-vocabulary smoothing mass 1/(1 + V) so unseen grams stay
    finite. Ties break in the fixed order en < ur < es < de. Returns
    ("unknown", best_score) when the best score falls below the floor.
    """
    if not profiles:
        raise DataError("no language profiles given")
    normalized = normalize_text(text)
    if normalized == "":
        raise DataError("text is empty after normalization")
    grams = char_ngrams(normalized, *NGRAM_RANGE)

    vocab_size = len({g for p in profiles for g in p.table})
    epsilon = 1.0 / (1.0 + vocab_size)
    log_epsilon = math.log(epsilon)

    rank = {lang: i for i, lang in enumerate(PROFILE_ORDER)}
    ordered = sorted(profiles, key=lambda p: rank.get(p.language, len(rank)))

    best_lang, best_score = None, -math.inf
    for profile in ordered:
        table = profile.table
        score = 0.0
        for g in grams:
            f = table.get(g, 0.0)
            score += math.log(f) if f > epsilon else log_epsilon
        score /= len(grams)
        if score > best_score:
            best_lang, best_score = profile.language, score
    if best_score < score_floor:
        return "unknown", best_score
    return best_lang, best_score


def route(language: str, default_slot: str = "EN_ENC") -> tuple[str, bool]:
    """Encoder slot for a language; unknown languages fall back to the
    configured default slot with a warning flag set."""
    if language in ROUTING:
        return ROUTING[language], False
    return default_slot, True


# --- persistence ------------------------------------------------------------


def save_profiles(profiles: Sequence[LangProfile], path: str | Path, extra: dict | None = None) -> None:
    doc = {"profiles": [p.to_dict() for p in profiles]}
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_profiles(path: str | Path) -> list[LangProfile]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return [LangProfile.from_dict(d) for d in doc["profiles"]]
