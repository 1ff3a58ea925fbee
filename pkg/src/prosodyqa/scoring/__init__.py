"""Objective answer-correctness scoring.

A typed answer is compared against the gold key by converting both to
per-word phonetic codes and measuring gestalt (longest-common-substring
decomposition) similarity between the code strings, which forgives
typos and misheard-but-similar-sounding words.
"""

from __future__ import annotations

from dataclasses import dataclass

from prosodyqa._kernels import gestalt_match_total

from .metaphone import PhoneticCode, metaphone_encode

__all__ = [
    "PhoneticCode",
    "CorrectnessScore",
    "metaphone_encode",
    "encode_phrase",
    "gestalt_similarity",
    "correctness",
]


@dataclass(frozen=True)
class CorrectnessScore:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"correctness {self.value} outside [0, 1]")


def encode_phrase(text: str, alternate: bool = False) -> str:
    """Encode a phrase word by word, joining the codes with single spaces.

    Words that yield an empty code (no letters) contribute nothing.
    With ``alternate=True`` the alternate code of each word is used.
    """
    codes = []
    for token in text.split():
        code = metaphone_encode(token)
        chosen = code.alternate if alternate else code.primary
        if chosen:
            codes.append(chosen)
    return " ".join(codes)


def gestalt_similarity(a: str, b: str) -> float:
    """Similarity 2*M/(|a|+|b|), M = characters matched by recursive
    leftmost-longest common-substring decomposition.

    The raw decomposition is order-sensitive, so the two arguments are
    put in lexicographic order before matching; the score is therefore
    symmetric.  Two empty strings score 1.0 by convention.
    """
    if not a and not b:
        return 1.0
    if a > b:
        a, b = b, a
    matched = gestalt_match_total(a, b)
    return 2.0 * matched / (len(a) + len(b))


def correctness(
    typed: str, gold: str, accept_alternates: bool = False
) -> CorrectnessScore:
    """Phonetic correctness of a worker-typed answer key in [0, 1].

    Both strings are trimmed and lowercased, phrase-encoded, and
    compared with gestalt similarity.  ``accept_alternates=True`` also
    tries the alternate phonetic codes and keeps the best of the four
    pairings (default compares primary codes only).
    """
    if not gold.strip():
        raise ValueError("gold answer key is empty")
    typed = typed.strip().lower()
    gold = gold.strip().lower()
    variants_typed = [encode_phrase(typed)]
    variants_gold = [encode_phrase(gold)]
    if accept_alternates:
        variants_typed.append(encode_phrase(typed, alternate=True))
        variants_gold.append(encode_phrase(gold, alternate=True))
    best = max(
        gestalt_similarity(t, g) for t in variants_typed for g in variants_gold
    )
    return CorrectnessScore(best)
