"""Question/answer corpus handling.

Reads SQuAD v1.1 JSON, locates each answer key inside its paragraph,
extracts the covering answer sentence, derives word-count features used
for slicing, and partitions items into per-modification groups.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

log = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """The input file does not conform to the expected layout."""


class InsufficientItemsError(ValueError):
    """Not enough items to fill the requested groups."""


@dataclass(frozen=True)
class QaItem:
    item_id: str
    article_title: str
    question: str
    paragraph: str
    answer_sentence: str
    answer_key: str
    key_char_span: tuple[int, int]

    def __post_init__(self):
        start, end = self.key_char_span
        if not (0 <= start < end <= len(self.answer_sentence)):
            raise ValueError(f"span {self.key_char_span} out of bounds for item {self.item_id}")
        if self.answer_sentence[start:end] != self.answer_key:
            raise ValueError(f"span does not cover the answer key for item {self.item_id}")
        for field in ("question", "answer_sentence", "answer_key"):
            if not getattr(self, field).strip():
                raise ValueError(f"{field} is empty for item {self.item_id}")


@dataclass(frozen=True)
class ItemFeatures:
    key_len_words: int
    key_len_chars: int
    sentence_len_words: int
    offset_from_end_words: int


@dataclass(frozen=True)
class GroupPlan:
    groups: dict[str, list[str]]
    seed: int


class ExtractedSentence(NamedTuple):
    text: str
    span: tuple[int, int]
    clipped: bool


_TERMINATOR = re.compile(r"[.!?]+(\s+)")


def sentence_spans(paragraph: str) -> list[tuple[int, int]]:
    """Split a paragraph into sentence spans covering all of it.

    A boundary is a run of '.', '!' or '?' followed by whitespace and
    then an uppercase letter, digit, or opening quote.  A period right
    after a single-letter initial (e.g. "J. Smith") does not split.
    """
    boundaries = []
    for m in _TERMINATOR.finditer(paragraph):
        nxt = m.end()
        if nxt >= len(paragraph):
            continue
        lead = paragraph[nxt]
        if not (lead.isupper() or lead.isdigit() or lead in "\"'“‘("):
            continue
        # guard single-letter initials: the char before the terminator
        # is a lone capital preceded by a word break
        term_start = m.start()
        if (
            paragraph[term_start : term_start + 1] == "."
            and term_start >= 1
            and paragraph[term_start - 1].isupper()
            and (term_start == 1 or not paragraph[term_start - 2].isalpha())
        ):
            continue
        boundaries.append((m.start(1), nxt))
    spans = []
    start = 0
    for ws_start, nxt in boundaries:
        spans.append((start, ws_start))
        start = nxt
    if start < len(paragraph):
        spans.append((start, len(paragraph)))
    return spans


def extract_answer_sentence(
    paragraph: str, answer_char_span: tuple[int, int]
) -> ExtractedSentence:
    """Minimal run of sentences fully covering the answer span, with
    the span rebased onto the extracted text.

    A span reaching past the end of the paragraph yields the whole
    paragraph and the clipped flag set.
    """
    start, end = answer_char_span
    if start < 0 or end <= start:
        raise ValueError(f"invalid span {answer_char_span}")
    if end > len(paragraph):
        log.warning("answer span %s runs past the paragraph end", answer_char_span)
        return ExtractedSentence(paragraph, (start, len(paragraph)), True)
    spans = sentence_spans(paragraph)
    covering = [
        (s, e) for s, e in spans if e > start and s < end
    ]
    if not covering:
        return ExtractedSentence(paragraph, (start, end), True)
    text_start = covering[0][0]
    text_end = covering[-1][1]
    text = paragraph[text_start:text_end]
    return ExtractedSentence(text, (start - text_start, end - text_start), False)


_EDGE_PUNCT = re.compile(r"^\W+|\W+$", re.UNICODE)


def words(text: str) -> list[str]:
    """Whitespace tokens with punctuation stripped from the edges;
    tokens with no letters or digits are dropped."""
    out = []
    for token in text.split():
        stripped = _EDGE_PUNCT.sub("", token)
        if stripped:
            out.append(stripped)
    return out


def item_features(item: QaItem) -> ItemFeatures:
    """Word-count features of one item.

    offset_from_end_words counts the whole words strictly after the key
    span; a word straddling the span end is not counted.
    """
    start, end = item.key_char_span
    sentence = item.answer_sentence
    offset = 0
    for m in re.finditer(r"\S+", sentence):
        if m.start() >= end and _EDGE_PUNCT.sub("", m.group()):
            offset += 1
    return ItemFeatures(
        key_len_words=len(words(item.answer_key)),
        key_len_chars=len(item.answer_key),
        sentence_len_words=len(words(sentence)),
        offset_from_end_words=offset,
    )


def load_corpus(
    path: str | Path,
    limit_articles: int | None = None,
    unit: str = "sentence",
) -> list[QaItem]:
    """Load QaItems from a SQuAD v1.1 JSON file.

    One item per question; the answer is located via answer_start.
    Records whose answer_start disagrees with the answer text are
    rejected with a logged reason and loading continues.  With
    ``unit="paragraph"`` the whole paragraph becomes the answer
    sentence.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        articles = payload["data"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorpusFormatError(f"{path}: not a SQuAD v1.1 file ({exc})") from exc
    if unit not in ("sentence", "paragraph"):
        raise ValueError(f"unknown unit {unit!r}")

    if limit_articles is not None:
        articles = articles[:limit_articles]

    items: list[QaItem] = []
    rejected = 0
    for article in articles:
        try:
            title = article.get("title", "")
            paragraphs = article["paragraphs"]
        except (KeyError, TypeError, AttributeError) as exc:
            raise CorpusFormatError(f"{path}: malformed article entry ({exc})") from exc
        for para in paragraphs:
            try:
                context = para["context"]
                qas = para["qas"]
            except (KeyError, TypeError) as exc:
                raise CorpusFormatError(f"{path}: malformed paragraph entry ({exc})") from exc
            for qa in qas:
                try:
                    item = _build_item(title, context, qa, unit)
                except (KeyError, TypeError) as exc:
                    raise CorpusFormatError(f"{path}: malformed qa entry ({exc})") from exc
                except ValueError as exc:
                    rejected += 1
                    log.warning("rejected %s: %s", qa.get("id", "<no id>"), exc)
                    continue
                items.append(item)
    if rejected:
        log.warning("rejected %d record(s) while loading %s", rejected, path)
    return items


def _build_item(title: str, context: str, qa: dict, unit: str) -> QaItem:
    answers = qa["answers"]
    if not answers:
        raise ValueError("no answers")
    answer = answers[0]
    text = answer["text"]
    start = answer["answer_start"]
    end = start + len(text)
    if start < 0 or end > len(context) or context[start:end] != text:
        raise ValueError(
            f"answer_start {start} does not locate {text!r} in the paragraph"
        )
    if unit == "paragraph":
        sentence, span = context, (start, end)
    else:
        extracted = extract_answer_sentence(context, (start, end))
        sentence, span = extracted.text, extracted.span
    return QaItem(
        item_id=str(qa["id"]),
        article_title=title,
        question=qa["question"],
        paragraph=context,
        answer_sentence=sentence,
        answer_key=text,
        key_char_span=span,
    )


def partition_groups(
    items: Iterable[QaItem] | Iterable[str],
    kinds: Sequence[str],
    group_size: int,
    seed: int,
) -> GroupPlan:
    """Assign items to one disjoint group per modification kind,
    deterministically for a given seed."""
    ids = [it.item_id if isinstance(it, QaItem) else it for it in items]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate item ids")
    needed = len(kinds) * group_size
    if len(ids) < needed:
        raise InsufficientItemsError(
            f"need {needed} items ({len(kinds)} groups of {group_size}), have {len(ids)}"
        )
    rng = random.Random(seed)
    shuffled = list(ids)
    rng.shuffle(shuffled)
    groups = {
        kind: shuffled[i * group_size : (i + 1) * group_size]
        for i, kind in enumerate(kinds)
    }
    return GroupPlan(groups=groups, seed=seed)


def write_items(items: Iterable[QaItem], path: str | Path) -> None:
    """Write items as JSON Lines, one QaItem per line, UTF-8."""
    with open(path, "w", encoding="utf-8") as fh:
        for item in items:
            record = asdict(item)
            record["key_char_span"] = list(item.key_char_span)
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_items(path: str | Path) -> list[QaItem]:
    """Read a JSON Lines corpus file written by write_items."""
    items = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            record["key_char_span"] = tuple(record["key_char_span"])
            items.append(QaItem(**record))
    return items
