import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from prosodyqa.corpus import QaItem
from prosodyqa.prosody import BUILTIN_PROFILES

QUEEN_SENTENCE = (
    "Queen drew artistic influence from British rock acts of the 60s, "
    "in addition to American guitarist Jimi Hendrix, with Mercury also "
    "inspired by the gospel singer Aretha Franklin."
)
QUEEN_QUESTION = "Which guitarist inspired Queen?"
QUEEN_KEY = "Jimi Hendrix"


@pytest.fixture
def queen_item() -> QaItem:
    start = QUEEN_SENTENCE.index(QUEEN_KEY)
    return QaItem(
        item_id="queen-hendrix",
        article_title="Queen (band)",
        question=QUEEN_QUESTION,
        paragraph=QUEEN_SENTENCE,
        answer_sentence=QUEEN_SENTENCE,
        answer_key=QUEEN_KEY,
        key_char_span=(start, start + len(QUEEN_KEY)),
    )


@pytest.fixture
def google_profile():
    return BUILTIN_PROFILES["google-wavenet-f"]


@pytest.fixture
def ibm_profile():
    return BUILTIN_PROFILES["ibm-lisa"]


def make_squad_file(path: Path, articles) -> Path:
    """Write a SQuAD v1.1 JSON file from [(title, [(context, [(qid,
    question, answer_text, answer_start)])])] structures."""
    data = []
    for title, paragraphs in articles:
        entry = {"title": title, "paragraphs": []}
        for context, qas in paragraphs:
            entry["paragraphs"].append(
                {
                    "context": context,
                    "qas": [
                        {
                            "id": qid,
                            "question": question,
                            "answers": [{"text": text, "answer_start": start}],
                        }
                        for qid, question, text, start in qas
                    ],
                }
            )
        data.append(entry)
    path.write_text(json.dumps({"version": "1.1", "data": data}), encoding="utf-8")
    return path


KEY_POOL = ["amber", "basalt", "cobalt", "dunite", "emerald", "feldspar", "garnet"]


def make_synthetic_corpus(path: Path, n_items: int) -> Path:
    """SQuAD-shaped corpus with varying key lengths and offsets."""
    articles = []
    for base in range(0, n_items, 4):
        paragraphs = []
        for i in range(base, min(base + 4, n_items)):
            n_key = 1 + i % 3
            key = " ".join(KEY_POOL[(i + k) % len(KEY_POOL)] for k in range(n_key))
            tail = " with further detail" * (i % 3)
            context = (
                f"Background fact number {i} stands first. "
                f"The survey for case {i} identified {key} as the central result{tail}. "
                f"Follow-up work continued later."
            )
            paragraphs.append(
                (
                    context,
                    [(f"q{i:03d}", f"What did case {i} identify?", key, context.index(key))],
                )
            )
        articles.append((f"Article {base // 4}", paragraphs))
    return make_squad_file(path, articles)


@pytest.fixture
def squad_file(tmp_path) -> Path:
    context = (
        "The city was founded in 1820. "
        + QUEEN_SENTENCE
        + " It remains influential today."
    )
    start = context.index(QUEEN_KEY)
    return make_squad_file(
        tmp_path / "squad.json",
        [
            (
                "Queen (band)",
                [
                    (
                        context,
                        [("q1", QUEEN_QUESTION, QUEEN_KEY, start)],
                    )
                ],
            )
        ],
    )
