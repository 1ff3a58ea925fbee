#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot loops on realistic workloads: gestalt matching over
phonetic code strings and full answer sentences (the batch-scoring
path), and the exact signed-rank tail count at the largest exact n.

    python benchmarks/bench_kernels.py
"""

import random
import string
import time

from prosodyqa._kernels import _fallback

try:
    from prosodyqa._kernels import _native
except ImportError:
    _native = None

from prosodyqa.scoring import encode_phrase


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def make_code_pairs(n, rng):
    """Typed-vs-gold phonetic code pairs like the scorer compares."""
    names = [
        "jimi hendrix", "aretha franklin", "freddie mercury", "brian may",
        "roger taylor", "john deacon", "jimmy page", "robert plant",
    ]
    pairs = []
    for _ in range(n):
        gold = rng.choice(names)
        typed = "".join(
            c if rng.random() > 0.1 else rng.choice(string.ascii_lowercase)
            for c in gold
        )
        pairs.append((encode_phrase(typed), encode_phrase(gold)))
    return pairs


def make_sentence_pairs(n, rng):
    words = "the quick brown fox jumps over a lazy dog near riverbank stones".split()
    pairs = []
    for _ in range(n):
        a = " ".join(rng.choice(words) for _ in range(30))
        b = " ".join(rng.choice(words) for _ in range(30))
        pairs.append((a, b))
    return pairs


def bench_gestalt(impl, pairs):
    def run():
        for a, b in pairs:
            impl.gestalt_match_total(a, b)

    return timeit(run)


def bench_tail(impl, loops=200):
    n = 25
    ranks2 = [2 * r for r in range(1, n + 1)]
    m2 = sum(ranks2) // 3

    def run():
        for _ in range(loops):
            impl.signed_rank_tail_count(ranks2, m2)

    return timeit(run)


def main():
    rng = random.Random(8)
    code_pairs = make_code_pairs(3000, rng)
    sentence_pairs = make_sentence_pairs(300, rng)

    rows = []
    for label, pairs in (
        ("gestalt: 3000 phonetic code pairs", code_pairs),
        ("gestalt: 300 sentence pairs (~180 chars)", sentence_pairs),
    ):
        py = bench_gestalt(_fallback, pairs)
        row = [label, f"{py:.4f}s"]
        if _native is not None:
            nat = bench_gestalt(_native, pairs)
            row += [f"{nat:.4f}s", f"{py / nat:.1f}x"]
        rows.append(row)

    py = bench_tail(_fallback)
    row = ["signed-rank tail count: 200 calls at n=25", f"{py:.4f}s"]
    if _native is not None:
        nat = bench_tail(_native)
        row += [f"{nat:.4f}s", f"{py / nat:.1f}x"]
    rows.append(row)

    header = ["workload", "pure python"]
    if _native is not None:
        header += ["compiled", "speedup"]
    else:
        print("note: compiled kernels not built; showing fallback only\n")
    width = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, width)))


if __name__ == "__main__":
    main()
