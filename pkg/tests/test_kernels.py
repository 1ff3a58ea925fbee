"""Compiled and pure-Python kernels must agree everywhere."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prosodyqa._kernels import _fallback

native = pytest.importorskip(
    "prosodyqa._kernels._native", reason="compiled kernels not built"
)


class TestGestaltBackends:
    @given(
        st.text(alphabet="abcde", max_size=20),
        st.text(alphabet="abcde", max_size=20),
    )
    @settings(max_examples=400, deadline=None)
    def test_match_total_agrees(self, a, b):
        assert native.gestalt_match_total(a, b) == _fallback.gestalt_match_total(a, b)

    def test_unicode_codepoints(self):
        a, b = "café au lait", "cafés au laid"
        assert native.gestalt_match_total(a, b) == _fallback.gestalt_match_total(a, b)

    def test_empty(self):
        assert native.gestalt_match_total("", "abc") == 0
        assert native.gestalt_match_total("", "") == 0


class TestTailCountBackends:
    def test_random_agreement(self):
        rng = random.Random(5150)
        for _ in range(500):
            n = rng.randint(0, 16)
            ranks2 = [rng.randint(1, 2 * n + 2) for _ in range(n)]
            m2 = rng.randint(-1, sum(ranks2) + 2)
            assert native.signed_rank_tail_count(ranks2, m2) == _fallback.signed_rank_tail_count(ranks2, m2)

    def test_full_range_is_power_of_two(self):
        ranks2 = [2, 4, 6, 8]
        assert native.signed_rank_tail_count(ranks2, 20) == 16
        assert _fallback.signed_rank_tail_count(ranks2, 20) == 16

    def test_negative_threshold(self):
        assert native.signed_rank_tail_count([2, 4], -1) == 0

    def test_native_guards_overflow(self):
        with pytest.raises(OverflowError):
            native.signed_rank_tail_count([2] * 41, 1)
