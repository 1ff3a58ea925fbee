"""Independent brute-force oracles used by the test suite.

Nothing here imports from the package: every oracle recomputes its
answer from first principles (exhaustive enumeration or the direct
textbook formula) so implementation bugs cannot cancel out.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


# -- gestalt matching ------------------------------------------------------


def brute_longest_match(a: str, b: str):
    """All-substrings search for the leftmost-longest common substring.
    Returns (i, j, size); ties prefer the smallest i, then smallest j."""
    best = (0, 0, 0)
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
            if k > best[2]:
                best = (i, j, k)
    return best


def brute_match_total(a: str, b: str) -> int:
    i, j, k = brute_longest_match(a, b)
    if k == 0:
        return 0
    return (
        k
        + brute_match_total(a[:i], b[:j])
        + brute_match_total(a[i + k :], b[j + k :])
    )


def brute_gestalt(a: str, b: str) -> float:
    """Similarity with the same canonical argument ordering."""
    if not a and not b:
        return 1.0
    if a > b:
        a, b = b, a
    return 2.0 * brute_match_total(a, b) / (len(a) + len(b))


# -- Wilcoxon signed rank --------------------------------------------------


def tie_average_ranks(magnitudes):
    """Average ranks computed independently (sort-and-group)."""
    pairs = sorted((m, idx) for idx, m in enumerate(magnitudes))
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(pairs):
        j = i
        while j + 1 < len(pairs) and pairs[j + 1][0] == pairs[i][0]:
            j += 1
        avg = Fraction(i + 1 + j + 1, 2)
        for _, idx in pairs[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def enumeration_wilcoxon_p(diffs) -> float:
    """Exact two-sided p by enumerating all 2^n sign assignments of the
    nonzero differences: the fraction of assignments whose smaller rank
    sum is at most the observed one.  Exact rational arithmetic."""
    diffs = [d for d in diffs if d != 0]
    if not diffs:
        return 1.0
    ranks = tie_average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    observed = min(w_plus, w_minus)
    n = len(diffs)
    count = 0
    for signs in itertools.product((1, -1), repeat=n):
        wp = sum(r for r, s in zip(ranks, signs) if s > 0)
        wm = sum(ranks) - wp
        if min(wp, wm) <= observed:
            count += 1
    return float(Fraction(count, 2**n))


# -- Krippendorff's alpha --------------------------------------------------


def _pooled(matrix):
    units = []
    for row in matrix:
        values = [v for v in row if v is not None]
        if len(values) >= 2:
            units.append(values)
    return units


def direct_alpha(matrix, metric: str) -> float:
    """Direct-formula alpha: observed disagreement from explicit pair
    loops inside units, expected disagreement from pair loops over the
    pooled values, no coincidence matrix."""
    units = _pooled(matrix)
    pooled = [v for unit in units for v in unit]
    n = len(pooled)
    if n == 0:
        raise ValueError("no pairable values")

    if metric == "nominal":
        dist = lambda a, b: 0.0 if a == b else 1.0  # noqa: E731
    elif metric == "interval":
        dist = lambda a, b: (a - b) ** 2  # noqa: E731
    elif metric == "ordinal":
        marginal: dict = {}
        for v in pooled:
            marginal[v] = marginal.get(v, 0) + 1
        ordered = sorted(marginal)

        def dist(a, b):
            lo, hi = min(a, b), max(a, b)
            between = sum(marginal[g] for g in ordered if lo <= g <= hi)
            return (between - (marginal[a] + marginal[b]) / 2.0) ** 2

    else:
        raise ValueError(metric)

    d_observed = 0.0
    for unit in units:
        m = len(unit)
        d_observed += sum(
            dist(unit[i], unit[j])
            for i in range(m)
            for j in range(m)
            if i != j
        ) / (m - 1)
    d_observed /= n

    d_expected = sum(
        dist(pooled[i], pooled[j])
        for i in range(n)
        for j in range(n)
        if i != j
    ) / (n * (n - 1))
    if d_expected == 0.0:
        raise ValueError("expected disagreement is zero")
    return 1.0 - d_observed / d_expected
