"""Aggregation, inter-rater agreement, and significance statistics.

Judgment rows are aggregated per item with medians (the length rating
through its absolute value first, making it binary OK/not-OK), rater
agreement is measured with Krippendorff's alpha over incomplete
item-by-rater matrices, and baseline-vs-modified comparisons use the
two-sided Wilcoxon signed-rank test with exact small-sample p-values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from prosodyqa._kernels import signed_rank_tail_count

log = logging.getLogger(__name__)

# n at or below which the exact signed-rank distribution is used
EXACT_CUTOFF = 25

RATING_DIMENSIONS = ("informativeness", "elocution", "interruption", "length_rating")


@dataclass(frozen=True)
class ItemScore:
    item_id: str
    kind: str
    informativeness_med: float
    elocution_med: float
    interruption_med: float
    length_abs_med: float
    correctness_mean: float


@dataclass(frozen=True)
class AgreementResult:
    alpha: float
    majority_ratio: float
    metric: str


@dataclass(frozen=True)
class WilcoxonResult:
    w_statistic: float
    n_effective: int
    p_value: float
    stars: str


def lower_median(values: Sequence[float]) -> float:
    """Median that stays on the rating scale: for even counts the lower
    of the two middle values is returned."""
    if not values:
        raise ValueError("median of empty sequence")
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def aggregate_item(rows: Sequence[Mapping]) -> ItemScore:
    """Aggregate all judgment rows of one (item, kind) unit.

    Rating dimensions take the per-dimension median; the length rating
    is mapped through abs() per judgment *before* the median;
    correctness is averaged (missing correctness rows are skipped).
    """
    if not rows:
        raise ValueError("no rows to aggregate")
    item_ids = {r["item_id"] for r in rows}
    kinds = {r["kind"] for r in rows}
    if len(item_ids) != 1 or len(kinds) != 1:
        raise ValueError(f"rows span multiple units: {item_ids} x {kinds}")
    correctness_vals = [r["correctness"] for r in rows if r.get("correctness") is not None]
    return ItemScore(
        item_id=next(iter(item_ids)),
        kind=next(iter(kinds)),
        informativeness_med=lower_median([r["informativeness"] for r in rows]),
        elocution_med=lower_median([r["elocution"] for r in rows]),
        interruption_med=lower_median([r["interruption"] for r in rows]),
        length_abs_med=lower_median([abs(r["length_rating"]) for r in rows]),
        correctness_mean=(
            sum(correctness_vals) / len(correctness_vals) if correctness_vals else float("nan")
        ),
    )


def _pairable_units(matrix: Sequence[Sequence[float | None]]) -> list[list[float]]:
    units = []
    for row in matrix:
        values = [v for v in row if v is not None and not (isinstance(v, float) and math.isnan(v))]
        if len(values) >= 2:
            units.append(values)
    return units


def _distance_matrix(values: list, marginals: np.ndarray, metric: str) -> np.ndarray:
    k = len(values)
    if metric == "nominal":
        return 1.0 - np.eye(k)
    numeric = np.array([float(v) for v in values])
    if metric == "interval":
        diff = numeric[:, None] - numeric[None, :]
        return diff * diff
    if metric == "ordinal":
        # squared count of coincidences between the two ranks, the two
        # endpoints contributing half each
        cum = np.concatenate([[0.0], np.cumsum(marginals)])
        dist = np.zeros((k, k))
        for c in range(k):
            for d in range(k):
                lo, hi = min(c, d), max(c, d)
                between = cum[hi + 1] - cum[lo]
                dist[c, d] = (between - (marginals[c] + marginals[d]) / 2.0) ** 2
        return dist
    raise ValueError(f"unknown metric {metric!r}")


def disagreements(
    matrix: Sequence[Sequence[float | None]], metric: str = "ordinal"
) -> tuple[float, float]:
    """Observed and expected disagreement (D_o, D_e) from the
    coincidence matrix; diagnostic building blocks of alpha."""
    units = _pairable_units(matrix)
    if not units:
        raise ValueError("no pairable values (every item needs >= 2 ratings)")

    # nominal data may use arbitrary labels; ordinal and interval need
    # numeric values (the sort order defines the ordinal ranking)
    values = sorted({v for unit in units for v in unit})
    index = {v: i for i, v in enumerate(values)}
    k = len(values)

    coincidence = np.zeros((k, k))
    for unit in units:
        weight = 1.0 / (len(unit) - 1)
        counts = np.zeros(k)
        for v in unit:
            counts[index[v]] += 1
        pair_counts = np.outer(counts, counts) - np.diag(counts)
        coincidence += pair_counts * weight

    marginals = coincidence.sum(axis=0)
    n = marginals.sum()
    dist = _distance_matrix(values, marginals, metric)

    d_observed = float((coincidence * dist).sum()) / n
    d_expected = float((np.outer(marginals, marginals) * dist).sum()) / (n * (n - 1))
    return d_observed, d_expected


def krippendorff_alpha(
    matrix: Sequence[Sequence[float | None]], metric: str = "ordinal"
) -> float:
    """Krippendorff's alpha over an items-by-raters matrix with missing
    cells (None or NaN), via the coincidence-matrix formulation
    alpha = 1 - D_o / D_e.

    Supported distance metrics: "nominal", "ordinal", "interval".
    Raises ValueError when no disagreement is expected (D_e = 0) or
    fewer than two pairable values exist.
    """
    d_observed, d_expected = disagreements(matrix, metric)
    if d_expected == 0.0:
        raise ValueError("expected disagreement is zero; alpha undefined")
    return 1.0 - d_observed / d_expected


def majority_ratio(matrix: Sequence[Sequence[float | None]]) -> float:
    """Fraction of triple-rated items where some label occurs at least
    twice.  Every included item must have exactly 3 ratings."""
    units = []
    for row in matrix:
        values = [v for v in row if v is not None and not (isinstance(v, float) and math.isnan(v))]
        if len(values) != 3:
            raise ValueError(f"item has {len(values)} ratings, expected exactly 3")
        units.append(values)
    if not units:
        raise ValueError("no items")
    agreeing = sum(1 for unit in units if len(set(unit)) <= 2)
    return agreeing / len(units)


def significance_stars(p: float) -> str:
    """"**" for p < 0.01, "*" for p < 0.05, empty otherwise."""
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def _average_ranks(magnitudes: Sequence[float]) -> list[float]:
    order = sorted(range(len(magnitudes)), key=lambda i: magnitudes[i])
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for idx in order[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on (baseline, modified) pairs.

    Zero differences are dropped (classic form); tied absolute
    differences receive average ranks.  The statistic is
    min(W+, W-).  For n_effective <= EXACT_CUTOFF the p-value is exact,
    equal to full enumeration of all 2^n sign assignments; above the
    cutoff a normal approximation with continuity correction and
    tie-corrected variance is used.  All differences zero is reported
    as p = 1.0 with n_effective = 0.
    """
    if not pairs:
        raise ValueError("no pairs")
    diffs = [m - b for b, m in pairs if m != b]
    n = len(diffs)
    if n == 0:
        return WilcoxonResult(w_statistic=0.0, n_effective=0, p_value=1.0, stars="")

    magnitudes = [abs(d) for d in diffs]
    ranks = _average_ranks(magnitudes)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    w = min(w_plus, w_minus)

    if n <= EXACT_CUTOFF:
        p = _exact_two_sided_p(ranks, w_plus, w_minus)
    else:
        p = _approx_two_sided_p(magnitudes, ranks, w)
    p = min(p, 1.0)
    return WilcoxonResult(
        w_statistic=w, n_effective=n, p_value=p, stars=significance_stars(p)
    )


def _exact_two_sided_p(
    ranks: Sequence[float], w_plus: float, w_minus: float
) -> float:
    if w_plus == w_minus:
        return 1.0
    # doubled ranks are integral even with averaged ties
    ranks2 = [round(2 * r) for r in ranks]
    m2 = round(2 * min(w_plus, w_minus))
    count = signed_rank_tail_count(ranks2, m2)
    # the distribution of W+ is symmetric, so the upper tail mirrors the
    # lower one and the two tails cannot overlap when W+ != W-
    return (2 * count) / (1 << len(ranks))


def _approx_two_sided_p(
    magnitudes: Sequence[float], ranks: Sequence[float], w: float
) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    tie_sizes: dict[float, int] = {}
    for m in magnitudes:
        tie_sizes[m] = tie_sizes.get(m, 0) + 1
    variance -= sum(t**3 - t for t in tie_sizes.values()) / 48.0
    z = (w - mean + 0.5) / math.sqrt(variance)
    return 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0))


def median_split(values: Sequence[float]) -> tuple[float, list[str]]:
    """Split values at their median; "short" means value <= threshold.

    Returns (threshold, per-value labels).  A degenerate split (one
    empty side) is allowed and logged as a warning.
    """
    if len(values) < 2:
        raise ValueError("need at least 2 values to split")
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        threshold = float(ordered[mid])
    else:
        threshold = (ordered[mid - 1] + ordered[mid]) / 2.0
    labels = ["short" if v <= threshold else "long" for v in values]
    if len(set(labels)) == 1:
        log.warning("degenerate median split: all %d values on one side", len(values))
    return threshold, labels
