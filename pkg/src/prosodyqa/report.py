"""Delta-vs-baseline tables and median-split slice analyses.

Every modified item is paired with its own baseline score from the
same engine; the table reports the per-item score difference
aggregated over items, with Wilcoxon signed-rank significance stars.
Slice reports split the items at the median of a length/offset feature
and rebuild the table per slice.
"""

from __future__ import annotations

import csv
import io
import logging
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import ItemFeatures
from .stats import ItemScore, median_split, wilcoxon_signed_rank

log = logging.getLogger(__name__)

DIMENSIONS = ("informativeness", "elocution", "interruption", "length", "correctness")
_DIMENSION_ATTR = {
    "informativeness": "informativeness_med",
    "elocution": "elocution_med",
    "interruption": "interruption_med",
    "length": "length_abs_med",
    "correctness": "correctness_mean",
}
_KIND_ORDER = ("pause", "rate", "pitch", "emphasis")
FEATURE_NAMES = ("key_len_words", "sentence_len_words", "offset_from_end_words")


@dataclass(frozen=True)
class DeltaRow:
    kind: str
    dimension: str
    delta: float
    stars: str
    n_items: int
    p_value: float


@dataclass(frozen=True)
class SliceReport:
    feature: str
    threshold: float
    rows_short: list[DeltaRow]
    rows_long: list[DeltaRow]
    degenerate: bool


def _pairings(scores: Sequence[ItemScore]) -> dict[str, list[tuple[ItemScore, ItemScore]]]:
    """Per modification kind, the (baseline, modified) score pairs.
    Modified items without a baseline counterpart are dropped."""
    baselines = {s.item_id: s for s in scores if s.kind == "baseline"}
    by_kind: dict[str, list[tuple[ItemScore, ItemScore]]] = {}
    missing = 0
    for s in scores:
        if s.kind == "baseline":
            continue
        base = baselines.get(s.item_id)
        if base is None:
            missing += 1
            continue
        by_kind.setdefault(s.kind, []).append((base, s))
    if missing:
        log.warning("excluded %d modified item(s) with no baseline", missing)
    for pairs in by_kind.values():
        pairs.sort(key=lambda pair: pair[0].item_id)
    return by_kind


def delta_table(
    scores: Sequence[ItemScore], delta_agg: str = "median"
) -> list[DeltaRow]:
    """One row per (kind, dimension): aggregated per-item difference
    (modified - baseline), Wilcoxon p-value, and significance stars."""
    if delta_agg not in ("median", "mean"):
        raise ValueError(f"unknown delta_agg {delta_agg!r}")
    rows = []
    by_kind = _pairings(scores)
    for kind in sorted(by_kind, key=_kind_sort_key):
        pairs = by_kind[kind]
        for dimension in DIMENSIONS:
            attr = _DIMENSION_ATTR[dimension]
            values = [
                (getattr(base, attr), getattr(mod, attr))
                for base, mod in pairs
                if getattr(base, attr) == getattr(base, attr)  # drop NaN
                and getattr(mod, attr) == getattr(mod, attr)
            ]
            if not values:
                continue
            diffs = [m - b for b, m in values]
            delta = statistics.median(diffs) if delta_agg == "median" else statistics.mean(diffs)
            result = wilcoxon_signed_rank(values)
            rows.append(
                DeltaRow(
                    kind=kind,
                    dimension=dimension,
                    delta=float(delta),
                    stars=result.stars,
                    n_items=len(values),
                    p_value=result.p_value,
                )
            )
    return rows


def _kind_sort_key(kind: str):
    try:
        return (0, _KIND_ORDER.index(kind))
    except ValueError:
        return (1, kind)


def slice_table(
    scores: Sequence[ItemScore],
    features: Mapping[str, ItemFeatures],
    feature_name: str,
) -> SliceReport:
    """Median-split the paired items on one feature and rebuild the
    delta table per slice."""
    if feature_name not in FEATURE_NAMES:
        raise ValueError(f"unknown feature {feature_name!r}")
    by_kind = _pairings(scores)
    item_ids = sorted({base.item_id for pairs in by_kind.values() for base, _ in pairs})
    if not item_ids:
        raise ValueError("no paired items to slice")
    missing = [i for i in item_ids if i not in features]
    if missing:
        raise ValueError(f"features missing for items: {missing[:5]}")
    values = [float(getattr(features[i], feature_name)) for i in item_ids]
    threshold, labels = median_split(values)
    short_ids = {i for i, lab in zip(item_ids, labels) if lab == "short"}
    long_ids = {i for i, lab in zip(item_ids, labels) if lab == "long"}
    degenerate = not short_ids or not long_ids

    def restrict(keep: set[str]) -> list[ItemScore]:
        return [s for s in scores if s.item_id in keep]

    return SliceReport(
        feature=feature_name,
        threshold=threshold,
        rows_short=delta_table(restrict(short_ids)),
        rows_long=delta_table(restrict(long_ids)),
        degenerate=degenerate,
    )


_HEADER = ("kind", "dimension", "delta", "stars", "n")


def render_report(rows: Sequence[DeltaRow], format: str = "markdown") -> str:
    """Render rows deterministically as a markdown or CSV table."""
    table = [
        (r.kind, r.dimension, _fmt(r.delta), r.stars, str(r.n_items)) for r in rows
    ]
    if format == "csv":
        return _render_csv(_HEADER, table)
    if format == "markdown":
        return _render_markdown(_HEADER, table)
    raise ValueError(f"unknown format {format!r}")


def render_slice_report(report: SliceReport, format: str = "markdown") -> str:
    """Render a slice report; rows gain a leading slice column."""
    header = ("slice",) + _HEADER
    table = []
    for label, rows in (("short", report.rows_short), ("long", report.rows_long)):
        for r in rows:
            table.append((label, r.kind, r.dimension, _fmt(r.delta), r.stars, str(r.n_items)))
    title = f"{report.feature} split at {_fmt(report.threshold)}"
    if format == "csv":
        return _render_csv(header, table)
    if format == "markdown":
        doc = f"## {title}\n\n"
        if report.degenerate:
            doc += "_warning: degenerate split, one slice is empty_\n\n"
        return doc + _render_markdown(header, table)
    raise ValueError(f"unknown format {format!r}")


def _fmt(value: float) -> str:
    return f"{value:.4g}"


def _render_csv(header: Sequence[str], table: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(table)
    return buf.getvalue()


def _render_markdown(header: Sequence[str], table: Sequence[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in table:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"
