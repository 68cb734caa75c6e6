"""Attention cost accounting: query-key pairs per layer, closed form.

Two counts per pattern, both first-class:

- accounted_pairs: the budgeting convention used when patterns are compared
  by hand. Each non-global query is charged a fixed 2r-wide window with no
  clipping at the sequence edges and no deduplication against global keys;
  global keys (side bank, prefix) are charged in full.

    full:          l * l
    local:         true pair count (the convention adds nothing here)
    tglobal:       l * (2r + ceil(l / block))
    prefix-global: (l - k) * (2r + k)  +  k * l

- mask_nnz: the exact number of allowed pairs in the realized mask (windows
  clipped at the edges, prefix/window overlap deduplicated, self included).

The convention over-charges edge clipping and prefix/window overlap but omits
the self key, so the two counts can land on either side of each other in
degenerate corners (tiny r with a long tail of windowed rows). For
prefix-global with k >= r, mask_nnz <= accounted_pairs exactly when
l <= k + r*(r+1); at the reference configuration (k=512, r=127) that covers
every l up to 16,768, far past anything the comparison tables use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import AttentionPattern, PatternKind


def _window_total(l: int, r: int) -> int:
    """Sum over queries of the clipped window size |{j : |i-j| <= r}|."""
    i = np.arange(l, dtype=np.int64)
    lo = np.maximum(i - r, 0)
    hi = np.minimum(i + r, l - 1)
    return int((hi - lo + 1).sum())


def accounted_pairs(pattern: AttentionPattern) -> int:
    l = pattern.l
    if pattern.kind is PatternKind.FULL:
        return l * l
    if pattern.kind is PatternKind.LOCAL:
        return _window_total(l, pattern.r)
    if pattern.kind is PatternKind.TGLOBAL:
        return l * (2 * pattern.r + pattern.side_keys)
    k = pattern.k
    return (l - k) * (2 * pattern.r + k) + k * l


def mask_nnz(pattern: AttentionPattern) -> int:
    """Exact allowed-pair count, computed without materializing the mask."""
    l = pattern.l
    if pattern.kind is PatternKind.FULL:
        return l * l
    if pattern.kind is PatternKind.LOCAL:
        return _window_total(l, pattern.r)
    if pattern.kind is PatternKind.TGLOBAL:
        return _window_total(l, pattern.r) + l * pattern.side_keys
    k, r = pattern.k, pattern.r
    i = np.arange(k, l, dtype=np.int64)
    lo = np.maximum(i - r, 0)
    hi = np.minimum(i + r, l - 1)
    window = hi - lo + 1
    overlap = np.maximum(np.minimum(hi, k - 1) - lo + 1, 0)
    return k * l + int((window - overlap + k).sum())


@dataclass(frozen=True)
class CostReport:
    pattern: AttentionPattern
    accounted_pairs: int
    mask_nnz: int
    ratio_vs_full: float

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.describe(),
            "accounted_pairs": self.accounted_pairs,
            "mask_nnz": self.mask_nnz,
            "ratio_vs_full": self.ratio_vs_full,
        }


def report(pattern: AttentionPattern) -> CostReport:
    pairs = accounted_pairs(pattern)
    return CostReport(
        pattern=pattern,
        accounted_pairs=pairs,
        mask_nnz=mask_nnz(pattern),
        ratio_vs_full=pairs / (pattern.l * pattern.l),
    )


def compare(patterns: list[AttentionPattern]) -> list[CostReport]:
    """Cost reports sorted by (l, accounted_pairs). Mixed lengths stay
    explicit per row; ratios are always against full attention at the
    pattern's own l, never a silently shared denominator."""
    reports = [report(p) for p in patterns]
    reports.sort(key=lambda c: (c.pattern.l, c.accounted_pairs))
    return reports


_COLUMN_LABELS = {
    PatternKind.TGLOBAL: "TGlobal",
    PatternKind.PREFIX_GLOBAL: "Prefix Global",
    PatternKind.FULL: "Full",
    PatternKind.LOCAL: "Local",
}
_COLUMN_ORDER = [
    PatternKind.TGLOBAL,
    PatternKind.PREFIX_GLOBAL,
    PatternKind.FULL,
    PatternKind.LOCAL,
]


def render_table(reports: list[CostReport]) -> str:
    """Accounted pairs as text: one row per sequence length, one column per
    pattern kind, cells thousands-separated."""
    kinds = [k for k in _COLUMN_ORDER if any(c.pattern.kind is k for c in reports)]
    lengths = sorted({c.pattern.l for c in reports})
    cells = {(c.pattern.l, c.pattern.kind): c.accounted_pairs for c in reports}
    header = ["Input Length"] + [_COLUMN_LABELS[k] for k in kinds]
    body = []
    for l in lengths:
        row = [f"{l:,}"]
        for k in kinds:
            value = cells.get((l, k))
            row.append("-" if value is None else f"{value:,}")
        body.append(row)
    widths = [max(len(line[j]) for line in [header] + body) for j in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in [header] + body]
    return "\n".join(lines) + "\n"
