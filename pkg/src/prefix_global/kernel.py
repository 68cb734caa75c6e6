"""Block-sparse forward attention for the structured patterns.

The kernels never materialize the full l x l score grid for a sparse pattern.
Queries are processed in fixed-height row bands; each band scores only the
key columns its pattern can reach (a contiguous window span, plus the prefix
columns or the side-key bank where the pattern has them). The full pattern is
the deliberate exception: it has no sparsity to exploit, so it allocates the
whole grid in one block, and its instrumented buffer size is the baseline the
sparse patterns are measured against.

Within a band, out-of-set positions are assigned -inf before the row max, so
their weights are exactly 0.0 and a key outside a query's allowed set cannot
change that query's output even at the bit level.

Execution is sequential over bands with a fixed reduction order per row, so
outputs are deterministic and independent of any thread-count setting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numcore import ShapeError, as_matrix
from .patterns import AttentionPattern, PatternError, PatternKind

ROW_BLOCK = 128  # band height; bounds every sparse score buffer at 128 rows


@dataclass
class KernelStats:
    """Score-buffer instrumentation. peak_score_elements is the element count
    of the widest score block materialized at any one time."""

    peak_score_elements: int = 0
    score_blocks: int = 0
    _sizes: list = field(default_factory=list, repr=False)

    def record(self, n_elements: int) -> None:
        self.score_blocks += 1
        self._sizes.append(n_elements)
        if n_elements > self.peak_score_elements:
            self.peak_score_elements = n_elements


def _validate_qkv(q, k, v, l: int):
    q = as_matrix(q, "q")
    k = as_matrix(k, "k")
    v = as_matrix(v, "v")
    if not (q.shape[0] == k.shape[0] == v.shape[0] == l):
        raise ShapeError(
            f"q/k/v must each have l={l} rows, got {q.shape[0]}/{k.shape[0]}/{v.shape[0]}"
        )
    if q.shape[1] != k.shape[1]:
        raise ShapeError(f"q has d={q.shape[1]} but k has d={k.shape[1]}")
    if q.shape[1] < 1:
        raise ShapeError("d must be >= 1")
    return q, k, v


def _band_weights(scores: np.ndarray, allowed) -> np.ndarray:
    """Stable softmax over each row of a score band. `allowed` is a bool grid
    of the same shape, or None for an all-allowed band. Every band row is
    guaranteed at least one allowed key (self or a global), so the row max is
    always finite."""
    if allowed is not None:
        scores[~allowed] = -np.inf
    shifted = scores - scores.max(axis=1, keepdims=True)
    weights = np.exp(shifted)
    return weights / weights.sum(axis=1, keepdims=True)


def _bands(l: int):
    for b0 in range(0, l, ROW_BLOCK):
        yield b0, min(b0 + ROW_BLOCK, l)


def sparse_attention(
    q,
    k,
    v,
    pattern: AttentionPattern,
    scale_by_sqrt_d: bool = True,
    stats: KernelStats | None = None,
) -> np.ndarray:
    """Forward attention under a full, local, or prefix-global pattern.

    q, k, v: (l, d) / (l, d) / (l, d_v) float64. Returns (l, d_v). Equal to
    dense attention over the pattern's rendered mask, but score buffers cover
    only reachable columns. Pass a KernelStats to observe buffer sizes.
    """
    if pattern.kind is PatternKind.TGLOBAL:
        raise PatternError("tglobal patterns need tglobal_attention (side keys required)")
    l = pattern.l
    q, k, v = _validate_qkv(q, k, v, l)
    scale = math.sqrt(q.shape[1]) if scale_by_sqrt_d else 1.0
    out = np.empty((l, v.shape[1]), dtype=np.float64)

    if pattern.kind is PatternKind.FULL:
        scores = (q @ k.T) / scale
        if stats is not None:
            stats.record(scores.size)
        out[:] = _band_weights(scores, None) @ v
        return out

    r = pattern.r
    n_prefix = pattern.k if pattern.kind is PatternKind.PREFIX_GLOBAL else 0

    # prefix rows: global queries, banded against every key
    for b0, b1 in _bands(n_prefix):
        scores = (q[b0:b1] @ k.T) / scale
        if stats is not None:
            stats.record(scores.size)
        out[b0:b1] = _band_weights(scores, None) @ v

    # windowed rows: bands against the prefix columns plus the window span
    for b0, b1 in _bands(l - n_prefix):
        b0, b1 = b0 + n_prefix, b1 + n_prefix
        win_lo = max(n_prefix, b0 - r)  # columns below n_prefix come from the prefix side
        win_hi = min(l - 1, b1 - 1 + r)
        width = win_hi - win_lo + 1
        scores = np.empty((b1 - b0, n_prefix + width), dtype=np.float64)
        if stats is not None:
            stats.record(scores.size)
        if n_prefix:
            scores[:, :n_prefix] = q[b0:b1] @ k[:n_prefix].T
        scores[:, n_prefix:] = q[b0:b1] @ k[win_lo : win_hi + 1].T
        scores /= scale
        rows = np.arange(b0, b1)[:, None]
        cols = np.arange(win_lo, win_hi + 1)[None, :]
        allowed = np.empty((b1 - b0, n_prefix + width), dtype=bool)
        allowed[:, :n_prefix] = True
        allowed[:, n_prefix:] = np.abs(rows - cols) <= r
        weights = _band_weights(scores, allowed)
        block = weights[:, n_prefix:] @ v[win_lo : win_hi + 1]
        if n_prefix:
            block += weights[:, :n_prefix] @ v[:n_prefix]
        out[b0:b1] = block
    return out


def block_average(token_embeddings, block: int) -> np.ndarray:
    """Mean of each consecutive `block` rows; the final group may be shorter.
    Returns ceil(l / block) rows."""
    emb = as_matrix(token_embeddings, "token_embeddings")
    if block < 1:
        raise PatternError(f"block must be >= 1, got {block}")
    l = emb.shape[0]
    starts = np.arange(0, l, block)
    sums = np.add.reduceat(emb, starts, axis=0)
    counts = np.minimum(block, l - starts).astype(np.float64)
    return sums / counts[:, None]


def tglobal_attention(
    q,
    k,
    v,
    pattern: AttentionPattern,
    token_embeddings,
    key_proj,
    value_proj,
    scale_by_sqrt_d: bool = True,
    stats: KernelStats | None = None,
) -> np.ndarray:
    """Forward attention under a tglobal pattern.

    Side key/value slots are built on the fly: token_embeddings (l x d_model)
    are block-averaged, then pushed through key_proj (d_model x d) and
    value_proj (d_model x d_v), the same projections that produced k and v
    from the real tokens. Every query attends to its local window plus every
    side slot; side slots are never queries, so the output still has l rows.
    """
    if pattern.kind is not PatternKind.TGLOBAL:
        raise PatternError(f"expected a tglobal pattern, got {pattern.kind.value}")
    l, r = pattern.l, pattern.r
    q, k, v = _validate_qkv(q, k, v, l)
    emb = as_matrix(token_embeddings, "token_embeddings")
    if emb.shape[0] != l:
        raise ShapeError(f"token_embeddings must have l={l} rows, got {emb.shape[0]}")
    kp = as_matrix(key_proj, "key_proj")
    vp = as_matrix(value_proj, "value_proj")
    if kp.shape != (emb.shape[1], k.shape[1]):
        raise ShapeError(f"key_proj must be {(emb.shape[1], k.shape[1])}, got {kp.shape}")
    if vp.shape != (emb.shape[1], v.shape[1]):
        raise ShapeError(f"value_proj must be {(emb.shape[1], v.shape[1])}, got {vp.shape}")

    averaged = block_average(emb, pattern.block)
    side_k = averaged @ kp
    side_v = averaged @ vp
    side = side_k.shape[0]
    scale = math.sqrt(q.shape[1]) if scale_by_sqrt_d else 1.0
    out = np.empty((l, v.shape[1]), dtype=np.float64)

    for b0, b1 in _bands(l):
        win_lo = max(0, b0 - r)
        win_hi = min(l - 1, b1 - 1 + r)
        width = win_hi - win_lo + 1
        scores = np.empty((b1 - b0, width + side), dtype=np.float64)
        if stats is not None:
            stats.record(scores.size)
        scores[:, :width] = q[b0:b1] @ k[win_lo : win_hi + 1].T
        scores[:, width:] = q[b0:b1] @ side_k.T
        scores /= scale
        rows = np.arange(b0, b1)[:, None]
        cols = np.arange(win_lo, win_hi + 1)[None, :]
        allowed = np.empty((b1 - b0, width + side), dtype=bool)
        allowed[:, :width] = np.abs(rows - cols) <= r
        allowed[:, width:] = True
        weights = _band_weights(scores, allowed)
        out[b0:b1] = weights[:, :width] @ v[win_lo : win_hi + 1]
        out[b0:b1] += weights[:, width:] @ side_v
    return out
