"""Asymmetric-bandwidth moving-sum statistic fields over a bandwidth-pair grid.

For a series ``x`` of length T and a bandwidth pair ``(g_l, g_r)`` the raw
statistic at position ``k`` (1-based, ``1 <= k < T``) contrasts the mean of
the ``g_l`` observations ending at ``k`` against the mean of the ``g_r``
observations starting at ``k + 1``::

    stat(k) = sqrt(g_l*g_r/(g_l+g_r)) * (mean(x[k-g_l:k]) - mean(x[k:k+g_r]))

(slice notation is 0-based, so position ``k`` doubles as the boundary index
of the left segment).  The statistic is defined for ``g_l <= k <= T - g_r``
and set to zero outside.  Per scale, positions that dominate the magnitude
field within their own open window ``(k - g_l, k + g_r)`` form the local
maximizer set; masking keeps the raw values inside the maximizers' windows
and zeroes everything else.  Summing the masked fields over all scales
gives the aggregate used for solution-path generation.

Everything is O(T) per scale: window means come from one shared prefix-sum
array and window maxima from a block prefix/suffix scan, so a full grid of
P bandwidth pairs costs O(P * T).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .signals import as_series

__all__ = [
    "BandwidthGrid",
    "build_grid",
    "prefix_sums",
    "mosum_stat",
    "sliding_window_max",
    "local_maximizers",
    "mask_field",
    "ScaleField",
    "compute_scale_field",
    "compute_fields",
    "aggregate",
    "dump_fields_csv",
]


@dataclass(frozen=True)
class BandwidthGrid:
    """Strictly increasing bandwidths and their ordered Cartesian product."""

    bandwidths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bandwidths", tuple(int(g) for g in self.bandwidths))
        g = self.bandwidths
        if not g:
            raise ValueError("bandwidth grid is empty")
        if any(v < 1 for v in g):
            raise ValueError("bandwidths must be >= 1")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("bandwidths must be strictly increasing (no duplicates)")

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """All (left, right) bandwidth pairs, row-major in grid order."""
        return tuple(itertools.product(self.bandwidths, repeat=2))

    def __len__(self) -> int:
        return len(self.bandwidths)


def build_grid(length: int, include_unit: bool = True, cap_divisor: int = 3) -> BandwidthGrid:
    """Fibonacci-type bandwidth grid 1, 2, 3, 5, 8, ... capped at ``length // cap_divisor``.

    ``include_unit=False`` drops bandwidth 1 (use it when window-local noise
    estimation matters; with the global noise estimate used in this package
    the unit scale is kept by default, which makes solution paths complete).
    Every retained pair satisfies ``g_l + g_r <= length`` so each scale has
    at least one valid position.
    """
    if length < 6:
        raise ValueError(f"series too short for a bandwidth grid: length={length}")
    if cap_divisor < 1:
        raise ValueError("cap_divisor must be >= 1")
    cap = length // cap_divisor
    fib = [1, 2]
    while fib[-1] + fib[-2] <= cap:
        fib.append(fib[-1] + fib[-2])
    bandwidths = [g for g in fib if g <= cap]
    if not include_unit:
        bandwidths = [g for g in bandwidths if g >= 2]
    if not bandwidths:
        raise ValueError(
            f"cap_divisor={cap_divisor} leaves no usable bandwidths for length={length}"
        )
    if 2 * max(bandwidths) > length:
        raise ValueError(
            f"largest bandwidth {max(bandwidths)} does not fit twice in length={length}; "
            "increase cap_divisor"
        )
    return BandwidthGrid(tuple(bandwidths))


def prefix_sums(x) -> np.ndarray:
    """Cumulative sums with a leading zero: ``S[k] = x[0] + ... + x[k-1]``."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("series is empty")
    out = np.empty(x.size + 1)
    out[0] = 0.0
    np.cumsum(x, out=out[1:])
    return out


def _stat_from_prefix(s: np.ndarray, g_l: int, g_r: int) -> np.ndarray:
    """Raw statistic array (index = position) from a shared prefix-sum array."""
    t_len = s.size - 1
    if g_l < 1 or g_r < 1:
        raise ValueError(f"bandwidths must be >= 1, got ({g_l}, {g_r})")
    if g_l + g_r > t_len:
        raise ValueError(
            f"bandwidth pair ({g_l}, {g_r}) exceeds series length {t_len}"
        )
    stat = np.zeros(t_len)
    k = np.arange(g_l, t_len - g_r + 1)
    left = (s[k] - s[k - g_l]) / g_l
    right = (s[k + g_r] - s[k]) / g_r
    stat[k] = np.sqrt(g_l * g_r / (g_l + g_r)) * (left - right)
    return stat


def mosum_stat(x, g_l: int, g_r: int) -> np.ndarray:
    """Raw moving-sum statistic field for one bandwidth pair.

    Returns an array of length T whose entry at index ``k`` is the statistic
    at position ``k``; entries outside ``g_l <= k <= T - g_r`` (including
    the unused index 0) are zero.
    """
    return _stat_from_prefix(prefix_sums(as_series(x)), g_l, g_r)


def sliding_window_max(values: np.ndarray, left: int, right: int) -> np.ndarray:
    """Per-index maximum of ``values[i-left : i+right+1]`` via block scans.

    Classic two-pass prefix/suffix-maximum algorithm: O(n) for any window
    size.  Out-of-range positions contribute -inf (i.e. nothing).
    """
    if left < 0 or right < 0:
        raise ValueError("window extents must be >= 0")
    n = values.size
    w = left + right + 1
    if w == 1 or n == 0:
        return values.copy()
    pad_to = -(-(n + left + right) // w) * w  # round up to a block multiple
    ext = np.full(pad_to, -np.inf)
    ext[left : left + n] = values
    blocks = ext.reshape(-1, w)
    pref = np.maximum.accumulate(blocks, axis=1).ravel()
    suff = np.maximum.accumulate(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    # window for index i spans ext[i : i+w], i.e. suffix of one block plus
    # prefix of the next
    i = np.arange(n)
    return np.maximum(suff[i], pref[i + w - 1])


def local_maximizers(field: np.ndarray, g_l: int, g_r: int) -> np.ndarray:
    """Positions whose magnitude dominates their own open window.

    A position ``k`` qualifies iff ``field[k] != 0`` and ``|field[k]|`` is
    >= every magnitude inside ``(k - g_l, k + g_r)``.  Ties on plateaus keep
    all tied positions.  At scale (1, 1) the window contains only ``k``
    itself, so every nonzero position qualifies.
    """
    absm = np.abs(np.asarray(field, dtype=float))
    win = sliding_window_max(absm, g_l - 1, g_r - 1)
    return np.flatnonzero((absm > 0) & (absm >= win))


def mask_field(field: np.ndarray, maximizers: np.ndarray, g_l: int, g_r: int) -> np.ndarray:
    """Keep raw values inside the maximizers' open windows, zero elsewhere."""
    field = np.asarray(field, dtype=float)
    n = field.size
    cover = np.zeros(n + 1)
    starts = np.maximum(np.asarray(maximizers, dtype=int) - g_l + 1, 0)
    stops = np.minimum(np.asarray(maximizers, dtype=int) + g_r, n)
    np.add.at(cover, starts, 1.0)
    np.add.at(cover, stops, -1.0)
    covered = np.cumsum(cover[:-1]) > 0
    return np.where(covered, field, 0.0)


@dataclass
class ScaleField:
    """Raw, maximizer and masked views of one bandwidth pair's statistic."""

    g_l: int
    g_r: int
    stat: np.ndarray
    maximizers: np.ndarray
    masked: np.ndarray


def compute_scale_field(x, g_l: int, g_r: int) -> ScaleField:
    """Raw statistic, local maximizers and masked field for one scale."""
    stat = mosum_stat(x, g_l, g_r)
    kset = local_maximizers(stat, g_l, g_r)
    return ScaleField(g_l, g_r, stat, kset, mask_field(stat, kset, g_l, g_r))


def compute_fields(x, grid: BandwidthGrid) -> list[ScaleField]:
    """Scale fields for every bandwidth pair, sharing one prefix-sum array."""
    x = as_series(x)
    s = prefix_sums(x)
    fields = []
    for g_l, g_r in grid.pairs:
        stat = _stat_from_prefix(s, g_l, g_r)
        kset = local_maximizers(stat, g_l, g_r)
        fields.append(ScaleField(g_l, g_r, stat, kset, mask_field(stat, kset, g_l, g_r)))
    return fields


def aggregate(fields: list[ScaleField]) -> np.ndarray:
    """Pointwise sum of the masked fields, reduced in the given scale order."""
    if not fields:
        raise ValueError("no scale fields to aggregate")
    lengths = {f.masked.size for f in fields}
    if len(lengths) != 1:
        raise ValueError(f"scale fields have mismatched lengths: {sorted(lengths)}")
    return np.sum(np.stack([f.masked for f in fields]), axis=0)


def dump_fields_csv(path, fields: list[ScaleField]) -> None:
    """Debug dump of all scale fields: one row per (position, scale)."""
    lines = ["k,g_l,g_r,m_tilde,m_masked"]
    for f in fields:
        for k in range(1, f.stat.size):
            lines.append(f"{k},{f.g_l},{f.g_r},{f.stat[k]!r},{f.masked[k]!r}")
    Path(path).write_text("\n".join(lines) + "\n")
