"""Solution-path generation from masked multiscale statistic fields.

The path orders change-point candidates by importance.  Each iteration
takes the global magnitude maximizer of the aggregate field, records it
together with its strongest scale, then removes every local-maximizer
window (across all scales) that conflicts with the chosen position, and
updates the aggregate incrementally.  The loop ends when the aggregate is
identically zero; with the unit scale in the grid that means every
position ends up on the path, i.e. the path is complete.

Pruning uses the window-swap identity: a maximizer ``m`` of scale
``(g_l, g_r)`` lies in ``(k - g_r, k + g_l)`` exactly when ``k`` lies in
``m``'s own window ``(m - g_l, m + g_r)``, so the extracted position's
aggregate value is guaranteed to drop to zero and no location can repeat.

Incremental aggregate updates accumulate float rounding residue, so when
an argmax lands on a position with no conflicting maximizer left (which
can only be residue), the aggregate is refreshed exactly from the masked
fields before deciding termination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .mosum import ScaleField, aggregate

__all__ = ["PathEntry", "SolutionPath", "generate_path", "path_depth"]


@dataclass(frozen=True)
class PathEntry:
    """One extracted candidate: position, importance, winning scale, order."""

    location: int
    importance: float
    g_l: int
    g_r: int
    iteration: int

    def to_json(self) -> dict:
        return {
            "k": self.location,
            "importance": self.importance,
            "g_l": self.g_l,
            "g_r": self.g_r,
            "iter": self.iteration,
        }


@dataclass
class SolutionPath:
    """Ordered candidate list (extraction order) plus termination evidence."""

    entries: list[PathEntry]
    n_iterations: int
    final_v_max: float

    def __len__(self) -> int:
        return len(self.entries)

    def locations(self) -> np.ndarray:
        return np.array([e.location for e in self.entries], dtype=int)

    def importances(self) -> np.ndarray:
        return np.array([e.importance for e in self.entries])

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    @classmethod
    def from_json(cls, items: list[dict]) -> "SolutionPath":
        entries = [
            PathEntry(int(d["k"]), float(d["importance"]), int(d["g_l"]), int(d["g_r"]), int(d["iter"]))
            for d in items
        ]
        return cls(entries=entries, n_iterations=len(entries), final_v_max=0.0)

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


def path_depth(path: SolutionPath) -> int:
    """Number of candidates on the path."""
    return len(path.entries)


def _scale_order(fields: list[ScaleField]) -> list[int]:
    # Winning-scale ties break toward the smallest g_l + g_r, then the
    # smallest g_l; ordering the rows once lets argmax do the tie-breaking.
    return sorted(range(len(fields)), key=lambda i: (fields[i].g_l + fields[i].g_r, fields[i].g_l, fields[i].g_r))


def generate_path(
    fields: list[ScaleField],
    v: np.ndarray | None = None,
    use_aggregate_importance: bool = False,
    on_iteration=None,
) -> SolutionPath:
    """Extract the full candidate path from masked scale fields.

    Parameters
    ----------
    fields : list of ScaleField
        Masked statistic fields of one series (not modified).
    v : ndarray, optional
        Precomputed aggregate; recomputed (and length-checked) if omitted.
    use_aggregate_importance : bool
        Record ``|V(k)|`` instead of the winning scale's masked magnitude
        as the importance (off by default; kept for experimentation).
    on_iteration : callable, optional
        Diagnostics hook called after every iteration with
        ``(iteration, v, masked_stack)``; treat the arrays as read-only.
    """
    if not fields:
        raise ValueError("no scale fields given")
    order = _scale_order(fields)
    fields = [fields[i] for i in order]
    t_len = fields[0].stat.size
    if any(f.stat.size != t_len or f.masked.size != t_len for f in fields):
        raise ValueError("scale fields have mismatched lengths")

    stack = np.stack([f.masked for f in fields])  # mutated copy, row per scale
    if v is None:
        v = np.sum(stack, axis=0)
    else:
        v = np.asarray(v, dtype=float)
        if v.size != t_len:
            raise ValueError(f"aggregate length {v.size} != field length {t_len}")
        v = v.copy()

    lefts = np.array([f.g_l for f in fields])
    rights = np.array([f.g_r for f in fields])
    ksets = [np.asarray(f.maximizers, dtype=int) for f in fields]
    alive = [np.ones(k.size, dtype=bool) for k in ksets]

    entries: list[PathEntry] = []
    while True:
        k0 = int(np.argmax(np.abs(v)))  # ties resolve to the smallest position
        if v[k0] == 0.0:
            break

        # maximizers whose window covers k0, per scale
        conflicts = []
        for s, kset in enumerate(ksets):
            lo = np.searchsorted(kset, k0 - rights[s], side="right")
            hi = np.searchsorted(kset, k0 + lefts[s], side="left")
            idx = np.arange(lo, hi)[alive[s][lo:hi]]
            if idx.size:
                conflicts.append((s, idx))

        if not conflicts or not np.any(stack[:, k0]):
            # |v[k0]| is incremental-update residue: every contribution at
            # k0 is already pruned.  Refresh exactly and re-check the guard.
            v = np.sum(stack, axis=0)
            if not np.any(v):
                break
            continue

        s0 = int(np.argmax(np.abs(stack[:, k0])))  # rows pre-sorted for tie-breaks
        importance = float(abs(v[k0]) if use_aggregate_importance else abs(stack[s0, k0]))
        entries.append(
            PathEntry(
                location=k0,
                importance=importance,
                g_l=int(lefts[s0]),
                g_r=int(rights[s0]),
                iteration=len(entries),
            )
        )

        for s, idx in conflicts:
            g_l, g_r = lefts[s], rights[s]
            row = stack[s]
            for m in ksets[s][idx]:
                a = max(m - g_l + 1, 0)
                b = min(m + g_r, t_len)
                v[a:b] -= row[a:b]
                row[a:b] = 0.0
            alive[s][idx] = False

        if on_iteration is not None:
            on_iteration(len(entries) - 1, v, stack)

    final_v = np.sum(stack, axis=0)
    return SolutionPath(
        entries=entries,
        n_iterations=len(entries),
        final_v_max=float(np.max(np.abs(final_v))) if final_v.size else 0.0,
    )
