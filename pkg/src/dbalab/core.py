"""Foundational types and the dynamic time warping machinery.

Point sequences are stored as float64 arrays of shape (m, d).  Warping
paths use 1-based index pairs in the external data model; the DTW dynamic
program itself runs over 0-based arrays in a jitted kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from dbalab import _kernels


class InputError(ValueError):
    """Invalid input to a library operation (dimension mismatch etc.)."""


class SizeError(InputError):
    """An enumeration guard was exceeded."""


@dataclass(eq=False)
class PointSequence:
    """An ordered sequence of points in R^d, stored as an (m, d) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError("point sequence must be a nonempty (m, d) array")
        if not np.all(np.isfinite(pts)):
            raise InputError("point sequence contains non-finite coordinates")
        self.points = pts

    @property
    def length(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.length

    def equals(self, other: "PointSequence") -> bool:
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points)
        )


# An average (center) sequence is just a point sequence of length k.
MeanSequence = PointSequence


@dataclass(eq=False)
class WarpingPath:
    """A monotone sequence of 1-based index pairs from (1,1) to (m1,m2).

    Stored as an (L, 2) int64 array.  Consecutive pairs advance each index
    by 0 or 1 and at least one index by 1.
    """

    pairs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pairs, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
            raise InputError("warping path must be a nonempty (L, 2) array")
        self.pairs = arr

    @classmethod
    def from_pairs(cls, pairs) -> "WarpingPath":
        return cls(np.array(pairs, dtype=np.int64))

    @property
    def length(self) -> int:
        return self.pairs.shape[0]

    def endpoints(self) -> tuple[int, int]:
        return int(self.pairs[-1, 0]), int(self.pairs[-1, 1])

    def equals(self, other: "WarpingPath") -> bool:
        return self.pairs.shape == other.pairs.shape and bool(
            np.array_equal(self.pairs, other.pairs)
        )


@dataclass(eq=False)
class Instance:
    """A set of n point sequences of equal length m and dimension d."""

    sequences: list[PointSequence]

    def __post_init__(self):
        if len(self.sequences) < 1:
            raise InputError("instance needs at least one sequence")
        m = self.sequences[0].length
        d = self.sequences[0].dim
        for s in self.sequences:
            if s.length != m or s.dim != d:
                raise InputError("all sequences must share length and dimension")

    @classmethod
    def from_arrays(cls, arrays) -> "Instance":
        return cls([PointSequence(a) for a in arrays])

    @property
    def n(self) -> int:
        return len(self.sequences)

    @property
    def m(self) -> int:
        return self.sequences[0].length

    @property
    def d(self) -> int:
        return self.sequences[0].dim


def _check_pair(a: PointSequence, b: PointSequence) -> None:
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


def dtw_distance(a: PointSequence, b: PointSequence) -> float:
    """DTW distance with squared Euclidean ground cost (no square root)."""
    _check_pair(a, b)
    acc = _kernels.dtw_table(a.points, b.points)
    return float(acc[-1, -1])


def optimal_warping_path(a: PointSequence, b: PointSequence) -> WarpingPath:
    """An optimal warping path between a and b.

    Backtracking ties are broken deterministically: diagonal first, then
    advancing the first index, then advancing the second.
    """
    _check_pair(a, b)
    acc = _kernels.dtw_table(a.points, b.points)
    ii, jj = _kernels.backtrack(a.points, b.points, acc)
    return WarpingPath(np.stack([ii + 1, jj + 1], axis=1))


def path_cost(a: PointSequence, b: PointSequence, w: WarpingPath) -> float:
    """Cost of a warping path, accumulated with exact (fsum) summation."""
    _check_pair(a, b)
    ii = w.pairs[:, 0] - 1
    jj = w.pairs[:, 1] - 1
    diff = a.points[ii] - b.points[jj]
    return math.fsum((diff * diff).sum(axis=1))


_ENUM_GUARD = 16


def enumerate_warping_paths(m1: int, m2: int) -> list[WarpingPath]:
    """All warping paths from (1,1) to (m1,m2), diagonal steps included."""
    if m1 < 1 or m2 < 1:
        raise InputError("endpoint lengths must be positive")
    if m1 + m2 > _ENUM_GUARD:
        raise SizeError(f"enumeration limited to m1+m2 <= {_ENUM_GUARD}")
    return [WarpingPath(np.array(p, dtype=np.int64)) for p in _enum_pairs(m1, m2)]


@lru_cache(maxsize=None)
def _enum_pairs(m1: int, m2: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if m1 == 1 and m2 == 1:
        return (((1, 1),),)
    out = []
    if m1 > 1:
        out.extend(p + ((m1, m2),) for p in _enum_pairs(m1 - 1, m2))
    if m2 > 1:
        out.extend(p + ((m1, m2),) for p in _enum_pairs(m1, m2 - 1))
    if m1 > 1 and m2 > 1:
        out.extend(p + ((m1, m2),) for p in _enum_pairs(m1 - 1, m2 - 1))
    return tuple(out)


def count_monotone_paths_no_diagonal(m: int, k: int) -> int:
    """Number of monotone grid paths without diagonal steps: C(m+k-2, m-1)."""
    if m < 1 or k < 1:
        raise InputError("grid dimensions must be positive")
    return math.comb(m + k - 2, m - 1)


@lru_cache(maxsize=None)
def count_warping_paths(m1: int, m2: int) -> int:
    """Total number of warping paths (Delannoy recurrence), exact integer."""
    if m1 < 1 or m2 < 1:
        raise InputError("endpoint lengths must be positive")
    if m1 == 1 or m2 == 1:
        return 1
    return (
        count_warping_paths(m1 - 1, m2)
        + count_warping_paths(m1, m2 - 1)
        + count_warping_paths(m1 - 1, m2 - 1)
    )


def validate_warping_path(w: WarpingPath, m1: int, m2: int) -> bool:
    """True iff w is a valid warping path from (1,1) to (m1,m2)."""
    p = w.pairs
    if p[0, 0] != 1 or p[0, 1] != 1:
        return False
    if p[-1, 0] != m1 or p[-1, 1] != m2:
        return False
    di = np.diff(p[:, 0])
    dj = np.diff(p[:, 1])
    if np.any(di < 0) or np.any(di > 1) or np.any(dj < 0) or np.any(dj > 1):
        return False
    if np.any(di + dj < 1):
        return False
    return True
