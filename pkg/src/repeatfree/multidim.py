"""Repeat-freeness for d-dimensional arrays with axis-aligned cube windows."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import FrequencyTable
from .errors import InvalidArgument, ResourceLimit

MAX_ENUMERATION_BITS = 25


@dataclass(frozen=True)
class NdArray:
    """A d-dimensional array over the alphabet ``{0, ..., q-1}``."""

    data: np.ndarray
    q: int = 2

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim < 1 or a.size == 0:
            raise InvalidArgument("arrays need at least one dimension and one cell")
        if self.q < 2:
            raise InvalidArgument("alphabet size q must be at least 2")
        if not np.issubdtype(a.dtype, np.integer):
            if not np.all(np.mod(a, 1) == 0):
                raise InvalidArgument("array symbols must be integers")
        if a.min() < 0 or a.max() >= self.q:
            raise InvalidArgument(f"array symbols must lie in [0, {self.q})")
        a = a.astype(np.uint8 if self.q <= 256 else np.int64)
        a.flags.writeable = False
        object.__setattr__(self, "data", a)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def d(self) -> int:
        return self.data.ndim

    @classmethod
    def parse(cls, text: str, dims: Sequence[int], q: int = 2) -> "NdArray":
        """Read rows of digits; blank lines separate consecutive 2-D slices.

        Every non-blank line is one row along the last axis.  Whitespace
        inside a row is ignored, so ``0 1 1`` and ``011`` are equivalent.
        """
        dims = tuple(dims)
        symbols: List[int] = []
        for line in text.splitlines():
            row = "".join(line.split())
            if not row:
                continue
            for ch in row:
                if not ch.isdigit():
                    raise InvalidArgument(f"grid rows may only contain digits, got {ch!r}")
                symbols.append(int(ch))
        if len(symbols) != math.prod(dims):
            raise InvalidArgument(
                f"grid holds {len(symbols)} symbols but dims {dims} need {math.prod(dims)}"
            )
        return cls(np.array(symbols).reshape(dims), q)


def _windows(w: NdArray, k: int) -> np.ndarray:
    if k < 1 or any(k > s for s in w.dims):
        raise InvalidArgument(f"window side {k} must be between 1 and every side of {w.dims}")
    view = sliding_window_view(w.data, (k,) * w.d)
    return view.reshape(-1, k ** w.d)


def md_frequency(w: NdArray, k: int) -> FrequencyTable:
    """Counts of every ``k``-cube, keyed by its row-major flattening."""
    flat = _windows(w, k)
    counts = Counter(tuple(row.tolist()) for row in flat)
    return FrequencyTable(window_length=k, counts=dict(counts), total=len(flat), dims=w.d)


def md_is_repeat_free(w: NdArray, k: int) -> bool:
    flat = _windows(w, k)
    return np.unique(flat, axis=0).shape[0] == flat.shape[0]


def md_count_repeat_free(n: int, d: int, k: int, q: int = 2) -> int:
    """Number of ``n^d`` arrays over ``q`` symbols with pairwise distinct ``k``-cubes.

    Cells are filled in row-major order; a cube is checked as soon as its
    last cell is placed, and branches with a repeat are cut.
    """
    if n < 1 or d < 1 or q < 2:
        raise InvalidArgument("need n >= 1, d >= 1 and q >= 2")
    if not 1 <= k <= n:
        raise InvalidArgument(f"window side must be in [1, {n}], got {k}")
    if n ** d * math.log2(q) > MAX_ENUMERATION_BITS:
        raise ResourceLimit(
            f"exhaustive count needs n^d * log2(q) <= {MAX_ENUMERATION_BITS}, got {n ** d * math.log2(q):.1f}"
        )
    shape = (n,) * d
    cells = n ** d
    strides = [n ** (d - 1 - a) for a in range(d)]
    offsets = [
        sum(c * s for c, s in zip(np.unravel_index(t, (k,) * d), strides))
        for t in range(k ** d)
    ]
    # closing[c]: flat offsets of the cube whose last cell is c, or None
    closing: List = []
    for c in range(cells):
        coord = np.unravel_index(c, shape)
        if all(x >= k - 1 for x in coord):
            corner = sum((x - (k - 1)) * s for x, s in zip(coord, strides))
            closing.append([corner + o for o in offsets])
        else:
            closing.append(None)

    grid = [0] * cells
    seen: set = set()

    def fill(c: int) -> int:
        if c == cells:
            return 1
        total = 0
        for a in range(q):
            grid[c] = a
            cube = closing[c]
            if cube is None:
                total += fill(c + 1)
                continue
            key = tuple(grid[t] for t in cube)
            if key in seen:
                continue
            seen.add(key)
            total += fill(c + 1)
            seen.discard(key)
        return total

    return fill(0)
