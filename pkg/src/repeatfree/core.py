"""Bit-sequence primitives shared by the codecs and the analysis tools.

Words are stored one symbol per byte (values 0 and 1) inside an immutable
``bytes`` object.  That keeps slicing, concatenation and substring search in
C, and lets numpy view the same buffer without copying when window
fingerprints are needed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Optional, Union

import numpy as np

from .errors import InvalidArgument

_TO_SYMBOLS = bytes.maketrans(b"01", b"\x00\x01")
_TO_TEXT = bytes.maketrans(b"\x00\x01", b"01")

BitLike = Union["BitWord", str, bytes, bytearray, memoryview, np.ndarray, Iterable[int]]


def _check_symbols(data: bytes) -> bytes:
    if data.translate(None, b"\x00\x01"):
        raise InvalidArgument("bit words may only contain the symbols 0 and 1")
    return data


def _parse_text(text: str) -> bytes:
    compact = "".join(text.split())
    raw = compact.encode("ascii", errors="replace")
    if raw.translate(None, b"01"):
        raise InvalidArgument("bit text may only contain '0', '1' and whitespace")
    return raw.translate(_TO_SYMBOLS)


def raw(w: BitLike) -> bytes:
    """Return the symbol buffer behind ``w``, validating foreign inputs."""
    if isinstance(w, BitWord):
        return w._data
    if isinstance(w, bytes):
        return _check_symbols(w)
    return BitWord(w)._data


class BitWord:
    """An immutable finite binary word with 0-based positional indexing.

    Accepts text (``"0110"``, whitespace ignored), a buffer of 0/1 byte
    values, a numpy array or any iterable of ints.
    """

    __slots__ = ("_data",)

    def __init__(self, bits: BitLike = b""):
        if isinstance(bits, BitWord):
            data = bits._data
        elif isinstance(bits, str):
            data = _parse_text(bits)
        elif isinstance(bits, (bytes, bytearray, memoryview)):
            data = _check_symbols(bytes(bits))
        elif isinstance(bits, np.ndarray):
            if bits.size and (bits.min() < 0 or bits.max() > 1):
                raise InvalidArgument("bit arrays may only contain 0 and 1")
            data = bits.astype(np.uint8).tobytes()
        else:
            try:
                data = _check_symbols(bytes(int(b) for b in bits))
            except (TypeError, ValueError) as exc:
                raise InvalidArgument(f"cannot build a bit word from {bits!r}") from exc
        self._data = data

    @classmethod
    def _wrap(cls, data: bytes) -> "BitWord":
        # trusted constructor for buffers produced inside the package
        obj = cls.__new__(cls)
        obj._data = bytes(data)
        return obj

    @classmethod
    def zeros(cls, n: int) -> "BitWord":
        return cls._wrap(b"\x00" * n)

    @classmethod
    def ones(cls, n: int) -> "BitWord":
        return cls._wrap(b"\x01" * n)

    @property
    def data(self) -> bytes:
        return self._data

    @property
    def weight(self) -> int:
        return self._data.count(1)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self._data, dtype=np.uint8)

    def slice(self, start: int, length: int) -> "BitWord":
        if start < 0 or length < 0 or start + length > len(self._data):
            raise InvalidArgument(
                f"slice({start}, {length}) out of range for a word of length {len(self)}"
            )
        return BitWord._wrap(self._data[start:start + length])

    def __len__(self) -> int:
        return len(self._data)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitWord._wrap(self._data[index])
        return self._data[index]

    def __iter__(self) -> Iterator[int]:
        return iter(self._data)

    def __add__(self, other: BitLike) -> "BitWord":
        return BitWord._wrap(self._data + raw(other))

    def __radd__(self, other: BitLike) -> "BitWord":
        return BitWord._wrap(raw(other) + self._data)

    def __mul__(self, times: int) -> "BitWord":
        return BitWord._wrap(self._data * times)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitWord):
            return self._data == other._data
        if isinstance(other, (bytes, bytearray)):
            return self._data == other
        if isinstance(other, str):
            try:
                return self._data == _parse_text(other)
            except InvalidArgument:
                return False
        return NotImplemented

    def __lt__(self, other: "BitWord") -> bool:
        return self._data < raw(other)

    def __hash__(self) -> int:
        return hash(self._data)

    def __str__(self) -> str:
        return self._data.translate(_TO_TEXT).decode("ascii")

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 72:
            text = f"{text[:60]}...({len(self)} bits)"
        return f"BitWord('{text}')"


@dataclass(frozen=True)
class FrequencyTable:
    """Window counts of a word; ``frequency(u)`` is ``counts[u] / total``.

    For one-dimensional words the keys are :class:`BitWord` windows of length
    ``window_length``.  Multidimensional tables (``dims > 1``) key on the
    row-major flattening of each cube, a tuple of ``window_length ** dims``
    symbols.
    """

    window_length: int
    counts: Mapping[Hashable, int]
    total: int
    dims: int = field(default=1)

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise InvalidArgument("window counts do not sum to the number of windows")
        size = self.window_length ** self.dims
        if any(len(key) != size for key in self.counts):
            raise InvalidArgument(f"every key must hold {size} symbols")

    def frequency(self, window) -> Fraction:
        if self.dims == 1 and not isinstance(window, BitWord):
            window = BitWord(window)
        elif self.dims > 1 and not isinstance(window, tuple):
            window = tuple(np.asarray(window).ravel().tolist())
        return Fraction(self.counts.get(window, 0), self.total)

    @property
    def support(self) -> frozenset:
        return frozenset(key for key, c in self.counts.items() if c)

    @property
    def max_count(self) -> int:
        return max(self.counts.values(), default=0)


class WindowPair(NamedTuple):
    """Positions ``i < j`` whose length-``k`` windows are equal."""

    i: int
    j: int
    k: int


def _check_window(n: int, k: int) -> None:
    if k < 1:
        raise InvalidArgument(f"window length must be positive, got {k}")
    if k > n:
        raise InvalidArgument(f"window length {k} exceeds word length {n}")


def frequency(w: BitLike, k: int) -> FrequencyTable:
    data = raw(w)
    _check_window(len(data), k)
    counts = Counter(data[m:m + k] for m in range(len(data) - k + 1))
    return FrequencyTable(
        window_length=k,
        counts={BitWord._wrap(key): c for key, c in counts.items()},
        total=len(data) - k + 1,
    )


def _packed_windows(a: np.ndarray, width: int) -> np.ndarray:
    """Integer value of ``a[t:t+width]`` (big-endian) for every start ``t``.

    Built by binary doubling, so O(len(a) * log(width)) array work.
    """
    block = a.astype(np.uint64)
    blen = 1
    result = None
    rlen = 0
    remaining = width
    while remaining:
        if remaining & 1:
            if result is None:
                result, rlen = block, blen
            else:
                count = len(a) - rlen - blen + 1
                result = (result[:count] << np.uint64(blen)) | block[rlen:rlen + count]
                rlen += blen
        remaining >>= 1
        if remaining:
            count = len(a) - 2 * blen + 1
            block = (block[:count] << np.uint64(blen)) | block[blen:blen + count]
            blen *= 2
    return result


def window_keys(w: BitLike, k: int) -> np.ndarray:
    """Exact fingerprints of all ``len(w) - k + 1`` windows of length ``k``.

    Each window is packed into ``ceil(k / 64)`` unsigned 64-bit words, so two
    keys are equal exactly when the windows are equal.  Returns a 1-D array
    (one scalar key per window) whose dtype supports ``np.unique``.
    """
    data = raw(w)
    _check_window(len(data), k)
    a = np.frombuffer(data, dtype=np.uint8)
    m = len(a) - k + 1
    if k <= 64:
        return _packed_windows(a, k)[:m]
    cols = []
    for off in range(0, k, 64):
        width = min(64, k - off)
        cols.append(_packed_windows(a, width)[off:off + m])
    stacked = np.ascontiguousarray(np.stack(cols, axis=1))
    return stacked.view(np.dtype((np.void, 8 * len(cols)))).ravel()


def _first_occurrences(w: BitLike, k: int) -> np.ndarray:
    keys = window_keys(w, k)
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    return first[inverse.ravel()]


def is_repeat_free(w: BitLike, k: int) -> bool:
    """True iff every length-``k`` window of ``w`` occurs at most once."""
    keys = window_keys(w, k)
    return np.unique(keys).size == keys.size


def primal_identical_window(w: BitLike, k: int) -> Optional[WindowPair]:
    """The identical-window pair ``(i, j)`` with the smallest ``j``.

    Among the earlier copies of window ``j`` the smallest ``i`` is chosen.
    ``None`` when ``w`` is ``k``-repeat-free.
    """
    firsts = _first_occurrences(w, k)
    repeats = np.flatnonzero(firsts != np.arange(firsts.size))
    if not repeats.size:
        return None
    j = int(repeats[0])
    return WindowPair(int(firsts[j]), j, k)


def find_zero_run(w: BitLike, length: int, scan_limit: Optional[int] = None) -> Optional[int]:
    """Smallest ``i`` with ``w[i:i+length]`` all zeros and ``i + length <= scan_limit``."""
    data = raw(w)
    if length < 1:
        raise InvalidArgument("zero-run length must be positive")
    limit = len(data) if scan_limit is None else scan_limit
    pos = data.find(b"\x00" * length, 0, limit)
    return None if pos < 0 else pos


def max_zero_run(w: BitLike) -> int:
    data = raw(w)
    return max((len(run) for run in data.split(b"\x01")), default=0)


def circular_prefix(w: BitLike, m: int) -> BitWord:
    """Length-``m`` prefix of ``w`` repeated indefinitely."""
    data = raw(w)
    if not data:
        raise InvalidArgument("cannot repeat an empty word")
    return BitWord._wrap((data * (m // len(data) + 1))[:m])


def int_bits(i: int, width: int) -> bytes:
    """Big-endian fixed-width binary of ``i`` as a raw symbol buffer."""
    if i < 0 or i >= 1 << width:
        raise InvalidArgument(f"{i} does not fit in {width} bits")
    if width == 0:
        return b""
    return format(i, f"0{width}b").encode("ascii").translate(_TO_SYMBOLS)


def int_to_bits(i: int, width: int) -> BitWord:
    return BitWord._wrap(int_bits(i, width))


def bits_to_int(b: BitLike) -> int:
    data = raw(b)
    if not data:
        return 0
    return int(data.translate(_TO_TEXT), 2)
