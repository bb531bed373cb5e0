"""Two-bit-redundancy codec for window length ``k = 2 log2(n) + 2``.

The encoder frames the payload as ``0 . w . 1 . 0^(log n + 1)`` and then
repeatedly

* removes the first copy of a repeated ``k``-window, prepending
  ``0 . b(i) . b(j)`` (the word shrinks by one bit), or
* removes a stray ``0^(log n + 1)`` run, prepending ``1 . b(i)`` (same
  length, higher weight),

until the word is repeat-free and the framing run is unique.  A word that
ends up shorter than ``n`` is padded with ``log n``-bit blocks chosen so that
no window repeats.  The decoder peels the records off the front in reverse.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    BitLike,
    BitWord,
    bits_to_int,
    find_zero_run,
    int_bits,
    is_repeat_free,
    primal_identical_window,
    raw,
    window_keys,
)
from .errors import CorruptCodeword, InvalidArgument


@dataclass(frozen=True)
class K2Params:
    n: int

    def __post_init__(self):
        n = self.n
        if n < 32 or n & (n - 1):
            raise InvalidArgument(f"k2 codeword length must be a power of two >= 32, got {n}")

    @property
    def log_n(self) -> int:
        return self.n.bit_length() - 1

    @property
    def k(self) -> int:
        return 2 * self.log_n + 2

    @property
    def payload_len(self) -> int:
        return self.n - 2


def _marker(p: K2Params) -> bytes:
    return b"\x01" + b"\x00" * (p.log_n + 1)


def _expansion_block(x: bytes, m: int) -> bytes:
    """Smallest ``m``-bit block that neither occurs in ``x`` nor could
    reappear straddling the end of ``x`` once appended."""
    forbidden = set(window_keys(x, m).tolist()) if len(x) >= m else set()
    for i in range(1, m):
        tail = x[-i:]
        forbidden.add(bits_to_int((tail * (m // i + 1))[:m]))
    for value in range(1 << m):
        if value not in forbidden:
            return int_bits(value, m)
    raise AssertionError("expansion found no admissible block; the forbidden set cannot cover all blocks")


def encode_k2(w: BitLike, p: K2Params, *, debug: bool = False) -> BitWord:
    """Encode ``n - 2`` payload bits into an ``n``-bit ``k``-repeat-free word."""
    data = raw(w)
    if len(data) != p.payload_len:
        raise InvalidArgument(f"k2 payload must be exactly {p.payload_len} bits, got {len(data)}")
    n, log_n, k = p.n, p.log_n, p.k
    run = log_n + 1
    marker = _marker(p)
    x = bytearray(b"\x00" + data + marker)
    height = (len(x), -x.count(1))

    while True:
        pair = primal_identical_window(bytes(x), k)
        if pair is not None:
            i, j, _ = pair
            if debug:
                assert j < n, f"window index {j} does not fit in {log_n} bits"
            del x[i:i + k]
            x[0:0] = b"\x00" + int_bits(i, log_n) + int_bits(j, log_n)
        else:
            i = find_zero_run(bytes(x), run, len(x) - 1)
            if i is None:
                break
            if debug:
                assert i < n, f"zero-run index {i} does not fit in {log_n} bits"
            del x[i:i + run]
            x[0:0] = b"\x01" + int_bits(i, log_n)
        if debug:
            assert x.endswith(marker), "framing marker was modified during elimination"
            new_height = (len(x), -x.count(1))
            assert new_height < height, "elimination made no progress"
            height = new_height

    if len(x) >= n:
        return BitWord._wrap(bytes(x[:n]))

    while len(x) < n:
        x += _expansion_block(bytes(x), log_n)
        if debug:
            assert is_repeat_free(bytes(x), k), "expansion block created a repeated window"
    return BitWord._wrap(bytes(x[:n]))


def decode_k2(c: BitLike, p: K2Params) -> BitWord:
    """Invert :func:`encode_k2`.

    The framing marker is kept at the end of the working buffer while the
    records are undone; a removed window may have overlapped the marker's
    leading ``1`` and the zeros after it.
    """
    data = raw(c)
    n, log_n, k = p.n, p.log_n, p.k
    if len(data) != n:
        raise CorruptCodeword(f"k2 codeword must be {n} bits, got {len(data)}")
    run = log_n + 1
    marker = _marker(p)

    cut = data.find(marker)
    if cut < 0:
        cut = data.rfind(b"\x01")
        if cut < 0:
            raise CorruptCodeword("codeword carries no framing 1")
    x = bytearray(data[:cut] + marker)
    tail = len(marker)

    for _ in range(n * (run + 1) + 1):
        size = len(x) - tail
        if size == 0 or size > n - 1:
            raise CorruptCodeword(f"information part has impossible length {size}")
        if x[0] == 1:
            if size < run:
                raise CorruptCodeword("truncated zero-run record")
            i = bits_to_int(x[1:run])
            del x[:run]
            if i > len(x) - tail:
                raise CorruptCodeword(f"zero-run position {i} out of range")
            x[i:i] = b"\x00" * run
        elif size < n - 1:
            head = 2 * log_n + 1
            if size < head:
                raise CorruptCodeword("truncated window record")
            i = bits_to_int(x[1:1 + log_n])
            j = bits_to_int(x[1 + log_n:head])
            if j <= i:
                raise CorruptCodeword(f"window record ({i}, {j}) is not increasing")
            if j - i >= k:
                u = bytes(x[j - 1:j - 1 + k])
            else:
                period = bytes(x[i + k - 1:j + k - 1])
                u = (period * k)[-k:] if len(period) == j - i else b""
            if len(u) != k:
                raise CorruptCodeword(f"window record ({i}, {j}) points past the word")
            del x[:head]
            if i > len(x) - tail:
                raise CorruptCodeword(f"window position {i} out of range")
            x[i:i] = u
        else:
            return BitWord._wrap(bytes(x[1:len(x) - tail]))
    raise CorruptCodeword("decoder did not terminate")
