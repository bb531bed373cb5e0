"""Enumerative coding for words without long zero runs.

``RllSpace(m, l)`` is the set of length-``m`` binary words containing no
``0^l`` substring, ordered lexicographically.  :func:`rll_rank` and
:func:`rll_unrank` are the bijection between that set and
``range(cardinality)``.  :class:`PayloadLayout` builds a block code on top of
it that turns arbitrary data into a zero-run-limited stream.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Tuple

import numpy as np

from .core import BitLike, BitWord, bits_to_int, int_bits, raw
from .errors import CapacityExceeded, CorruptCodeword, InvalidArgument


@lru_cache(maxsize=256)
def _completions(length: int, forbidden_run: int) -> Tuple[Tuple[int, ...], ...]:
    # table[r][z]: valid ways to write r more bits after a trailing run of z zeros
    table = [tuple([1] * forbidden_run)]
    for _ in range(length):
        prev = table[-1]
        table.append(tuple(
            prev[0] + (prev[z + 1] if z + 1 < forbidden_run else 0)
            for z in range(forbidden_run)
        ))
    return tuple(table)


@dataclass(frozen=True)
class RllSpace:
    length: int
    forbidden_run: int

    def __post_init__(self):
        if self.length < 0 or self.forbidden_run < 1:
            raise InvalidArgument(
                f"invalid run-length space (length={self.length}, forbidden_run={self.forbidden_run})"
            )

    @property
    def max_zero_run(self) -> int:
        return self.forbidden_run - 1

    @cached_property
    def _table(self):
        return _completions(self.length, self.forbidden_run)

    @property
    def cardinality(self) -> int:
        return self._table[self.length][0]

    def __contains__(self, w) -> bool:
        data = raw(w)
        return len(data) == self.length and b"\x00" * self.forbidden_run not in data


def rll_unrank(i: int, space: RllSpace) -> BitWord:
    """The ``i``-th word of ``space`` in lexicographic order."""
    return BitWord._wrap(_unrank(i, space))


def _unrank(i: int, space: RllSpace) -> bytes:
    if not 0 <= i < space.cardinality:
        raise InvalidArgument(f"rank {i} outside [0, {space.cardinality})")
    table, l = space._table, space.forbidden_run
    out = bytearray()
    run = 0
    for remaining in range(space.length - 1, -1, -1):
        with_zero = table[remaining][run + 1] if run + 1 < l else 0
        if i < with_zero:
            out.append(0)
            run += 1
        else:
            i -= with_zero
            out.append(1)
            run = 0
    return bytes(out)


def rll_rank(w: BitLike, space: RllSpace) -> int:
    data = raw(w)
    if data not in space:
        raise InvalidArgument(
            f"word is not a length-{space.length} word free of 0^{space.forbidden_run}"
        )
    table, l = space._table, space.forbidden_run
    rank = 0
    run = 0
    for pos, bit in enumerate(data):
        remaining = space.length - 1 - pos
        if bit:
            if run + 1 < l:
                rank += table[remaining][run + 1]
            run = 0
        else:
            run += 1
    return rank


@lru_cache(maxsize=64)
def _keystream(length: int) -> bytes:
    # fixed pseudo-random mask; SHAKE output is stable across platforms and versions
    digest = hashlib.shake_128(b"repeatfree payload whitening").digest((length + 7) // 8)
    return np.unpackbits(np.frombuffer(digest, dtype=np.uint8))[:length].tobytes()


def _xor(a: bytes, b: bytes) -> bytes:
    return (np.frombuffer(a, dtype=np.uint8) ^ np.frombuffer(b, dtype=np.uint8)).tobytes()


@dataclass(frozen=True)
class _Block:
    length: int
    middle: RllSpace
    info_bits: int


@dataclass(frozen=True)
class PayloadLayout:
    """Block code mapping data onto a ``total_len``-bit stream free of ``0^forbidden_run``.

    The stream is cut into blocks of ``block_len`` bits (plus one shorter tail
    block).  Every block starts and ends with ``1`` and its middle is an
    element of the matching :class:`RllSpace`, so zero runs never cross a
    block boundary.  Each block carries ``floor(log2 |middle|)`` data bits.
    The first ``header_bits`` information bits record how many padding
    zeros follow the data.  With ``whiten`` set the information stream is
    XORed with a fixed pseudo-random mask before ranking, so that structured
    payloads (all zeros, periodic data) do not produce periodic streams.
    """

    total_len: int
    block_len: int
    forbidden_run: int
    whiten: bool = True

    def __post_init__(self):
        if self.block_len < 3:
            raise InvalidArgument("payload blocks need at least 3 bits")
        if self.total_len < 1:
            raise InvalidArgument("payload stream must be at least one bit long")

    @cached_property
    def blocks(self) -> List[_Block]:
        sizes = [self.block_len] * (self.total_len // self.block_len)
        if self.total_len % self.block_len:
            sizes.append(self.total_len % self.block_len)
        out = []
        for size in sizes:
            middle = RllSpace(max(size - 2, 0), self.forbidden_run)
            bits = middle.cardinality.bit_length() - 1 if size >= 2 else 0
            out.append(_Block(size, middle, bits))
        return out

    @property
    def info_bits(self) -> int:
        return sum(b.info_bits for b in self.blocks)

    @property
    def header_bits(self) -> int:
        return self.info_bits.bit_length()

    @property
    def capacity(self) -> int:
        """Largest payload, in bits, that fits the stream."""
        return max(self.info_bits - self.header_bits, 0)


def block_cardinality(length: int, forbidden_run: int) -> int:
    """Number of length-``length`` words that start and end with 1 and avoid ``0^forbidden_run``."""
    if length < 2:
        return 1 if length == 1 else 0
    return RllSpace(length - 2, forbidden_run).cardinality


def payload_rll_encode(data: BitLike, layout: PayloadLayout) -> BitWord:
    bits = raw(data)
    if len(bits) > layout.capacity:
        raise CapacityExceeded(
            f"payload of {len(bits)} bits exceeds the {layout.capacity}-bit capacity",
            layout.capacity,
        )
    pad = layout.capacity - len(bits)
    stream = int_bits(pad, layout.header_bits) + bits + b"\x00" * pad
    if layout.whiten:
        stream = _xor(stream, _keystream(len(stream)))
    out = bytearray()
    pos = 0
    for block in layout.blocks:
        if block.length == 1:
            out.append(1)
            continue
        value = bits_to_int(stream[pos:pos + block.info_bits])
        pos += block.info_bits
        out += b"\x01" + _unrank(value, block.middle) + b"\x01"
    return BitWord._wrap(bytes(out))


def payload_rll_decode(w: BitLike, layout: PayloadLayout) -> BitWord:
    data = raw(w)
    if len(data) != layout.total_len:
        raise CorruptCodeword(f"payload stream must be {layout.total_len} bits, got {len(data)}")
    stream = bytearray()
    pos = 0
    for block in layout.blocks:
        chunk = data[pos:pos + block.length]
        pos += block.length
        if chunk[0] != 1 or chunk[-1] != 1:
            raise CorruptCodeword("payload block is not framed by ones")
        if block.length == 1:
            continue
        middle = chunk[1:-1]
        if middle not in block.middle:
            raise CorruptCodeword("payload block violates the zero-run limit")
        value = rll_rank(middle, block.middle)
        if value >> block.info_bits:
            raise CorruptCodeword("payload block rank exceeds its information width")
        stream += int_bits(value, block.info_bits)
    stream = bytes(stream)
    if layout.whiten:
        stream = _xor(stream, _keystream(len(stream)))
    pad = bits_to_int(stream[:layout.header_bits])
    if pad > layout.capacity:
        raise CorruptCodeword(f"padding length {pad} exceeds capacity {layout.capacity}")
    start = layout.header_bits
    return BitWord._wrap(bytes(stream[start:start + layout.capacity - pad]))
