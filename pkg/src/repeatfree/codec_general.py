"""Rate-approaching codec for window length ``k = log n + 10 L + 10``.

With ``L = floor(log2(log2 n))`` and ``k' = log n + 2L + 5`` the encoder

1. maps the payload onto a ``(2L)``-zero-constrained stream of
   ``input_len = n - (4L + 3)`` bits (:mod:`repeatfree.rll`),
2. removes repeated ``k'``-windows by overwriting the later copy with a
   pointer record ``1 0^(2L) 1 f(i) 1`` one bit shorter than the window,
3. appends the separator ``1 0^(4L+1) 1`` and an expansion sequence built
   from Lyndon words, and truncates to ``n`` bits.

The decoder cuts at the first separator, undoes the pointer records with a
validated backtracking search, and ranks the payload blocks back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Tuple

from .core import BitLike, BitWord, is_repeat_free, primal_identical_window, raw
from .errors import CorruptCodeword, InvalidArgument, ParameterTooSmall, ResourceLimit
from .lyndon import expansion_sequence
from .rll import PayloadLayout, RllSpace, _unrank, payload_rll_decode, payload_rll_encode, rll_rank


@dataclass(frozen=True)
class GeneralParams:
    """Derived lengths for codeword length ``n`` (a power of two).

    ``block_len`` is the payload block size of the run-length code; it
    defaults to ``4 log n`` bits.  ``whiten`` masks the payload stream with a
    fixed pseudo-random sequence (see :class:`~repeatfree.rll.PayloadLayout`).
    """

    n: int
    block_len: Optional[int] = None
    whiten: bool = True

    def __post_init__(self):
        n = self.n
        if n < 2 or n & (n - 1):
            raise InvalidArgument(f"codeword length must be a power of two, got {n}")
        if self.log_n < 4:
            raise ParameterTooSmall(f"n = {n} gives L < 2; need n >= 16")
        if self.input_len < self.k:
            raise ParameterTooSmall(
                f"n = {n} leaves {self.input_len} input bits, fewer than the window length {self.k}"
            )
        if self.pointer_space.cardinality < n:
            raise ParameterTooSmall(f"pointer space too small to address {n} positions")
        if self.block_len is not None and self.block_len < 3:
            raise InvalidArgument("block_len must be at least 3")

    @property
    def log_n(self) -> int:
        return self.n.bit_length() - 1

    @property
    def L(self) -> int:
        return self.log_n.bit_length() - 1

    @property
    def k_prime(self) -> int:
        return self.log_n + 2 * self.L + 5

    @property
    def k(self) -> int:
        return self.log_n + 10 * self.L + 10

    @property
    def input_len(self) -> int:
        return self.n - (4 * self.L + 3)

    @property
    def pointer_len(self) -> int:
        return self.log_n + 1

    @property
    def zero_run(self) -> int:
        """Forbidden zero run of the payload stream (``2L``)."""
        return 2 * self.L

    @property
    def pointer_space(self) -> RllSpace:
        return RllSpace(self.pointer_len, self.zero_run)

    @cached_property
    def layout(self) -> PayloadLayout:
        size = self.block_len if self.block_len is not None else 4 * self.log_n
        return PayloadLayout(self.input_len, size, self.zero_run, self.whiten)

    @property
    def payload_capacity(self) -> int:
        return self.layout.capacity

    @property
    def rate(self) -> float:
        return self.payload_capacity / self.n

    @property
    def separator(self) -> bytes:
        return b"\x01" + b"\x00" * (4 * self.L + 1) + b"\x01"

    @property
    def expansion_gap(self) -> bytes:
        return b"\x01" + b"\x00" * (4 * self.L) + b"\x01"


def _pointer_marker(i: int, p: GeneralParams) -> bytes:
    return b"\x01" + b"\x00" * p.zero_run + b"\x01" + _unrank(i, p.pointer_space) + b"\x01"


def _check_constrained(data: bytes, p: GeneralParams) -> None:
    if b"\x00" * p.zero_run in data:
        raise InvalidArgument(f"input contains a zero run of length {p.zero_run}")


def eliminate(w: BitLike, p: GeneralParams) -> BitWord:
    """Overwrite repeated ``k'``-windows with pointer records until none remain."""
    x = bytearray(raw(w))
    if len(x) != p.input_len:
        raise InvalidArgument(f"elimination input must be {p.input_len} bits, got {len(x)}")
    _check_constrained(bytes(x), p)
    kp = p.k_prime
    while True:
        pair = primal_identical_window(bytes(x), kp)
        if pair is None:
            return BitWord._wrap(bytes(x))
        i, j, _ = pair
        x[j:j + kp] = _pointer_marker(i, p)


def _restore_candidates(z: bytes, p: GeneralParams) -> List[Tuple[int, int, bytes]]:
    """Every marker-shaped record in ``z`` with the word it would restore, rightmost first."""
    kp, run = p.k_prime, p.zero_run
    frame = b"\x01" + b"\x00" * run + b"\x01"
    ptr_start = run + 2
    out = []
    j = z.find(frame)
    while j >= 0:
        end = j + kp - 1
        if end <= len(z) and z[end - 1] == 1:
            f = z[j + ptr_start:j + ptr_start + p.pointer_len]
            if f in p.pointer_space:
                i = rll_rank(f, p.pointer_space)
                if i < j:
                    if i + kp <= j:
                        window = z[i:i + kp]
                    else:
                        period = z[i:j]
                        window = (period * (kp // len(period) + 1))[:kp]
                    out.append((i, j, z[:j] + window + z[end:]))
        j = z.find(frame, j + 1)
    out.reverse()
    return out


def eliminate_inverse(z: BitLike, p: GeneralParams, *, budget: Optional[int] = None) -> BitWord:
    """Recover the elimination input from its output.

    Each candidate undo is accepted only if one elimination step on the
    restored word reproduces the current word, and dead ends backtrack.
    Two facts about the encoder prune the search: a record written at ``j``
    leaves every window starting at or before ``j - k'`` untouched, so the
    record undone before it lies at most ``k' - 1`` positions to its right;
    and a restored word reached twice with the same last position is the
    same subproblem.  ``budget`` caps the number of candidate checks
    (default ``64 * (steps + 1)``); running out raises
    :class:`~repeatfree.errors.ResourceLimit`.
    """
    data = raw(z)
    steps = p.input_len - len(data)
    if steps < 0:
        raise CorruptCodeword(f"information part longer than {p.input_len} bits")
    if len(data) >= p.k_prime and not is_repeat_free(data, p.k_prime):
        raise CorruptCodeword("information part still has a repeated window")
    if budget is None:
        budget = 64 * (steps + 1)
    kp = p.k_prime
    stack = [(data, 0, None, None)]
    seen = set()
    checks = 0
    while stack:
        current, depth, pending, last_j = stack.pop()
        if depth == steps:
            if b"\x00" * p.zero_run not in current:
                return BitWord._wrap(current)
            continue
        if pending is None:
            pending = _restore_candidates(current, p)
            if last_j is not None:
                pending = [c for c in pending if c[1] <= last_j + kp - 1]
        while pending:
            i, j, restored = pending.pop(0)
            if (restored, j) in seen:
                continue
            seen.add((restored, j))
            checks += 1
            if checks > budget:
                raise ResourceLimit(f"undo search exceeded {budget} candidate checks")
            pair = primal_identical_window(restored, kp)
            if pair is not None and pair.i == i and pair.j == j:
                stack.append((current, depth, pending, last_j))
                stack.append((restored, depth + 1, None, j))
                break
    raise CorruptCodeword("pointer records admit no consistent undo path")


@lru_cache(maxsize=16)
def _expansion(p: GeneralParams) -> bytes:
    kp = p.k_prime
    vp = expansion_sequence(kp, p.zero_run, p.n).data
    gap = p.expansion_gap
    blocks = [vp[t:t + kp] for t in range(0, len(vp), kp)]
    return gap.join(blocks)


def build_expansion(p: GeneralParams, needed_bits: int) -> BitWord:
    """Lyndon-word sequence ``v'`` of at least ``needed_bits`` bits for ``p``."""
    return expansion_sequence(p.k_prime, p.zero_run, needed_bits)


def insert_v_markers(vp: BitLike, p: GeneralParams) -> BitWord:
    """Separate consecutive ``k'``-blocks of ``vp`` with ``1 0^(4L) 1``."""
    data = raw(vp)
    kp = p.k_prime
    blocks = [data[t:t + kp] for t in range(0, len(data), kp)]
    return BitWord._wrap(p.expansion_gap.join(blocks))


def encode_general(data: BitLike, p: GeneralParams) -> BitWord:
    """Encode up to ``p.payload_capacity`` bits into an ``n``-bit ``k``-repeat-free word."""
    stream = payload_rll_encode(data, p.layout)
    return assemble(eliminate(stream, p), p)


def assemble(reduced: BitLike, p: GeneralParams) -> BitWord:
    """Append the separator and the expansion sequence to an elimination output, cut to ``n``."""
    word = raw(reduced) + p.separator
    if len(word) > p.n:
        raise InvalidArgument(f"reduced word of {len(word) - len(p.separator)} bits leaves no room for the separator")
    word += _expansion(p)[:p.n - len(word)]
    if len(word) != p.n:
        raise ParameterTooSmall("expansion sequence too short to fill the codeword")
    return BitWord._wrap(word)


def decode_general(c: BitLike, p: GeneralParams) -> BitWord:
    data = raw(c)
    if len(data) != p.n:
        raise CorruptCodeword(f"codeword must be {p.n} bits, got {len(data)}")
    cut = data.find(p.separator)
    if cut < 0:
        raise CorruptCodeword("separator not found")
    stream = eliminate_inverse(data[:cut], p)
    return payload_rll_decode(stream, p.layout)
