"""Lazy Lyndon-word enumeration and De Bruijn expansion sequences.

Prenecklaces of length ``m`` are visited in lexicographic order with the
successor map :func:`lyndon_successor`.  Emitting the Lyndon root of every
necklace visited gives the lexicographically least De Bruijn sequence of
span ``m``; starting the walk at a later prenecklace gives a suffix of it,
which keeps the distinct-window property.
"""

from __future__ import annotations

from typing import Iterator, Optional, Tuple

from .core import BitLike, BitWord, raw
from .errors import InvalidArgument, ParameterTooSmall


def lyndon_prefix_length(w: BitLike) -> int:
    """Length of the longest prefix of ``w`` that is a Lyndon word."""
    data = raw(w)
    if not data:
        return 0
    p = 1
    for t in range(1, len(data)):
        if data[t] > data[t - p]:
            p = t + 1
        elif data[t] < data[t - p]:
            break
    return p


def is_prenecklace(w: BitLike) -> bool:
    data = raw(w)
    p = 1
    for t in range(1, len(data)):
        if data[t] > data[t - p]:
            p = t + 1
        elif data[t] < data[t - p]:
            return False
    return True


def is_necklace(w: BitLike) -> bool:
    """True iff ``w`` is not larger than any of its rotations."""
    data = raw(w)
    return is_prenecklace(data) and (not data or len(data) % lyndon_prefix_length(data) == 0)


def is_lyndon(w: BitLike) -> bool:
    """True iff ``w`` is strictly smaller than every proper rotation."""
    data = raw(w)
    return bool(data) and is_prenecklace(data) and lyndon_prefix_length(data) == len(data)


def _successor(x: bytes) -> Optional[Tuple[bytes, int]]:
    j = x.rfind(0)
    if j < 0:
        return None
    root = x[:j] + b"\x01"
    return (root * (len(x) // len(root) + 1))[:len(x)], j + 1


def lyndon_successor(x: BitLike) -> BitWord:
    """Next prenecklace after ``x`` in lexicographic order.

    The last ``0`` of ``x`` becomes ``1``, everything after it is dropped
    and the result is extended periodically back to ``len(x)``.
    """
    nxt = _successor(raw(x))
    if nxt is None:
        raise InvalidArgument("the all-ones word has no successor")
    return BitWord._wrap(nxt[0])


def threshold_word(length: int, threshold_run: int) -> BitWord:
    """``(0^(threshold_run - 1) 1)`` repeated and cut to ``length`` bits."""
    if threshold_run < 1:
        raise InvalidArgument("threshold run must be positive")
    unit = b"\x00" * (threshold_run - 1) + b"\x01"
    return BitWord._wrap((unit * (length // threshold_run + 1))[:length])


def necklace_roots(
    length: int,
    start: Optional[BitLike] = None,
    *,
    include_ones: bool = True,
) -> Iterator[BitWord]:
    """Lyndon roots of the necklaces of ``length`` bits, in increasing order.

    ``start`` must be a prenecklace; roots are produced for necklaces that
    are ``>= start``.  Each root has a length dividing ``length``.  With
    ``include_ones=False`` the root ``1`` of the all-ones necklace is
    skipped.
    """
    if length < 1:
        raise InvalidArgument("necklace length must be positive")
    x = b"\x00" * length if start is None else raw(start)
    if len(x) != length:
        raise InvalidArgument(f"start word must have {length} bits")
    if not is_prenecklace(x):
        raise InvalidArgument("start word must be a prenecklace")
    p = lyndon_prefix_length(x)
    while True:
        if length % p == 0 and (include_ones or x.count(0)):
            yield BitWord._wrap(x[:p])
        nxt = _successor(x)
        if nxt is None:
            return
        x, p = nxt


def lyndon_words(length: int) -> Iterator[BitWord]:
    """Necklace representatives of full length in order (the classic listing).

    This is every necklace of ``length`` bits written out in full, periodic
    ones included, so that ``0^length`` and ``1^length`` appear.
    """
    x = b"\x00" * length
    p = 1
    while True:
        if length % p == 0:
            yield BitWord._wrap(x)
        nxt = _successor(x)
        if nxt is None:
            return
        x, p = nxt


def de_bruijn(length: int) -> BitWord:
    """Lexicographically least binary De Bruijn sequence of span ``length`` (cyclic, ``2^length`` bits)."""
    return BitWord._wrap(b"".join(r.data for r in necklace_roots(length)))


def expansion_sequence(length: int, threshold_run: int, needed_bits: int) -> BitWord:
    """Concatenated Lyndon roots from the threshold on, at least ``needed_bits`` long.

    The result is a contiguous piece of a De Bruijn sequence of span
    ``length``, so its ``length``-windows are pairwise distinct, and it has
    no zero run longer than ``threshold_run - 1``.  The all-ones root is not
    used.
    """
    if needed_bits < 0:
        raise InvalidArgument("needed_bits must be non-negative")
    start = threshold_word(length, threshold_run)
    parts = []
    total = 0
    for root in necklace_roots(length, start, include_ones=False):
        if total >= needed_bits:
            break
        parts.append(root.data)
        total += len(root)
    if total < needed_bits:
        raise ParameterTooSmall(
            f"Lyndon enumeration of span {length} from threshold run {threshold_run} "
            f"yields only {total} of the {needed_bits} bits needed"
        )
    return BitWord._wrap(b"".join(parts))
