"""On-disk bit-stream formats.

Text: ASCII ``0``/``1``; any whitespace is ignored.
Packed: an 8-byte little-endian unsigned bit count followed by the bits
packed MSB-first, the last byte zero-padded.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from .core import BitLike, BitWord, raw
from .errors import InvalidArgument

FORMATS = ("text", "packed")
_HEADER = struct.Struct("<Q")


def to_text(w: BitLike) -> str:
    return str(BitWord(w))


def from_text(text: str) -> BitWord:
    return BitWord(text)


def pack(w: BitLike) -> bytes:
    data = raw(w)
    body = np.packbits(np.frombuffer(data, dtype=np.uint8)).tobytes()
    return _HEADER.pack(len(data)) + body


def unpack(blob: bytes) -> BitWord:
    if len(blob) < _HEADER.size:
        raise InvalidArgument("packed bit stream is shorter than its header")
    (count,) = _HEADER.unpack_from(blob)
    body = np.frombuffer(blob, dtype=np.uint8, offset=_HEADER.size)
    if body.size != (count + 7) // 8:
        raise InvalidArgument(
            f"packed header announces {count} bits but the body holds {body.size} bytes"
        )
    bits = np.unpackbits(body)
    if bits[count:].any():
        raise InvalidArgument("packed bit stream has non-zero padding")
    return BitWord._wrap(bits[:count].tobytes())


def bytes_to_bits(payload: bytes) -> BitWord:
    """MSB-first expansion of raw bytes, eight bits per byte."""
    return BitWord._wrap(np.unpackbits(np.frombuffer(payload, dtype=np.uint8)).tobytes())


def bits_to_bytes(w: BitLike) -> bytes:
    """Inverse of :func:`bytes_to_bits`; a trailing partial byte is zero-padded."""
    return np.packbits(np.frombuffer(raw(w), dtype=np.uint8)).tobytes()


def encode(w: BitLike, fmt: str = "text") -> bytes:
    if fmt == "text":
        return (to_text(w) + "\n").encode("ascii")
    if fmt == "packed":
        return pack(w)
    raise InvalidArgument(f"unknown bit format {fmt!r}; expected one of {FORMATS}")


def decode(blob: bytes, fmt: str = "text") -> BitWord:
    if fmt == "text":
        try:
            return from_text(blob.decode("ascii"))
        except UnicodeDecodeError as exc:
            raise InvalidArgument("text bit streams must be ASCII") from exc
    if fmt == "packed":
        return unpack(blob)
    raise InvalidArgument(f"unknown bit format {fmt!r}; expected one of {FORMATS}")


def read_bits(source: Union[str, Path, BinaryIO], fmt: str = "text") -> BitWord:
    if hasattr(source, "read"):
        return decode(source.read(), fmt)
    return decode(Path(source).read_bytes(), fmt)


def write_bits(target: Union[str, Path, BinaryIO], w: BitLike, fmt: str = "text") -> None:
    blob = encode(w, fmt)
    if hasattr(target, "write"):
        target.write(blob)
    else:
        Path(target).write_bytes(blob)
