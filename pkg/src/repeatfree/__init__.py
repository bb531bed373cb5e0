"""Encoders, decoders and analysis tools for repeat-free binary words.

A word is ``k``-repeat-free when each of its length-``k`` windows occurs at
most once, so it can be rebuilt from the multiset of its
``(k+1)``-windows.
"""

from .codec_general import GeneralParams, decode_general, encode_general
from .codec_k2 import K2Params, decode_k2, encode_k2
from .core import (
    BitWord,
    FrequencyTable,
    WindowPair,
    frequency,
    is_repeat_free,
    primal_identical_window,
)
from .errors import (
    CapacityExceeded,
    CorruptCodeword,
    InvalidArgument,
    NotReconstructible,
    ParameterTooSmall,
    RepeatFreeError,
    ResourceLimit,
)

__version__ = "0.1.0"

__all__ = [
    "BitWord",
    "CapacityExceeded",
    "CorruptCodeword",
    "FrequencyTable",
    "GeneralParams",
    "InvalidArgument",
    "K2Params",
    "NotReconstructible",
    "ParameterTooSmall",
    "RepeatFreeError",
    "ResourceLimit",
    "WindowPair",
    "decode_general",
    "decode_k2",
    "encode_general",
    "encode_k2",
    "frequency",
    "is_repeat_free",
    "primal_identical_window",
]
