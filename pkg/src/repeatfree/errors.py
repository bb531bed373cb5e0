"""Exception hierarchy shared by the codecs and analysis tools."""


class RepeatFreeError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class InvalidArgument(RepeatFreeError, ValueError):
    code = "invalid-argument"


class CorruptCodeword(RepeatFreeError, ValueError):
    """The input is not a codeword the decoder could have been given."""

    code = "corrupt-codeword"


class CapacityExceeded(RepeatFreeError, ValueError):
    code = "capacity-exceeded"

    def __init__(self, message: str, max_bits: int):
        super().__init__(message)
        self.max_bits = max_bits


class ParameterTooSmall(RepeatFreeError, ValueError):
    code = "parameter-too-small"


class ResourceLimit(RepeatFreeError):
    """A computation was asked to go beyond its supported size or search budget."""

    code = "resource-limit"


class NotReconstructible(RepeatFreeError, ValueError):
    code = "not-reconstructible"
