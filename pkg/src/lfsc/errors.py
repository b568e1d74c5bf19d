"""Exception hierarchy shared by the codec library."""


class CodecError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(CodecError):
    """Input values violate an operation's preconditions (non-finite, empty, zero-energy...)."""


class InvalidCodeError(CodecError):
    """A quantizer code or per-dimension index is outside its valid range."""


class ShapeError(CodecError):
    """Array dimensions do not match what the operation requires."""


class FormatError(CodecError):
    """A serialized container has a bad magic number or unsupported version."""


class ValidationError(CodecError):
    """A container parsed structurally but its contents fail validation."""


class TruncationError(CodecError):
    """A serialized payload is shorter than its header promises."""


class CorruptionError(CodecError):
    """Decoded payload content is internally inconsistent."""


class UnsupportedRateError(CodecError):
    """Audio sample rate differs from what the model was built for."""


class UnsupportedLayoutError(CodecError):
    """Audio channel layout is not mono."""


class LengthError(CodecError):
    """A requested length is incompatible with the available data."""


class UndefinedBandwidthError(CodecError):
    """Bandwidth estimation is undefined (signal carries no energy)."""
