"""Exception hierarchy.

Every error raised by the package derives from :class:`GearAcousticsError`.
Input-data problems additionally derive from :class:`DataError` so the
command line can map them to exit code 2.
"""


class GearAcousticsError(Exception):
    pass


class DataError(GearAcousticsError):
    """Bad or inconsistent input data."""


class UnsupportedChannels(DataError):
    pass


class UnsupportedEncoding(DataError):
    pass


class CorruptHeader(DataError):
    pass


class IoFailure(DataError):
    pass


class InvalidSpec(GearAcousticsError, ValueError):
    pass


class InvalidConfig(GearAcousticsError, ValueError):
    pass


class InvalidCutoffs(GearAcousticsError, ValueError):
    pass


class InvalidManifest(DataError, ValueError):
    pass


class SignalTooShort(DataError, ValueError):
    pass


class SeriesTooShort(DataError, ValueError):
    pass


class SpectrumTooNarrow(DataError, ValueError):
    pass


class ZeroMean(DataError, ValueError):
    pass


class TooFewValues(DataError, ValueError):
    pass


class DegenerateVariance(DataError, ValueError):
    pass


class EmptyTrainingSet(DataError, ValueError):
    pass


class DimensionMismatch(DataError, ValueError):
    pass


class SingleClassInput(DataError, ValueError):
    pass


class DegenerateInput(DataError, ValueError):
    pass
