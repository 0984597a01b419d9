"""Exception types raised across the package."""


class HDCRocketError(Exception):
    """Base class for all package errors."""


class InputTooShort(HDCRocketError, ValueError):
    pass


class EmptyDataset(HDCRocketError, ValueError):
    pass


class DilationExceedsLength(HDCRocketError, ValueError):
    pass


class LengthMismatch(HDCRocketError, ValueError):
    pass


class MissingEncoding(HDCRocketError, ValueError):
    pass


class DegenerateLabels(HDCRocketError, ValueError):
    pass


class DimensionMismatch(HDCRocketError, ValueError):
    pass


class InsufficientSamples(HDCRocketError, ValueError):
    pass


class RaggedRows(HDCRocketError, ValueError):
    pass


class UnparseableValue(HDCRocketError, ValueError):
    pass


class EmptyFile(HDCRocketError, ValueError):
    pass


class StratificationImpossible(HDCRocketError, ValueError):
    pass


class VersionMismatch(HDCRocketError, ValueError):
    pass


class CorruptFile(HDCRocketError, ValueError):
    pass
