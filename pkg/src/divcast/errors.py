"""Exception hierarchy shared across the package."""


class DivcastError(Exception):
    """Base class for all package-specific errors."""


class SeriesTooShort(DivcastError):
    pass


class LengthMismatch(DivcastError):
    pass


class DegenerateScale(DivcastError):
    """In-sample seasonal-naive scale is zero; series cannot be scored."""


class DegenerateBenchmark(DivcastError):
    """Benchmark error is zero; relative cost is undefined."""


class NonpositiveHistoryMean(DivcastError):
    pass


class EmptyInput(DivcastError):
    pass


class FeatureLengthMismatch(DivcastError):
    pass


class WeightLengthMismatch(DivcastError):
    pass


class NonSimplexWeights(DivcastError):
    pass


class DegenerateTraining(DivcastError):
    """All error rows are constant; weights cannot be differentiated."""


class EmptyTrainingSet(DivcastError):
    pass


class UnsupportedK(DivcastError):
    """No critical value tabulated for this number of methods / alpha."""


class MisalignedSeries(DivcastError):
    pass


class IngestError(DivcastError):
    pass


class DuplicateId(IngestError):
    pass


class UnparsableValue(IngestError):
    pass


class MissingTestRow(IngestError):
    pass


class NonContiguousIndex(IngestError):
    pass


class ConfigError(DivcastError):
    pass


class ModelFormatError(DivcastError):
    pass
