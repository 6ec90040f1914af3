class CrossRecError(Exception):
    pass


class ConfigError(CrossRecError):
    """Raised when a run config or user setting fails validation"""
    pass


class EmptyDataError(CrossRecError):
    pass


class ShapeMismatchError(CrossRecError):
    pass


class InvalidRateError(CrossRecError, ValueError):
    """Raised when a dropout/corruption rate is outside [0, 1)"""
    pass


class LabelOutOfRangeError(CrossRecError, IndexError):
    pass


class MixedDomainBatchError(CrossRecError):
    pass


class NonDeterministicGraphError(CrossRecError):
    """Raised when a gradient check is asked to evaluate a graph that draws fresh randomness"""
    pass


class MissingMetricError(CrossRecError):
    pass


class SerializationError(CrossRecError):
    """Raised when a parameter dump has an unknown version or mismatching shapes"""
    pass
