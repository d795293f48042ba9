"""Exception hierarchy shared by all ngt modules."""


class NGTError(ValueError):
    """Base class for every error raised by ngt."""


class InvalidRangeError(NGTError):
    pass


class AllZeroFieldError(NGTError):
    pass


class GridMismatchError(NGTError):
    pass


class ClassMismatchError(NGTError):
    pass


class NotInvertibleError(NGTError):
    pass


class BelowFloorError(NGTError):
    pass


class InvalidParamsError(NGTError):
    pass


class NonPositiveDiagonalError(NGTError):
    pass


class BadWeightsError(NGTError):
    pass


class TrajectoryTooShortError(NGTError):
    pass


class ConfigError(NGTError):
    """Bad experiment configuration (missing/unknown key, wrong type)."""
