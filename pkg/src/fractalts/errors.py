"""Exception hierarchy shared by every module."""


class FractalTSError(Exception):
    """Base class for all errors raised by fractalts."""


class ParseError(FractalTSError):
    def __init__(self, row, column, token="", message=None):
        self.row = row
        self.column = column
        self.token = token
        if message is None:
            message = f"cannot parse {token!r} as a number"
        super().__init__(f"ParseError at row {row}, column {column!r}: {message}")


class NonMonotonicDates(FractalTSError):
    pass


class MissingLabels(FractalTSError):
    pass


class NoOverlap(FractalTSError):
    def __init__(self, message="no overlapping dates"):
        super().__init__(message)


class TooShort(FractalTSError):
    pass


class TauTooLarge(FractalTSError):
    pass


class DegenerateFit(FractalTSError):
    pass


class ZeroVarianceSegment(FractalTSError):
    def __init__(self, tau, index):
        self.tau = tau
        self.index = index
        super().__init__(
            f"segment {index} at tau={tau} has zero detrended variance; "
            "moments of order q <= 0 are undefined"
        )


class ConfigInvalid(FractalTSError):
    pass


class InsufficientPoints(FractalTSError):
    pass


class NonFiniteLog(FractalTSError):
    pass


class EmbeddingFailure(FractalTSError):
    pass


class InvalidGeneratorSpec(FractalTSError):
    pass


class LengthMismatch(FractalTSError):
    pass


class ZeroVariance(FractalTSError):
    def __init__(self, lag):
        self.lag = lag
        super().__init__(f"constant overlap window at lag {lag}")


class LagTooLarge(FractalTSError):
    pass
