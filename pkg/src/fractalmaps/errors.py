"""Exception hierarchy shared by every fractalmaps module."""


class FractalMapsError(ValueError):
    """Base class for all data/validation errors raised by the toolkit."""


# map-scale arithmetic
class InvalidOrderError(FractalMapsError):
    pass


class NonIntegerRatioError(FractalMapsError):
    pass


class NonConstantRatioError(FractalMapsError):
    pass


# classification
class EmptySeriesError(FractalMapsError):
    pass


class TooManyClassesError(FractalMapsError):
    pass


class NonPositiveValueError(FractalMapsError):
    pass


# generators
class IterationCapError(FractalMapsError):
    pass


class InvalidApexHeightError(FractalMapsError):
    pass


class OverflowGuardError(FractalMapsError):
    pass


# dimension estimation
class YardstickTooLargeError(FractalMapsError):
    pass


class DegenerateFitError(FractalMapsError):
    pass


class EmptyGeometryError(FractalMapsError):
    pass


# generalization
class RatioMismatchError(FractalMapsError):
    pass


class InsufficientDepthError(FractalMapsError):
    pass


class TooManyLevelsDroppedError(FractalMapsError):
    pass


class EmptyInputError(FractalMapsError):
    pass


# io / rendering
class ParseError(FractalMapsError):
    """Malformed input document.

    ``line`` and ``column`` are 1-based when the failure has a text position;
    ``path`` locates schema violations inside an otherwise valid document.
    """

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path:
            where.append(path)
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnsupportedVersionError(ParseError):
    pass


class StyleLevelMismatchError(FractalMapsError):
    pass
