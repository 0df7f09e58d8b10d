"""Exception hierarchy shared across the package."""


class UmcCevError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(UmcCevError, ValueError):
    pass


class NumericalError(UmcCevError, ArithmeticError):
    pass


class DivergenceError(NumericalError):
    """A solver variable became non-finite."""

    def __init__(self, variable, iteration, view=None):
        self.variable = variable
        self.iteration = iteration
        self.view = view
        where = f"iteration {iteration}" + ("" if view is None else f", view {view}")
        super().__init__(f"non-finite values in {variable} at {where}")


class DatasetError(UmcCevError):
    pass


class MissingFileError(DatasetError, FileNotFoundError):
    pass


class ManifestParseError(DatasetError, ValueError):
    pass


class MatrixParseError(DatasetError, ValueError):
    pass


class DimensionMismatchError(DatasetError, ValueError):
    pass


class LabelRangeError(DatasetError, ValueError):
    pass
