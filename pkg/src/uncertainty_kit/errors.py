"""Exception types raised by uncertainty_kit."""


class UncertaintyKitError(ValueError):
    """Base class for all input/contract errors raised by this package."""


class DimensionError(UncertaintyKitError):
    pass


class NotHermitianError(UncertaintyKitError):
    pass


class NotPSDError(UncertaintyKitError):
    pass


class UnsupportedShapeError(UncertaintyKitError):
    pass


class DegenerateError(UncertaintyKitError):
    """A quantity is undefined because some standard deviation or overlap vanishes.

    For the Cauchy-Schwarz check this is the trivially-true branch: the
    inequality holds but the identity through the projector is not evaluated.
    """


class ConstraintError(UncertaintyKitError):
    """A supplied auxiliary vector/operator violates an orthogonality or norm constraint."""


class NonCommutingError(UncertaintyKitError):
    pass
