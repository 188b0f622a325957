"""Exception hierarchy shared by all cmdist modules.

Input-shaped problems (bad files, mismatched dimensions, capacity limits)
derive from :class:`InputError`; numerical failures (singular covariance,
inconsistent constraint systems) derive from :class:`NumericalError`.
The CLI maps these to exit codes 2 and 3 respectively.
"""


class CMDistError(Exception):
    """Base class for all cmdist errors."""


class InputError(CMDistError):
    """Invalid input data or configuration."""


class NumericalError(CMDistError):
    """Numerical failure during a distance computation."""


class FimiParseError(InputError):
    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ItemRangeError(InputError):
    """Item identifier outside the declared attribute range."""


class EmptyDatasetError(InputError):
    """Dataset with no transactions."""


class DimensionMismatchError(InputError):
    """Operands do not share the same attribute count."""


class CapacityError(InputError):
    """Sample space too large to enumerate."""


class BasisError(InputError):
    """Family is not antimonotonic where the parity basis requires it."""


class ValidationError(InputError):
    """Malformed values (NaN/Inf, bad sizes, invalid parameters)."""


class SingularCovarianceError(NumericalError):
    """Covariance matrix not numerically positive definite in strict mode."""


class InconsistentConstraintsError(NumericalError):
    """Affine constraint system has no solution within tolerance."""
