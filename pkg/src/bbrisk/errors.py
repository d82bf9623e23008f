"""Exception hierarchy shared across the package.

Parameter-validation errors map to CLI exit code 1, regime/branch errors
(asking a formula outside its domain) map to exit code 2.
"""


class BBRiskError(Exception):
    """Base class for all package errors."""


class ValidationError(BBRiskError):
    """Invalid parameter or input data."""


class InvalidHorizonError(ValidationError):
    pass


class InvalidBarrierError(ValidationError):
    pass


class InvalidGridError(ValidationError):
    pass


class InvalidTaxError(ValidationError):
    pass


class InvalidInputError(ValidationError):
    pass


class RegimeError(BBRiskError):
    """A formula was requested outside its domain of validity."""


class WrongBranchError(RegimeError):
    pass


class DivergentCaseError(RegimeError):
    """The requested quantity is degenerate (e.g. ruin probability 1)."""


class OutOfRegimeError(RegimeError):
    pass
