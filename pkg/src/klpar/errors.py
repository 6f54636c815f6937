"""Exception hierarchy shared by every module of the package."""


class KLError(Exception):
    """Base class for all errors raised by klpar."""


class ConfigurationError(KLError, ValueError):
    """Unsupported Coxeter family, rank, or other construction parameter."""


class PreconditionError(KLError, ValueError):
    """An operation was called with arguments violating its precondition."""


class MalformedInputError(KLError, ValueError):
    """Input data (a polynomial, an element string, ...) cannot be interpreted."""


class NotAQPolynomialError(KLError, ValueError):
    """A Laurent polynomial in v has no expression as a polynomial in q = v^-2."""


class UnsupportedOperationError(KLError, TypeError):
    """The operation is not defined for this Coxeter family."""


class InternalConsistencyError(KLError, RuntimeError):
    """Two routes that must agree did not; this always indicates a bug."""
