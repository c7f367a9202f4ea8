"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class AmbiguityError(ArithmeticError):
    """A floor or rounding decision cannot be made at the working precision."""

    def __init__(self, message, n=None, residual=None):
        super().__init__(message)
        self.n = n
        self.residual = residual


class PrecisionError(ArithmeticError):
    """Phase reduction lost more precision than the configured budget."""


class UnsupportedConfiguration(ValueError):
    """The requested configuration is outside what is implemented."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
