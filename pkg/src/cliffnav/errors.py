"""Exception taxonomy. Each class maps to a CLI exit-code category."""


class CliffnavError(Exception):
    """Base class for all library errors."""


class ConfigError(CliffnavError):
    """Invalid scenario/profile configuration."""


class ParseError(CliffnavError):
    """Malformed input file; carries a line number when available."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OrderingError(CliffnavError):
    """Time stamps are not strictly increasing."""


class SignatureMismatch(CliffnavError):
    """Operands live in different Clifford algebras."""


class DomainError(CliffnavError):
    """Input outside the valid domain of an operation."""


class NumericalError(CliffnavError):
    """A numerical step failed (non-SPD covariance, singular innovation, ...)."""
