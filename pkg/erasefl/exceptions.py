"""
Exception hierarchy.

Every error carries a detail message and the process exit code the CLI
reports for it.
"""


class ErasureFLError(Exception):
    """Base error for the simulator."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigurationError(ErasureFLError):
    """Invalid or unusable experiment configuration."""

    exit_code = 2


class DomainError(ErasureFLError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 2


class SizeError(DomainError):
    """Problem too large for an exhaustive computation."""


class ContractViolation(ErasureFLError):
    """Caller broke the input contract of an aggregation step."""
