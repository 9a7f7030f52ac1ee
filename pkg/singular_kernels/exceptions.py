"""
Custom exception hierarchy for singular-kernels.

Every error raised by the numerical modules derives from KernelError so that
the CLI can render a message, an error code and a suggestion uniformly.
Non-convergence of a series is not an error: it is reported through
EvalResult.converged.
"""

import logging
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class KernelError(Exception):
    """
    Base exception for all singular-kernels operations.

    Carries a message, optional guidance for the user, a stable error code
    and a dictionary of context values.
    """

    def __init__(
        self,
        message: str,
        user_guidance: Optional[str] = None,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        """
        Initialize KernelError with enhanced error information.

        Args:
            message: The error message describing what went wrong
            user_guidance: Optional guidance on how to resolve the issue
            error_code: Optional error code for programmatic handling
            details: Optional dictionary with additional error context
        """
        super().__init__(message)
        self.message = message
        self.user_guidance = user_guidance
        self.error_code = error_code
        self.details = details or {}

        # Validation failures are routine inside scans, keep them at debug
        logger.debug(
            f"KernelError: {message}",
            extra={
                "error_code": error_code,
                "user_guidance": user_guidance,
                "details": self.details,
            },
        )

    def __str__(self) -> str:
        """Return formatted error message with user guidance."""
        result = self.message
        if self.user_guidance:
            result += f"\n\nSuggestion: {self.user_guidance}"
        return result

    def get_formatted_message(self) -> str:
        """Get a formatted error message suitable for CLI display."""
        lines = [f"Error: {self.message}"]

        if self.error_code:
            lines.append(f"Code: {self.error_code}")

        if self.user_guidance:
            lines.append(f"Suggestion: {self.user_guidance}")

        if self.details:
            lines.append("Details:")
            for key, value in self.details.items():
                lines.append(f"  {key}: {value}")

        return "\n".join(lines)


class DomainError(KernelError):
    """
    Raised when an argument lies outside the mathematical domain.

    Examples: |x| >= 1 for the Gauss series, sum |x_i| >= 1 for the direct
    Lauricella series, a non-positive Gamma argument, a point outside the
    half-space where the singular coordinates are positive.
    """

    def __init__(
        self,
        message: str,
        parameter: Optional[str] = None,
        value: Any = None,
        **kwargs,
    ):
        """
        Initialize DomainError with the offending argument.

        Args:
            message: The error message
            parameter: Name of the argument outside its domain
            value: The offending value
            **kwargs: Additional arguments passed to KernelError
        """
        details = kwargs.get("details", {})
        if parameter:
            details["parameter"] = parameter
        if value is not None:
            details["value"] = value

        kwargs["details"] = details
        super().__init__(message, **kwargs)


class SingularPointError(DomainError):
    """Raised when a fundamental solution is evaluated at its pole x = x0."""

    pass


class ParameterError(KernelError):
    """
    Raised for invalid parameters.

    This includes a denominator parameter that is a non-positive integer,
    alpha components outside (0, 1/2), mismatched vector lengths and
    delta entries other than 0 or 1.
    """

    def __init__(
        self,
        message: str,
        parameter: Optional[str] = None,
        value: Any = None,
        **kwargs,
    ):
        details = kwargs.get("details", {})
        if parameter:
            details["parameter"] = parameter
        if value is not None:
            details["value"] = value

        kwargs["details"] = details
        super().__init__(message, **kwargs)


class UserInputError(KernelError):
    """
    Raised for command-line input validation errors.

    This includes malformed vectors, unknown suite names and options that
    contradict each other.
    """

    def __init__(
        self,
        message: str,
        input_value: Optional[str] = None,
        valid_options: Optional[list] = None,
        **kwargs,
    ):
        """
        Initialize UserInputError with input validation context.

        Args:
            message: The error message
            input_value: The invalid input value
            valid_options: List of valid options (if applicable)
            **kwargs: Additional arguments passed to KernelError
        """
        details = kwargs.get("details", {})
        if input_value is not None:
            details["input_value"] = input_value
        if valid_options:
            details["valid_options"] = valid_options

        kwargs["details"] = details
        super().__init__(message, **kwargs)


class ConfigError(KernelError):
    """
    Raised for run configuration errors.

    This includes TOML parsing errors and configuration file access issues.
    """

    def __init__(
        self,
        message: str,
        config_file: Optional[str] = None,
        config_key: Optional[str] = None,
        **kwargs,
    ):
        details = kwargs.get("details", {})
        if config_file:
            details["config_file"] = config_file
        if config_key:
            details["config_key"] = config_key

        kwargs["details"] = details
        super().__init__(message, **kwargs)


class ConfigValidationError(ConfigError):
    """Raised when a parsed configuration has inconsistent values."""

    pass


# Convenience functions for common error scenarios
def unit_disk_error(x: float) -> DomainError:
    """Create a standardized error for a Gauss argument with |x| >= 1."""
    return DomainError(
        f"argument outside |x|<1: x = {x!r}",
        user_guidance="The power series only converges for |x| < 1",
        error_code="GAUSS_DOMAIN",
        parameter="x",
        value=x,
    )


def lauricella_domain_error(abs_sum: float) -> DomainError:
    """Create a standardized error for sum |x_i| >= 1 in the direct series."""
    return DomainError(
        f"direct Lauricella series requires sum |x_i| < 1, got {abs_sum!r}",
        user_guidance="Use the decomposition method, which only needs |x_k| < 1",
        error_code="LAURICELLA_DOMAIN",
        parameter="x",
        value=abs_sum,
    )


def nonpositive_integer_error(name: str, value: float) -> ParameterError:
    """Create a standardized error for a denominator parameter in {0, -1, ...}."""
    return ParameterError(
        f"parameter {name} = {value!r} is a non-positive integer",
        user_guidance="Denominator parameters must avoid 0, -1, -2, ...",
        error_code="NONPOSITIVE_INTEGER",
        parameter=name,
        value=value,
    )


def singular_point_error(x: Any) -> SingularPointError:
    """Create a standardized error for evaluation at the source point."""
    return SingularPointError(
        "point coincides with the source point x0 (r = 0)",
        user_guidance="Fundamental solutions are singular at x = x0",
        error_code="SINGULAR_POINT",
        parameter="x",
        value=tuple(x),
    )


def half_space_error(index: int, value: float) -> DomainError:
    """Create a standardized error for a non-positive singular coordinate."""
    return DomainError(
        f"singular coordinate x_{index} = {value!r} must be positive",
        user_guidance="Points must lie in the region where x_1..x_n > 0",
        error_code="HALF_SPACE",
        parameter=f"x_{index}",
        value=value,
    )


def delta_length_error(expected: int, actual: int) -> ParameterError:
    """Create a standardized error for a delta vector of the wrong length."""
    return ParameterError(
        f"delta vector has length {actual}, expected {expected}",
        user_guidance="Give one 0/1 entry per singular coordinate",
        error_code="DELTA_LENGTH",
        parameter="delta",
        value=actual,
    )
