"""
Custom exception classes for error handling in the potential laboratory.

These exceptions are used throughout the core modules, the scenario pipeline and the 
CLI to provide clear error reporting for the different failure families: malformed 
domains and measures, unusable evaluation sets, violated hypotheses, solver state and 
scenario or report I/O.
"""
from typing import Optional


class SubGreenError(Exception):
    """
    Base class of every error raised by subgreen.

    Args:
        message (str): Description of the error.
        original_exception (Exception, optional): The original exception that caused 
            the error.
    """
    def __init__(
            self,
            message: str,
            original_exception: Optional[Exception] = None
        ) -> None:
        if original_exception is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} {original_exception}")
        self.original_exception: Exception | None = original_exception

class DomainError(SubGreenError):
    """
    Exception raised when a domain cannot be constructed (e.g. dimension below 3).
    """

class DomainMembershipError(SubGreenError):
    """
    Exception raised when a point handed to a kernel or potential lies outside the 
    domain.
    """

class ArgumentError(SubGreenError):
    """
    Exception raised for invalid numerical arguments (negative scale factors, exponents 
    out of range, empty supports, negative reweighting densities).
    """

class EvaluationError(SubGreenError):
    """
    Exception raised when an integrand evaluates to NaN.
    """

class CapabilityError(SubGreenError):
    """
    Exception raised when an evaluation set cannot support the requested operation, 
    e.g. an L^p(dx) norm on a free point cloud.
    """

class MeasureTypeError(SubGreenError):
    """
    Exception raised when an operation receives a measure representation it is not 
    defined for.
    """

class HypothesisError(SubGreenError):
    """
    Exception raised when a hypothesis of the existence theorem is violated.

    Args:
        message (str): Description of the error.
        hypothesis (str): The violated hypothesis, written out.
        original_exception (Exception, optional): The original exception that caused 
            the error.
    """
    def __init__(
            self,
            message: str,
            hypothesis: str,
            original_exception: Optional[Exception] = None
        ) -> None:
        super().__init__(f"{message} (violated hypothesis: {hypothesis})",
                         original_exception)
        self.hypothesis = hypothesis

class SolverStateError(SubGreenError):
    """
    Exception raised when a solver trace is used in a state it does not support, e.g. 
    verifying a trace that did not converge.
    """

class ScenarioError(SubGreenError):
    """
    Exception raised when reading or validating a scenario file fails.
    """

class ReportError(SubGreenError):
    """
    Exception raised when writing a report or profile table fails.
    """
