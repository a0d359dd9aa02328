"""Exceptions raised by survlearn.

All input problems derive from ``ValueError`` so scripts can catch them in
one place; numerical failures of the solvers raise ``ConvergenceError``.
"""

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


class SchemaError(ValueError):
    """A mapped column or covariate name is missing or does not match."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class CohortParseError(ValueError):
    """A cell could not be parsed; ``row`` is the 1-based data row."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class CohortValidationError(ValueError):
    """A parsed value violates a record invariant (e.g. negative time)."""

    def __init__(self, message, row=None, findings=None):
        super().__init__(message)
        self.row = row
        self.findings = list(findings) if findings is not None else []


class DomainError(ValueError):
    """A distribution parameter lies outside its domain."""


class DegenerateDataError(ValueError):
    """The data carry no information for the requested fit."""


class SimulationSpecError(ValueError):
    """A simulation spec is invalid or its censoring target unreachable."""


class ConvergenceError(RuntimeError):
    """Damped Newton did not converge.

    Attributes:
        model: the estimator holding the last iterate, with
            ``converged_ == False``; None when raised by the bare solver.
        beta (np.ndarray): last iterate.
        log_likelihood (float): objective at the last iterate.
        iterations (int): number of Newton iterations performed.
    """

    def __init__(self, message, beta=None, log_likelihood=None,
                 iterations=None, model=None):
        super().__init__(message)
        self.beta = beta
        self.log_likelihood = log_likelihood
        self.iterations = iterations
        self.model = model
