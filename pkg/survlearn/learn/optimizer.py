"""Damped Newton maximization shared by the GLM and Cox estimators.

The objective returns (value, gradient, hessian) of a concave
log-likelihood. A full Newton step is halved until the objective does not
decrease, so accepted iterates have a non-decreasing log-likelihood.
"""
import numpy as np
import scipy.linalg
from sklearn.utils import Bunch
from survlearn.exceptions import ConvergenceError

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

MACHINE_EPSILON = np.finfo(float).eps


def _relative_change(new, old):
    return abs(new - old) / max(abs(old), MACHINE_EPSILON)


def _newton_direction(gradient, hessian):
    try:
        return scipy.linalg.solve(-hessian, gradient, assume_a='sym')
    except (np.linalg.LinAlgError, ValueError):
        return None


def _check_finite_optimum(gradient, hessian, beta, tol, failure, iteration):
    """The log-likelihood can flatten at machine precision while the
    coefficients still run off to infinity; the next Newton step tells the
    two apart."""
    direction = _newton_direction(gradient, hessian)
    if direction is None or np.any(
            np.abs(direction) > np.sqrt(tol) * (1.0 + np.abs(beta))):
        raise failure("Log-likelihood converged at iteration {} but the "
                      "coefficients are still moving; a coefficient may be "
                      "infinite (separation or monotone likelihood).".format(
                          iteration), iteration)


def damped_newton(objective, beta0, tol=1e-8, max_iter=100, max_halving=30,
                  logger=None):
    """Maximize ``objective`` starting from ``beta0``.

    Args:
        objective: callable beta -> (value, gradient, hessian).
        beta0 (array-like): start point.
        tol (float): stop when the relative log-likelihood change of an
            accepted step is below ``tol``.
        max_iter (int): maximum number of Newton iterations.
        max_halving (int): maximum number of step halvings per iteration.
        logger: optional logger for per-iteration DEBUG lines.

    Returns:
        Bunch with beta, log_likelihood, gradient, hessian, iterations,
        converged (always True) and history (log-likelihood of every
        accepted iterate, start point included).

    Raises:
        ConvergenceError: ``max_iter`` reached, singular Hessian, a
            non-finite objective, or diverging coefficients; carries the
            last accepted iterate.
    """
    beta = np.array(beta0, dtype=float)
    value, gradient, hessian = objective(beta)
    if not np.isfinite(value):
        raise ConvergenceError("Objective is not finite at the start point.",
                               beta=beta, log_likelihood=value, iterations=0)
    history = [value]

    def failure(message, iteration):
        return ConvergenceError(message, beta=beta, log_likelihood=value,
                                iterations=iteration)

    for iteration in range(1, max_iter + 1):
        if not np.any(gradient):
            # stationary point reached exactly
            return Bunch(beta=beta, log_likelihood=value, gradient=gradient,
                         hessian=hessian, iterations=iteration - 1,
                         converged=True, history=history)
        direction = _newton_direction(gradient, hessian)
        if direction is None or not np.all(np.isfinite(direction)):
            raise failure("Singular Hessian at iteration {}; the data may "
                          "be separable or a covariate perfectly orders the "
                          "events.".format(iteration), iteration)

        step = 1.0
        for n_halving in range(max_halving + 1):
            candidate = beta + step * direction
            new_value, new_gradient, new_hessian = objective(candidate)
            if np.isfinite(new_value) and new_value >= value:
                break
            step *= 0.5
        else:
            # no ascent at machine precision: at the optimum unless the
            # gradient says otherwise
            scale = max(1.0, abs(value))
            if np.max(np.abs(gradient)) <= 1e-6 * scale:
                if logger is not None:
                    logger.warning("Step halving exhausted at iteration {}, "
                                   "accepting current iterate.".format(
                                       iteration))
                return Bunch(beta=beta, log_likelihood=value,
                             gradient=gradient, hessian=hessian,
                             iterations=iteration, converged=True,
                             history=history)
            raise failure("Step halving exhausted after {} halvings at "
                          "iteration {}.".format(max_halving, iteration),
                          iteration)

        change = _relative_change(new_value, value)
        beta, value = candidate, new_value
        gradient, hessian = new_gradient, new_hessian
        history.append(value)
        if logger is not None:
            logger.debug("Iteration {:>3d}: log-likelihood {:.10g}, step {}, "
                         "relative change {:.3e}".format(
                             iteration, value, step, change))
        if change < tol:
            _check_finite_optimum(gradient, hessian, beta, tol, failure,
                                  iteration)
            return Bunch(beta=beta, log_likelihood=value, gradient=gradient,
                         hessian=hessian, iterations=iteration,
                         converged=True, history=history)

    raise failure("Damped Newton did not converge in {} iterations "
                  "(last log-likelihood {:.10g}, |beta| = {:.4g}).".format(
                      max_iter, value, np.linalg.norm(beta)), max_iter)


def standard_errors(hessian):
    """Square roots of the diagonal of the inverse negative Hessian; NaN
    where the Hessian is singular."""
    hessian = np.atleast_2d(hessian)
    if hessian.size == 0:
        return np.zeros(0)
    try:
        covariance = scipy.linalg.inv(-hessian)
    except (np.linalg.LinAlgError, ValueError):
        return np.full(hessian.shape[0], np.nan)
    diagonal = np.diag(covariance)
    return np.sqrt(np.where(diagonal >= 0, diagonal, np.nan))
