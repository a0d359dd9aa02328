import six
import numpy as np
from functools import lru_cache
from abc import ABCMeta, abstractmethod
from sklearn.base import BaseEstimator
from sklearn.utils import Bunch
from sklearn.utils.validation import check_is_fitted
from survlearn.dataset.base import CovariateVector
from survlearn.exceptions import ConvergenceError, SchemaError
from survlearn.learn.optimizer import damped_newton
from survlearn.utils.backend import BackendContext, ModelBackend
from survlearn.utils.check import check_names_match
from survlearn.utils.config import FitConfig
from survlearn.utils.logging import get_logger

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def scale_cumulative_hazard(base, linear_predictor):
    """H = base * exp(eta), with H = 0 wherever base is 0 even if exp(eta)
    overflows."""
    base = np.asarray(base, dtype=float)
    with np.errstate(over='ignore', invalid='ignore'):
        relative = np.exp(linear_predictor)
        values = np.where(base > 0, base * relative, 0.0)
    return values if values.ndim else float(values)


@lru_cache(maxsize=5)
def create_ml_backend(output_path=None):
    """Create default model backend.

    Returns:
        model_backend (object): ModelBackend.
    """
    backend_context = BackendContext(merge_path=True,
                                     output_path=output_path)
    return ModelBackend(backend_context)


class SurvBaseLearn(six.with_metaclass(ABCMeta, BaseEstimator)):
    """Base class of the survlearn estimators.

    Subclasses implement ``_objective`` (value, gradient, hessian of the
    log-likelihood to maximize), ``_start_point`` and ``_store_fit``; the
    damped Newton loop, logging and the non-convergence contract live here.

    Args:
        config: FitConfig (default: None)
            Solver settings. If None, use the packaged defaults.
        backend: Backend object (default: None)
            ModelBackend providing the logger and artifact persistence.
            If None, use the default ModelBackend object.
        time_unit: str (default: None)
            Unit of the analysis time, recorded in the model artifact only.
    """
    model_type = None

    def __init__(self, config=None, backend=None, time_unit=None):
        self.config = config
        self.backend = backend
        self.time_unit = time_unit

    @property
    def ml_backend(self):
        return self.backend if self.backend is not None \
            else create_ml_backend()

    @property
    def logger(self):
        return get_logger(self.__class__.__name__)

    @property
    def fit_config(self):
        return self.config if self.config is not None \
            else FitConfig.from_env()

    @abstractmethod
    def _objective(self, cohort):
        """Return a callable beta -> (value, gradient, hessian)."""

    @abstractmethod
    def _start_point(self, cohort):
        pass

    @abstractmethod
    def _store_fit(self, cohort, result):
        pass

    @abstractmethod
    def to_dict(self):
        pass

    def _solve(self, cohort):
        config = self.fit_config
        self.covariate_names_ = tuple(cohort.covariate_names)
        self.time_unit_ = self.time_unit if self.time_unit is not None \
            else cohort.time_unit
        objective = self._objective(cohort)
        self.logger.info("Start fitting {} on {} subjects, covariates "
                         "{}.".format(self.__class__.__name__, len(cohort),
                                      list(self.covariate_names_)))
        try:
            result = damped_newton(objective, self._start_point(cohort),
                                   tol=config.tol, max_iter=config.max_iter,
                                   max_halving=config.max_halving,
                                   logger=self.logger)
        except ConvergenceError as err:
            value, gradient, hessian = objective(err.beta)
            self._store_fit(cohort, Bunch(
                beta=err.beta, log_likelihood=value, gradient=gradient,
                hessian=hessian, iterations=err.iterations, converged=False,
                history=[value]))
            err.model = self
            self.logger.warning("{} did not converge: {}".format(
                self.__class__.__name__, err))
            raise
        self._store_fit(cohort, result)
        self.logger.info("{} converged in {} iterations, final "
                         "log-likelihood {:.10g}.".format(
                             self.__class__.__name__, result.iterations,
                             result.log_likelihood))
        return self

    def check_profile(self, profile):
        """Accept a CovariateVector or a {name: value} mapping and return
        the values ordered as the model's covariates."""
        check_is_fitted(self, 'covariate_names_')
        if profile is None and not self.covariate_names_:
            return np.zeros(0)
        if isinstance(profile, CovariateVector):
            check_names_match(self.covariate_names_, profile.names)
            return np.asarray(profile.values, dtype=float)
        if isinstance(profile, dict):
            return CovariateVector.from_dict(
                profile, names=self.covariate_names_).values
        values = np.asarray(profile, dtype=float).ravel()
        if values.size != len(self.covariate_names_):
            raise ValueError("Profile has {} values, the model has {} "
                             "covariates.".format(values.size,
                                                  len(self.covariate_names_)))
        return values

    def coefficient(self, covariate_name):
        check_is_fitted(self, 'coef_')
        if covariate_name not in self.covariate_names_:
            raise SchemaError("Covariate {} is unknown. Possible values are "
                              "{}".format(covariate_name,
                                          list(self.covariate_names_)),
                              column=covariate_name)
        return float(self.coef_[self.covariate_names_.index(covariate_name)])

    def save(self, model_file):
        """Write the JSON model artifact through the model backend."""
        return self.ml_backend.save_model(self, model_file)
