"""Logistic regression for fixed-interval event probability and the
Poisson-regression survival model S(t|X) = exp(-t exp(b0 + b'X)).

Both are fitted by damped Newton from beta = 0 and carry an explicit
intercept; in the survival model the intercept is log(lambda0), the
constant baseline rate.
"""
import numpy as np
from scipy.special import expit
from sklearn.utils.validation import check_is_fitted
from survlearn.dataset.base import BinaryCohort, Cohort
from survlearn.dataset.validation import check_fit_ready
from survlearn.exceptions import DegenerateDataError
from survlearn.learn.base import SurvBaseLearn, scale_cumulative_hazard
from survlearn.learn.optimizer import standard_errors
from survlearn.utils.check import check_nonnegative

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def add_intercept(X):
    X = np.asarray(X, dtype=float)
    return np.column_stack([np.ones(X.shape[0]), X])


def logistic_loglik(beta, Z, y):
    """Bernoulli log-likelihood, gradient and Hessian in beta.

    Args:
        beta: (p + 1,) intercept first.
        Z: (n, p + 1) design with a leading column of ones.
        y: (n,) 0/1 outcomes.
    """
    eta = Z @ beta
    value = float(np.sum(y * eta - np.logaddexp(0.0, eta)))
    prob = expit(eta)
    gradient = Z.T @ (y - prob)
    hessian = -(Z * (prob * (1.0 - prob))[:, None]).T @ Z
    return value, gradient, hessian


def poisson_survival_loglik(beta, Z, times, events):
    """Exponential-time log-likelihood sum(d*eta - t*exp(eta)), i.e. the
    Poisson count likelihood with exposure offset log(t), up to a
    constant."""
    eta = Z @ beta
    mu = times * np.exp(eta)
    value = float(np.sum(events * eta - mu))
    gradient = Z.T @ (events - mu)
    hessian = -(Z * mu[:, None]).T @ Z
    return value, gradient, hessian


class BaseGlmModel(SurvBaseLearn):
    """Shared state of the two GLM families.

    Fitted attributes:
        intercept_ (float), coef_ (np.ndarray), converged_ (bool),
        log_likelihood_ (float), n_iter_ (int), hessian_, standard_errors_
        (intercept first), history_ (log-likelihood per accepted step).
    """
    family = None

    def _start_point(self, cohort):
        return np.zeros(cohort.n_covariates + 1)

    def _store_fit(self, cohort, result):
        beta = np.asarray(result.beta, dtype=float)
        self.intercept_ = float(beta[0])
        self.coef_ = beta[1:].copy()
        self.converged_ = bool(result.converged)
        self.log_likelihood_ = float(result.log_likelihood)
        self.n_iter_ = int(result.iterations)
        self.hessian_ = np.asarray(result.hessian)
        self.standard_errors_ = standard_errors(self.hessian_)
        self.history_ = list(result.history)

    def linear_predictor(self, profile):
        """b0 + b'x for one profile."""
        check_is_fitted(self, 'coef_')
        x = self.check_profile(profile)
        return float(self.intercept_ + np.dot(self.coef_, x))

    def to_dict(self):
        check_is_fitted(self, 'coef_')
        return {'model_type': self.model_type,
                'family': self.family,
                'covariate_names': list(self.covariate_names_),
                'intercept': self.intercept_,
                'coefficients': dict(zip(self.covariate_names_,
                                         map(float, self.coef_))),
                'standard_errors': [None if np.isnan(x) else float(x)
                                    for x in self.standard_errors_],
                'converged': self.converged_,
                'log_likelihood': None if np.isnan(self.log_likelihood_)
                else self.log_likelihood_,
                'iterations': self.n_iter_,
                'time_unit': self.time_unit_}

    @classmethod
    def from_dict(cls, data):
        if data.get('family') != cls.family:
            raise ValueError("Artifact family {} does not match {}.".format(
                data.get('family'), cls.family))
        model = cls(time_unit=data.get('time_unit'))
        names = tuple(data['covariate_names'])
        model.covariate_names_ = names
        model.time_unit_ = data.get('time_unit')
        model.intercept_ = float(data['intercept'])
        model.coef_ = np.array([data['coefficients'][x] for x in names],
                               dtype=float)
        model.converged_ = bool(data['converged'])
        model.log_likelihood_ = np.nan if data['log_likelihood'] is None \
            else float(data['log_likelihood'])
        model.n_iter_ = int(data['iterations'])
        model.standard_errors_ = np.array(
            [np.nan if x is None else x
             for x in data.get('standard_errors') or [None] * (len(names) + 1)],
            dtype=float)
        model.history_ = [model.log_likelihood_]
        return model

    @classmethod
    def from_coefficients(cls, intercept, coefficients, time_unit=None):
        """A fitted model from known parameters.

        Args:
            intercept (float): b0.
            coefficients (dict): {covariate name: coefficient}.
        """
        names = list(coefficients)
        return cls.from_dict({
            'family': cls.family, 'covariate_names': names,
            'intercept': intercept, 'coefficients': dict(coefficients),
            'converged': True, 'log_likelihood': float('nan'),
            'iterations': 0, 'time_unit': time_unit})


class LogisticModel(BaseGlmModel):
    """Logistic regression of a fixed-interval 0/1 outcome.

    Models log(P/(1-P)) = b0 + b1 x1 + ... + bp xp.
    """
    model_type = 'logistic'
    family = 'logistic'

    def _objective(self, cohort):
        Z = add_intercept(cohort.X)
        y = np.asarray(cohort.outcomes, dtype=float)
        return lambda beta: logistic_loglik(beta, Z, y)

    def fit(self, cohort):
        """Fit on a BinaryCohort; see ``SurvBaseLearn._solve`` for the
        convergence contract (separable data raises ConvergenceError)."""
        if not isinstance(cohort, BinaryCohort):
            raise TypeError("LogisticModel needs a BinaryCohort, got "
                            "{}.".format(type(cohort).__name__))
        check_fit_ready(cohort)
        return self._solve(cohort)

    def predict_proba(self, profile):
        """P(Y = 1 | x) = 1 / (1 + exp(-(b0 + b'x)))."""
        return float(expit(self.linear_predictor(profile)))

    def predict_proba_many(self, X):
        check_is_fitted(self, 'coef_')
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return expit(self.intercept_ + X @ self.coef_)

    def odds_ratio(self, covariate_name):
        """exp(b_k): multiplicative change in the odds per unit of x_k."""
        return float(np.exp(self.coefficient(covariate_name)))

    def loglik_derivatives(self, beta, cohort):
        return self._objective(cohort)(np.asarray(beta, dtype=float))


class PoissonSurvivalModel(BaseGlmModel):
    """Exponential (constant hazard) regression, rate exp(b0 + b'x),
    fitted on right-censored follow-up times."""
    model_type = 'poisson_survival'
    family = 'poisson_survival'

    def _objective(self, cohort):
        Z = add_intercept(cohort.X)
        times = np.asarray(cohort.times, dtype=float)
        events = np.asarray(cohort.events, dtype=float)
        return lambda beta: poisson_survival_loglik(beta, Z, times, events)

    def fit(self, cohort):
        if not isinstance(cohort, Cohort):
            raise TypeError("PoissonSurvivalModel needs a Cohort, got "
                            "{}.".format(type(cohort).__name__))
        check_fit_ready(cohort)
        if not np.any(cohort.times > 0):
            raise DegenerateDataError("all follow-up times are zero")
        return self._solve(cohort)

    def rate(self, profile):
        """Hazard exp(b0 + b'x), constant in time."""
        with np.errstate(over='ignore'):
            return float(np.exp(self.linear_predictor(profile)))

    def cumulative_hazard(self, profile, times):
        return scale_cumulative_hazard(times, self.linear_predictor(profile))

    def survival_function(self, profile, times):
        return np.exp(-self.cumulative_hazard(profile, times))

    def extrapolated(self, times):
        # parametric: defined for every t >= 0
        return np.zeros(np.shape(times), dtype=bool)

    def baseline_rate(self):
        """exp(b0), the rate at x = 0."""
        check_is_fitted(self, 'coef_')
        return float(np.exp(self.intercept_))

    def loglik_derivatives(self, beta, cohort):
        return self._objective(cohort)(np.asarray(beta, dtype=float))


def fit_logistic(cohort, config=None):
    return LogisticModel(config=config, time_unit=cohort.time_unit).fit(cohort)


def predict_logistic(model, x):
    """Fixed-interval event probability; ``x`` is one profile or a 2-d
    array of profiles (returns an array)."""
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return model.predict_proba_many(x)
    return model.predict_proba(x)


def odds_ratio(model, covariate_name):
    return model.odds_ratio(covariate_name)


def fit_poisson_survival(cohort, config=None):
    return PoissonSurvivalModel(config=config,
                                time_unit=cohort.time_unit).fit(cohort)


def predict_poisson_survival(model, x, t):
    """exp(-t exp(b0 + b'x)); 1 at t = 0."""
    t = check_nonnegative(float(t), 'horizon')
    return float(np.exp(-model.cumulative_hazard(x, t)))
