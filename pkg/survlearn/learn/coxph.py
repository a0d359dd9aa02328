"""Cox proportional hazards: partial-likelihood fitting with the Breslow
tie convention, the Breslow baseline cumulative hazard, and survival
prediction S(t|X) = exp(-H0(t) exp(b'X)).

Censored subjects stay in the risk sets while under observation and
contribute no event term.
"""
import numpy as np
from collections import namedtuple
from sklearn.utils.validation import check_is_fitted
from survlearn.dataset.base import Cohort
from survlearn.dataset.validation import check_fit_ready
from survlearn.exceptions import DegenerateDataError
from survlearn.learn.base import SurvBaseLearn, scale_cumulative_hazard
from survlearn.learn.optimizer import standard_errors
from survlearn.utils.check import check_nonnegative

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

TIES = 'breslow'

BaselineSurvival = namedtuple('BaselineSurvival', ['value', 'extrapolated'])


class RiskSetIndex(object):
    """Distinct event times, tie counts and risk sets of a cohort.

    Risk sets are nested, so they are kept implicitly: ``order`` sorts the
    subjects by follow-up time and the risk set of the i-th distinct event
    time is ``order[start[i]:]`` (every subject with time >= t_i).

    Attributes:
        distinct_event_times (np.ndarray): strictly increasing t_1 < ... < t_k.
        events_at (np.ndarray): d_i >= 1, events at each distinct time.
        order (np.ndarray): subject indices sorted by follow-up time.
        start (np.ndarray): first position in ``order`` at risk at t_i.
    """

    def __init__(self, times, events):
        times = np.asarray(times, dtype=float)
        events = np.asarray(events, dtype=bool)
        if not events.any():
            raise DegenerateDataError('no observed events')
        self.n_subjects = len(times)
        self.order = np.argsort(times, kind='mergesort')
        self.sorted_times = times[self.order]
        self.distinct_event_times, self.events_at = np.unique(
            times[events], return_counts=True)
        self.start = np.searchsorted(self.sorted_times,
                                     self.distinct_event_times, side='left')
        self.event_mask = events

    def __len__(self):
        return len(self.distinct_event_times)

    @property
    def risk_set_sizes(self):
        return self.n_subjects - self.start

    def at_risk(self, i):
        """Sorted subject indices at risk at the i-th distinct event time."""
        return np.sort(self.order[self.start[i]:])


def build_risk_sets(cohort):
    """Index the risk sets of a cohort; DegenerateDataError without
    events."""
    return RiskSetIndex(cohort.times, cohort.events)


def _suffix_sum(array):
    return np.cumsum(array[::-1], axis=0)[::-1]


def _log_denominators(eta, index):
    """log sum_{j in R(t_i)} exp(eta_j) for every distinct event time."""
    eta_sorted = eta[index.order]
    suffix_lse = np.logaddexp.accumulate(eta_sorted[::-1])[::-1]
    return suffix_lse[index.start]


def log_partial_likelihood(beta, index, cohort):
    """Breslow log partial likelihood
    sum_i [b'x_i - d_i log sum_{j in R(t_i)} exp(b'x_j)]."""
    eta = cohort.X @ np.asarray(beta, dtype=float)
    log_denominators = _log_denominators(eta, index)
    return float(np.sum(eta[index.event_mask]) -
                 np.sum(index.events_at * log_denominators))


def log_partial_likelihood_derivatives(beta, index, cohort):
    """Value, gradient and Hessian of the log partial likelihood."""
    X = cohort.X
    eta = X @ np.asarray(beta, dtype=float)
    value = float(np.sum(eta[index.event_mask]) -
                  np.sum(index.events_at * _log_denominators(eta, index)))

    X_sorted = X[index.order]
    eta_sorted = eta[index.order]
    # the shift cancels in every ratio below
    weights = np.exp(eta_sorted - eta_sorted.max())
    s0 = _suffix_sum(weights)[index.start]
    s1 = _suffix_sum(weights[:, None] * X_sorted)[index.start]
    s2 = _suffix_sum(weights[:, None, None] * X_sorted[:, :, None] *
                     X_sorted[:, None, :])[index.start]
    mean = s1 / s0[:, None]
    d = index.events_at.astype(float)

    gradient = X[index.event_mask].sum(axis=0) - (d[:, None] * mean).sum(axis=0)
    covariance = s2 / s0[:, None, None] - mean[:, :, None] * mean[:, None, :]
    hessian = -(d[:, None, None] * covariance).sum(axis=0)
    return value, gradient, hessian


class BaselineHazardTable(object):
    """Right-continuous step function H0(t) over the distinct event times.

    Args:
        times: strictly increasing event times.
        increments: positive jumps dH0(t_i).
        cumulative: prefix sums of ``increments``; computed when None.
    """

    def __init__(self, times, increments, cumulative=None):
        times = np.array(times, dtype=float)
        increments = np.array(increments, dtype=float)
        cumulative = np.cumsum(increments) if cumulative is None \
            else np.array(cumulative, dtype=float)
        if not (times.ndim == increments.ndim == cumulative.ndim == 1 and
                len(times) == len(increments) == len(cumulative) > 0):
            raise ValueError("Baseline table needs equally long, nonempty "
                             "times, increments and cumulative values.")
        if not np.all(np.isfinite(times)) or np.any(times < 0) or \
                np.any(np.diff(times) <= 0):
            raise ValueError("Baseline times must be nonnegative, finite "
                             "and strictly increasing.")
        if not np.all(np.isfinite(increments)) or np.any(increments <= 0):
            raise ValueError("Baseline increments must be positive and "
                             "finite.")
        if not np.all(np.isfinite(cumulative)) or cumulative[0] <= 0 or \
                np.any(np.diff(cumulative) <= 0):
            raise ValueError("Baseline cumulative hazard must be positive "
                             "and strictly increasing.")
        for array in (times, increments, cumulative):
            array.setflags(write=False)
        self.times = times
        self.increments = increments
        self.cumulative = cumulative

    @classmethod
    def from_cumulative(cls, times, cumulative):
        """Table from published (time, H0) rows."""
        cumulative = np.asarray(cumulative, dtype=float)
        return cls(times, np.diff(cumulative, prepend=0.0), cumulative)

    def __len__(self):
        return len(self.times)

    @property
    def last_time(self):
        return float(self.times[-1])

    def cumulative_hazard(self, t):
        """H0(t): 0 before the first event time, last value beyond the
        last one."""
        t = np.asarray(t, dtype=float)
        position = np.searchsorted(self.times, t, side='right') - 1
        values = np.where(position >= 0,
                          self.cumulative[np.maximum(position, 0)], 0.0)
        return values if values.ndim else float(values)

    def extrapolated(self, t):
        flags = np.asarray(t, dtype=float) > self.times[-1]
        return flags if flags.ndim else bool(flags)

    def survival(self, t):
        """S0(t) = exp(-H0(t))."""
        return np.exp(-self.cumulative_hazard(t))

    def first_time_reaching(self, target):
        """Smallest tabulated time with H0 >= target, or None."""
        position = np.searchsorted(self.cumulative, target, side='left')
        if position >= len(self.times):
            return None
        return float(self.times[position])

    def to_list(self):
        return [{'time': float(t), 'increment': float(i),
                 'cumulative': float(c)}
                for t, i, c in zip(self.times, self.increments,
                                   self.cumulative)]

    @classmethod
    def from_list(cls, entries):
        return cls([x['time'] for x in entries],
                   [x['increment'] for x in entries],
                   [x['cumulative'] for x in entries])


def breslow_baseline(beta, index, cohort):
    """dH0(t_i) = d_i / sum_{j in R(t_i)} exp(b'x_j), accumulated over the
    distinct event times."""
    eta = cohort.X @ np.asarray(beta, dtype=float)
    increments = index.events_at * np.exp(-_log_denominators(eta, index))
    return BaselineHazardTable(index.distinct_event_times, increments)


def baseline_survival(table, t, logger=None):
    """S0(t) with the extrapolation flag set beyond the last event time."""
    t = check_nonnegative(float(t), 'horizon')
    extrapolated = table.extrapolated(t)
    if extrapolated and logger is not None:
        logger.warning("t = {} is beyond the last event time {}; returning "
                       "the value at the last event time.".format(
                           t, table.last_time))
    return BaselineSurvival(float(table.survival(t)), extrapolated)


class CoxPHModel(SurvBaseLearn):
    """Cox proportional hazards model h(t|X) = h0(t) exp(b'X).

    Fitted attributes:
        coef_ (np.ndarray), baseline_ (BaselineHazardTable), converged_,
        log_partial_likelihood_, n_iter_, hessian_, standard_errors_,
        covariate_means_ (diagnostic only, prediction uses raw X),
        history_, n_subjects_, n_events_.
    """
    model_type = 'cox'

    def _objective(self, cohort):
        index = self.risk_sets_
        return lambda beta: log_partial_likelihood_derivatives(
            beta, index, cohort)

    def _start_point(self, cohort):
        return np.zeros(cohort.n_covariates)

    def fit(self, cohort):
        if not isinstance(cohort, Cohort):
            raise TypeError("CoxPHModel needs a Cohort, got {}.".format(
                type(cohort).__name__))
        check_fit_ready(cohort, require_covariates=True)
        self.risk_sets_ = build_risk_sets(cohort)
        return self._solve(cohort)

    def _store_fit(self, cohort, result):
        self.coef_ = np.asarray(result.beta, dtype=float).copy()
        self.converged_ = bool(result.converged)
        self.log_partial_likelihood_ = float(result.log_likelihood)
        self.n_iter_ = int(result.iterations)
        self.hessian_ = np.asarray(result.hessian)
        self.standard_errors_ = standard_errors(self.hessian_)
        self.history_ = list(result.history)
        self.covariate_means_ = cohort.X.mean(axis=0)
        self.n_subjects_ = len(cohort)
        self.n_events_ = cohort.n_events
        try:
            self.baseline_ = breslow_baseline(self.coef_, self.risk_sets_,
                                              cohort)
        except ValueError:
            if self.converged_:
                raise
            # a diverging iterate can under/overflow the increments
            self.baseline_ = None

    def linear_predictor(self, profile):
        """b'x, no centering."""
        check_is_fitted(self, 'coef_')
        return float(np.dot(self.coef_, self.check_profile(profile)))

    def relative_hazard(self, profile):
        with np.errstate(over='ignore'):
            return float(np.exp(self.linear_predictor(profile)))

    def _baseline(self):
        check_is_fitted(self, 'coef_')
        if self.baseline_ is None:
            raise DegenerateDataError("The model has no baseline hazard "
                                      "(fit did not converge).")
        return self.baseline_

    def cumulative_hazard(self, profile, times):
        """H(t|X) = H0(t) exp(b'X); 0 where H0(t) is 0."""
        return scale_cumulative_hazard(
            self._baseline().cumulative_hazard(times),
            self.linear_predictor(profile))

    def survival_function(self, profile, times):
        return np.exp(-self.cumulative_hazard(profile, times))

    def survival_from_baseline(self, profile, times):
        """S0(t) ** exp(b'X); algebraically equal to ``survival_function``."""
        return self._baseline().survival(times) ** \
            self.relative_hazard(profile)

    def extrapolated(self, times):
        return self._baseline().extrapolated(times)

    def hazard_ratio(self, covariate_name):
        return float(np.exp(self.coefficient(covariate_name)))

    def loglik_derivatives(self, beta, cohort):
        return log_partial_likelihood_derivatives(
            np.asarray(beta, dtype=float), build_risk_sets(cohort), cohort)

    def to_dict(self):
        check_is_fitted(self, 'coef_')
        names = list(self.covariate_names_)
        return {'model_type': self.model_type,
                'covariate_names': names,
                'coefficients': dict(zip(names, map(float, self.coef_))),
                'standard_errors': {
                    name: None if np.isnan(se) else float(se)
                    for name, se in zip(names, self.standard_errors_)},
                'covariate_means': None if self.covariate_means_ is None
                else dict(zip(names, map(float, self.covariate_means_))),
                'baseline': [] if self.baseline_ is None
                else self.baseline_.to_list(),
                'converged': self.converged_,
                'log_partial_likelihood':
                    None if np.isnan(self.log_partial_likelihood_)
                    else self.log_partial_likelihood_,
                'iterations': self.n_iter_,
                'time_unit': self.time_unit_,
                'ties': TIES}

    @classmethod
    def from_dict(cls, data):
        if data.get('ties', TIES) != TIES:
            raise ValueError("ties {} is unknown. Possible values are: "
                             "['{}']".format(data.get('ties'), TIES))
        model = cls(time_unit=data.get('time_unit'))
        names = tuple(data['covariate_names'])
        model.covariate_names_ = names
        model.time_unit_ = data.get('time_unit')
        model.coef_ = np.array([data['coefficients'][x] for x in names],
                               dtype=float)
        errors = data.get('standard_errors') or {}
        model.standard_errors_ = np.array(
            [np.nan if errors.get(x) is None else errors[x] for x in names],
            dtype=float)
        means = data.get('covariate_means')
        model.covariate_means_ = None if means is None else \
            np.array([means[x] for x in names], dtype=float)
        model.baseline_ = BaselineHazardTable.from_list(data['baseline']) \
            if data.get('baseline') else None
        model.converged_ = bool(data['converged'])
        value = data.get('log_partial_likelihood')
        model.log_partial_likelihood_ = np.nan if value is None \
            else float(value)
        model.n_iter_ = int(data.get('iterations', 0))
        model.history_ = [model.log_partial_likelihood_]
        return model

    @classmethod
    def from_baseline(cls, coefficients, times, cumulative, time_unit=None):
        """A fitted model from known coefficients and a (time, H0) table.

        Args:
            coefficients (dict): {covariate name: coefficient}.
            times, cumulative: rows of the baseline cumulative hazard.
        """
        table = BaselineHazardTable.from_cumulative(times, cumulative)
        names = list(coefficients)
        return cls.from_dict({
            'covariate_names': names, 'coefficients': dict(coefficients),
            'baseline': table.to_list(), 'converged': True,
            'log_partial_likelihood': None, 'iterations': 0,
            'time_unit': time_unit, 'ties': TIES})


def fit_cox(cohort, config=None):
    return CoxPHModel(config=config, time_unit=cohort.time_unit).fit(cohort)
