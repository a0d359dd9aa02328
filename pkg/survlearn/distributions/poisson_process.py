"""Closed-form Poisson-process and exponential calculators for a constant
event rate.

Every function accepts a ``ConstantRate``/``Horizon`` or a plain number.
"""
import math
import numpy as np
from dataclasses import dataclass
from scipy.special import gammaln, gammaincc
from survlearn.exceptions import DegenerateDataError, DomainError
from survlearn.utils.check import check_positive, check_nonnegative

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

# up to this k the pmf uses the exact factorial, above it log-gamma
EXACT_FACTORIAL_MAX_K = 20
# mu ** 20 stays finite below this mean
EXACT_POWER_MAX_MU = 1e15


@dataclass(frozen=True)
class ConstantRate(object):
    """Events per unit time, ``lambda`` > 0."""
    value: float

    def __post_init__(self):
        object.__setattr__(self, 'value',
                           check_positive(self.value, 'rate'))

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class Horizon(object):
    """Interval length (analysis time), t >= 0."""
    t: float

    def __post_init__(self):
        object.__setattr__(self, 't', check_nonnegative(self.t, 'horizon'))

    def __float__(self):
        return self.t


def _rate(rate):
    return rate.value if isinstance(rate, ConstantRate) else \
        ConstantRate(rate).value


def _horizon(horizon):
    return horizon.t if isinstance(horizon, Horizon) else \
        Horizon(horizon).t


def _count(k):
    if int(k) != k or k < 0:
        raise DomainError("k must be a nonnegative integer, got {}.".format(k))
    return int(k)


def poisson_pmf(rate, horizon, k):
    """P(N_t = k) = (t*lambda)^k exp(-lambda*t) / k!.

    Uses the exact factorial up to k = 20 for moderate means and log-space
    evaluation with log-gamma otherwise. 0^0 is taken as 1, so
    P(N_0 = 0) = 1.
    """
    lam = _rate(rate)
    t = _horizon(horizon)
    k = _count(k)
    mu = lam * t
    if mu == 0:
        return 1.0 if k == 0 else 0.0
    if math.isinf(mu):
        return 0.0
    if k <= EXACT_FACTORIAL_MAX_K and mu <= EXACT_POWER_MAX_MU:
        return mu ** k * math.exp(-mu) / math.factorial(k)
    return math.exp(k * math.log(mu) - mu - gammaln(k + 1))


def poisson_cdf(rate, horizon, k):
    """P(N_t <= k), via the regularized upper incomplete gamma."""
    lam = _rate(rate)
    t = _horizon(horizon)
    k = _count(k)
    mu = lam * t
    if mu == 0:
        return 1.0
    return float(gammaincc(k + 1, mu))


def prob_at_least(rate, horizon, k):
    """P(N_t >= k)."""
    k = _count(k)
    if k == 0:
        return 1.0
    return 1.0 - poisson_cdf(rate, horizon, k - 1)


def prob_exactly_one(rate, horizon):
    """P(N_t = 1) = t*lambda*exp(-lambda*t)."""
    return poisson_pmf(rate, horizon, 1)


def survival_const_rate(rate, horizon):
    """S(t) = P(T >= t) = P(N_t = 0) = exp(-lambda*t)."""
    return math.exp(-_rate(rate) * _horizon(horizon))


def prob_at_least_one(rate, horizon):
    """P(N_t >= 1) = 1 - exp(-lambda*t), the exponential CDF at t."""
    return 1.0 - survival_const_rate(rate, horizon)


def exponential_cdf(rate, t):
    """F(t) = P(T <= t) for the time to the first event."""
    return prob_at_least_one(rate, t)


def exponential_pdf(rate, t):
    """f(t) = lambda*exp(-lambda*t) for t >= 0."""
    lam = _rate(rate)
    return lam * math.exp(-lam * _horizon(t))


def estimate_constant_rate(cohort):
    """Exponential maximum-likelihood rate: observed events over total
    follow-up time (censored subjects contribute exposure only)."""
    exposure = float(np.sum(cohort.times))
    events = cohort.n_events
    if events == 0:
        raise DegenerateDataError('no observed events')
    if exposure <= 0:
        raise DegenerateDataError('total follow-up time is zero')
    return ConstantRate(events / exposure)
