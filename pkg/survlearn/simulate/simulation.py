"""Synthetic right-censored cohorts with a known proportional-hazards truth.

Event times are drawn by inverting S(t|x) = exp(-lambda0 exp(b'x) t^gamma)
(gamma = 1 for the constant baseline), censoring times are uniform on
(0, c) with c calibrated analytically to the requested censoring fraction.

Every subject has its own counter-based Philox stream keyed by (seed,
subject index) and always draws its covariates, then the event uniform,
then the censoring uniform, so a cohort does not depend on how subjects
are split over joblib workers.
"""
import json
import numpy as np
from dataclasses import dataclass, field
from joblib import Parallel, delayed
from scipy.special import gamma as gamma_function, gammainc
from survlearn.dataset.base import Cohort
from survlearn.exceptions import SimulationSpecError
from survlearn.utils.logging import get_logger

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

BASELINES = ['constant', 'weibull']
DISTRIBUTIONS = ['normal', 'bernoulli']
SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class CovariateSpec(object):
    """Independent draw per subject: standard normal or bernoulli(q)."""
    name: str
    distribution: str = 'normal'
    q: float = 0.5

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise SimulationSpecError(
                "Covariate {}: distribution {} is unknown. Possible values "
                "are: {}".format(self.name, self.distribution, DISTRIBUTIONS))
        if self.distribution == 'bernoulli' and not 0 < self.q < 1:
            raise SimulationSpecError("Covariate {}: bernoulli q must be in "
                                      "(0, 1), got {}.".format(self.name,
                                                               self.q))

    def draw(self, rng):
        if self.distribution == 'normal':
            return rng.standard_normal()
        return float(rng.random() < self.q)

    def to_dict(self):
        data = {'name': self.name, 'distribution': self.distribution}
        if self.distribution == 'bernoulli':
            data['q'] = self.q
        return data


@dataclass(frozen=True)
class SimulationSpec(object):
    """Parameters of a simulated cohort.

    Args:
        n_subjects: positive number of subjects.
        true_beta: one coefficient per covariate.
        covariates: CovariateSpec per coefficient, same order.
        baseline: 'constant' (h0 = lambda0) or 'weibull'
            (H0(t) = lambda0 t^shape).
        lambda0: baseline rate, > 0.
        shape: Weibull shape gamma > 0 (ignored for 'constant').
        censoring_rate_target: expected censored fraction in [0, 1);
            0 disables censoring.
        seed: integer in [0, 2^64).
    """
    n_subjects: int
    true_beta: tuple = ()
    covariates: tuple = ()
    baseline: str = 'constant'
    lambda0: float = 1.0
    shape: float = 1.0
    censoring_rate_target: float = 0.0
    seed: int = 0
    time_unit: str = None

    def __post_init__(self):
        object.__setattr__(self, 'true_beta',
                           tuple(float(x) for x in self.true_beta))
        object.__setattr__(self, 'covariates', tuple(
            x if isinstance(x, CovariateSpec) else CovariateSpec(**x)
            for x in self.covariates))
        if isinstance(self.n_subjects, bool) or \
                int(self.n_subjects) != self.n_subjects or \
                self.n_subjects < 1:
            raise SimulationSpecError("n_subjects must be a positive "
                                      "integer, got {}.".format(
                                          self.n_subjects))
        object.__setattr__(self, 'n_subjects', int(self.n_subjects))
        if len(self.true_beta) != len(self.covariates):
            raise SimulationSpecError(
                "true_beta has {} coefficients for {} covariates.".format(
                    len(self.true_beta), len(self.covariates)))
        names = [x.name for x in self.covariates]
        if len(set(names)) != len(names):
            raise SimulationSpecError("Duplicate covariate names in "
                                      "{}.".format(names))
        if not np.all(np.isfinite(self.true_beta)):
            raise SimulationSpecError("true_beta must be finite.")
        if self.baseline not in BASELINES:
            raise SimulationSpecError("baseline {} is unknown. Possible "
                                      "values are: {}".format(self.baseline,
                                                              BASELINES))
        if not (np.isfinite(self.lambda0) and self.lambda0 > 0):
            raise SimulationSpecError("lambda0 must be positive, got "
                                      "{}.".format(self.lambda0))
        if not (np.isfinite(self.shape) and self.shape > 0):
            raise SimulationSpecError("shape must be positive, got "
                                      "{}.".format(self.shape))
        if not 0 <= self.censoring_rate_target < 1:
            raise SimulationSpecError("censoring_rate_target must be in "
                                      "[0, 1), got {}.".format(
                                          self.censoring_rate_target))
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or \
                not 0 <= self.seed < SEED_LIMIT:
            raise SimulationSpecError("seed must be an integer in [0, 2^64), "
                                      "got {}.".format(self.seed))
        object.__setattr__(self, 'seed', int(self.seed))

    @property
    def covariate_names(self):
        return tuple(x.name for x in self.covariates)

    @property
    def gamma(self):
        return self.shape if self.baseline == 'weibull' else 1.0

    @classmethod
    def from_dict(cls, data):
        known = set(cls.__dataclass_fields__)
        unknown = [x for x in data if x not in known]
        if unknown:
            raise SimulationSpecError("Unknown simulation settings {}. "
                                      "Possible values are: {}".format(
                                          unknown, sorted(known)))
        try:
            return cls(**data)
        except TypeError as err:
            raise SimulationSpecError(str(err))

    @classmethod
    def from_json(cls, json_file):
        with open(json_file, 'r') as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as err:
                raise SimulationSpecError("{} is not valid JSON: {}".format(
                    json_file, err))
        return cls.from_dict(data)

    def to_dict(self):
        return {'n_subjects': self.n_subjects,
                'true_beta': list(self.true_beta),
                'covariates': [x.to_dict() for x in self.covariates],
                'baseline': self.baseline, 'lambda0': self.lambda0,
                'shape': self.shape,
                'censoring_rate_target': self.censoring_rate_target,
                'seed': self.seed, 'time_unit': self.time_unit}


def subject_rng(seed, index):
    """Counter-based generator of one subject, independent of the others."""
    return np.random.Generator(np.random.Philox(key=seed + (index << 64)))


def _draw_chunk(spec, start, stop):
    X = np.empty((stop - start, len(spec.covariates)))
    uniforms = np.empty((stop - start, 2))
    for row, index in enumerate(range(start, stop)):
        rng = subject_rng(spec.seed, index)
        for col, covariate in enumerate(spec.covariates):
            X[row, col] = covariate.draw(rng)
        uniforms[row] = rng.random(2)
    return X, uniforms


def subject_rates(spec, X):
    """r = lambda0 exp(b'x), so that H(t|x) = r t^gamma."""
    return spec.lambda0 * np.exp(X @ np.asarray(spec.true_beta))


def inv_cum_hazard(spec, v, rates):
    """Time at which H(t|x) reaches v."""
    return (v / rates) ** (1.0 / spec.gamma)


def cum_hazard(spec, t, rates):
    return rates * np.asarray(t, dtype=float) ** spec.gamma


def _censoring_probability(rates, upper, gamma):
    """P(C < T | x) for C ~ U(0, upper): (1/c) int_0^c exp(-r s^gamma) ds."""
    if np.isinf(upper):
        return np.zeros_like(rates)
    if gamma == 1.0:
        z = rates * upper
        return -np.expm1(-z) / z
    a = 1.0 / gamma
    return gamma_function(a) * gammainc(a, rates * upper ** gamma) / \
        (gamma * rates ** a * upper)


def expected_censoring_fraction(spec, upper, X):
    """Mean analytic censoring probability of the subjects in ``X`` when
    censoring times are uniform on (0, upper)."""
    return float(np.mean(_censoring_probability(
        subject_rates(spec, np.asarray(X, dtype=float)), float(upper),
        spec.gamma)))


def calibrate_censoring(spec, X, n_bisection=200):
    """Upper bound c of the uniform censoring distribution whose expected
    censored fraction equals the target (bisection on log c)."""
    target = spec.censoring_rate_target
    if target == 0:
        return np.inf
    rates = subject_rates(spec, X)
    if not np.all(np.isfinite(rates)) or np.any(rates <= 0):
        raise SimulationSpecError("Subject hazards overflow; censoring "
                                  "target {} cannot be calibrated.".format(
                                      target))
    scale = float(np.median(rates ** (-1.0 / spec.gamma)))
    lower, upper = np.log(scale) - 50.0, np.log(scale) + 50.0

    def fraction(log_c):
        return float(np.mean(_censoring_probability(rates, np.exp(log_c),
                                                    spec.gamma)))

    if not fraction(upper) < target < fraction(lower):
        raise SimulationSpecError("Censoring target {} cannot be reached "
                                  "with uniform censoring.".format(target))
    for _ in range(n_bisection):
        middle = 0.5 * (lower + upper)
        if fraction(middle) > target:
            lower = middle
        else:
            upper = middle
        if upper - lower < 1e-13:
            break
    return float(np.exp(0.5 * (lower + upper)))


class CohortSimulator(object):
    """Generate cohorts from a SimulationSpec.

    Args:
        spec: SimulationSpec.
        n_jobs: joblib workers for the per-subject draws; the output is the
            same for every value.
        chunk_size: subjects per joblib task.
    """

    def __init__(self, spec, n_jobs=1, chunk_size=1000):
        if not isinstance(spec, SimulationSpec):
            raise SimulationSpecError("Expected a SimulationSpec, got "
                                      "{}.".format(type(spec).__name__))
        self.spec = spec
        self.n_jobs = n_jobs
        self.chunk_size = max(1, int(chunk_size))
        self.logger = get_logger(self.__class__.__name__)

    def _draw(self):
        n = self.spec.n_subjects
        bounds = [(start, min(start + self.chunk_size, n))
                  for start in range(0, n, self.chunk_size)]
        if self.n_jobs == 1 or len(bounds) == 1:
            parts = [_draw_chunk(self.spec, *b) for b in bounds]
        else:
            parts = Parallel(n_jobs=self.n_jobs)(
                delayed(_draw_chunk)(self.spec, *b) for b in bounds)
        return np.vstack([p[0] for p in parts]), \
            np.vstack([p[1] for p in parts])

    def simulate(self):
        spec = self.spec
        self.logger.info("Simulating {} subjects, {} baseline, lambda0 {}, "
                         "beta {}, censoring target {}.".format(
                             spec.n_subjects, spec.baseline, spec.lambda0,
                             list(spec.true_beta),
                             spec.censoring_rate_target))
        X, uniforms = self._draw()
        rates = subject_rates(spec, X)
        # 1 - U lies in (0, 1], so -log is finite
        event_times = inv_cum_hazard(spec, -np.log1p(-uniforms[:, 0]), rates)
        upper = calibrate_censoring(spec, X)
        censor_times = uniforms[:, 1] * upper if np.isfinite(upper) \
            else np.full(spec.n_subjects, np.inf)
        events = event_times <= censor_times
        times = np.where(events, event_times, censor_times)
        cohort = Cohort.from_arrays(times, events, X,
                                    covariate_names=spec.covariate_names,
                                    time_unit=spec.time_unit)
        self.upper_ = upper
        self.expected_censoring_ = expected_censoring_fraction(spec, upper, X)
        self.logger.info("Censoring upper bound {:.6g}, expected censored "
                         "fraction {:.4f}, realized {} events and {} "
                         "censored.".format(upper, self.expected_censoring_,
                                            cohort.n_events,
                                            cohort.n_censored))
        return cohort


def simulate_cohort(spec, n_jobs=1, chunk_size=1000):
    return CohortSimulator(spec, n_jobs=n_jobs,
                           chunk_size=chunk_size).simulate()
