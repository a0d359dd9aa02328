"""Survival probability at chosen times, time to a survival threshold
(median survival time by default), hazard-ratio interpretation and the
Cox / Poisson-survival comparison.

All functions take a fitted ``CoxPHModel`` or ``PoissonSurvivalModel``;
reports are plain dicts/lists so that ``format_report`` can render them
as JSON or as an aligned table.
"""
import json
import numpy as np
import pandas as pd
from dataclasses import dataclass
from typing import Optional
from sklearn.utils.validation import check_is_fitted
from survlearn.exceptions import DomainError
from survlearn.learn.coxph import CoxPHModel
from survlearn.learn.glm import PoissonSurvivalModel
from survlearn.utils.check import check_names_match, check_probability
from survlearn.utils.logging import get_logger

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

BEYOND_HORIZON = 'beyond-horizon'
REPORT_FORMATS = ['json', 'table']


def _check_survival_model(model):
    if not isinstance(model, (CoxPHModel, PoissonSurvivalModel)):
        raise TypeError("Survival prediction needs a CoxPHModel or a "
                        "PoissonSurvivalModel, got {}.".format(
                            type(model).__name__))
    check_is_fitted(model, 'coef_')
    return model


def _check_times(times):
    times = np.atleast_1d(np.asarray(
        [float(t) for t in np.atleast_1d(times)], dtype=float))
    if not np.all(np.isfinite(times)) or np.any(times < 0):
        raise DomainError("Prediction times must be finite and nonnegative, "
                          "got {}.".format(times.tolist()))
    return times


class SurvivalCurve(object):
    """S(t|X) of one covariate profile under a fitted survival model.

    S(0|X) = 1, values lie in [0, 1] and never increase with t.
    """

    def __init__(self, model, profile):
        self.model = _check_survival_model(model)
        self.profile = profile
        # resolves the profile against the model names once
        self.linear_predictor = model.linear_predictor(profile)

    def __call__(self, times):
        return self.survival(times)

    def survival(self, times):
        return self.model.survival_function(self.profile,
                                            _check_times(times))

    def cumulative_hazard(self, times):
        return self.model.cumulative_hazard(self.profile,
                                            _check_times(times))

    def extrapolated(self, times):
        return np.asarray(self.model.extrapolated(_check_times(times)),
                          dtype=bool)


@dataclass(frozen=True)
class TimeEstimate(object):
    """Time at which S(t|X) first drops to ``threshold``.

    ``time`` is None when the tabulated baseline never reaches the target
    cumulative hazard (reported as beyond-horizon).
    """
    time: Optional[float]
    threshold: float
    extrapolated: bool
    target_cumulative_hazard: float

    @property
    def beyond_horizon(self):
        return self.time is None

    def to_dict(self):
        return {'time': BEYOND_HORIZON if self.time is None else self.time,
                'threshold': self.threshold,
                'extrapolated': self.extrapolated,
                'target_cumulative_hazard': self.target_cumulative_hazard}


def survival_at(model, profile, times):
    """[S(t|X) for t in times]; Cox: exp(-H0(t) exp(b'X)), Poisson-survival:
    exp(-t exp(b0 + b'X))."""
    curve = SurvivalCurve(model, profile)
    times = _check_times(times)
    flags = curve.extrapolated(times)
    if np.any(flags):
        get_logger(model.__class__.__name__).warning(
            "Times {} are beyond the last event time; the baseline is held "
            "at its last value.".format(times[flags].tolist()))
    return [float(x) for x in curve.survival(times)]


def time_to_threshold(model, profile, threshold=0.5):
    """Smallest time with S(t|X) <= threshold.

    Cox: the target H0 = -ln(threshold) / exp(b'X) is looked up in the step
    baseline and the first tabulated event time reaching it is returned.
    Poisson-survival: closed form t = -ln(threshold) / exp(b0 + b'X).
    """
    _check_survival_model(model)
    threshold = check_probability(threshold, 'threshold', open_interval=True)
    log_threshold = -np.log(threshold)
    if isinstance(model, PoissonSurvivalModel):
        rate = model.rate(profile)
        return TimeEstimate(float(log_threshold / rate), threshold, False,
                            float(log_threshold / rate * model.baseline_rate()))

    target = float(log_threshold / model.relative_hazard(profile))
    time = model._baseline().first_time_reaching(target)
    if time is None:
        model.logger.warning(
            "Target cumulative hazard {:.6g} exceeds the last tabulated "
            "value {:.6g}; time is beyond the horizon.".format(
                target, float(model.baseline_.cumulative[-1])))
        return TimeEstimate(None, threshold, True, target)
    return TimeEstimate(time, threshold, False, target)


def hazard_ratios(model):
    """Per covariate: coefficient, hazard ratio exp(b) and percent change
    100 (exp(b) - 1). Values are stored unrounded."""
    check_is_fitted(model, 'coef_')
    rows = []
    for name, beta in zip(model.covariate_names_, model.coef_):
        ratio = float(np.exp(beta))
        rows.append({'covariate': name, 'coefficient': float(beta),
                     'hazard_ratio': ratio,
                     'percent_change': 100.0 * (ratio - 1.0)})
    return rows


def profile_hazard_ratio(model, x1, x2):
    """h(t|x1) / h(t|x2) = exp(b'(x1 - x2)), the same at every t."""
    check_is_fitted(model, 'coef_')
    difference = model.check_profile(x1) - model.check_profile(x2)
    return float(np.exp(np.dot(model.coef_, difference)))


def event_time_grid(model, n_points=50):
    """Evenly spaced times over [first, last] Cox event time."""
    table = _check_survival_model(model)._baseline()
    return np.linspace(table.times[0], table.times[-1], n_points)


def survival_table(model, profiles, times):
    """Rows of (profile, time, survival, extrapolated) for each profile."""
    times = _check_times(times)
    rows = []
    for label, profile in enumerate(profiles, start=1):
        values = survival_at(model, profile, times)
        flags = SurvivalCurve(model, profile).extrapolated(times)
        for t, value, flag in zip(times, values, flags):
            rows.append({'profile': label, 'time': float(t),
                         'survival': value, 'extrapolated': bool(flag)})
    return rows


def median_table(model, profiles, threshold=0.5):
    rows = []
    for label, profile in enumerate(profiles, start=1):
        estimate = time_to_threshold(model, profile, threshold)
        rows.append(dict({'profile': label}, **estimate.to_dict()))
    return rows


def cox_poisson_equivalence_report(cox, glm, profiles, times):
    """Compare a Cox fit with a Poisson-survival fit on the same cohort.

    The Poisson-survival model is the Cox model with H0(t) = t exp(b0), so
    the report lists |S_cox - S_glm| for every (profile, time) and sets
    the Breslow H0(t) against t exp(b0), including the through-origin
    slope of H0(t) on t.

    Returns:
        dict with ``rows``, ``max_divergence`` and ``baseline``.
    """
    if not isinstance(cox, CoxPHModel):
        raise TypeError("Expected a CoxPHModel, got {}.".format(
            type(cox).__name__))
    if not isinstance(glm, PoissonSurvivalModel):
        raise TypeError("Expected a PoissonSurvivalModel, got {}.".format(
            type(glm).__name__))
    check_is_fitted(cox, 'coef_')
    check_is_fitted(glm, 'coef_')
    check_names_match(cox.covariate_names_, glm.covariate_names_,
                      what='covariates of the Poisson-survival model')
    times = _check_times(times)

    rows = []
    for label, profile in enumerate(profiles, start=1):
        s_cox = cox.survival_function(profile, times)
        s_glm = glm.survival_function(profile, times)
        for t, a, b in zip(times, s_cox, s_glm):
            rows.append({'profile': label, 'time': float(t),
                         'survival_cox': float(a), 'survival_glm': float(b),
                         'divergence': float(abs(a - b))})

    table = cox._baseline()
    glm_rate = glm.baseline_rate()
    implied = table.times * glm_rate
    slope = float(np.dot(table.times, table.cumulative) /
                  np.dot(table.times, table.times)) \
        if np.any(table.times > 0) else float('nan')
    baseline = {'glm_rate': glm_rate,
                'cox_slope': slope,
                'max_abs_difference': float(np.max(np.abs(
                    table.cumulative - implied))),
                'times': table.times.tolist(),
                'cox_cumulative': table.cumulative.tolist(),
                'glm_cumulative': implied.tolist()}
    return {'rows': rows,
            'max_divergence': max(x['divergence'] for x in rows)
            if rows else 0.0,
            'baseline': baseline}


def _percent_label(value):
    rounded = int(round(value))
    return '0%' if rounded == 0 else '{:+d}%'.format(rounded)


def _frame(rows):
    frame = pd.DataFrame(rows)
    if 'percent_change' in frame:
        frame['percent_change'] = frame['percent_change'].map(_percent_label)
    return frame.to_string(index=False)


def format_report(report, fmt='json'):
    """Render a report (list of rows or dict) as JSON or an aligned table.

    Percent changes are rounded to whole percents in the table only.
    """
    if fmt not in REPORT_FORMATS:
        raise ValueError("format {} is unknown. Possible values are: "
                         "{}".format(fmt, REPORT_FORMATS))
    if fmt == 'json':
        return json.dumps(report, indent=2)

    if isinstance(report, list):
        return _frame(report) if report else ''
    blocks, scalars = [], []
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            blocks.append(_frame(value))
        elif isinstance(value, dict):
            block = {k: v for k, v in value.items()
                     if not isinstance(v, list)}
            blocks.append('\n'.join('{}: {}'.format(k, v)
                                    for k, v in block.items()))
        else:
            scalars.append('{}: {}'.format(key, value))
    return '\n\n'.join(blocks + (['\n'.join(scalars)] if scalars else []))
