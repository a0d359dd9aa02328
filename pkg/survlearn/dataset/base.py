"""Data model shared by every fitting and prediction module.

A cohort keeps its records (one per subject, file order) and, for the
numerical code, the same data as read-only numpy arrays.
"""
import numpy as np
from collections import Counter
from dataclasses import dataclass, field
from survlearn.exceptions import SchemaError

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def _readonly(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CovariateVector(object):
    """Named covariate values of one subject.

    Args:
        names: ordered covariate labels.
        values: one real number per name, same order.

    An empty vector is allowed for intercept-only GLM fits; the Cox model
    rejects cohorts without covariates.
    """
    names: tuple
    values: np.ndarray = field(compare=False)

    def __init__(self, names, values):
        names = tuple(str(x) for x in names)
        values = _readonly(np.atleast_1d(values) if len(names) else [])
        if values.ndim != 1 or len(values) != len(names):
            raise SchemaError("CovariateVector has {} names but {} "
                              "values.".format(len(names), values.size))
        if len(set(names)) != len(names):
            raise SchemaError("Duplicate covariate names in {}.".format(
                list(names)))
        object.__setattr__(self, 'names', names)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_dict(cls, mapping, names=None):
        """Build from {name: value}; ``names`` fixes the order and
        requires every name to be present."""
        names = list(mapping) if names is None else list(names)
        missing = [x for x in names if x not in mapping]
        if missing:
            raise SchemaError("Covariate {} missing from profile "
                              "{}.".format(missing[0], dict(mapping)),
                              column=missing[0])
        unknown = [x for x in mapping if x not in names]
        if unknown:
            raise SchemaError("Unknown covariate {}, possible values are "
                              "{}.".format(unknown[0], names),
                              column=unknown[0])
        return cls(names, [float(mapping[x]) for x in names])

    def to_dict(self):
        return dict(zip(self.names, map(float, self.values)))

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def __eq__(self, other):
        if not isinstance(other, CovariateVector):
            return NotImplemented
        return self.names == other.names and \
            np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.names, self.values.tobytes()))

    def __len__(self):
        return len(self.names)

    def __getitem__(self, name):
        return float(self.values[self.names.index(name)])


@dataclass(frozen=True)
class SurvivalRecord(object):
    """One subject followed for ``time``; ``event`` is False when the
    subject was right-censored at ``time``."""
    subject_id: str
    time: float
    event: bool
    covariates: CovariateVector


@dataclass(frozen=True)
class BinaryRecord(object):
    """One subject with a fixed-interval 0/1 outcome."""
    subject_id: str
    outcome: int
    covariates: CovariateVector


class BaseCohort(object):
    """Ordered, immutable collection of records sharing covariate names."""

    record_class = None

    def __init__(self, records, covariate_names=None, time_unit=None):
        records = tuple(records)
        if not records:
            raise SchemaError("A cohort needs at least one record.")
        for record in records:
            if not isinstance(record, self.record_class):
                raise TypeError("{} holds {} objects, got {}.".format(
                    self.__class__.__name__, self.record_class.__name__,
                    type(record).__name__))
        if covariate_names is None:
            covariate_names = records[0].covariates.names
        covariate_names = tuple(covariate_names)
        for idx, record in enumerate(records):
            if record.covariates.names != covariate_names:
                raise SchemaError(
                    "Record {} ({}) has covariates {}, the cohort uses "
                    "{}.".format(idx + 1, record.subject_id,
                                 list(record.covariates.names),
                                 list(covariate_names)))
        self.records = records
        self.covariate_names = covariate_names
        self.time_unit = time_unit
        X = np.empty((len(records), len(covariate_names)))
        for idx, record in enumerate(records):
            X[idx] = record.covariates.values
        X.setflags(write=False)
        self.X = X

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, idx):
        return self.records[idx]

    @property
    def n_covariates(self):
        return len(self.covariate_names)

    @property
    def subject_ids(self):
        return [record.subject_id for record in self.records]

    def duplicate_ids(self):
        return sorted(x for x, n in Counter(self.subject_ids).items()
                      if n > 1)


class Cohort(BaseCohort):
    """Right-censored time-to-event cohort.

    Attributes:
        times (np.ndarray): follow-up durations, read-only.
        events (np.ndarray): boolean event indicators, read-only.
        X (np.ndarray): (n_subjects, n_covariates) design, read-only.
    """
    record_class = SurvivalRecord

    def __init__(self, records, covariate_names=None, time_unit=None):
        super().__init__(records, covariate_names=covariate_names,
                         time_unit=time_unit)
        self.times = _readonly([r.time for r in self.records])
        events = np.array([bool(r.event) for r in self.records])
        events.setflags(write=False)
        self.events = events

    @classmethod
    def from_arrays(cls, times, events, X=None, covariate_names=(),
                    subject_ids=None, time_unit=None):
        times = np.asarray(times, dtype=float)
        n = len(times)
        covariate_names = tuple(covariate_names)
        X = np.zeros((n, 0)) if X is None else \
            np.asarray(X, dtype=float).reshape(n, len(covariate_names))
        if subject_ids is None:
            subject_ids = ['s{}'.format(i + 1) for i in range(n)]
        records = [SurvivalRecord(str(sid), float(t), bool(e),
                                  CovariateVector(covariate_names, x))
                   for sid, t, e, x in zip(subject_ids, times, events, X)]
        return cls(records, covariate_names=covariate_names,
                   time_unit=time_unit)

    @property
    def n_events(self):
        return int(self.events.sum())

    @property
    def n_censored(self):
        return len(self) - self.n_events

    def with_covariates(self, X):
        """Same subjects, times and events with a replaced design."""
        return Cohort.from_arrays(self.times, self.events, X,
                                  covariate_names=self.covariate_names,
                                  subject_ids=self.subject_ids,
                                  time_unit=self.time_unit)

    def with_times(self, times):
        return Cohort.from_arrays(times, self.events, self.X,
                                  covariate_names=self.covariate_names,
                                  subject_ids=self.subject_ids,
                                  time_unit=self.time_unit)


class BinaryCohort(BaseCohort):
    """Fixed-interval classification cohort; ``outcomes`` is 0/1 float."""
    record_class = BinaryRecord

    def __init__(self, records, covariate_names=None, time_unit=None):
        super().__init__(records, covariate_names=covariate_names,
                         time_unit=time_unit)
        for idx, record in enumerate(self.records):
            if record.outcome not in (0, 1):
                raise ValueError("Record {} ({}) has outcome {}, expected "
                                 "0 or 1.".format(idx + 1, record.subject_id,
                                                  record.outcome))
        self.outcomes = _readonly([r.outcome for r in self.records])

    @classmethod
    def from_arrays(cls, outcomes, X=None, covariate_names=(),
                    subject_ids=None):
        outcomes = np.asarray(outcomes)
        n = len(outcomes)
        covariate_names = tuple(covariate_names)
        X = np.zeros((n, 0)) if X is None else \
            np.asarray(X, dtype=float).reshape(n, len(covariate_names))
        if subject_ids is None:
            subject_ids = ['s{}'.format(i + 1) for i in range(n)]
        records = [BinaryRecord(str(sid), int(y),
                                CovariateVector(covariate_names, x))
                   for sid, y, x in zip(subject_ids, outcomes, X)]
        return cls(records, covariate_names=covariate_names)
