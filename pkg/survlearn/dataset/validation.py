import numpy as np
from dataclasses import dataclass
from survlearn.dataset.base import Cohort, BinaryCohort
from survlearn.exceptions import CohortValidationError, DegenerateDataError

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


@dataclass(frozen=True)
class Finding(object):
    """One violated cohort invariant.

    Args:
        code: machine-readable tag, e.g. 'no_events'.
        message: human readable description.
        column: offending covariate, when there is one.
    """
    code: str
    message: str
    column: str = None

    def to_dict(self):
        return {'code': self.code, 'message': self.message,
                'column': self.column}


def validate_cohort(cohort):
    """Check a cohort against the data-model invariants.

    Returns:
        list of Finding, empty iff the cohort is valid. Findings are data:
        this function never raises for an invalid cohort.
    """
    findings = list()
    if isinstance(cohort, Cohort):
        if cohort.n_events == 0:
            findings.append(Finding('no_events', 'no observed events'))
        bad = ~np.isfinite(cohort.times) | (cohort.times < 0)
        if bad.any():
            findings.append(Finding(
                'invalid_time', 'times must be finite and nonnegative '
                '(first offending row {})'.format(int(np.argmax(bad)) + 1)))
    elif isinstance(cohort, BinaryCohort):
        n_positive = int(cohort.outcomes.sum())
        if n_positive == 0 or n_positive == len(cohort):
            findings.append(Finding(
                'single_class', 'all outcomes equal {}'.format(
                    int(cohort.outcomes[0]))))

    duplicates = cohort.duplicate_ids()
    if duplicates:
        findings.append(Finding('duplicate_id', 'duplicate subject ids '
                                '{}'.format(duplicates)))

    for idx, name in enumerate(cohort.covariate_names):
        column = cohort.X[:, idx]
        if not np.all(np.isfinite(column)):
            findings.append(Finding('non_finite', 'non-finite value in '
                                    'covariate {}'.format(name), name))
        elif len(cohort) > 1 and np.all(column == column[0]):
            findings.append(Finding('constant_covariate', 'constant '
                                    'covariate {}'.format(name), name))
    return findings


def check_fit_ready(cohort, require_covariates=False):
    """Raise instead of returning findings; used at the top of each fit.

    Raises:
        DegenerateDataError: no observed events (survival) or a single
            outcome class (binary), or no covariates when required.
        CohortValidationError: any other finding.
    """
    if require_covariates and cohort.n_covariates == 0:
        raise DegenerateDataError("The Cox model needs at least one "
                                  "covariate.")
    findings = validate_cohort(cohort)
    if not findings:
        return
    messages = '; '.join(f.message for f in findings)
    if any(f.code in ('no_events', 'single_class') for f in findings):
        raise DegenerateDataError(messages)
    raise CohortValidationError(messages, findings=findings)
