from survlearn.dataset.base import CovariateVector, SurvivalRecord, \
    BinaryRecord, Cohort, BinaryCohort
from survlearn.dataset.io import CohortSchema, load_survival_csv, \
    load_binary_csv, cohort_to_csv
from survlearn.dataset.validation import Finding, validate_cohort, \
    check_fit_ready

__all__ = ['CovariateVector', 'SurvivalRecord', 'BinaryRecord', 'Cohort',
           'BinaryCohort', 'CohortSchema', 'load_survival_csv',
           'load_binary_csv', 'cohort_to_csv', 'Finding', 'validate_cohort',
           'check_fit_ready']
