"""CSV ingestion and export of cohorts.

Files are UTF-8, comma separated, with a header row and '.' as decimal
separator. Columns are mapped explicitly through a schema; nothing is
guessed from the header.
"""
import io
import math
import pandas as pd
from dataclasses import dataclass, field
from survlearn.dataset.base import Cohort, BinaryCohort, SurvivalRecord, \
    BinaryRecord, CovariateVector
from survlearn.exceptions import CohortParseError, CohortValidationError
from survlearn.utils.check import check_column_names, split_names
from survlearn.utils.logging import get_logger

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

EVENT_TOKENS = {'0': False, '1': True, 'false': False, 'true': True}
FLOAT_FORMAT = '%.17g'

logger = get_logger('CohortLoader')


@dataclass(frozen=True)
class CohortSchema(object):
    """Column mapping of a cohort CSV.

    Args:
        time: follow-up time column (survival files).
        event: event indicator column (survival files).
        covariates: covariate columns, in model order.
        id: subject id column; if None ids are 'row1', 'row2', ...
        outcome: 0/1 outcome column (binary files).
        time_unit: unit label carried into model artifacts.
    """
    time: str = 'time'
    event: str = 'event'
    covariates: tuple = field(default_factory=tuple)
    id: str = None
    outcome: str = None
    time_unit: str = None

    def __post_init__(self):
        object.__setattr__(self, 'covariates',
                           tuple(split_names(self.covariates)))

    def required_columns(self, kind='survival'):
        if kind == 'survival':
            columns = [self.time, self.event]
        else:
            columns = [self.outcome]
        if self.id is not None:
            columns = [self.id] + columns
        return columns + list(self.covariates)


def _read_frame(path, required):
    df = pd.read_csv(path, dtype=str, keep_default_na=False,
                     encoding='utf-8', skipinitialspace=True)
    df.columns = [str(c).strip() for c in df.columns]
    check_column_names(df.columns, required)
    return df


def _parse_float(value, row, column):
    try:
        parsed = float(value)
    except (TypeError, ValueError):
        raise CohortParseError("Row {}: column {} value {!r} is not a "
                               "number.".format(row, column, value),
                               row=row, column=column)
    return parsed


def _parse_event(value, row, column):
    token = str(value).strip().lower()
    if token not in EVENT_TOKENS:
        raise CohortParseError("Row {}: column {} value {!r} is not one of "
                               "0, 1, true, false.".format(row, column,
                                                           value),
                               row=row, column=column)
    return EVENT_TOKENS[token]


def _subject_ids(df, schema):
    if schema.id is None:
        return ['row{}'.format(i + 1) for i in range(len(df))]
    return [str(x).strip() for x in df[schema.id]]


def _covariates(df, schema, row_idx):
    row = row_idx + 1
    return CovariateVector(
        schema.covariates,
        [_parse_float(df[c].iat[row_idx], row, c) for c in schema.covariates])


def load_survival_csv(path, schema):
    """Read a right-censored cohort.

    Args:
        path (str): CSV file.
        schema (CohortSchema): column mapping.

    Returns:
        Cohort with one record per data row, in file order.

    Raises:
        SchemaError: a mapped column is missing.
        CohortParseError: a cell is not numeric (row number given).
        CohortValidationError: a time is negative or not finite.
    """
    df = _read_frame(path, schema.required_columns('survival'))
    if not len(df):
        raise CohortValidationError("{} has a header but no data "
                                    "rows.".format(path))
    ids = _subject_ids(df, schema)
    records = list()
    for row_idx in range(len(df)):
        row = row_idx + 1
        time = _parse_float(df[schema.time].iat[row_idx], row, schema.time)
        if not math.isfinite(time) or time < 0:
            raise CohortValidationError(
                "Row {}: time {} must be finite and nonnegative.".format(
                    row, time), row=row)
        event = _parse_event(df[schema.event].iat[row_idx], row,
                             schema.event)
        records.append(SurvivalRecord(ids[row_idx], time, event,
                                      _covariates(df, schema, row_idx)))
    cohort = Cohort(records, covariate_names=schema.covariates,
                    time_unit=schema.time_unit)
    logger.info("Load {} records ({} events, {} censored) from {}.".format(
        len(cohort), cohort.n_events, cohort.n_censored, path))
    return cohort


def load_binary_csv(path, schema):
    """Read a fixed-interval 0/1 outcome cohort; ``schema.outcome`` names
    the outcome column."""
    if schema.outcome is None:
        raise ValueError("schema.outcome must name the outcome column.")
    df = _read_frame(path, schema.required_columns('binary'))
    if not len(df):
        raise CohortValidationError("{} has a header but no data "
                                    "rows.".format(path))
    ids = _subject_ids(df, schema)
    records = list()
    for row_idx in range(len(df)):
        row = row_idx + 1
        outcome = _parse_event(df[schema.outcome].iat[row_idx], row,
                               schema.outcome)
        records.append(BinaryRecord(ids[row_idx], int(outcome),
                                    _covariates(df, schema, row_idx)))
    cohort = BinaryCohort(records, covariate_names=schema.covariates)
    logger.info("Load {} records ({} positive) from {}.".format(
        len(cohort), int(cohort.outcomes.sum()), path))
    return cohort


def cohort_to_frame(cohort):
    """Columns: id, then time/event or outcome, then the covariates."""
    data = {'id': cohort.subject_ids}
    if isinstance(cohort, Cohort):
        data['time'] = cohort.times
        data['event'] = cohort.events.astype(int)
    else:
        data['outcome'] = cohort.outcomes.astype(int)
    for idx, name in enumerate(cohort.covariate_names):
        data[name] = cohort.X[:, idx]
    return pd.DataFrame(data, columns=list(data))


def cohort_to_csv(cohort):
    """Serialize with 17 significant digits so reloading is bit-exact."""
    buffer = io.StringIO()
    cohort_to_frame(cohort).to_csv(buffer, index=False,
                                   float_format=FLOAT_FORMAT,
                                   lineterminator='\n')
    return buffer.getvalue()


def default_schema(cohort, time_unit=None):
    """Schema that reads back what ``cohort_to_csv`` writes."""
    return CohortSchema(time='time', event='event', id='id',
                        covariates=cohort.covariate_names,
                        time_unit=time_unit or cohort.time_unit)
