import six
import numpy as np
from survlearn.exceptions import DomainError, SchemaError

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def check_positive(value, name='value'):
    """Return ``value`` as float, raising DomainError unless finite and > 0."""
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DomainError("{} must be positive and finite, got {}.".format(
            name, value))
    return value


def check_nonnegative(value, name='value'):
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise DomainError("{} must be nonnegative and finite, "
                          "got {}.".format(name, value))
    return value


def check_probability(value, name='probability', open_interval=True):
    value = float(value)
    if open_interval:
        valid = 0 < value < 1
    else:
        valid = 0 <= value <= 1
    if not valid:
        raise DomainError("{} must be in {}, got {}.".format(
            name, '(0, 1)' if open_interval else '[0, 1]', value))
    return value


def check_names_match(expected, given, what='covariate names'):
    """Raise SchemaError unless ``given`` lists exactly ``expected``
    (order-sensitive)."""
    expected = list(expected)
    given = list(given)
    if expected == given:
        return
    missing = [x for x in expected if x not in given]
    unknown = [x for x in given if x not in expected]
    if missing or unknown:
        raise SchemaError(
            "{} do not match: missing {}, unknown {}.".format(
                what, missing, unknown),
            column=(unknown or missing)[0])
    raise SchemaError("{} are ordered differently: expected {}, "
                      "got {}.".format(what, expected, given))


def check_column_names(columns, required):
    """Raise SchemaError naming the first required column not in
    ``columns``."""
    columns = set(columns)
    for column in required:
        if column not in columns:
            raise SchemaError("Column {} not found, the file has columns "
                              "{}.".format(column, sorted(columns)),
                              column=column)


def split_names(names):
    """Split 'a,b,c' into ['a', 'b', 'c']; lists pass through."""
    if names is None:
        return []
    if isinstance(names, six.string_types):
        return [x.strip() for x in names.split(',') if x.strip()]
    return list(names)
