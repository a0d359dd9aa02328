"""Exponential-family form f(y) = b(y) exp(eta*T(y) - a(eta)) of the three
distributions the GLMs are built from.
"""
import math
from dataclasses import dataclass
from scipy.special import gammaln
from survlearn.exceptions import DomainError

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


@dataclass(frozen=True)
class ExpFamilyForm(object):
    """Natural parameter ``eta``, log-partition ``a(eta)``, log base
    measure ``log b(y)`` and sufficient statistic ``T(y)`` at one y."""
    family: str
    eta: float
    log_partition: float
    log_base_measure: float
    sufficient_stat: float

    def log_density(self):
        return self.log_base_measure + self.eta * self.sufficient_stat - \
            self.log_partition

    def density(self):
        return math.exp(self.log_density())


def _bernoulli(params, y):
    p = float(params['p'])
    if not 0 < p < 1:
        raise DomainError("Bernoulli p must be in (0, 1), got {}.".format(p))
    if y not in (0, 1):
        raise DomainError("Bernoulli support is {{0, 1}}, got {}.".format(y))
    eta = math.log(p / (1 - p))
    # log(1 + e^eta) without overflow
    log_partition = max(eta, 0.0) + math.log1p(math.exp(-abs(eta)))
    return ExpFamilyForm('bernoulli', eta, log_partition, 0.0, float(y))


def _exponential(params, y):
    lam = float(params['rate'])
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError("Exponential rate must be positive, "
                          "got {}.".format(lam))
    if not (y >= 0 and math.isfinite(y)):
        raise DomainError("Exponential support is y >= 0, got {}.".format(y))
    eta = -lam
    # a(eta) = -log(-eta) normalizes lambda*exp(-lambda*y)
    return ExpFamilyForm('exponential', eta, -math.log(-eta), 0.0, float(y))


def _poisson(params, y):
    lam = float(params['rate'])
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError("Poisson rate must be positive, got {}.".format(lam))
    if int(y) != y or y < 0:
        raise DomainError("Poisson support is 0, 1, 2, ..., got {}.".format(y))
    eta = math.log(lam)
    return ExpFamilyForm('poisson', eta, math.exp(eta),
                         -float(gammaln(y + 1)), float(y))


FAMILIES = {'bernoulli': _bernoulli,
            'exponential': _exponential,
            'poisson': _poisson}


def exp_family_form(family, params, y):
    """Rewrite a standard pmf/pdf at ``y`` in exponential-family form.

    Args:
        family (str): 'bernoulli', 'exponential' or 'poisson'.
        params (dict): {'p': ...} for Bernoulli, {'rate': ...} otherwise.
        y: point in the family's support.

    Returns:
        ExpFamilyForm whose ``density()`` reproduces the standard form.
    """
    if family not in FAMILIES:
        raise ValueError("family {} is unknown. Possible values are: "
                         "{}".format(family, list(FAMILIES)))
    return FAMILIES[family](params, y)


def standard_density(family, params, y):
    """The textbook pmf/pdf, for comparison with ``exp_family_form``."""
    if family == 'bernoulli':
        p = float(params['p'])
        return p ** y * (1 - p) ** (1 - y)
    if family == 'exponential':
        lam = float(params['rate'])
        return lam * math.exp(-lam * y)
    if family == 'poisson':
        lam = float(params['rate'])
        return lam ** y * math.exp(-lam) / math.factorial(int(y))
    raise ValueError("family {} is unknown. Possible values are: "
                     "{}".format(family, list(FAMILIES)))
