import unittest
import numpy as np
from survlearn.dataset.base import Cohort

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

# worked fall-risk table: months 1..6 and the baseline cumulative hazard
WORKED_TIMES = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
WORKED_CUMULATIVE = (0.10, 0.25, 0.40, 0.60, 0.85, 1.10)


class SurvLearnTest(unittest.TestCase):

    @staticmethod
    def central_difference_gradient(f, x, h=1e-6):
        x = np.asarray(x, dtype=float)
        gradient = np.empty_like(x)
        for i in range(len(x)):
            step = np.zeros_like(x)
            step[i] = h
            gradient[i] = (f(x + step) - f(x - step)) / (2 * h)
        return gradient

    def assertGradientClose(self, f, analytic, x, rtol=1e-5, h=1e-6):
        numeric = self.central_difference_gradient(f, x, h=h)
        error = np.linalg.norm(numeric - analytic) / \
            max(np.linalg.norm(analytic), 1.0)
        self.assertLess(error, rtol, msg="analytic {} vs numeric {}".format(
            analytic, numeric))

    @staticmethod
    def worked_baseline_table():
        from survlearn.learn.coxph import BaselineHazardTable
        return BaselineHazardTable.from_cumulative(WORKED_TIMES,
                                                   WORKED_CUMULATIVE)

    @staticmethod
    def random_small_cohort(rng, n_subjects=40, n_covariates=2,
                            censoring=0.3, decimals=1):
        """Exponential times rounded to ``decimals`` (so ties occur), normal
        covariates with a mild effect, at least one event."""
        X = rng.normal(size=(n_subjects, n_covariates))
        beta = np.linspace(0.5, -0.5, n_covariates)
        times = rng.exponential(size=n_subjects) / np.exp(X @ beta)
        times = np.round(times, decimals) + 10.0 ** -decimals
        events = rng.uniform(size=n_subjects) > censoring
        events[0] = True
        names = ['x{}'.format(i + 1) for i in range(n_covariates)]
        return Cohort.from_arrays(times, events, X, covariate_names=names)
