import numpy as np
from survlearn.exceptions import ConvergenceError
from survlearn.learn.optimizer import damped_newton, standard_errors
from survlearn.utils.basetest import SurvLearnTest


def quadratic(center, curvature):
    center = np.asarray(center, dtype=float)
    curvature = np.asarray(curvature, dtype=float)

    def objective(beta):
        diff = beta - center
        return -0.5 * diff @ curvature @ diff - 1.0, -curvature @ diff, \
            -curvature
    return objective


class TestDampedNewton(SurvLearnTest):
    def test_quadratic_converges(self):
        objective = quadratic([1.0, -2.0], [[2.0, 0.5], [0.5, 1.0]])
        result = damped_newton(objective, np.zeros(2))
        self.assertTrue(result.converged)
        self.assertTrue(np.allclose(result.beta, [1.0, -2.0], atol=1e-10))
        self.assertAlmostEqual(result.log_likelihood, -1.0, places=10)
        self.assertTrue(np.all(np.diff(result.history) >= 0))

    def test_zero_gradient_start(self):
        result = damped_newton(quadratic([0.0], [[1.0]]), np.zeros(1))
        self.assertEqual(result.iterations, 0)
        self.assertListEqual(result.beta.tolist(), [0.0])

    def test_step_halving_keeps_ascent(self):
        # concave; the full Newton step from b = 3 overshoots badly
        def objective(beta):
            b = beta[0]
            value = -np.logaddexp(0.0, 3 * b) - np.logaddexp(0.0, -3 * b) + b
            p = 1.0 / (1.0 + np.exp(-3 * b))
            gradient = np.array([-3 * p + 3 * (1 - p) + 1.0])
            hessian = np.array([[-18 * p * (1 - p)]])
            return value, gradient, hessian
        result = damped_newton(objective, np.array([3.0]))
        self.assertTrue(result.converged)
        self.assertTrue(np.all(np.diff(result.history) >= 0))
        self.assertLess(abs(result.gradient[0]), 1e-5)

    def test_unbounded_objective(self):
        def objective(beta):
            b = beta[0]
            return -np.logaddexp(0.0, -b), \
                np.array([1.0 / (1.0 + np.exp(b))]), \
                np.array([[-np.exp(b) / (1.0 + np.exp(b)) ** 2]])
        with self.assertRaises(ConvergenceError) as cm:
            damped_newton(objective, np.zeros(1), max_iter=20)
        self.assertEqual(cm.exception.iterations, 20)
        self.assertGreater(cm.exception.beta[0], 5.0)

    def test_singular_hessian(self):
        def objective(beta):
            return float(beta[0]), np.array([1.0]), np.zeros((1, 1))
        with self.assertRaises(ConvergenceError):
            damped_newton(objective, np.zeros(1))

    def test_standard_errors(self):
        self.assertListEqual(standard_errors(np.array([[-4.0]])).tolist(),
                             [0.5])
        self.assertTrue(np.all(np.isnan(standard_errors(np.zeros((2, 2))))))
