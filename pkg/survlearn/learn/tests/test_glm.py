import math
import os
import shutil
import tempfile
import numpy as np
from scipy.special import expit, logit
from sklearn.exceptions import NotFittedError
from survlearn.dataset.base import BinaryCohort, Cohort, CovariateVector
from survlearn.distributions.poisson_process import survival_const_rate
from survlearn.exceptions import ConvergenceError, DegenerateDataError, \
    SchemaError
from survlearn.learn.glm import LogisticModel, PoissonSurvivalModel, \
    fit_logistic, fit_poisson_survival, predict_logistic, \
    predict_poisson_survival, odds_ratio
from survlearn.utils.backend import ModelBackend
from survlearn.utils.basetest import SurvLearnTest
from survlearn.utils.config import FitConfig


def binary_cohort(rng, n, beta0, beta1):
    x = rng.normal(size=n)
    y = (rng.uniform(size=n) < expit(beta0 + beta1 * x)).astype(int)
    return BinaryCohort.from_arrays(y, x[:, None], ['age'])


class TestLogistic(SurvLearnTest):
    def test_gradient_matches_finite_differences(self):
        rng = np.random.RandomState(10)
        cohort = binary_cohort(rng, 60, -0.5, 1.0)
        model = LogisticModel()
        for _ in range(20):
            beta = rng.normal(scale=0.8, size=2)
            _, gradient, _ = model.loglik_derivatives(beta, cohort)
            self.assertGradientClose(
                lambda b: model.loglik_derivatives(b, cohort)[0],
                gradient, beta)

    def test_recovers_simulated_coefficients(self):
        cohort = binary_cohort(np.random.RandomState(0), 2000, -1.0, 0.8)
        model = fit_logistic(cohort)
        self.assertTrue(model.converged_)
        self.assertLess(abs(model.intercept_ + 1.0), 0.15)
        self.assertLess(abs(model.coefficient('age') - 0.8), 0.15)
        self.assertTrue(np.all(np.diff(model.history_) >= 0))
        self.assertEqual(len(model.standard_errors_), 2)
        self.assertAlmostEqual(predict_logistic(model, {'age': 0.0}),
                               1.0 / (1.0 + math.exp(-model.intercept_)),
                               places=14)

    def test_independent_outcome(self):
        rng = np.random.RandomState(1)
        y = (rng.uniform(size=2000) < 0.5).astype(int)
        cohort = BinaryCohort.from_arrays(y, rng.normal(size=(2000, 1)),
                                          ['age'])
        self.assertLess(abs(fit_logistic(cohort).coef_[0]), 0.15)

    def test_separation_raises(self):
        cohort = BinaryCohort.from_arrays([0, 0, 1, 1],
                                          [[-2.0], [-1.0], [1.0], [2.0]],
                                          ['age'])
        with self.assertRaises(ConvergenceError) as cm:
            fit_logistic(cohort)
        self.assertIsNotNone(cm.exception.model)
        self.assertFalse(cm.exception.model.converged_)

    def test_predictions(self):
        model = LogisticModel.from_coefficients(0.0, {'age': 0.0, 'gait': 0.0})
        self.assertEqual(predict_logistic(model, {'age': 3.0, 'gait': -1.0}),
                         0.5)
        model = LogisticModel.from_coefficients(math.log(3), {})
        self.assertAlmostEqual(predict_logistic(model, None), 0.75, places=15)

    def test_logit_linearity(self):
        model = LogisticModel.from_coefficients(
            -0.3, {'age': 0.7, 'gait': -1.2})
        x = np.array([0.4, 1.5])
        base = logit(predict_logistic(model, x))
        for k, name in enumerate(['age', 'gait']):
            shifted = x.copy()
            shifted[k] += 1.0
            self.assertAlmostEqual(
                logit(predict_logistic(model, shifted)) - base,
                model.coefficient(name), places=10)

    def test_batch_prediction(self):
        model = LogisticModel.from_coefficients(0.2, {'age': 0.5})
        X = np.array([[0.0], [1.0], [-2.0]])
        batch = predict_logistic(model, X)
        self.assertEqual(batch.shape, (3,))
        self.assertAlmostEqual(batch[1], predict_logistic(model, [1.0]),
                               places=15)

    def test_odds_ratio(self):
        model = LogisticModel.from_coefficients(
            0.0, {'a': 0.0, 'b': 0.5, 'c': -0.5})
        self.assertEqual(odds_ratio(model, 'a'), 1.0)
        self.assertAlmostEqual(odds_ratio(model, 'b'), 1.6487, places=4)
        self.assertAlmostEqual(odds_ratio(model, 'c'), 0.6065, places=4)
        with self.assertRaises(SchemaError):
            odds_ratio(model, 'bmi')

    def test_profile_names_must_match(self):
        model = LogisticModel.from_coefficients(0.0, {'age': 1.0})
        with self.assertRaises(SchemaError):
            predict_logistic(model, CovariateVector(['gait'], [1.0]))
        with self.assertRaises(SchemaError):
            predict_logistic(model, {'age': 1.0, 'gait': 2.0})

    def test_not_fitted(self):
        with self.assertRaises(NotFittedError):
            LogisticModel().predict_proba({'age': 1.0})

    def test_wrong_cohort_type(self):
        with self.assertRaises(TypeError):
            LogisticModel().fit(Cohort.from_arrays([1, 2], [1, 0]))


class TestPoissonSurvival(SurvLearnTest):
    def test_gradient_matches_finite_differences(self):
        rng = np.random.RandomState(11)
        cohort = self.random_small_cohort(rng, n_subjects=50)
        model = PoissonSurvivalModel()
        for _ in range(20):
            beta = rng.normal(scale=0.5, size=3)
            _, gradient, hessian = model.loglik_derivatives(beta, cohort)
            self.assertGradientClose(
                lambda b: model.loglik_derivatives(b, cohort)[0],
                gradient, beta)
            self.assertTrue(np.all(np.linalg.eigvalsh(hessian) <= 1e-8))

    def test_single_subject(self):
        model = fit_poisson_survival(Cohort.from_arrays([1.0], [1]))
        self.assertEqual(model.intercept_, 0.0)
        self.assertEqual(model.baseline_rate(), 1.0)

    def test_closed_form_rate(self):
        cohort = Cohort.from_arrays([1.0, 2.5, 0.5, 4.0, 3.0],
                                    [1, 0, 1, 1, 0])
        model = fit_poisson_survival(cohort)
        self.assertAlmostEqual(model.intercept_, math.log(3 / 11.0),
                               places=8)

    def test_time_scaling(self):
        rng = np.random.RandomState(12)
        cohort = self.random_small_cohort(rng, n_subjects=60)
        config = FitConfig(tol=1e-12)
        model = fit_poisson_survival(cohort, config)
        scaled = fit_poisson_survival(cohort.with_times(cohort.times * 7.0),
                                      config)
        self.assertAlmostEqual(scaled.intercept_,
                               model.intercept_ - math.log(7.0), places=7)
        self.assertTrue(np.allclose(scaled.coef_, model.coef_, atol=1e-7))

    def test_all_zero_times(self):
        with self.assertRaises(DegenerateDataError):
            fit_poisson_survival(Cohort.from_arrays([0.0, 0.0], [1, 0]))

    def test_no_events(self):
        with self.assertRaises(DegenerateDataError):
            fit_poisson_survival(Cohort.from_arrays([1.0, 2.0], [0, 0]))

    def test_predictions(self):
        model = PoissonSurvivalModel.from_coefficients(0.0, {})
        self.assertEqual(predict_poisson_survival(model, None, 0.0), 1.0)
        self.assertAlmostEqual(predict_poisson_survival(model, None,
                                                        math.log(2)),
                               0.5, places=15)
        model = PoissonSurvivalModel.from_coefficients(math.log(0.1),
                                                       {'age': 0.3})
        self.assertAlmostEqual(
            predict_poisson_survival(model, {'age': 0.0}, 12.0),
            survival_const_rate(0.1, 12.0), places=12)
        self.assertAlmostEqual(
            predict_poisson_survival(model, {'age': 0.0}, 12.0), 0.301194,
            places=6)

    def test_overflowing_rate(self):
        model = PoissonSurvivalModel.from_coefficients(0.0, {'x': 1.0})
        self.assertEqual(predict_poisson_survival(model, {'x': 800.0}, 0.0),
                         1.0)
        self.assertEqual(predict_poisson_survival(model, {'x': 800.0}, 0.5),
                         0.0)
        values = model.survival_function({'x': 800.0}, [0.0, 0.5, 2.0])
        self.assertListEqual(values.tolist(), [1.0, 0.0, 0.0])


class TestGlmArtifact(SurvLearnTest):
    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def test_save_and_load(self):
        rng = np.random.RandomState(5)
        cohort = self.random_small_cohort(rng)
        model = fit_poisson_survival(cohort)
        model_file = model.save(os.path.join(self.tmp_dir, 'glm.json'))
        loaded = ModelBackend.load_model_by_file(model_file)
        self.assertIsInstance(loaded, PoissonSurvivalModel)
        self.assertEqual(loaded.intercept_, model.intercept_)
        self.assertTrue(np.array_equal(loaded.coef_, model.coef_))
        self.assertEqual(loaded.covariate_names_, model.covariate_names_)
        data = loaded.to_dict()
        self.assertEqual(data['family'], 'poisson_survival')
        self.assertTrue(data['converged'])
        self.assertSetEqual(set(data['coefficients']), {'x1', 'x2'})
