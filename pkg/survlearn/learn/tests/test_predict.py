import json
import math
import numpy as np
from survlearn.exceptions import DomainError, SchemaError
from survlearn.learn.coxph import CoxPHModel, baseline_survival, fit_cox
from survlearn.learn.glm import LogisticModel, PoissonSurvivalModel, \
    fit_poisson_survival
from survlearn.learn.predict import SurvivalCurve, survival_at, \
    time_to_threshold, hazard_ratios, profile_hazard_ratio, \
    cox_poisson_equivalence_report, event_time_grid, format_report
from survlearn.simulate.simulation import SimulationSpec, CovariateSpec, \
    simulate_cohort
from survlearn.utils.basetest import SurvLearnTest, WORKED_TIMES, \
    WORKED_CUMULATIVE


def worked_model():
    return CoxPHModel.from_baseline({'risk': 1.0}, WORKED_TIMES,
                                    WORKED_CUMULATIVE, time_unit='months')


class TestSurvivalAt(SurvLearnTest):
    def test_worked_example(self):
        values = survival_at(worked_model(), {'risk': 2.0}, [0.0, 1.0])
        self.assertEqual(values[0], 1.0)
        self.assertAlmostEqual(values[1], 0.4776, places=4)
        self.assertAlmostEqual(values[1], math.exp(-0.10 * math.exp(2.0)),
                               places=15)

    def test_null_profile_is_baseline(self):
        model = worked_model()
        table = model.baseline_
        times = [0.5, 1.0, 2.0, 3.5, 6.0, 8.0]
        for t, value in zip(times, survival_at(model, {'risk': 0.0}, times)):
            self.assertAlmostEqual(value, baseline_survival(table, t).value,
                                   places=15)

    def test_overflowing_linear_predictor(self):
        model = worked_model()
        values = survival_at(model, {'risk': 800.0}, [0.0, 0.5, 1.0, 8.0])
        self.assertListEqual(values, [1.0, 1.0, 0.0, 0.0])
        self.assertEqual(time_to_threshold(model, {'risk': 800.0}).time, 1.0)

    def test_baseline_power_identity(self):
        model = worked_model()
        times = np.linspace(0, 7, 29)
        for risk in [-1.5, 0.3, 1.0]:
            profile = {'risk': risk}
            self.assertLess(np.max(np.abs(
                model.survival_from_baseline(profile, times) -
                model.survival_function(profile, times))), 1e-15)

    def test_proportionality(self):
        model = CoxPHModel.from_baseline({'a': 0.4, 'b': -1.1},
                                         WORKED_TIMES, WORKED_CUMULATIVE)
        x1, x2 = {'a': 1.0, 'b': 0.5}, {'a': -0.3, 'b': 0.2}
        expected = 0.4 * 1.3 - 1.1 * 0.3
        for t in WORKED_TIMES:
            s1, s2 = survival_at(model, x1, [t])[0], \
                survival_at(model, x2, [t])[0]
            self.assertAlmostEqual(math.log(-math.log(s1)) -
                                   math.log(-math.log(s2)), expected,
                                   places=10)
        self.assertAlmostEqual(profile_hazard_ratio(model, x1, x2),
                               math.exp(expected), places=12)

    def test_monotone_curves(self):
        rng = np.random.RandomState(21)
        for _ in range(50):
            cohort = self.random_small_cohort(rng)
            model = fit_cox(cohort)
            curve = SurvivalCurve(model, rng.normal(size=2))
            times = np.linspace(0, cohort.times.max() * 1.2, 40)
            values = curve(times)
            self.assertEqual(values[0], 1.0)
            self.assertTrue(np.all(np.diff(values) <= 0))
            self.assertTrue(np.all((values >= 0) & (values <= 1)))
            self.assertTrue(curve.extrapolated(times)[-1])

    def test_errors(self):
        with self.assertRaises(SchemaError):
            survival_at(worked_model(), {'age': 1.0}, [1.0])
        with self.assertRaises(DomainError):
            survival_at(worked_model(), {'risk': 1.0}, [-1.0])
        with self.assertRaises(TypeError):
            survival_at(LogisticModel.from_coefficients(0.0, {'risk': 1.0}),
                        {'risk': 1.0}, [1.0])


class TestTimeToThreshold(SurvLearnTest):
    def test_worked_example(self):
        estimate = time_to_threshold(worked_model(), {'risk': 2.0})
        self.assertAlmostEqual(estimate.target_cumulative_hazard, 0.094,
                               delta=0.001)
        self.assertEqual(estimate.time, 1.0)
        self.assertFalse(estimate.extrapolated)
        self.assertEqual(estimate.threshold, 0.5)

    def test_null_profile(self):
        self.assertEqual(time_to_threshold(worked_model(),
                                           {'risk': 0.0}).time, 5.0)

    def test_beyond_horizon(self):
        estimate = time_to_threshold(worked_model(), {'risk': -10.0})
        self.assertTrue(estimate.beyond_horizon)
        self.assertTrue(estimate.extrapolated)
        self.assertEqual(estimate.to_dict()['time'], 'beyond-horizon')

    def test_threshold_consistency(self):
        model = worked_model()
        for risk in np.linspace(-2, 3, 26):
            for threshold in [0.2, 0.5, 0.8]:
                estimate = time_to_threshold(model, {'risk': risk},
                                             threshold)
                if estimate.beyond_horizon:
                    continue
                self.assertLessEqual(
                    survival_at(model, {'risk': risk}, [estimate.time])[0],
                    threshold)
                earlier = [t for t in WORKED_TIMES if t < estimate.time]
                if earlier:
                    self.assertGreater(survival_at(
                        model, {'risk': risk}, [earlier[-1]])[0], threshold)

    def test_invalid_threshold(self):
        for threshold in [0.0, 1.0, 1.5]:
            with self.assertRaises(DomainError):
                time_to_threshold(worked_model(), {'risk': 0.0}, threshold)

    def test_poisson_closed_form(self):
        model = PoissonSurvivalModel.from_coefficients(math.log(0.1),
                                                       {'risk': 0.5})
        estimate = time_to_threshold(model, {'risk': 0.0})
        self.assertAlmostEqual(estimate.time, math.log(2) / 0.1, places=10)
        self.assertAlmostEqual(survival_at(model, {'risk': 0.0},
                                           [estimate.time])[0], 0.5,
                               places=12)


class TestHazardRatios(SurvLearnTest):
    def test_interpretation(self):
        model = CoxPHModel.from_baseline({'gait': 0.5, 'balance': -0.5,
                                          'sex': 0.0}, WORKED_TIMES,
                                         WORKED_CUMULATIVE)
        rows = {x['covariate']: x for x in hazard_ratios(model)}
        self.assertAlmostEqual(rows['gait']['hazard_ratio'], 1.6487,
                               delta=1e-3)
        self.assertAlmostEqual(rows['balance']['hazard_ratio'], 0.6065,
                               delta=1e-3)
        self.assertEqual(rows['sex']['hazard_ratio'], 1.0)
        self.assertAlmostEqual(rows['gait']['percent_change'],
                               100 * (math.exp(0.5) - 1), places=12)

        table = format_report(hazard_ratios(model), 'table')
        self.assertIn('+65%', table)
        self.assertIn('-39%', table)
        self.assertIn(' 0%', table)
        data = json.loads(format_report(hazard_ratios(model), 'json'))
        self.assertAlmostEqual(data[0]['percent_change'],
                               100 * (math.exp(0.5) - 1), places=12)

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            format_report([], 'xml')


class TestEquivalenceReport(SurvLearnTest):
    @staticmethod
    def _simulated_fits(baseline, shape=1.0):
        spec = SimulationSpec(
            n_subjects=5000, true_beta=(0.5, -0.3),
            covariates=(CovariateSpec('x1'),
                        CovariateSpec('x2', 'bernoulli', 0.4)),
            baseline=baseline, lambda0=0.1, shape=shape,
            censoring_rate_target=0.2, seed=99)
        cohort = simulate_cohort(spec)
        return fit_cox(cohort), fit_poisson_survival(cohort)

    def test_identical_formula(self):
        times = np.linspace(0.5, 10, 20)
        cox = CoxPHModel.from_baseline({'x1': 0.5, 'x2': -0.3}, times, times)
        glm = PoissonSurvivalModel.from_coefficients(0.0, {'x1': 0.5,
                                                           'x2': -0.3})
        profiles = [{'x1': 0.0, 'x2': 0.0}, {'x1': 1.2, 'x2': -0.7}]
        report = cox_poisson_equivalence_report(cox, glm, profiles, times)
        self.assertLess(report['max_divergence'], 1e-15)
        self.assertAlmostEqual(report['baseline']['cox_slope'], 1.0,
                               places=12)
        self.assertEqual(report['baseline']['glm_rate'], 1.0)
        self.assertEqual(len(report['rows']), 40)

    def test_constant_baseline_agrees(self):
        cox, glm = self._simulated_fits('constant')
        profiles = [{'x1': 0.0, 'x2': 0.0}, {'x1': 1.0, 'x2': 1.0}]
        report = cox_poisson_equivalence_report(cox, glm, profiles,
                                                event_time_grid(cox))
        self.assertLess(report['max_divergence'], 0.05)
        self.assertLess(abs(report['baseline']['cox_slope'] -
                            report['baseline']['glm_rate']), 0.02)
        self.assertLess(abs(glm.intercept_ - math.log(0.1)), 0.1)
        self.assertLess(abs(glm.coefficient('x1') - 0.5), 0.1)
        self.assertLess(abs(glm.coefficient('x2') + 0.3), 0.1)

        weibull_cox, weibull_glm = self._simulated_fits('weibull', 3.0)
        weibull = cox_poisson_equivalence_report(
            weibull_cox, weibull_glm, profiles, event_time_grid(weibull_cox))
        self.assertGreater(weibull['max_divergence'],
                           report['max_divergence'])

    def test_covariate_mismatch(self):
        cox = worked_model()
        glm = PoissonSurvivalModel.from_coefficients(0.0, {'age': 0.1})
        with self.assertRaises(SchemaError):
            cox_poisson_equivalence_report(cox, glm, [{'risk': 0.0}], [1.0])

    def test_table_format(self):
        cox = worked_model()
        glm = PoissonSurvivalModel.from_coefficients(math.log(0.2),
                                                     {'risk': 1.0})
        report = cox_poisson_equivalence_report(cox, glm, [{'risk': 0.0}],
                                                WORKED_TIMES)
        text = format_report(report, 'table')
        self.assertIn('divergence', text)
        self.assertIn('max_divergence', text)
        self.assertIn('cox_slope', text)
