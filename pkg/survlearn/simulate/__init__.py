from survlearn.simulate.simulation import CovariateSpec, SimulationSpec, \
    CohortSimulator, simulate_cohort, expected_censoring_fraction, \
    calibrate_censoring

__all__ = ['CovariateSpec', 'SimulationSpec', 'CohortSimulator',
           'simulate_cohort', 'expected_censoring_fraction',
           'calibrate_censoring']
