from survlearn.learn.coxph import fit_cox
from survlearn.learn.glm import fit_poisson_survival
from survlearn.learn.predict import cox_poisson_equivalence_report, \
    event_time_grid, format_report
from survlearn.simulate.simulation import CovariateSpec, SimulationSpec, \
    CohortSimulator

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

"""
This is an example script of recovering known hazard ratios from simulated
cohorts: a constant baseline hazard under which the Cox and the
Poisson-survival fits should agree, then a Weibull-like baseline under which
only the Cox fit stays calibrated.
"""

n_jobs = 4
true_beta = (0.4, 0.7)
covariates = (CovariateSpec("age_z"),
              CovariateSpec("sedatives", "bernoulli", q=0.3))

for baseline, shape in [("constant", 1.0), ("weibull", 1.8)]:
    spec = SimulationSpec(n_subjects=5000, true_beta=true_beta,
                          covariates=covariates, baseline=baseline,
                          lambda0=0.05, shape=shape,
                          censoring_rate_target=0.3, seed=2024,
                          time_unit="months")
    simulator = CohortSimulator(spec, n_jobs=n_jobs)
    cohort = simulator.simulate()

    cox = fit_cox(cohort)
    glm = fit_poisson_survival(cohort)
    print("{} baseline: true {}, cox {}, poisson {}".format(
        baseline, list(true_beta), cox.coef_.round(3).tolist(),
        glm.coef_.round(3).tolist()))

    profiles = [{"age_z": 0.0, "sedatives": 0.0},
                {"age_z": 1.0, "sedatives": 1.0}]
    report = cox_poisson_equivalence_report(
        cox, glm, profiles, event_time_grid(cox, n_points=10))
    print(format_report(report, 'table'))
