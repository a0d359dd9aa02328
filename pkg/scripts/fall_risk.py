from survlearn.dataset.io import CohortSchema, load_survival_csv
from survlearn.learn.coxph import CoxPHModel
from survlearn.learn.predict import format_report, hazard_ratios, \
    median_table, survival_table
from survlearn.utils.backend import BackendContext, ModelBackend

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

"""
This is an example script of fitting a Cox model to a fall-risk cohort and
reading off survival probabilities, median times to a first fall and the
hazard ratio of every covariate.
"""

cohort_file = "xxx/falls.csv"
output_path = "xxx/xxx"

# column mapping of the cohort file
schema = CohortSchema(time="months", event="fell", id="patient",
                      covariates=("age", "prior_falls", "sedatives"),
                      time_unit="months")

# profiles to predict for
profiles = [{"age": 70, "prior_falls": 0, "sedatives": 0},
            {"age": 82, "prior_falls": 2, "sedatives": 1}]
times = [3, 6, 12]

backend = ModelBackend(BackendContext(output_path=output_path,
                                      merge_path=True))
cohort = load_survival_csv(cohort_file, schema)

model = CoxPHModel(backend=backend, time_unit=schema.time_unit)
model.fit(cohort)
model.save("cox_model.json")

print(format_report(hazard_ratios(model), 'table'))
print(format_report(survival_table(model, profiles, times), 'table'))
print(format_report(median_table(model, profiles, threshold=0.5), 'table'))
