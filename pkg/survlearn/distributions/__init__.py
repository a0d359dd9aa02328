from survlearn.distributions.poisson_process import ConstantRate, Horizon, \
    poisson_pmf, poisson_cdf, prob_at_least, prob_exactly_one, \
    prob_at_least_one, survival_const_rate, exponential_pdf, \
    exponential_cdf, estimate_constant_rate

__all__ = ['ConstantRate', 'Horizon', 'poisson_pmf', 'poisson_cdf',
           'prob_at_least', 'prob_exactly_one', 'prob_at_least_one',
           'survival_const_rate', 'exponential_pdf', 'exponential_cdf',
           'estimate_constant_rate']
