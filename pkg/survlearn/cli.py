"""Command-line entry point: ``survlearn fit|predict|simulate|compare|prob|
validate``.

Payloads (JSON or tables) go to standard output, log lines to standard
error. Exit codes: 0 success, 2 input error, 3 non-convergence (the model
is still written, with converged=false).
"""
import sys
import argparse
import pandas as pd
from survlearn.dataset.base import CovariateVector
from survlearn.dataset.io import CohortSchema, load_survival_csv, \
    load_binary_csv
from survlearn.dataset.validation import validate_cohort
from survlearn.distributions import poisson_process
from survlearn.exceptions import ConvergenceError, SchemaError
from survlearn.learn.coxph import CoxPHModel
from survlearn.learn.glm import LogisticModel, PoissonSurvivalModel, \
    predict_logistic
from survlearn.learn.predict import REPORT_FORMATS, format_report, \
    survival_table, median_table, hazard_ratios, event_time_grid, \
    cox_poisson_equivalence_report
from survlearn.simulate.simulation import SimulationSpec, CovariateSpec, \
    simulate_cohort
from survlearn.utils.backend import BackendContext, ModelBackend
from survlearn.utils.check import check_column_names, split_names
from survlearn.utils.config import FitConfig, load_default_environment
from survlearn.utils.logging import get_logger

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3

MODEL_CLASSES = {'cox': CoxPHModel,
                 'poisson': PoissonSurvivalModel,
                 'logistic': LogisticModel}

PROB_QUANTITIES = {
    'pmf': lambda a: poisson_process.poisson_pmf(a.rate, a.t, a.k),
    'exactly-one': lambda a: poisson_process.prob_exactly_one(a.rate, a.t),
    'at-least-one': lambda a: poisson_process.prob_at_least_one(a.rate, a.t),
    'survival': lambda a: poisson_process.survival_const_rate(a.rate, a.t),
    'pdf': lambda a: poisson_process.exponential_pdf(a.rate, a.t),
    'cdf': lambda a: poisson_process.exponential_cdf(a.rate, a.t)}

logger = get_logger('survlearn.cli')


def float_list(value):
    try:
        return [float(x) for x in split_names(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected comma separated numbers, got {!r}".format(value))


def _emit(text):
    sys.stdout.write(text + '\n')


def _schema(args):
    return CohortSchema(time=args.time, event=args.event,
                        covariates=tuple(split_names(args.covariates)),
                        id=args.id, outcome=args.outcome,
                        time_unit=args.time_unit)


def _add_schema_arguments(parser):
    group = parser.add_argument_group('column mapping')
    group.add_argument('--data', required=True, help='cohort CSV file')
    group.add_argument('--time', default='time', help='follow-up time column')
    group.add_argument('--event', default='event',
                       help='event indicator column (0/1/true/false)')
    group.add_argument('--outcome', default=None,
                       help='0/1 outcome column (logistic fits only)')
    group.add_argument('--covariates', default='',
                       help='comma separated covariate columns')
    group.add_argument('--id', default=None, help='subject id column')
    group.add_argument('--time-unit', default=None,
                       help='time unit recorded in the model')


def _add_format_argument(parser):
    parser.add_argument('--format', choices=REPORT_FORMATS, default='json')


def _add_profile_arguments(parser):
    parser.add_argument('--profile', action='append', default=[],
                        help="covariate profile 'name=value,...'; "
                             "repeat for several profiles")
    parser.add_argument('--profile-csv', default=None,
                        help='CSV with one profile per row')


def _parse_profile(text, names):
    mapping = {}
    for item in split_names(text):
        name, sep, value = item.partition('=')
        if not sep:
            raise ValueError("Profile entry {!r} is not name=value.".format(
                item))
        try:
            mapping[name.strip()] = float(value)
        except ValueError:
            raise ValueError("Profile value {!r} of {} is not a "
                             "number.".format(value, name))
    return CovariateVector.from_dict(mapping, names=names)


def _profiles(args, model):
    names = list(model.covariate_names_)
    profiles = [_parse_profile(x, names) for x in args.profile]
    if args.profile_csv is not None:
        df = pd.read_csv(args.profile_csv)
        check_column_names(df.columns, names)
        profiles.extend(CovariateVector(names, row)
                        for row in df[names].to_numpy(dtype=float))
    if not profiles:
        if names:
            raise SchemaError("Model covariates {} need --profile or "
                              "--profile-csv.".format(names))
        profiles = [CovariateVector((), [])]
    return profiles


def cmd_fit(args, backend):
    model_class = MODEL_CLASSES[args.model]
    if args.model == 'logistic' and args.outcome is None:
        raise SchemaError("fit logistic needs --outcome.")
    config = FitConfig.resolve({'tol': args.tol, 'max_iter': args.max_iter,
                                'max_halving': args.max_halving},
                               json_file=args.config)
    schema = _schema(args)
    cohort = load_binary_csv(args.data, schema) if args.model == 'logistic' \
        else load_survival_csv(args.data, schema)
    model = model_class(config=config, backend=backend,
                        time_unit=schema.time_unit)
    status = EXIT_OK
    try:
        model.fit(cohort)
    except ConvergenceError as err:
        model = err.model
        status = EXIT_NOT_CONVERGED
        logger.error("Model did not converge: {}".format(err))
    model.save(args.out)
    data = model.to_dict()
    log_likelihood = data.get('log_partial_likelihood',
                              data.get('log_likelihood'))
    _emit(format_report({'model_type': data['model_type'],
                         'converged': model.converged_,
                         'iterations': model.n_iter_,
                         'log_likelihood': log_likelihood,
                         'out': args.out}, 'json'))
    return status


def cmd_predict(args, backend):
    model = backend.load_model_by_file(args.model)
    env = load_default_environment()
    report = {}
    if isinstance(model, LogisticModel):
        for flag, given in [('--median', args.median),
                            ('--times', args.times is not None),
                            ('--threshold', args.threshold is not None)]:
            if given:
                raise ValueError("{} needs a survival model, got a "
                                 "logistic model.".format(flag))
        profiles = _profiles(args, model)
        report['probability'] = [
            {'profile': label, 'probability': predict_logistic(model, x)}
            for label, x in enumerate(profiles, start=1)]
        if args.hazard_ratios:
            report['odds_ratios'] = [
                {'covariate': x['covariate'], 'coefficient': x['coefficient'],
                 'odds_ratio': x['hazard_ratio'],
                 'percent_change': x['percent_change']}
                for x in hazard_ratios(model)]
        _emit(format_report(report, args.format))
        return EXIT_OK

    wants_curve = args.times is not None or not (args.median or
                                                 args.hazard_ratios)
    if wants_curve or args.median:
        profiles = _profiles(args, model)
        if wants_curve:
            times = args.times if args.times is not None else env['times']
            report['survival'] = survival_table(model, profiles, times)
        if args.median:
            threshold = args.threshold if args.threshold is not None \
                else env['threshold']
            report['median'] = median_table(model, profiles, threshold)
    if args.hazard_ratios:
        report['hazard_ratios'] = hazard_ratios(model)
    _emit(format_report(report, args.format))
    return EXIT_OK


def _spec_from_args(args):
    data = {}
    if args.spec is not None:
        data = SimulationSpec.from_json(args.spec).to_dict()
    flags = {'n_subjects': args.n, 'baseline': args.baseline,
             'lambda0': args.lambda0, 'shape': args.shape,
             'censoring_rate_target': args.censoring, 'seed': args.seed,
             'time_unit': args.time_unit}
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.beta is not None:
        data['true_beta'] = args.beta
        names = split_names(args.covariates) or \
            ['x{}'.format(i + 1) for i in range(len(args.beta))]
        bernoulli = dict((name, float(q)) for name, _, q in (
            x.partition(':') for x in split_names(args.bernoulli)))
        data['covariates'] = [
            CovariateSpec(x, 'bernoulli', bernoulli[x]) if x in bernoulli
            else CovariateSpec(x) for x in names]
    if 'n_subjects' not in data:
        raise ValueError("simulate needs --n or a --spec file.")
    return SimulationSpec.from_dict(data)


def cmd_simulate(args, backend):
    spec = _spec_from_args(args)
    n_jobs = args.n_jobs if args.n_jobs is not None else \
        backend.def_env['n_jobs']
    cohort = simulate_cohort(spec, n_jobs=n_jobs,
                             chunk_size=backend.def_env['chunk_size'])
    backend.save_cohort(cohort, args.out)
    _emit(format_report({'n_subjects': len(cohort),
                         'events': cohort.n_events,
                         'censored': cohort.n_censored,
                         'censored_fraction': cohort.n_censored / len(cohort),
                         'out': args.out}, 'json'))
    return EXIT_OK


def cmd_compare(args, backend):
    cox = backend.load_model_by_file(args.cox)
    glm = backend.load_model_by_file(args.glm)
    profiles = _profiles(args, cox)
    times = args.times if args.times is not None else \
        event_time_grid(cox, args.grid)
    report = cox_poisson_equivalence_report(cox, glm, profiles, times)
    _emit(format_report(report, args.format))
    return EXIT_OK


def cmd_prob(args, backend):
    if args.quantity == 'pmf' and args.k is None:
        raise ValueError("prob pmf needs --k.")
    value = PROB_QUANTITIES[args.quantity](args)
    report = {'quantity': args.quantity, 'rate': args.rate, 't': args.t,
              'value': value}
    if args.quantity == 'pmf':
        report['k'] = args.k
    _emit(format_report(report, args.format))
    return EXIT_OK


def cmd_validate(args, backend):
    schema = _schema(args)
    cohort = load_binary_csv(args.data, schema) if args.outcome is not None \
        else load_survival_csv(args.data, schema)
    findings = validate_cohort(cohort)
    _emit(format_report([x.to_dict() for x in findings], args.format)
          if findings or args.format == 'json' else 'no findings')
    return EXIT_INPUT_ERROR if findings else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog='survlearn',
        description='Fit and apply Cox, Poisson-survival and logistic '
                    'event-risk models on right-censored cohorts.')
    parser.add_argument('--log-file', default=None,
                        help='also write log lines to this file')
    parser.add_argument('--log-level', default=None,
                        help='console log level, e.g. WARNING')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    fit = commands.add_parser('fit', help='fit a model on a cohort CSV')
    fit.add_argument('model', choices=list(MODEL_CLASSES))
    _add_schema_arguments(fit)
    fit.add_argument('--out', required=True, help='model JSON file')
    fit.add_argument('--config', default=None, help='JSON fit config file')
    fit.add_argument('--tol', type=float, default=None)
    fit.add_argument('--max-iter', type=int, default=None)
    fit.add_argument('--max-halving', type=int, default=None)
    fit.set_defaults(handler=cmd_fit)

    predict = commands.add_parser('predict', help='apply a fitted model')
    predict.add_argument('--model', required=True, help='model JSON file')
    _add_profile_arguments(predict)
    predict.add_argument('--times', type=float_list, default=None,
                         help='comma separated prediction times')
    predict.add_argument('--median', action='store_true',
                         help='time at which survival drops to --threshold')
    predict.add_argument('--threshold', type=float, default=None)
    predict.add_argument('--hazard-ratios', action='store_true')
    _add_format_argument(predict)
    predict.set_defaults(handler=cmd_predict)

    simulate = commands.add_parser('simulate',
                                   help='write a simulated cohort CSV')
    simulate.add_argument('--spec', default=None,
                          help='JSON simulation spec; flags override it')
    simulate.add_argument('--n', type=int, default=None)
    simulate.add_argument('--beta', type=float_list, default=None)
    simulate.add_argument('--covariates', default='',
                          help='covariate names, default x1, x2, ...')
    simulate.add_argument('--bernoulli', default='',
                          help="bernoulli covariates 'name:q,...'")
    simulate.add_argument('--baseline', choices=['constant', 'weibull'],
                          default=None)
    simulate.add_argument('--lambda0', type=float, default=None)
    simulate.add_argument('--shape', type=float, default=None)
    simulate.add_argument('--censoring', type=float, default=None,
                          help='target censored fraction in [0, 1)')
    simulate.add_argument('--seed', type=int, default=None)
    simulate.add_argument('--time-unit', default=None)
    simulate.add_argument('--n-jobs', type=int, default=None)
    simulate.add_argument('--out', required=True, help='cohort CSV file')
    simulate.set_defaults(handler=cmd_simulate)

    compare = commands.add_parser(
        'compare', help='Cox versus Poisson-survival survival curves')
    compare.add_argument('--cox', required=True, help='Cox model JSON file')
    compare.add_argument('--glm', required=True,
                         help='Poisson-survival model JSON file')
    _add_profile_arguments(compare)
    compare.add_argument('--times', type=float_list, default=None)
    compare.add_argument('--grid', type=int, default=50,
                         help='grid points over the event-time range when '
                              '--times is not given')
    _add_format_argument(compare)
    compare.set_defaults(handler=cmd_compare)

    prob = commands.add_parser(
        'prob', help='constant-rate Poisson-process probabilities')
    prob.add_argument('quantity', choices=list(PROB_QUANTITIES))
    prob.add_argument('--rate', type=float, required=True)
    prob.add_argument('--t', type=float, required=True)
    prob.add_argument('--k', type=int, default=None)
    _add_format_argument(prob)
    prob.set_defaults(handler=cmd_prob)

    validate = commands.add_parser('validate',
                                   help='report cohort invariant violations')
    _add_schema_arguments(validate)
    _add_format_argument(validate)
    validate.set_defaults(handler=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        backend = ModelBackend(BackendContext(log_file=args.log_file,
                                              log_level=args.log_level))
        return args.handler(args, backend)
    except (ValueError, OSError, OverflowError) as err:
        logger.error(str(err))
        sys.stderr.write('error: {}\n'.format(err))
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
