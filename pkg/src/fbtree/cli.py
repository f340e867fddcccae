"""Command-line front end.

Usage::

    $ fbtree run --problem oscillatory --nt 2,4,8 --m 1000,2000,20000
    $ fbtree run --config experiment.conf --out table2.csv
    $ fbtree run --preset table3 --runs 5 --format markdown
    $ fbtree list-problems
    $ fbtree verify

Configuration files hold flat ``key = value`` lines with the long option
names as keys; options given on the command line override them.
"""

from collections import OrderedDict
import sys

from fbtree.app.app import App, EXIT_FAILURE, EXIT_OK
from fbtree.errors import ConfigError, InvalidArgumentError
from fbtree.harness.experiment import (
    ABSOLUTE, ERROR_MODES, RELATIVE, ExperimentSpec, run_experiment)
from fbtree.harness.listeners import Reporter
from fbtree.harness.table import FORMATS, emit_table
from fbtree.problems.catalog import get_problem, problem_names
from fbtree.solver.scheme import (
    AUTO, DEFAULT_GROUP_SIZE, DEFAULT_PICARD_ITERS, DEFAULT_SE_FACTOR, SCHEMES,
    SchemeParams)
from fbtree.utils import logging
from fbtree.utils.argparse import ConfigArgParser, arg, boolean, int_list


logger = logging.getLogger(__name__)

DEFAULT_SCHEME = 'first-order-half'

PRESETS = {
    'table1': {'problem': 'oscillatory',
               'scheme': 'first-order-half',
               'nt': [2],
               'm': [2000, 5000, 10000, 50000, 100000, 200000, 300000]},
    'table2': {'problem': 'oscillatory',
               'nt': [2, 4, 8, 16, 32],
               'm': [1000, 2000, 20000, 100000, 300000]},
    'table3': {'problem': 'black-scholes',
               'nt': [2, 4, 8, 12, 16, 20],
               'm': [2000, 10000, 30000, 60000, 100000, 250000]},
    'table4': {'problem': 'heston',
               'nt': [8],
               'm': [100, 500, 1000, 5000, 10000]},
    'table5': {'problem': 'rainbow:10',
               'nt': [12],
               'm': [100, 500, 1000, 2000, 5000, 10000]},
    'table6': {'problem': 'rainbow:100',
               'nt': [20],
               'm': [100, 500, 1000, 2000, 5000, 10000]},
    'table7': {'problem': 'rates:1',
               'nt': [10],
               'm': [2000, 4000, 10000, 20000, 50000, 100000, 200000]},
    'table8': {'problem': 'rates:100',
               'scheme': 'implicit',
               'nt': [10],
               'm': [10000, 50000, 100000, 200000, 300000, 400000]},
    # one group per cell; rerun with --g 1000 for the split comparison
    'figure1': {'problem': 'oscillatory',
                'g': 50000,
                'nt': [10],
                'm': [1000, 2000, 5000, 10000, 20000, 50000]},
}


RUN_DEFAULTS = {
    'g': DEFAULT_GROUP_SIZE,
    'picard': DEFAULT_PICARD_ITERS,
    'runs': 10,
    'seed_a': 0,
    'seed_b': 1000,
    'holdout': 0.5,
    'se_factor': DEFAULT_SE_FACTOR,
    'format': 'csv',
}


def min_leaf_value(value):
    if value == AUTO:
        return value
    n = int(value)
    if n < 1:
        raise ValueError("must be positive")
    return n


def _run_args():
    return OrderedDict([
        ('preset', arg('--preset', type=str, choices=sorted(PRESETS),
                       help='Experiment mirroring a published table')),
        ('problem', arg('--problem', type=str,
                        help='Problem name: {}'.format(
                            ", ".join(problem_names())))),
        ('scheme', arg('--scheme', type=str, choices=list(SCHEMES),
                       help='Named theta-scheme (default {})'
                       .format(DEFAULT_SCHEME))),
        ('nt', arg('--nt', type=int_list, metavar='N,...',
                   help='Numbers of time steps, one per cell')),
        ('m', arg('--m', type=int_list, metavar='M,...',
                  help='Sample sizes, one per cell')),
        ('g', arg('--g', type=int,
                  help='Samples per group (default {})'
                  .format(DEFAULT_GROUP_SIZE))),
        ('theta1', arg('--theta1', type=float, help='Overrides theta1')),
        ('theta2', arg('--theta2', type=float, help='Overrides theta2')),
        ('theta3', arg('--theta3', type=float, help='Overrides theta3')),
        ('picard', arg('--picard', type=int,
                       help='Picard iterations per step (default {})'
                       .format(DEFAULT_PICARD_ITERS))),
        ('runs', arg('--runs', type=int,
                     help='Independent runs per cell (default 10)')),
        ('seed_a', arg('--seed-a', type=int,
                       help='Base seed of the first five runs (default 0)')),
        ('seed_b', arg('--seed-b', type=int,
                       help='Base seed of the next five runs '
                       '(default 1000)')),
        ('min_leaf', arg('--min-leaf', type=min_leaf_value,
                         help="Minimum leaf size or 'auto'")),
        ('holdout', arg('--holdout', type=float,
                        help='Test fraction for tree selection '
                        '(default 0.5)')),
        ('se_factor', arg('--se-factor', type=float,
                           help='Standard errors of slack in tree '
                           'selection, 1 for the one-SE rule '
                           '(default {})'.format(DEFAULT_SE_FACTOR))),
        ('out', arg('--out', type=str, metavar='FILE',
                    help='Output file (default stdout)')),
        ('format', arg('--format', type=str, choices=list(FORMATS),
                       help='Table format (default csv)')),
        ('sigma', arg('--sigma', type=float,
                      help='Volatility, required for rainbow problems')),
        ('dims', arg('--dims', type=int, help='Number of assets')),
        ('error_mode', arg('--error-mode', type=str,
                           choices=list(ERROR_MODES),
                           help='Absolute or relative errors')),
        ('reference', arg('--reference', type=float,
                          help='Reference value of Y_0')),
        ('timings', arg('--timings', type=boolean,
                        help='Report runtimes (default: only on stdout, '
                        'so tables written with --out are reproducible '
                        'byte for byte)')),
    ])


class RunConfig(object):
    """Validated settings of a ``run``."""

    def __init__(self, problem, cells, scheme, group_size=DEFAULT_GROUP_SIZE,
                 min_leaf=None, holdout=0.5, n_runs=10, seed_a=0,
                 seed_b=1000, out=None, format='csv', sigma=None, dims=None,
                 error_mode=None, reference=None, timings=True, n_jobs=1,
                 se_factor=DEFAULT_SE_FACTOR):
        self.problem = problem
        self.cells = cells
        self.scheme = scheme
        self.group_size = group_size
        self.min_leaf = min_leaf
        self.holdout = holdout
        self.n_runs = n_runs
        self.seed_a = seed_a
        self.seed_b = seed_b
        self.out = out
        self.format = format
        self.sigma = sigma
        self.dims = dims
        self.error_mode = error_mode
        self.reference = reference
        self.timings = timings
        self.n_jobs = n_jobs
        self.se_factor = se_factor

    @classmethod
    def from_args(cls, args, n_jobs=1):
        args = {k: v for k, v in args.items() if v is not None}
        preset = args.pop('preset', None)
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError('preset', "unknown preset: {!r}"
                                  .format(preset))
            for key, value in PRESETS[preset].items():
                args.setdefault(key, value)
        args = dict(RUN_DEFAULTS, **args)
        if args.get('timings') is None:
            args['timings'] = args.get('out') is None
        for key in ('problem', 'nt', 'm'):
            if not args.get(key):
                raise ConfigError(key, "required")

        nt, m = args['nt'], args['m']
        if len(nt) == 1:
            nt = nt * len(m)
        elif len(m) == 1:
            m = m * len(nt)
        if len(nt) != len(m):
            raise ConfigError('m', "{} sample sizes for {} time-step counts"
                              .format(len(m), len(nt)))
        for key, values in (('nt', nt), ('m', m)):
            if any(v < 1 for v in values):
                raise ConfigError(key, "values must be positive")

        scheme = _scheme(args)
        for key in ('g', 'runs'):
            if args[key] < 1:
                raise ConfigError(key, "must be positive: {}"
                                  .format(args[key]))
        if args['se_factor'] < 0.0:
            raise ConfigError('se-factor', "must be non-negative: {}"
                              .format(args['se_factor']))
        if not 0.0 < args['holdout'] < 1.0:
            raise ConfigError('holdout', "must be in (0, 1): {}"
                              .format(args['holdout']))
        if args.get('sigma') is not None and args['sigma'] <= 0.0:
            raise ConfigError('sigma', "must be positive: {}"
                              .format(args['sigma']))
        if args.get('dims') is not None and args['dims'] < 1:
            raise ConfigError('dims', "must be positive: {}"
                              .format(args['dims']))
        for n_steps, M in zip(nt, m):
            g = min(args['g'], M)
            if M % g != 0:
                raise ConfigError('m', "M={} is not a multiple of g={}"
                                  .format(M, g))

        config = cls(args['problem'], list(zip(nt, m)), scheme, args['g'],
                     args.get('min_leaf'), args['holdout'], args['runs'],
                     args['seed_a'], args['seed_b'], args.get('out'),
                     args.get('format', 'csv'), args.get('sigma'),
                     args.get('dims'), args.get('error_mode'),
                     args.get('reference'), args['timings'], n_jobs,
                     args['se_factor'])
        problem = config.build_problem()
        if config.reference is None and problem.exact_y0 is None:
            raise ConfigError('reference', "required, problem '{}' has no "
                              "known value".format(problem.name))
        return config

    def build_problem(self):
        family = self.problem.partition(':')[0]
        if family == 'rainbow' and self.sigma is None:
            raise ConfigError('sigma', "required for rainbow problems")
        try:
            return get_problem(self.problem, sigma=self.sigma, dims=self.dims)
        except InvalidArgumentError as e:
            raise ConfigError('problem', str(e))

    def to_spec(self):
        problem = self.build_problem()
        reference = self.reference if self.reference is not None \
            else problem.exact_y0
        error_mode = self.error_mode
        if error_mode is None:
            error_mode = ABSOLUTE if reference == 0.0 else RELATIVE
        try:
            return ExperimentSpec(
                problem, self.cells, self.scheme, self.group_size,
                self.min_leaf, self.holdout, n_runs=self.n_runs,
                seed_a=self.seed_a, seed_b=self.seed_b, error_mode=error_mode,
                reference=reference, n_jobs=self.n_jobs,
                se_factor=self.se_factor)
        except InvalidArgumentError as e:
            raise ConfigError('config', str(e))


def _scheme(args):
    name = args.get('scheme') or DEFAULT_SCHEME
    thetas = list(SCHEMES[name])
    for k, (key, bounds) in enumerate((('theta1', '[0,1]'),
                                       ('theta2', '(0,1]'),
                                       ('theta3', '[0,1]'))):
        value = args.get(key)
        if value is None:
            continue
        lower_ok = value > 0.0 if bounds[0] == '(' else value >= 0.0
        if not (lower_ok and value <= 1.0):
            raise ConfigError(key, "{} must be in {}: {}"
                              .format(key, bounds, value))
        thetas[k] = value
    if args['picard'] < 1:
        raise ConfigError('picard', "must be positive: {}"
                          .format(args['picard']))
    return SchemeParams(*thetas, picard_iters=args['picard'])


def parse_config(text=None, argv=None):
    """RunConfig from config text and/or ``run`` flags.

    Raises ConfigError naming the offending key.
    """
    parser = ConfigArgParser(prog='fbtree run')
    for name, value in _run_args().items():
        parser.add_arg(name, value, group='run')
    _, args, _ = parser.parse(list(argv or []), command='run',
                              config_text=text)
    return RunConfig.from_args(args)


def run(**kwargs):
    config = RunConfig.from_args(kwargs, n_jobs=App.threads())
    spec = config.to_spec()
    stats = run_experiment(spec, [Reporter(logger)])
    text = emit_table(stats, config.format, config.timings)
    if config.out is not None:
        with open(config.out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info("table written to {}".format(config.out))
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return EXIT_FAILURE if stats.failed else EXIT_OK


def list_problems():
    for name in problem_names():
        print(name)


VERIFY_CHECKS = [
    # name, problem, kwargs, cells, runs, (tol_y, tol_z)
    ('oscillatory N_T=2', 'oscillatory', {}, [(2, 2000)], 5, (0.06, 0.15)),
    ('oscillatory N_T=4', 'oscillatory', {}, [(4, 2000)], 5, (0.05, 0.12)),
    ('black-scholes N_T=2', 'black-scholes', {}, [(2, 2000)], 5,
     (0.08, 0.15)),
    ('rainbow:1 closed form', 'rainbow:1', {'sigma': 0.2}, [(4, 4000)], 3,
     (0.05, None)),
]


def verify():
    """Fast reproduction checks, one PASS/FAIL line each."""
    failed = 0
    n_jobs = App.threads()
    for name, problem, kwargs, cells, runs, (tol_y, tol_z) in VERIFY_CHECKS:
        spec = ExperimentSpec(get_problem(problem, **kwargs), cells,
                              n_runs=runs, n_jobs=n_jobs,
                              error_mode=ABSOLUTE if problem == 'oscillatory'
                              else RELATIVE)
        cell = run_experiment(spec).cells[0]
        ok = cell.error is None and cell.mean_err_y <= tol_y \
            and (tol_z is None or cell.mean_err_z <= tol_z)
        if cell.error is not None:
            detail = cell.error
        else:
            detail = "err_y={:.4e} (tol {})".format(cell.mean_err_y, tol_y)
            if tol_z is not None:
                detail += ", err_z={:.4e} (tol {})".format(cell.mean_err_z,
                                                           tol_z)
        print("{} {}: {}".format("PASS" if ok else "FAIL", name, detail))
        failed += not ok
    return EXIT_FAILURE if failed else EXIT_OK


App.add_command('run', run, _run_args(),
                description='Run an experiment and write its result table')
App.add_command('list-problems', list_problems,
                description='List the problem catalog')
App.add_command('verify', verify,
                description='Run the fast reproduction checks')


def main(argv=None):
    return App.run(argv)


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
