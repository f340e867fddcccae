from collections import namedtuple
import time

import numpy as np

from fbtree.errors import FbtreeError, InvalidArgumentError, check_positive
from fbtree.harness.event import Dispatcher, ExperimentEvent
from fbtree.paths.grid import make_grid
from fbtree.solver.backward import solve
from fbtree.solver.scheme import (
    DEFAULT_SE_FACTOR, SchemeParams, SolverConfig, seed_schedule)
from fbtree.utils import logging


logger = logging.getLogger(__name__)

ABSOLUTE = 'absolute'
RELATIVE = 'relative'
ERROR_MODES = (ABSOLUTE, RELATIVE)


class ExperimentSpec(object):
    """Problem, scheme and the (N_T, M) cells to run ``n_runs`` times each.

    ``reference`` and ``reference_z`` default to the problem's known values;
    Z statistics are left empty when no Z reference exists.
    """

    def __init__(self, problem, cells, scheme=None, group_size=1000,
                 min_leaf=None, holdout_fraction=0.5, prune=None,
                 n_runs=10, seeds=None, seed_a=0, seed_b=1000,
                 error_mode=ABSOLUTE, reference=None, reference_z=None,
                 n_jobs=1, se_factor=DEFAULT_SE_FACTOR):
        cells = [(int(n), int(m)) for n, m in cells]
        if not cells:
            raise InvalidArgumentError("an experiment needs at least one cell")
        for n_steps, M in cells:
            check_positive('N_T', n_steps, integer=True)
            check_positive('M', M, integer=True)
            g = min(group_size, M)
            if M % g != 0:
                raise InvalidArgumentError(
                    "M={} is not a multiple of the group size {}"
                    .format(M, g))
        check_positive('n_runs', n_runs, integer=True)
        if seeds is None:
            seeds = seed_schedule(n_runs, seed_a, seed_b)
        if len(seeds) < n_runs:
            raise InvalidArgumentError(
                "{} seeds given for {} runs".format(len(seeds), n_runs))
        if error_mode not in ERROR_MODES:
            raise InvalidArgumentError(
                "error_mode must be one of {}: {!r}"
                .format(ERROR_MODES, error_mode))
        if reference is None:
            reference = problem.exact_y0
        if reference is None:
            raise InvalidArgumentError(
                "problem '{}' has no reference value, give one explicitly"
                .format(problem.name))
        if reference_z is None:
            reference_z = problem.exact_z0
        if reference_z is not None:
            reference_z = np.atleast_1d(
                np.asarray(reference_z, dtype=np.float64))
        if error_mode == RELATIVE and reference == 0.0:
            raise InvalidArgumentError(
                "relative errors need a non-zero reference")
        self.problem = problem
        self.cells = cells
        self.scheme = scheme if scheme is not None else SchemeParams()
        self.group_size = group_size
        self.min_leaf = min_leaf
        self.holdout_fraction = holdout_fraction
        self.prune = prune
        self.n_runs = n_runs
        self.seeds = list(seeds[:n_runs])
        self.error_mode = error_mode
        self.reference = float(reference)
        self.reference_z = reference_z
        self.n_jobs = n_jobs
        self.se_factor = se_factor

    def solver_config(self, M):
        return SolverConfig(M, min(self.group_size, M), self.min_leaf,
                            self.holdout_fraction, self.prune,
                            n_jobs=self.n_jobs, se_factor=self.se_factor)


CellStats = namedtuple('CellStats', [
    'n_steps', 'M', 'mean_err_y', 'std_y', 'mean_err_z', 'std_z',
    'runtime_s', 'y0', 'z0', 'error'])


class ExperimentStats(object):

    def __init__(self, spec, cells):
        self.spec = spec
        self.cells = list(cells)
        self.cr_y = _rate_or_none([(c.n_steps, c.mean_err_y)
                                   for c in self.cells])
        self.cr_z = _rate_or_none([(c.n_steps, c.mean_err_z)
                                   for c in self.cells])

    @property
    def failed(self):
        return [c for c in self.cells if c.error is not None]

    @property
    def has_z(self):
        return self.spec.reference_z is not None


def convergence_rate(errors):
    """Negated least-squares slope of log2(err) against log2(N_T)."""
    errors = list(errors)
    if len(errors) < 2:
        raise InvalidArgumentError(
            "a convergence rate needs at least 2 cells: {}"
            .format(len(errors)))
    n = np.array([e[0] for e in errors], dtype=np.float64)
    err = np.array([e[1] for e in errors], dtype=np.float64)
    if np.any(n <= 0) or np.any(~(err > 0)):
        raise InvalidArgumentError(
            "time steps and errors must be positive")
    if np.unique(n).size < 2:
        raise InvalidArgumentError(
            "a convergence rate needs at least 2 distinct N_T")
    slope = np.polyfit(np.log2(n), np.log2(err), 1)[0]
    return float(-slope)


def _rate_or_none(errors):
    errors = [e for e in errors if e[1] is not None]
    try:
        return convergence_rate(errors)
    except InvalidArgumentError:
        return None


def cell_statistics(n_steps, M, y0, z0, runtimes, reference, reference_z=None,
                    error_mode=ABSOLUTE):
    """Mean error, empirical standard deviation and mean runtime over runs.

    In relative mode errors and standard deviations are divided by the norm
    of the reference.
    """
    y0 = np.asarray(y0, dtype=np.float64)
    n_runs = y0.size
    scale = abs(reference) if error_mode == RELATIVE else 1.0
    mean_err_y = float(np.mean(np.abs(y0 - reference)) / scale)
    std_y = float(np.std(y0, ddof=1) / scale) if n_runs > 1 else 0.0
    mean_err_z = std_z = None
    if reference_z is not None:
        z0 = np.asarray(z0, dtype=np.float64).reshape(n_runs, -1)
        scale_z = np.linalg.norm(reference_z) \
            if error_mode == RELATIVE else 1.0
        mean_err_z = float(np.mean(np.linalg.norm(z0 - reference_z, axis=1))
                           / scale_z)
        if n_runs > 1:
            dev = np.sum((z0 - z0.mean(axis=0)) ** 2) / (n_runs - 1)
            std_z = float(np.sqrt(dev) / scale_z)
        else:
            std_z = 0.0
    return CellStats(n_steps, M, mean_err_y, std_y, mean_err_z, std_z,
                     float(np.mean(runtimes)), y0.tolist(),
                     None if z0 is None else np.asarray(z0).tolist(), None)


def _failed_cell(n_steps, M, message):
    return CellStats(n_steps, M, None, None, None, None, None, [], [],
                     message)


class Experiment(Dispatcher):
    """Runs every cell of an experiment and aggregates the statistics.

    A failing cell is recorded with its error message and does not stop the
    remaining cells.
    """

    def __init__(self, spec, solver=None):
        super().__init__()
        self._spec = spec
        self._solver = solver if solver is not None else solve

    @property
    def spec(self):
        return self._spec

    def run(self):
        spec = self._spec
        self.notify(ExperimentEvent.EXPERIMENT_BEGIN,
                    {'spec': spec, 'size': len(spec.cells)})
        cells = [self._run_cell(n_steps, M) for n_steps, M in spec.cells]
        stats = ExperimentStats(spec, cells)
        self.notify(ExperimentEvent.EXPERIMENT_END, {'stats': stats})
        return stats

    def _run_cell(self, n_steps, M):
        spec = self._spec
        self.notify(ExperimentEvent.CELL_BEGIN, {'n_steps': n_steps, 'M': M})
        try:
            grid = make_grid(spec.problem.T, n_steps)
            config = spec.solver_config(M)
            y0, z0, runtimes = [], [], []
            for k, seed in enumerate(spec.seeds):
                started = time.time()
                result = self._solver(spec.problem, grid, spec.scheme, config,
                                      seed)
                runtimes.append(time.time() - started)
                y0.append(result.y0)
                z0.append(result.z0)
                self.notify(ExperimentEvent.RUN_END,
                            {'n_steps': n_steps, 'M': M, 'run': k,
                             'seed': seed, 'result': result,
                             'seconds': runtimes[-1]})
            cell = cell_statistics(n_steps, M, y0, z0, runtimes,
                                   spec.reference, spec.reference_z,
                                   spec.error_mode)
        except FbtreeError as e:
            logger.warning("cell N_T={}, M={} failed: {}"
                           .format(n_steps, M, e))
            cell = _failed_cell(n_steps, M, str(e))
        self.notify(ExperimentEvent.CELL_END, {'cell': cell})
        return cell


def run_experiment(spec, listeners=(), solver=None):
    experiment = Experiment(spec, solver)
    for listener in listeners:
        experiment.add_listener(listener)
    return experiment.run()
