"""Backward theta-scheme with regression-tree conditional expectations.

Samples are split into groups that are swept backward from the terminal
time to t_1 independently; the last step to t_0 pools all samples. At t_0
the predictor is the constant x_0, so conditional expectations reduce to
sample means.
"""

from collections import namedtuple
import time

from joblib import Parallel, delayed
import numpy as np

from fbtree.errors import (
    InvalidArgumentError, NumericalError, check_positive)
from fbtree.paths.grid import TimeGrid
from fbtree.paths.simulate import simulate_euler
from fbtree.solver.scheme import AUTO, SolverConfig, seed_schedule
from fbtree.tree.cart import best_min_leaf, fit_with_holdout, grow
from fbtree.utils import logging


logger = logging.getLogger(__name__)

DIVERGENCE_PATIENCE = 5
TREE_STREAM = 1
CV_STREAM = 2


class BackwardState(object):
    """Estimates at time index ``i``: ``y`` [M], ``z`` [M, d] and the cached
    driver values ``f`` [M]."""

    def __init__(self, i, y, z, f):
        for name, value in (('y', y), ('z', z), ('f', f)):
            if not np.all(np.isfinite(value)):
                raise NumericalError(
                    "non-finite {} estimate".format(name), step=i)
        self.i = i
        self.y = y
        self.z = z
        self.f = f

    @property
    def size(self):
        return self.y.size


StepDiagnostics = namedtuple(
    'StepDiagnostics', ['group', 'step', 'z_leaves', 'y_leaves', 'residual'])


class SolveResult(object):

    def __init__(self, y0, z0, diagnostics=None):
        z0 = np.atleast_1d(np.asarray(z0, dtype=np.float64))
        if not np.isfinite(y0) or not np.all(np.isfinite(z0)):
            raise NumericalError("non-finite solution at t_0", step=0)
        self.y0 = float(y0)
        self.z0 = z0
        self.diagnostics = diagnostics if diagnostics is not None else {}

    def __repr__(self):
        return "SolveResult(y0={:.6g}, z0={})".format(
            self.y0, np.array2string(self.z0, precision=6))


class TreeEstimator(object):
    """Conditional expectation of responses given predictors by one
    regression tree, evaluated in-sample."""

    def __init__(self, min_leaf=5, prune=True, holdout_fraction=0.5,
                 se_factor=0.0):
        self.min_leaf = min_leaf
        self.prune = prune
        self.holdout_fraction = holdout_fraction
        self.se_factor = se_factor

    def fit(self, x, y, seed=None):
        if self.prune and y.size >= 2:
            return fit_with_holdout(x, y, self.min_leaf,
                                    self.holdout_fraction, seed,
                                    self.se_factor, refit=True)
        return grow(x, y, self.min_leaf)

    def estimate(self, x, y, seed=None):
        tree = self.fit(x, y, seed)
        return tree.predict(x), tree.n_leaves


def _sample_mean(a):
    first = a[0]
    if np.all(a == first):
        return first
    return a.mean()


def _tree_seed(seed, group, i, j):
    return np.random.SeedSequence(seed, spawn_key=(TREE_STREAM, group, i, j))


def terminal_condition(problem, x_T):
    """y_T = g(x_T) and z_T = grad g(x_T) b(T, x_T)."""
    x_T = np.asarray(x_T, dtype=np.float64)
    if x_T.ndim != 2 or x_T.shape[1] != problem.n:
        raise InvalidArgumentError(
            "terminal states must have shape [M, {}]: {}"
            .format(problem.n, x_T.shape))
    y = np.asarray(problem.terminal(x_T), dtype=np.float64)
    z = np.asarray(problem.terminal_z(x_T), dtype=np.float64)
    return y, z.reshape(x_T.shape[0], problem.d)


def terminal_state(problem, ensemble):
    grid = ensemble.grid
    x_T = ensemble.x[:, -1, :]
    y, z = terminal_condition(problem, x_T)
    f = problem.driver(grid.T, x_T, y, z)
    return BackwardState(grid.n_steps, y, z, f)


def _z_responses(state, dw, dt, scheme):
    theta1, theta2, _ = scheme.thetas
    resp = state.y[:, None] * dw / (theta2 * dt)
    if theta1 != 1.0:
        resp += (1.0 - theta1) / theta2 * state.f[:, None] * dw
    if theta2 != 1.0:
        resp -= (1.0 - theta2) / theta2 * state.z
    return resp


def _y_responses(state, dt, scheme):
    theta3 = scheme.theta3
    if theta3 == 1.0:
        return state.y
    return state.y + dt * (1.0 - theta3) * state.f


def picard(e, fn, h, iters, tol=1e-12, step=None):
    """Fixed point of y = e + h * fn(y) started from y = e.

    Returns the iterate and the last sup-norm update. Raises NumericalError
    when the update grows ``DIVERGENCE_PATIENCE`` times in a row.
    """
    if h == 0.0:
        return e, 0.0
    y = e
    residual, previous, growth = 0.0, np.inf, 0
    for _ in range(iters):
        y_new = e + h * fn(y)
        if not np.all(np.isfinite(y_new)):
            raise NumericalError(
                "Picard iteration produced non-finite values, "
                "try a smaller time step", step)
        residual = float(np.max(np.abs(y_new - y)))
        y = y_new
        if residual <= tol:
            break
        growth = growth + 1 if residual > previous else 0
        if growth >= DIVERGENCE_PATIENCE:
            raise NumericalError(
                "Picard iteration diverges (residual {:.3e}), "
                "try a smaller time step".format(residual), step)
        previous = residual
    return y, residual


def z_step(state, ensemble, scheme, estimator, seed=0, group=0):
    """Z estimates at index ``state.i - 1``.

    One tree per Brownian coordinate regresses the theta-weighted responses
    on the states at that index. Returns the estimates and the leaf count
    of each tree.
    """
    i = state.i - 1
    dt = ensemble.grid.dt[i]
    x_i = ensemble.x[:, i, :]
    resp = _z_responses(state, ensemble.dw[:, i, :], dt, scheme)
    if not np.all(np.isfinite(resp)):
        raise NumericalError("non-finite Z responses", step=i)
    z = np.empty_like(resp)
    leaves = []
    for j in range(resp.shape[1]):
        z[:, j], n_leaves = estimator.estimate(
            x_i, resp[:, j], _tree_seed(seed, group, i, j))
        leaves.append(n_leaves)
    return z, leaves


def y_step(state, z, ensemble, scheme, problem, estimator, seed=0, group=0,
           tol=1e-12):
    """Y estimates at index ``state.i - 1`` given the Z estimates there.

    Returns the new BackwardState, the leaf count of the tree and the last
    Picard residual.
    """
    i = state.i - 1
    grid = ensemble.grid
    dt = grid.dt[i]
    t_i = grid.t_points[i]
    x_i = ensemble.x[:, i, :]
    resp = _y_responses(state, dt, scheme)
    if not np.all(np.isfinite(resp)):
        raise NumericalError("non-finite Y responses", step=i)
    e, n_leaves = estimator.estimate(
        x_i, resp, _tree_seed(seed, group, i, problem.d))
    y, residual = picard(
        e, lambda y: problem.driver(t_i, x_i, y, z), dt * scheme.theta3,
        scheme.picard_iters, tol, step=i)
    f = problem.driver(t_i, x_i, y, z)
    return BackwardState(i, y, z, f), n_leaves, residual


def _sweep_group(problem, ensemble, scheme, estimator, seed, group, tol):
    state = terminal_state(problem, ensemble)
    diagnostics = []
    while state.i > 1:
        z, z_leaves = z_step(state, ensemble, scheme, estimator, seed, group)
        state, y_leaves, residual = y_step(
            state, z, ensemble, scheme, problem, estimator, seed, group, tol)
        diagnostics.append(
            StepDiagnostics(group, state.i, z_leaves, y_leaves, residual))
        logger.log(logging.TRACE,
                   "group {} step {}: z leaves {}, y leaves {}, "
                   "residual {:.3e}".format(group, state.i, z_leaves,
                                            y_leaves, residual))
    logger.debug("group {} swept to t_1".format(group))
    return state, diagnostics


def _pooled_step(problem, ensemble, state, scheme, tol):
    """Step from t_1 to t_0 with plain sample averages."""
    theta1, theta2, theta3 = scheme.thetas
    dt = ensemble.grid.dt[0]
    dw = ensemble.dw[:, 0, :]
    z0 = np.mean(state.y[:, None] * dw, axis=0) / (theta2 * dt)
    if theta1 != 1.0:
        z0 += (1.0 - theta1) / theta2 * np.mean(state.f[:, None] * dw, axis=0)
    if theta2 != 1.0:
        z0 -= (1.0 - theta2) / theta2 * np.mean(state.z, axis=0)
    e0 = _sample_mean(_y_responses(state, dt, scheme))
    x0 = problem.x0[None, :]
    y0, residual = picard(
        np.array([e0]),
        lambda y: problem.driver(0.0, x0, y, z0[None, :]),
        dt * theta3, scheme.picard_iters, tol, step=0)
    return float(y0[0]), z0, residual


def _choose_min_leaf(problem, ensemble, scheme, config, seed):
    """Cross-validated leaf size on the first group at the first backward
    step, reused for every later step."""
    part = ensemble.take(np.arange(config.group_size))
    state = terminal_state(problem, part)
    i = state.i - 1
    resp = _y_responses(state, part.grid.dt[i], scheme)
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(CV_STREAM,)))
    return best_min_leaf(part.x[:, i, :], resp, config.min_leaf_candidates,
                         config.cv_folds, rng)


def _check_solve_args(problem, grid, config):
    if not isinstance(grid, TimeGrid):
        raise InvalidArgumentError(
            "grid must be a TimeGrid: actual('{}')"
            .format(type(grid).__name__))
    if not isinstance(config, SolverConfig):
        raise InvalidArgumentError(
            "config must be a SolverConfig: actual('{}')"
            .format(type(config).__name__))
    if not np.isclose(grid.T, problem.T, rtol=1e-12, atol=0.0):
        raise InvalidArgumentError(
            "grid horizon {} differs from the maturity {} of '{}'"
            .format(grid.T, problem.T, problem.name))


def solve_ensemble(problem, ensemble, scheme, config, seed=0):
    """Runs the backward scheme on already simulated paths."""
    _check_solve_args(problem, ensemble.grid, config)
    if ensemble.size != config.M:
        raise InvalidArgumentError(
            "ensemble holds {} samples, config expects M={}"
            .format(ensemble.size, config.M))
    started = time.time()
    grid = ensemble.grid
    min_leaf, prune = config.resolve(problem)
    if min_leaf == AUTO:
        min_leaf = _choose_min_leaf(problem, ensemble, scheme, config, seed) \
            if grid.n_steps > 1 else None
        logger.debug("selected min_leaf={} for '{}'"
                     .format(min_leaf, problem.name))
    estimator = TreeEstimator(min_leaf, prune, config.holdout_fraction,
                              config.se_factor)

    groups = [ensemble.take(np.arange(k * config.group_size,
                                      (k + 1) * config.group_size))
              for k in range(config.n_groups)] \
        if config.n_groups > 1 else [ensemble]
    args = [(problem, part, scheme, estimator, seed, k, config.picard_tol)
            for k, part in enumerate(groups)]
    if config.n_jobs == 1 or len(groups) == 1 or grid.n_steps == 1:
        swept = [_sweep_group(*a) for a in args]
    else:
        swept = Parallel(n_jobs=config.n_jobs)(
            delayed(_sweep_group)(*a) for a in args)

    pooled = BackwardState(
        1,
        np.concatenate([s.y for s, _ in swept]),
        np.concatenate([s.z for s, _ in swept]),
        np.concatenate([s.f for s, _ in swept]))
    y0, z0, residual = _pooled_step(problem, ensemble, pooled, scheme,
                                    config.picard_tol)
    diagnostics = {
        'min_leaf': min_leaf,
        'prune': prune,
        'n_groups': len(groups),
        'steps': [d for _, ds in swept for d in ds],
        'picard_residual_t0': residual,
        'seconds': time.time() - started,
    }
    return SolveResult(y0, z0, diagnostics)


def solve(problem, grid, scheme, config, seed=0):
    """Simulates ``config.M`` paths with ``seed`` and solves backward."""
    _check_solve_args(problem, grid, config)
    started = time.time()
    ensemble = simulate_euler(problem, grid, config.M, seed,
                              n_jobs=config.n_jobs)
    result = solve_ensemble(problem, ensemble, scheme, config, seed)
    result.diagnostics['seconds'] = time.time() - started
    logger.debug("solved '{}' with N_T={}, M={}, seed={}: y0={:.6g}"
                 .format(problem.name, grid.n_steps, config.M, seed,
                         result.y0))
    return result


def solve_many(problem, grid, scheme, config, n_runs, seeds=None):
    """Independent solves, run ``k`` seeded with ``seeds[k]``."""
    check_positive('n_runs', n_runs, integer=True)
    if seeds is None:
        seeds = seed_schedule(n_runs)
    if len(seeds) < n_runs:
        raise InvalidArgumentError(
            "seed schedule has {} seeds for {} runs"
            .format(len(seeds), n_runs))
    return [solve(problem, grid, scheme, config, seed)
            for seed in seeds[:n_runs]]
