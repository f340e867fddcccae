import numbers

from joblib import Parallel, delayed
import numpy as np

from fbtree.errors import InvalidArgumentError, check_positive
from fbtree.paths.grid import TimeGrid
from fbtree.utils import logging


logger = logging.getLogger(__name__)

CHUNK_SIZE = 1000


class PathEnsemble(object):
    """Forward samples ``x`` [M, N+1, n] and increments ``dw`` [M, N, d].

    Arrays are read-only after construction; groups and workers share them.
    """

    def __init__(self, grid, x, dw, seed_record=()):
        if x.ndim != 3 or dw.ndim != 3:
            raise InvalidArgumentError("x and dw must be 3-d arrays")
        if x.shape[0] != dw.shape[0] \
                or x.shape[1] != grid.n_steps + 1 \
                or dw.shape[1] != grid.n_steps:
            raise InvalidArgumentError(
                "inconsistent ensemble shapes: x{}, dw{}, {}"
                .format(x.shape, dw.shape, grid))
        x.flags.writeable = False
        dw.flags.writeable = False
        self._grid = grid
        self._x = x
        self._dw = dw
        self._seed_record = list(seed_record)

    @property
    def grid(self):
        return self._grid

    @property
    def x(self):
        return self._x

    @property
    def dw(self):
        return self._dw

    @property
    def seed_record(self):
        return list(self._seed_record)

    @property
    def size(self):
        return self._x.shape[0]

    def __len__(self):
        return self.size

    def take(self, indices):
        indices = np.asarray(indices)
        return PathEnsemble(self._grid, self._x[indices], self._dw[indices],
                            self._seed_record)


def _chunks(M, chunk_size):
    starts = range(0, M, chunk_size)
    return [(k, start, min(start + chunk_size, M))
            for k, start in enumerate(starts)]


def _increments(seed, chunk, size, grid, d):
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(chunk,)))
    scale = np.sqrt(grid.dt)[None, :, None]
    return rng.standard_normal((size, grid.n_steps, d)) * scale


def _euler_chunk(problem, grid, seed, chunk, size):
    dw = _increments(seed, chunk, size, grid, problem.d)
    x = np.empty((size, grid.n_steps + 1, problem.n))
    x[:, 0, :] = problem.x0
    t = grid.t_points
    for i in range(grid.n_steps):
        xi = x[:, i, :]
        x[:, i + 1, :] = (xi + problem.drift(t[i], xi) * grid.dt[i]
                          + problem.diffuse(t[i], xi, dw[:, i, :]))
    return x, dw


def _check_args(grid, M, seed):
    if not isinstance(grid, TimeGrid):
        raise InvalidArgumentError(
            "grid must be a TimeGrid: actual('{}')"
            .format(type(grid).__name__))
    check_positive('M', M, integer=True)
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) \
            or seed < 0:
        raise InvalidArgumentError(
            "seed must be a non-negative int: {!r}".format(seed))


def simulate_euler(problem, grid, M, seed, n_jobs=1, chunk_size=CHUNK_SIZE):
    """Euler-Maruyama paths of ``problem``'s forward SDE.

    Samples are generated in chunks of ``chunk_size`` with one seed per chunk
    derived from ``seed``, so the result does not depend on ``n_jobs``.
    """
    _check_args(grid, M, seed)
    M = int(M)
    chunks = _chunks(M, chunk_size)
    logger.debug("simulating {} paths of '{}' on {} in {} chunks"
                 .format(M, problem.name, grid, len(chunks)))
    if n_jobs == 1 or len(chunks) == 1:
        parts = [_euler_chunk(problem, grid, seed, k, stop - start)
                 for k, start, stop in chunks]
    else:
        parts = Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(_euler_chunk)(problem, grid, seed, k, stop - start)
            for k, start, stop in chunks)
    x = np.concatenate([part[0] for part in parts], axis=0)
    dw = np.concatenate([part[1] for part in parts], axis=0)
    return PathEnsemble(grid, x, dw, [(seed, k) for k, _, _ in chunks])


def simulate_brownian(grid, M, d, seed, chunk_size=CHUNK_SIZE):
    _check_args(grid, M, seed)
    check_positive('d', d, integer=True)
    M, d = int(M), int(d)
    chunks = _chunks(M, chunk_size)
    dw = np.concatenate(
        [_increments(seed, k, stop - start, grid, d)
         for k, start, stop in chunks], axis=0)
    x = np.zeros((M, grid.n_steps + 1, d))
    np.cumsum(dw, axis=1, out=x[:, 1:, :])
    return PathEnsemble(grid, x, dw, [(seed, k) for k, _, _ in chunks])
