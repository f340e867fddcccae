import numpy as np

from fbtree.errors import InvalidArgumentError, check_positive


class TimeGrid(object):
    """Partition 0 = t_0 < t_1 < ... < t_N = T of the time horizon."""

    def __init__(self, t_points):
        t = np.array(t_points, dtype=np.float64)
        if t.ndim != 1 or t.size < 2:
            raise InvalidArgumentError(
                "a time grid needs at least two points: {}".format(t.size))
        if t[0] != 0.0:
            raise InvalidArgumentError(
                "a time grid must start at 0: {}".format(t[0]))
        if not np.all(np.diff(t) > 0):
            raise InvalidArgumentError("time points must be increasing")
        t.flags.writeable = False
        dt = np.diff(t)
        dt.flags.writeable = False
        self._t = t
        self._dt = dt

    @property
    def t_points(self):
        return self._t

    @property
    def dt(self):
        return self._dt

    @property
    def T(self):
        return float(self._t[-1])

    @property
    def n_steps(self):
        return self._dt.size

    def __len__(self):
        return self._t.size

    def __eq__(self, other):
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return np.array_equal(self._t, other._t)

    def __hash__(self):
        return hash(self._t.tobytes())

    def __repr__(self):
        return "TimeGrid(T={}, n_steps={})".format(self.T, self.n_steps)


def make_grid(T, n_steps):
    check_positive('T', T)
    check_positive('n_steps', n_steps, integer=True)
    n_steps = int(n_steps)
    dt = float(T) / n_steps
    t = np.arange(n_steps + 1, dtype=np.float64) * dt
    t[-1] = float(T)
    return TimeGrid(t)
