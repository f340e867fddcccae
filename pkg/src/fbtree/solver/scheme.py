import numbers

from fbtree.errors import InvalidArgumentError, check_positive


DEFAULT_PICARD_ITERS = 20
DEFAULT_GROUP_SIZE = 1000
DEFAULT_MIN_LEAF = 5
DEFAULT_MIN_LEAF_CANDIDATES = (1, 2, 5, 10, 20, 50, 100)
DEFAULT_SE_FACTOR = 0.0
AUTO = 'auto'


class SchemeParams(object):
    """Weights (theta1, theta2, theta3) of the theta-scheme.

    theta1 and theta2 weight the Z-update, theta3 the implicitness of the
    Y-update, which is resolved with ``picard_iters`` fixed-point
    iterations.
    """

    def __init__(self, theta1=0.5, theta2=1.0, theta3=0.5,
                 picard_iters=DEFAULT_PICARD_ITERS):
        for name, value, lower_open in (('theta1', theta1, False),
                                        ('theta2', theta2, True),
                                        ('theta3', theta3, False)):
            if isinstance(value, bool) \
                    or not isinstance(value, numbers.Real) \
                    or not (0.0 < value <= 1.0 if lower_open
                            else 0.0 <= value <= 1.0):
                raise InvalidArgumentError(
                    "{} must be in {}: {!r}".format(
                        name, "(0,1]" if lower_open else "[0,1]", value))
        check_positive('picard_iters', picard_iters, integer=True)
        self.theta1 = float(theta1)
        self.theta2 = float(theta2)
        self.theta3 = float(theta3)
        self.picard_iters = int(picard_iters)

    @classmethod
    def named(cls, name, picard_iters=DEFAULT_PICARD_ITERS):
        try:
            thetas = SCHEMES[name]
        except KeyError:
            raise InvalidArgumentError(
                "unknown scheme: '{}', expected one of {}"
                .format(name, ", ".join(SCHEMES)))
        return cls(*thetas, picard_iters=picard_iters)

    @property
    def thetas(self):
        return (self.theta1, self.theta2, self.theta3)

    def __eq__(self, other):
        if not isinstance(other, SchemeParams):
            return NotImplemented
        return self.thetas == other.thetas \
            and self.picard_iters == other.picard_iters

    def __hash__(self):
        return hash(self.thetas + (self.picard_iters,))

    def __repr__(self):
        return "SchemeParams(theta1={}, theta2={}, theta3={}, " \
            "picard_iters={})".format(self.theta1, self.theta2, self.theta3,
                                      self.picard_iters)


SCHEMES = {
    'first-order-half': (0.5, 1.0, 0.5),
    'explicit': (0.5, 1.0, 0.0),
    'implicit': (1.0, 1.0, 1.0),
    'crank-nicolson': (0.5, 0.5, 0.5),
    'theta1-one': (1.0, 1.0, 0.5),
}


class SolverConfig(object):
    """Sampling and regression settings of a solve.

    ``min_leaf`` is an int, ``'auto'`` (cross-validated once at the first
    backward step) or None, which means ``'auto'`` for nonlinear problems
    and ``DEFAULT_MIN_LEAF`` otherwise. ``prune=None`` likewise prunes for
    linear problems only. Pruned trees are selected with ``se_factor``
    standard errors of slack and refitted on the whole group.
    """

    def __init__(self, M, group_size=DEFAULT_GROUP_SIZE, min_leaf=None,
                 holdout_fraction=0.5, prune=None,
                 min_leaf_candidates=DEFAULT_MIN_LEAF_CANDIDATES,
                 cv_folds=5, picard_tol=1e-12, n_jobs=1,
                 se_factor=DEFAULT_SE_FACTOR):
        check_positive('M', M, integer=True)
        check_positive('group_size', group_size, integer=True)
        if group_size > M:
            raise InvalidArgumentError(
                "group_size {} exceeds the sample size {}"
                .format(group_size, M))
        if M % group_size != 0:
            raise InvalidArgumentError(
                "M={} is not a multiple of group_size={}: choose M = k*{}"
                .format(M, group_size, group_size))
        if min_leaf is not None and min_leaf != AUTO:
            check_positive('min_leaf', min_leaf, integer=True)
        if not 0.0 < holdout_fraction < 1.0:
            raise InvalidArgumentError(
                "holdout_fraction must be in (0, 1): {}"
                .format(holdout_fraction))
        for c in min_leaf_candidates:
            check_positive('min_leaf_candidates', c, integer=True)
        check_positive('cv_folds', cv_folds, integer=True)
        if se_factor < 0.0:
            raise InvalidArgumentError(
                "se_factor must be non-negative: {}".format(se_factor))
        if n_jobs == 0:
            raise InvalidArgumentError("n_jobs must not be 0")
        self.M = int(M)
        self.group_size = int(group_size)
        self.min_leaf = min_leaf
        self.holdout_fraction = float(holdout_fraction)
        self.prune = prune
        self.min_leaf_candidates = tuple(int(c) for c in min_leaf_candidates)
        self.cv_folds = int(cv_folds)
        self.picard_tol = float(picard_tol)
        self.n_jobs = n_jobs
        self.se_factor = float(se_factor)

    @property
    def n_groups(self):
        return self.M // self.group_size

    def resolve(self, problem):
        """(min_leaf, prune) with the problem-dependent defaults filled."""
        min_leaf = self.min_leaf
        if min_leaf is None:
            min_leaf = AUTO if problem.nonlinear else DEFAULT_MIN_LEAF
        prune = self.prune
        if prune is None:
            prune = not problem.nonlinear
        return min_leaf, bool(prune)

    def replace(self, **kwargs):
        fields = dict(M=self.M, group_size=self.group_size,
                      min_leaf=self.min_leaf,
                      holdout_fraction=self.holdout_fraction,
                      prune=self.prune,
                      min_leaf_candidates=self.min_leaf_candidates,
                      cv_folds=self.cv_folds, picard_tol=self.picard_tol,
                      n_jobs=self.n_jobs, se_factor=self.se_factor)
        fields.update(kwargs)
        return SolverConfig(**fields)

    def __repr__(self):
        return "SolverConfig(M={}, group_size={}, min_leaf={!r}, " \
            "prune={!r})".format(self.M, self.group_size, self.min_leaf,
                                 self.prune)


def seed_schedule(n_runs, seed_a=0, seed_b=1000):
    """Seeds for ``n_runs`` independent runs.

    Runs come in blocks of five; even blocks count up from ``seed_a`` and odd
    blocks from ``seed_b``, each pair of blocks shifted by five.
    """
    check_positive('n_runs', n_runs, integer=True)
    seeds = []
    for k in range(n_runs):
        block, j = divmod(k, 5)
        base = seed_a if block % 2 == 0 else seed_b
        seeds.append(base + 5 * (block // 2) + j)
    return seeds
