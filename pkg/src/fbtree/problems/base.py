from abc import ABCMeta, abstractmethod
from collections import namedtuple

import numpy as np

from fbtree.errors import InvalidArgumentError
from fbtree.utils.collections import ImmutableMap


CLOSED_FORM = 'closed_form'
TABLE = 'table'


class ReferenceValue(namedtuple('ReferenceValue',
                                ['value', 'source', 'citation'])):
    """Known value of Y_0 together with where it comes from."""

    def __new__(cls, value, source=CLOSED_FORM, citation=None):
        if source not in (CLOSED_FORM, TABLE):
            raise InvalidArgumentError(
                "unknown reference source: {}".format(source))
        if source == TABLE and not citation:
            raise InvalidArgumentError(
                "tabulated references must carry a citation")
        return super().__new__(cls, float(value), source, citation)


class FbsdeProblem(metaclass=ABCMeta):
    """Decoupled FBSDE

        dX_t = a(t, X_t) dt + b(t, X_t) dW_t,        X_0 = x0
       -dY_t = f(t, X_t, Y_t, Z_t) dt - Z_t dW_t,    Y_T = g(X_T)

    with an n-dimensional state and a d-dimensional Brownian motion.

    Coefficients are vectorized over samples: states are [M, n], ``y`` is
    [M] and ``z`` is [M, d].
    """

    nonlinear = False

    def __init__(self, name, x0, d, T, params=None, reference=None,
                 exact_z0=None):
        x0 = np.array(x0, dtype=np.float64).reshape(-1)
        x0.flags.writeable = False
        if exact_z0 is not None:
            exact_z0 = np.array(exact_z0, dtype=np.float64).reshape(-1)
            exact_z0.flags.writeable = False
        self._name = name
        self._x0 = x0
        self._d = int(d)
        self._T = float(T)
        self._params = ImmutableMap(params or {})
        self._reference = reference
        self._exact_z0 = exact_z0

    @property
    def name(self):
        return self._name

    @property
    def n(self):
        return self._x0.size

    @property
    def d(self):
        return self._d

    @property
    def x0(self):
        return self._x0

    @property
    def T(self):
        return self._T

    @property
    def params(self):
        return self._params

    @property
    def reference(self):
        return self._reference

    @property
    def exact_y0(self):
        return None if self._reference is None else self._reference.value

    @property
    def exact_z0(self):
        return self._exact_z0

    @property
    def lipschitz(self):
        """Lipschitz constant of the driver in (y, z), None if unbounded."""
        return None

    @abstractmethod
    def drift(self, t, x):
        raise NotImplementedError

    @abstractmethod
    def diffusion(self, t, x):
        """[M, n, d] diffusion matrices."""
        raise NotImplementedError

    def diffuse(self, t, x, dw):
        """b(t, x) dW as an [M, n] array."""
        return np.einsum('mij,mj->mi', self.diffusion(t, x), dw)

    @abstractmethod
    def driver(self, t, x, y, z):
        raise NotImplementedError

    @abstractmethod
    def terminal(self, x):
        raise NotImplementedError

    @abstractmethod
    def terminal_z(self, x):
        """Samples of Z_T = grad g(x) b(T, x), one-sided at kinks."""
        raise NotImplementedError

    def __eq__(self, other):
        if not isinstance(other, FbsdeProblem):
            return NotImplemented
        return type(self) is type(other) and self._name == other._name \
            and self._params == other._params

    def __hash__(self):
        return hash((type(self).__name__, self._name, self._params))

    def __repr__(self):
        return "{}(name='{}', n={}, d={}, T={})".format(
            type(self).__name__, self._name, self.n, self._d, self._T)


class GbmProblem(FbsdeProblem):
    """Independent geometric Brownian motions
    dS_j = mu S_j dt + sigma S_j dW_j."""

    def __init__(self, name, s0, mu, sigma, T, params=None, reference=None,
                 exact_z0=None):
        s0 = np.array(s0, dtype=np.float64).reshape(-1)
        if np.any(s0 <= 0.0):
            raise InvalidArgumentError("initial prices must be positive")
        if sigma <= 0.0:
            raise InvalidArgumentError(
                "sigma must be positive: {}".format(sigma))
        super().__init__(name, s0, s0.size, T, params, reference, exact_z0)
        self.mu = float(mu)
        self.sigma = float(sigma)

    def drift(self, t, x):
        return self.mu * x

    def diffusion(self, t, x):
        b = np.zeros(x.shape + (self.d,))
        idx = np.arange(self.d)
        b[:, idx, idx] = self.sigma * x
        return b

    def diffuse(self, t, x, dw):
        return self.sigma * x * dw
