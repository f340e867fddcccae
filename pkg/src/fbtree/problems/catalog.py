"""Benchmark problems.

Each problem is addressable by name: ``oscillatory``, ``black-scholes``,
``heston``, ``rainbow:D`` and ``rates:D`` where ``D`` is the number of
assets.
"""

import numbers

import numpy as np

from fbtree.errors import InvalidArgumentError
from fbtree.problems.base import (CLOSED_FORM, TABLE, FbsdeProblem,
                                  GbmProblem, ReferenceValue)
from fbtree.problems.closed_form import bs_closed_form


VARIANCE_FLOOR = 1e-8


class OscillatoryBsde(FbsdeProblem):
    """Driver y/2 - z/2 on a Brownian motion with solution
    Y_t = sin(W_t + t/2), Z_t = cos(W_t + t/2)."""

    def __init__(self, T=0.5):
        super().__init__('oscillatory', [0.0], 1, T, {'T': T},
                         ReferenceValue(0.0, CLOSED_FORM), [1.0])

    @property
    def lipschitz(self):
        return 0.5

    def drift(self, t, x):
        return np.zeros_like(x)

    def diffusion(self, t, x):
        return np.ones((x.shape[0], 1, 1))

    def diffuse(self, t, x, dw):
        return dw

    def driver(self, t, x, y, z):
        return 0.5 * y - 0.5 * z[:, 0]

    def terminal(self, x):
        return np.sin(x[:, 0] + 0.5 * self.T)

    def terminal_z(self, x):
        return np.cos(x[:, 0] + 0.5 * self.T)[:, None]


class BlackScholesCall(GbmProblem):
    """European call replicated under the real-world drift ``mu`` with
    dividend yield ``div``."""

    def __init__(self, S0=100.0, K=100.0, r=0.03, mu=0.05, div=0.04,
                 sigma=0.2, T=0.33):
        price, delta = bs_closed_form(S0, K, r, div, sigma, T)
        super().__init__('black-scholes', [S0], mu, sigma, T,
                         {'S0': S0, 'K': K, 'r': r, 'mu': mu, 'div': div,
                          'sigma': sigma, 'T': T},
                         ReferenceValue(price, CLOSED_FORM),
                         [sigma * S0 * delta])
        self.K = float(K)
        self.r = float(r)
        self.div = float(div)
        self._theta = (mu - r + div) / sigma

    @property
    def lipschitz(self):
        return max(abs(self.r), abs(self._theta))

    def driver(self, t, x, y, z):
        return -self.r * y - self._theta * z[:, 0]

    def terminal(self, x):
        return np.maximum(x[:, 0] - self.K, 0.0)

    def terminal_z(self, x):
        s = x[:, 0]
        return np.where(s > self.K, self.sigma * s, 0.0)[:, None]


class HestonCall(FbsdeProblem):
    """European call in the Heston model, state (nu, S).

    The variance is simulated with full truncation; the driver evaluates
    1/sqrt(nu) with nu floored at ``VARIANCE_FLOOR``.
    """

    def __init__(self, S0=50.0, K=50.0, r=0.03, mu=0.05, lam=0.0, T=0.5,
                 nu0=0.04, mu_nu=0.04, kappa=1.9, sigma_nu=0.1, rho=-0.7):
        if not -1.0 < rho < 1.0:
            raise InvalidArgumentError(
                "rho must be in (-1, 1): {}".format(rho))
        super().__init__('heston', [nu0, S0], 2, T,
                         {'S0': S0, 'K': K, 'r': r, 'mu': mu, 'lam': lam,
                          'T': T, 'nu0': nu0, 'mu_nu': mu_nu, 'kappa': kappa,
                          'sigma_nu': sigma_nu, 'rho': rho},
                         ReferenceValue(3.1825, TABLE,
                                        "semi-analytic Heston price"))
        self.K = float(K)
        self.r = float(r)
        self.mu = float(mu)
        self.lam = float(lam)
        self.mu_nu = float(mu_nu)
        self.kappa = float(kappa)
        self.sigma_nu = float(sigma_nu)
        self.rho = float(rho)
        self._rho_bar = np.sqrt(1.0 - rho ** 2)

    def drift(self, t, x):
        nu = np.maximum(x[:, 0], 0.0)
        return np.stack([self.kappa * (self.mu_nu - nu), self.mu * x[:, 1]],
                        axis=1)

    def diffusion(self, t, x):
        vol = np.sqrt(np.maximum(x[:, 0], 0.0))
        s = x[:, 1]
        b = np.zeros((x.shape[0], 2, 2))
        b[:, 0, 0] = self.sigma_nu * vol
        b[:, 1, 0] = s * self.rho * vol
        b[:, 1, 1] = s * self._rho_bar * vol
        return b

    def diffuse(self, t, x, dw):
        vol = np.sqrt(np.maximum(x[:, 0], 0.0))
        s = x[:, 1]
        return np.stack([
            self.sigma_nu * vol * dw[:, 0],
            s * vol * (self.rho * dw[:, 0] + self._rho_bar * dw[:, 1]),
        ], axis=1)

    def driver(self, t, x, y, z):
        vol = np.sqrt(np.maximum(x[:, 0], VARIANCE_FLOOR))
        f = -self.r * y \
            - (self.mu - self.r) / (self._rho_bar * vol) * z[:, 1]
        if self.lam != 0.0:
            f += -self.lam * vol / self.sigma_nu * z[:, 0] \
                + self.rho * self.lam * vol \
                / (self._rho_bar * self.sigma_nu) * z[:, 1]
        return f

    def terminal(self, x):
        return np.maximum(x[:, 1] - self.K, 0.0)

    def terminal_z(self, x):
        vol = np.sqrt(np.maximum(x[:, 0], 0.0))
        s = np.where(x[:, 1] > self.K, x[:, 1], 0.0)
        return np.stack([s * self.rho * vol, s * self._rho_bar * vol], axis=1)


def _argmax_z(x, sigma, weight):
    j = np.argmax(x, axis=1)
    rows = np.arange(x.shape[0])
    z = np.zeros_like(x)
    z[rows, j] = sigma * x[rows, j] * weight
    return z


class RainbowMaxCall(GbmProblem):
    """Call on the maximum of ``D`` independent geometric Brownian motions."""

    def __init__(self, D, sigma, S0=100.0, K=100.0, r=0.04, mu=0.06, T=0.1):
        reference, exact_z0 = None, None
        if D == 1:
            price, delta = bs_closed_form(S0, K, r, 0.0, sigma, T)
            reference = ReferenceValue(price, CLOSED_FORM)
            exact_z0 = [sigma * S0 * delta]
        elif D in _RAINBOW_REFERENCES:
            reference = _RAINBOW_REFERENCES[D]
        super().__init__('rainbow:{}'.format(D), np.full(D, S0), mu, sigma, T,
                         {'D': D, 'sigma': sigma, 'S0': S0, 'K': K, 'r': r,
                          'mu': mu, 'T': T},
                         reference, exact_z0)
        self.K = float(K)
        self.r = float(r)
        self._theta = (mu - r) / sigma

    @property
    def lipschitz(self):
        return max(abs(self.r), np.sqrt(self.d) * abs(self._theta))

    def driver(self, t, x, y, z):
        return -self.r * y - self._theta * z.sum(axis=1)

    def terminal(self, x):
        return np.maximum(x.max(axis=1) - self.K, 0.0)

    def terminal_z(self, x):
        itm = x.max(axis=1) > self.K
        return _argmax_z(x, self.sigma, itm.astype(np.float64))


class DifferentRatesOption(GbmProblem):
    """Option priced with a borrowing rate ``Rb`` above the lending rate
    ``Rl``. The driver is nonlinear in (y, z)."""

    nonlinear = True

    def __init__(self, D, S0=100.0, mu=0.06, sigma=0.2, Rl=0.04, Rb=0.06,
                 T=0.5, K=100.0, K1=120.0, K2=150.0):
        super().__init__('rates:{}'.format(D), np.full(D, S0), mu, sigma, T,
                         {'D': D, 'S0': S0, 'mu': mu, 'sigma': sigma,
                          'Rl': Rl, 'Rb': Rb, 'T': T, 'K': K, 'K1': K1,
                          'K2': K2},
                         _RATES_REFERENCES.get(D))
        self.Rl = float(Rl)
        self.Rb = float(Rb)
        self.K = float(K)
        self.K1 = float(K1)
        self.K2 = float(K2)

    @property
    def lipschitz(self):
        spread = self.Rb - self.Rl
        return max(self.Rl + spread,
                   np.sqrt(self.d) * (abs(self.mu - self.Rl) + spread)
                   / self.sigma)

    def driver(self, t, x, y, z):
        zsum = z.sum(axis=1) / self.sigma
        return -self.Rl * y - (self.mu - self.Rl) * zsum \
            + (self.Rb - self.Rl) * np.maximum(zsum - y, 0.0)

    def terminal(self, x):
        if self.d == 1:
            return np.maximum(x[:, 0] - self.K, 0.0)
        s = x.max(axis=1)
        return np.maximum(s - self.K1, 0.0) \
            - 2.0 * np.maximum(s - self.K2, 0.0)

    def terminal_z(self, x):
        if self.d == 1:
            s = x[:, 0]
            return np.where(s > self.K, self.sigma * s, 0.0)[:, None]
        s = x.max(axis=1)
        weight = (s > self.K1).astype(np.float64) \
            - 2.0 * (s > self.K2).astype(np.float64)
        return _argmax_z(x, self.sigma, weight)


_RAINBOW_REFERENCES = {
    10: ReferenceValue(10.4689, TABLE, "multilevel Picard, 7 iterations"),
    100: ReferenceValue(17.4267, TABLE, "multilevel Picard, 7 iterations"),
}

_RATES_REFERENCES = {
    1: ReferenceValue(7.156, TABLE, "finite-difference solution"),
    100: ReferenceValue(21.2988, TABLE, "multilevel Picard approximation"),
}


def oscillatory_bsde():
    return OscillatoryBsde()


def black_scholes_call():
    return BlackScholesCall()


def heston_call():
    return HestonCall()


def _check_dims(D):
    if isinstance(D, bool) or not isinstance(D, numbers.Integral) or D < 1:
        raise InvalidArgumentError(
            "number of assets must be a positive int: {!r}".format(D))
    return int(D)


def rainbow_max_call(D, sigma):
    D = _check_dims(D)
    if sigma is None:
        raise InvalidArgumentError(
            "rainbow:{} has no default volatility, sigma is required"
            .format(D))
    return RainbowMaxCall(D, float(sigma))


def different_rates_option(D):
    return DifferentRatesOption(_check_dims(D))


_FIXED = {
    'oscillatory': oscillatory_bsde,
    'black-scholes': black_scholes_call,
    'heston': heston_call,
}


def problem_names():
    return list(_FIXED) + ['rainbow:D', 'rates:D']


def get_problem(name, sigma=None, dims=None):
    """Looks a problem up by name.

    ``dims`` supplies ``D`` when the name carries none, e.g. ``rates``.
    """
    family, sep, arg = name.strip().partition(':')
    if family in _FIXED:
        if sep:
            raise InvalidArgumentError(
                "problem '{}' takes no dimension".format(family))
        return _FIXED[family]()
    if family not in ('rainbow', 'rates'):
        raise InvalidArgumentError(
            "unknown problem: '{}', expected one of {}"
            .format(name, ", ".join(problem_names())))
    if sep:
        try:
            D = int(arg)
        except ValueError:
            raise InvalidArgumentError(
                "invalid dimension in '{}'".format(name))
        if dims is not None and dims != D:
            raise InvalidArgumentError(
                "dimension {} conflicts with '{}'".format(dims, name))
    elif dims is not None:
        D = dims
    else:
        raise InvalidArgumentError(
            "problem '{}' needs a dimension, e.g. '{}:10'"
            .format(family, family))
    if family == 'rainbow':
        return rainbow_max_call(D, sigma)
    return different_rates_option(D)
