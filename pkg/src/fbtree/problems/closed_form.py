import numpy as np
from scipy.stats import norm

from fbtree.errors import InvalidArgumentError


def bs_closed_form(S0, K, r, d, sigma, T):
    """Black-Scholes price and delta of a European call paying a continuous
    dividend yield ``d``."""
    for name, value in (('S0', S0), ('K', K), ('sigma', sigma), ('T', T)):
        if not np.isfinite(value) or value <= 0.0:
            raise InvalidArgumentError(
                "{} must be positive: {}".format(name, value))
    vol = sigma * np.sqrt(T)
    d1 = (np.log(S0 / K) + (r - d + 0.5 * sigma ** 2) * T) / vol
    d2 = d1 - vol
    price = S0 * np.exp(-d * T) * norm.cdf(d1) \
        - K * np.exp(-r * T) * norm.cdf(d2)
    delta = np.exp(-d * T) * norm.cdf(d1)
    return float(price), float(delta)
