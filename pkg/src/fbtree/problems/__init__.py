from fbtree.problems.base import (  # NOQA
    CLOSED_FORM, TABLE, FbsdeProblem, GbmProblem, ReferenceValue)
from fbtree.problems.catalog import (  # NOQA
    BlackScholesCall, DifferentRatesOption, HestonCall, OscillatoryBsde,
    RainbowMaxCall, black_scholes_call, different_rates_option, get_problem,
    heston_call, oscillatory_bsde, problem_names, rainbow_max_call)
from fbtree.problems.closed_form import bs_closed_form  # NOQA
