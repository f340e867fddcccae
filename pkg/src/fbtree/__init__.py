r"""

================================================
        ______  __
       / __/ /_/ /_________  ___
      / /_/ __ \ __/ ___/ _ \/ _ \
     / __/ /_/ / /_/ /  /  __/  __/
    /_/ /_.___/\__/_/   \___/\___/

================================================

Tree-based solver for decoupled forward-backward stochastic differential
equations: Euler paths, CART regression for the conditional expectations,
a theta-scheme backward sweep and a reproducible experiment harness.

@licence MIT License

"""

__version__ = '0.1.0'

from fbtree import utils  # NOQA
from fbtree import errors  # NOQA
from fbtree import paths  # NOQA
from fbtree import tree  # NOQA
from fbtree import problems  # NOQA
from fbtree import solver  # NOQA
from fbtree import harness  # NOQA
from fbtree.errors import (  # NOQA
    ConfigError, FbtreeError, InvalidArgumentError, NumericalError)
from fbtree.harness.experiment import ExperimentSpec, run_experiment  # NOQA
from fbtree.paths import make_grid, simulate_euler  # NOQA
from fbtree.problems import get_problem  # NOQA
from fbtree.solver import SchemeParams, SolverConfig, solve, solve_many  # NOQA
