from fbtree.paths.grid import TimeGrid, make_grid  # NOQA
from fbtree.paths.simulate import (  # NOQA
    PathEnsemble, simulate_brownian, simulate_euler)
