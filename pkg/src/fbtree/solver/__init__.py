from fbtree.solver.backward import (  # NOQA
    BackwardState, SolveResult, StepDiagnostics, TreeEstimator, picard,
    solve, solve_ensemble, solve_many, terminal_condition, terminal_state,
    y_step, z_step)
from fbtree.solver.scheme import (  # NOQA
    AUTO, SCHEMES, SchemeParams, SolverConfig, seed_schedule)
