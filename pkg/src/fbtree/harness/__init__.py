from fbtree.harness.event import (  # NOQA
    Dispatcher, Event, ExperimentEvent, Listener)
from fbtree.harness.experiment import (  # NOQA
    ABSOLUTE, RELATIVE, CellStats, Experiment, ExperimentSpec,
    ExperimentStats, cell_statistics, convergence_rate, run_experiment)
from fbtree.harness.listeners import Reporter  # NOQA
from fbtree.harness.table import emit_table, to_frame  # NOQA
