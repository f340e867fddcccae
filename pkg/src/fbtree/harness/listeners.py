from fbtree.harness.event import Listener
from fbtree.utils import logging


class Reporter(Listener):
    """Logs the progress of an experiment, one line per cell."""
    name = "reporter"

    def __init__(self, logger=None, **kwargs):
        super().__init__(**kwargs)
        self._logger = logger if logger is not None \
            else logging.getLogger(__name__)
        self._history = []

    def get_history(self):
        return self._history

    def on_experiment_begin(self, data):
        self._history = []
        spec = data['spec']
        self._logger.info(
            "experiment '{}' with {} - {} cells x {} runs".format(
                spec.problem.name, spec.scheme, data['size'], spec.n_runs))

    def on_run_end(self, data):
        self._logger.log(
            logging.TRACE, "N_T={} M={} run {} (seed {}): y0={:.6f} "
            "in {:.2f}s".format(data['n_steps'], data['M'], data['run'],
                               data['seed'], data['result'].y0,
                               data['seconds']))

    def on_cell_end(self, data):
        cell = data['cell']
        self._history.append(cell)
        if cell.error is not None:
            self._logger.error("N_T={} M={} - failed: {}".format(
                cell.n_steps, cell.M, cell.error))
            return
        message = "N_T={} M={} - err_y: {:.4e}, std_y: {:.4e}".format(
            cell.n_steps, cell.M, cell.mean_err_y, cell.std_y)
        if cell.mean_err_z is not None:
            message += ", err_z: {:.4e}, std_z: {:.4e}".format(
                cell.mean_err_z, cell.std_z)
        message += ", runtime: {:.2f}s".format(cell.runtime_s)
        self._logger.info(message)

    def on_experiment_end(self, data):
        stats = data['stats']
        rates = []
        for label, value in (('y', stats.cr_y), ('z', stats.cr_z)):
            if value is not None:
                rates.append("CR_{}: {:.2f}".format(label, value))
        if rates:
            self._logger.info(", ".join(rates))
        if stats.failed:
            self._logger.warning("{} of {} cells failed".format(
                len(stats.failed), len(stats.cells)))
