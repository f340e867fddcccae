import unittest

import numpy as np

from fbtree.errors import InvalidArgumentError, NumericalError
from fbtree.harness import (
    ABSOLUTE, RELATIVE, ExperimentEvent, ExperimentSpec, Listener,
    cell_statistics, convergence_rate, run_experiment)
from fbtree.problems import get_problem
from fbtree.solver import SolveResult


def power_solver(scale=1.0):
    """Fake solver whose errors decay like 1/N_T in Y and 1/N_T^2 in Z."""
    def _solve(problem, grid, scheme, config, seed):
        n = grid.n_steps
        return SolveResult(problem.exact_y0 + scale / n,
                           problem.exact_z0 + scale / n ** 2)
    return _solve


class TestConvergenceRate(unittest.TestCase):

    def test_power_laws(self):
        errors = [(n, 3.0 / n) for n in (2, 4, 8, 16)]
        self.assertAlmostEqual(convergence_rate(errors), 1.0, places=12)
        errors = [(n, 0.5 * n ** -2.0) for n in (2, 4, 8)]
        self.assertAlmostEqual(convergence_rate(errors), 2.0, places=12)

    def test_scale_and_order_invariance(self):
        errors = [(2, 0.3), (4, 0.2), (8, 0.05), (16, 0.04)]
        rate = convergence_rate(errors)
        scaled = [(n, 7.0 * e) for n, e in errors]
        self.assertAlmostEqual(convergence_rate(scaled), rate, places=12)
        shuffled = [errors[2], errors[0], errors[3], errors[1]]
        self.assertAlmostEqual(convergence_rate(shuffled), rate, places=12)

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            convergence_rate([(2, 0.1)])
        with self.assertRaises(InvalidArgumentError):
            convergence_rate([(8, 0.1), (8, 0.2)])
        with self.assertRaises(InvalidArgumentError):
            convergence_rate([(2, 0.1), (4, 0.0)])


class TestCellStatistics(unittest.TestCase):

    def test_absolute(self):
        cell = cell_statistics(4, 1000, [1.0, 2.0, 3.0], [[1.0]] * 3,
                               [0.5, 1.5, 1.0], 0.0, [1.0])
        self.assertEqual(cell.mean_err_y, 2.0)
        self.assertEqual(cell.std_y, 1.0)
        self.assertEqual(cell.mean_err_z, 0.0)
        self.assertEqual(cell.std_z, 0.0)
        self.assertEqual(cell.runtime_s, 1.0)
        self.assertIsNone(cell.error)

    def test_relative(self):
        cell = cell_statistics(4, 1000, [-1.0, -3.0], None, [0.0, 0.0],
                               -2.0, error_mode=RELATIVE)
        self.assertEqual(cell.mean_err_y, 0.5)
        self.assertAlmostEqual(cell.std_y, np.sqrt(2.0) / 2.0)
        self.assertIsNone(cell.mean_err_z)
        cell = cell_statistics(2, 100, [4.3671] * 3, None, [0.0] * 3, 4.3671,
                               error_mode=RELATIVE)
        self.assertEqual(cell.mean_err_y, 0.0)

    def test_euclidean_z_error(self):
        cell = cell_statistics(2, 100, [0.0], [[0.0, 4.0]], [0.1], 0.0,
                               [3.0, 0.0])
        self.assertEqual(cell.mean_err_z, 5.0)
        self.assertEqual(cell.std_y, 0.0)
        self.assertEqual(cell.std_z, 0.0)


class TestExperiment(unittest.TestCase):

    def setUp(self):
        self.problem = get_problem('oscillatory')

    def test_rates_from_fake_solver(self):
        spec = ExperimentSpec(self.problem, [(2, 100), (4, 100), (8, 100)],
                              n_runs=3)
        stats = run_experiment(spec, solver=power_solver())
        self.assertEqual([c.n_steps for c in stats.cells], [2, 4, 8])
        self.assertAlmostEqual(stats.cells[0].mean_err_y, 0.5)
        self.assertEqual(stats.cells[0].std_y, 0.0)
        self.assertAlmostEqual(stats.cr_y, 1.0, places=10)
        self.assertAlmostEqual(stats.cr_z, 2.0, places=10)
        self.assertTrue(stats.has_z)
        self.assertEqual(stats.failed, [])

        scaled = run_experiment(spec, solver=power_solver(7.0))
        self.assertAlmostEqual(scaled.cr_y, 1.0, places=10)

    def test_solver_arguments(self):
        seen = []

        def _solve(problem, grid, scheme, config, seed):
            seen.append((grid.n_steps, config.M, config.group_size, seed))
            return SolveResult(0.0, [1.0])

        spec = ExperimentSpec(self.problem, [(2, 100), (4, 2000)], n_runs=6,
                              seed_a=3, seed_b=50)
        run_experiment(spec, solver=_solve)
        self.assertEqual(seen[:6], [(2, 100, 100, s)
                                    for s in (3, 4, 5, 6, 7, 50)])
        self.assertEqual(seen[6], (4, 2000, 1000, 3))

    def test_failed_cell(self):
        inner = power_solver()

        def _solve(problem, grid, scheme, config, seed):
            if grid.n_steps == 4:
                raise NumericalError("Picard iteration diverges", step=2)
            return inner(problem, grid, scheme, config, seed)

        spec = ExperimentSpec(self.problem, [(2, 100), (4, 100), (8, 100)],
                              n_runs=2)
        stats = run_experiment(spec, solver=_solve)
        self.assertEqual(len(stats.failed), 1)
        self.assertIn("diverges", stats.cells[1].error)
        self.assertIsNone(stats.cells[1].mean_err_y)
        self.assertAlmostEqual(stats.cr_y, 1.0, places=10)

    def test_single_cell_has_no_rate(self):
        spec = ExperimentSpec(self.problem, [(2, 100)], n_runs=1)
        stats = run_experiment(spec, solver=power_solver())
        self.assertIsNone(stats.cr_y)
        self.assertIsNone(stats.cr_z)

    def test_events(self):
        counts = {}

        def _count(event):
            def _handler(self, data):
                counts[event] = counts.get(event, 0) + 1
            return _handler

        listener = Listener(
            name='counter',
            **{'on_' + str(e): _count(e) for e in ExperimentEvent})
        spec = ExperimentSpec(self.problem, [(2, 100), (4, 100)], n_runs=3)
        run_experiment(spec, [listener], solver=power_solver())
        self.assertEqual(counts[ExperimentEvent.EXPERIMENT_BEGIN], 1)
        self.assertEqual(counts[ExperimentEvent.CELL_BEGIN], 2)
        self.assertEqual(counts[ExperimentEvent.CELL_END], 2)
        self.assertEqual(counts[ExperimentEvent.RUN_END], 6)
        self.assertEqual(counts[ExperimentEvent.EXPERIMENT_END], 1)

    def test_real_solver(self):
        spec = ExperimentSpec(self.problem, [(1, 200), (2, 200)], n_runs=2,
                              group_size=100)
        stats = run_experiment(spec)
        self.assertEqual(stats.failed, [])
        self.assertEqual(len(stats.cells[0].y0), 2)
        self.assertGreater(stats.cells[1].mean_err_y, 0.0)

    def test_spec_validation(self):
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(self.problem, [])
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(self.problem, [(2, 1500)])
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(self.problem, [(2, 100)], error_mode=RELATIVE)
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(self.problem, [(2, 100)], error_mode='squared')
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(get_problem('rates:2'), [(2, 100)])
        with self.assertRaises(InvalidArgumentError):
            ExperimentSpec(self.problem, [(2, 100)], n_runs=3, seeds=[1])
        spec = ExperimentSpec(get_problem('rates:2'), [(2, 100)],
                              reference=5.0)
        self.assertEqual(spec.reference, 5.0)
        self.assertIsNone(spec.reference_z)
        self.assertEqual(spec.error_mode, ABSOLUTE)
        self.assertEqual(spec.seeds, [0, 1, 2, 3, 4,
                                      1000, 1001, 1002, 1003, 1004])
        self.assertEqual(spec.solver_config(100).group_size, 100)


if __name__ == "__main__":
    unittest.main()
