import unittest

import numpy as np

from fbtree.errors import InvalidArgumentError
from fbtree.paths import TimeGrid, make_grid


class TestTimeGrid(unittest.TestCase):

    def test_make_grid(self):
        grid = make_grid(1.0, 4)
        self.assertTrue(np.allclose(grid.t_points,
                                    [0.0, 0.25, 0.5, 0.75, 1.0]))
        self.assertEqual(grid.n_steps, 4)
        self.assertEqual(len(grid), 5)
        self.assertEqual(grid.T, 1.0)
        self.assertAlmostEqual(grid.dt.sum(), 1.0, places=14)

    def test_last_point_is_maturity(self):
        grid = make_grid(0.33, 7)
        self.assertEqual(grid.t_points[-1], 0.33)
        self.assertTrue(np.all(grid.dt > 0))

    def test_read_only(self):
        grid = make_grid(1.0, 2)
        with self.assertRaises(ValueError):
            grid.t_points[1] = 0.3
        with self.assertRaises(ValueError):
            grid.dt[0] = 0.3

    def test_equality(self):
        self.assertEqual(make_grid(0.5, 4), TimeGrid([0.0, 0.125, 0.25,
                                                      0.375, 0.5]))
        self.assertNotEqual(make_grid(0.5, 4), make_grid(0.5, 8))
        self.assertEqual(hash(make_grid(0.5, 4)), hash(make_grid(0.5, 4)))

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            make_grid(0.0, 4)
        with self.assertRaises(InvalidArgumentError):
            make_grid(1.0, 0)
        with self.assertRaises(InvalidArgumentError):
            make_grid(1.0, 2.5)
        with self.assertRaises(InvalidArgumentError):
            TimeGrid([0.5, 1.0])
        with self.assertRaises(InvalidArgumentError):
            TimeGrid([0.0, 1.0, 1.0])
        with self.assertRaises(InvalidArgumentError):
            TimeGrid([0.0])


if __name__ == "__main__":
    unittest.main()
