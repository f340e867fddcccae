import unittest

from fbtree.errors import InvalidArgumentError
from fbtree.problems import get_problem
from fbtree.solver import (
    AUTO, SCHEMES, SchemeParams, SolverConfig, seed_schedule)


class TestSchemeParams(unittest.TestCase):

    def test_defaults(self):
        scheme = SchemeParams()
        self.assertEqual(scheme.thetas, (0.5, 1.0, 0.5))
        self.assertEqual(scheme.picard_iters, 20)
        self.assertEqual(scheme, SchemeParams.named('first-order-half'))

    def test_named(self):
        for name, thetas in SCHEMES.items():
            self.assertEqual(SchemeParams.named(name).thetas, thetas)
        self.assertEqual(SchemeParams.named('crank-nicolson').theta2, 0.5)
        with self.assertRaises(InvalidArgumentError):
            SchemeParams.named('bogus')

    def test_ranges(self):
        SchemeParams(0.0, 1.0, 0.0)
        SchemeParams(1.0, 1e-6, 1.0)
        with self.assertRaises(InvalidArgumentError) as cm:
            SchemeParams(theta2=0.0)
        self.assertIn("theta2 must be in (0,1]", str(cm.exception))
        with self.assertRaises(InvalidArgumentError):
            SchemeParams(theta1=1.5)
        with self.assertRaises(InvalidArgumentError):
            SchemeParams(theta3=-0.1)
        with self.assertRaises(InvalidArgumentError):
            SchemeParams(theta1=True)
        with self.assertRaises(InvalidArgumentError):
            SchemeParams(picard_iters=0)


class TestSolverConfig(unittest.TestCase):

    def test_groups(self):
        config = SolverConfig(3000, 1000)
        self.assertEqual(config.n_groups, 3)
        self.assertEqual(SolverConfig(500, 500).n_groups, 1)

    def test_divisibility(self):
        with self.assertRaises(InvalidArgumentError) as cm:
            SolverConfig(1500, 1000)
        self.assertIn("not a multiple", str(cm.exception))
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(100, 1000)

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(0)
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(1000, min_leaf=0)
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(1000, holdout_fraction=0.0)
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(1000, n_jobs=0)

    def test_se_factor(self):
        config = SolverConfig(1000)
        self.assertEqual(config.se_factor, 0.0)
        self.assertEqual(config.replace(se_factor=1).se_factor, 1.0)
        self.assertEqual(config.replace(M=2000).se_factor, 0.0)
        with self.assertRaises(InvalidArgumentError):
            SolverConfig(1000, se_factor=-0.5)

    def test_problem_defaults(self):
        config = SolverConfig(1000)
        self.assertEqual(config.resolve(get_problem('oscillatory')),
                         (5, True))
        self.assertEqual(config.resolve(get_problem('rates:1')),
                         (AUTO, False))
        config = SolverConfig(1000, min_leaf=10, prune=True)
        self.assertEqual(config.resolve(get_problem('rates:1')), (10, True))

    def test_replace(self):
        config = SolverConfig(2000, 1000, min_leaf=AUTO)
        other = config.replace(group_size=500)
        self.assertEqual(other.n_groups, 4)
        self.assertEqual(other.min_leaf, AUTO)
        self.assertEqual(config.group_size, 1000)


class TestSeedSchedule(unittest.TestCase):

    def test_blocks_of_five(self):
        self.assertEqual(seed_schedule(12),
                         [0, 1, 2, 3, 4, 1000, 1001, 1002, 1003, 1004, 5, 6])
        self.assertEqual(seed_schedule(7, seed_a=10, seed_b=20),
                         [10, 11, 12, 13, 14, 20, 21])

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            seed_schedule(0)


if __name__ == "__main__":
    unittest.main()
