import unittest

import numpy as np

from fbtree.errors import InvalidArgumentError
from fbtree.problems import (
    CLOSED_FORM, TABLE, FbsdeProblem, ReferenceValue, bs_closed_form,
    get_problem, problem_names)


def _fd_terminal_z(problem, x, h=1e-5):
    """Central-difference Z_T together with a mask of the samples where
    both one-sided differences agree (away from kinks)."""
    M, n = x.shape
    grad = np.zeros((M, n))
    smooth = np.ones(M, dtype=bool)
    g0 = problem.terminal(x)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        up = (problem.terminal(x + e) - g0) / h
        down = (g0 - problem.terminal(x - e)) / h
        grad[:, i] = 0.5 * (up + down)
        smooth &= np.abs(up - down) < 1e-3 * np.maximum(1.0, np.abs(up))
    z = np.einsum('mi,mij->mj', grad, problem.diffusion(problem.T, x))
    return z, smooth


class TestClosedForm(unittest.TestCase):

    def test_black_scholes_reference(self):
        price, delta = bs_closed_form(100.0, 100.0, 0.03, 0.04, 0.2, 0.33)
        self.assertAlmostEqual(price, 4.3671, delta=2e-3)
        self.assertAlmostEqual(0.2 * 100.0 * delta, 10.0950, delta=2e-3)

    def test_deep_in_the_money(self):
        price, delta = bs_closed_form(200.0, 50.0, 0.0, 0.0, 0.2, 1.0)
        self.assertAlmostEqual(price, 150.0, places=6)
        self.assertAlmostEqual(delta, 1.0, places=6)

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            bs_closed_form(100.0, 100.0, 0.03, 0.0, 0.0, 1.0)
        with self.assertRaises(InvalidArgumentError):
            bs_closed_form(-1.0, 100.0, 0.03, 0.0, 0.2, 1.0)


class TestCatalog(unittest.TestCase):

    def setUp(self):
        self.problems = [
            get_problem('oscillatory'),
            get_problem('black-scholes'),
            get_problem('heston'),
            get_problem('rainbow:1', sigma=0.2),
            get_problem('rainbow:3', sigma=0.3),
            get_problem('rates:1'),
            get_problem('rates:3'),
        ]

    def test_names(self):
        self.assertEqual(problem_names(), ['oscillatory', 'black-scholes',
                                           'heston', 'rainbow:D', 'rates:D'])
        self.assertEqual([p.name for p in self.problems],
                         ['oscillatory', 'black-scholes', 'heston',
                          'rainbow:1', 'rainbow:3', 'rates:1', 'rates:3'])

    def test_references(self):
        osc = get_problem('oscillatory')
        self.assertEqual(osc.exact_y0, 0.0)
        self.assertTrue(np.array_equal(osc.exact_z0, [1.0]))

        bs = get_problem('black-scholes')
        self.assertEqual(bs.reference.source, CLOSED_FORM)
        self.assertAlmostEqual(bs.exact_y0, 4.3671, delta=2e-3)
        self.assertAlmostEqual(bs.exact_z0[0], 10.0950, delta=2e-3)

        heston = get_problem('heston')
        self.assertEqual(heston.exact_y0, 3.1825)
        self.assertEqual(heston.reference.source, TABLE)
        self.assertTrue(heston.reference.citation)
        self.assertIsNone(heston.exact_z0)

        self.assertEqual(get_problem('rainbow:10', sigma=0.2).exact_y0,
                         10.4689)
        self.assertEqual(get_problem('rainbow:100', sigma=0.2).exact_y0,
                         17.4267)
        self.assertIsNone(get_problem('rainbow:3', sigma=0.2).reference)
        self.assertEqual(get_problem('rates:1').exact_y0, 7.156)
        self.assertEqual(get_problem('rates:100').exact_y0, 21.2988)

    def test_rainbow_one_asset_is_a_call(self):
        problem = get_problem('rainbow:1', sigma=0.25)
        price, delta = bs_closed_form(100.0, 100.0, 0.04, 0.0, 0.25, 0.1)
        self.assertAlmostEqual(problem.exact_y0, price, places=12)
        self.assertAlmostEqual(problem.exact_z0[0], 0.25 * 100.0 * delta,
                               places=12)

    def test_shapes(self):
        for problem in self.problems:
            M = 7
            x = np.tile(problem.x0, (M, 1))
            y = np.ones(M)
            z = np.ones((M, problem.d))
            self.assertEqual(problem.drift(0.0, x).shape, (M, problem.n))
            self.assertEqual(problem.diffusion(0.0, x).shape,
                             (M, problem.n, problem.d))
            self.assertEqual(problem.driver(0.0, x, y, z).shape, (M,))
            self.assertEqual(problem.terminal(x).shape, (M,))
            self.assertEqual(problem.terminal_z(x).shape, (M, problem.d))

    def test_diffuse_matches_diffusion(self):
        rng = np.random.default_rng(0)
        for problem in self.problems:
            x = problem.x0 * (1.0 + 0.1 * rng.uniform(size=(20, problem.n)))
            dw = rng.standard_normal((20, problem.d))
            self.assertTrue(np.allclose(
                problem.diffuse(0.1, x, dw),
                FbsdeProblem.diffuse(problem, 0.1, x, dw)))

    def test_terminal_z_is_gradient_times_diffusion(self):
        rng = np.random.default_rng(1)
        for problem in self.problems:
            if problem.name == 'heston':
                x = np.column_stack([rng.uniform(0.01, 0.09, 500),
                                     rng.uniform(30.0, 70.0, 500)])
            elif problem.name == 'oscillatory':
                x = rng.uniform(-2.0, 2.0, size=(500, 1))
            else:
                x = rng.uniform(80.0, 180.0, size=(500, problem.n))
            z_fd, smooth = _fd_terminal_z(problem, x)
            self.assertGreater(smooth.sum(), 100, problem.name)
            self.assertTrue(np.allclose(problem.terminal_z(x)[smooth],
                                        z_fd[smooth], rtol=1e-4, atol=1e-4),
                            problem.name)

    def test_lipschitz_bounds(self):
        rng = np.random.default_rng(2)
        for problem in self.problems:
            L = problem.lipschitz
            if L is None:
                continue
            x = np.tile(problem.x0, (1000, 1))
            y1, y2 = rng.normal(0.0, 10.0, (2, 1000))
            z1, z2 = rng.normal(0.0, 10.0, (2, 1000, problem.d))
            df = np.abs(problem.driver(0.0, x, y1, z1)
                        - problem.driver(0.0, x, y2, z2))
            bound = L * (np.abs(y1 - y2) + np.linalg.norm(z1 - z2, axis=1))
            self.assertTrue(np.all(df <= bound + 1e-9), problem.name)

    def test_heston_driver_is_finite_at_zero_variance(self):
        problem = get_problem('heston')
        x = np.array([[0.0, 50.0], [-0.01, 45.0]])
        f = problem.driver(0.1, x, np.ones(2), np.ones((2, 2)))
        self.assertTrue(np.all(np.isfinite(f)))
        self.assertTrue(np.all(problem.drift(0.0, x)[:, 0] > 0.0))

    def test_nonlinear_flag(self):
        flags = {p.name: p.nonlinear for p in self.problems}
        self.assertTrue(flags['rates:1'])
        self.assertTrue(flags['rates:3'])
        self.assertFalse(flags['black-scholes'])
        self.assertFalse(flags['heston'])

    def test_capped_payoff(self):
        problem = get_problem('rates:100')
        x = np.full((2, 100), 90.0)
        x[0, 3] = 130.0
        x[1, 7] = 160.0
        self.assertTrue(np.allclose(problem.terminal(x), [10.0, 20.0]))
        z = problem.terminal_z(x)
        self.assertAlmostEqual(z[0, 3], 0.2 * 130.0)
        self.assertAlmostEqual(z[1, 7], -0.2 * 160.0)
        self.assertEqual(np.count_nonzero(z), 2)

    def test_max_payoff_z_on_many_samples(self):
        x = np.random.default_rng(3).uniform(80.0, 170.0, size=(500, 4))
        rows, j = np.arange(500), np.argmax(x, axis=1)
        s = x.max(axis=1)
        expected = {
            'rainbow:4': 0.2 * s * (s > 100.0),
            'rates:4': 0.2 * s * ((s > 120.0) - 2.0 * (s > 150.0)),
        }
        for name, z_max in expected.items():
            z = get_problem(name, sigma=0.2).terminal_z(x)
            self.assertEqual(z.shape, (500, 4))
            self.assertTrue(np.allclose(z[rows, j], z_max))
            z[rows, j] = 0.0
            self.assertFalse(np.any(z))

    def test_equality(self):
        self.assertEqual(get_problem('rates:1'), get_problem('rates', dims=1))
        self.assertEqual(hash(get_problem('rates:1')),
                         hash(get_problem('rates:1')))
        self.assertNotEqual(get_problem('rates:1'), get_problem('rates:2'))
        self.assertNotEqual(get_problem('rainbow:2', sigma=0.2),
                            get_problem('rainbow:2', sigma=0.3))

    def test_lookup_errors(self):
        with self.assertRaises(InvalidArgumentError):
            get_problem('nope')
        with self.assertRaises(InvalidArgumentError):
            get_problem('heston:2')
        with self.assertRaises(InvalidArgumentError):
            get_problem('rainbow:3')
        with self.assertRaises(InvalidArgumentError):
            get_problem('rates')
        with self.assertRaises(InvalidArgumentError):
            get_problem('rates:abc')
        with self.assertRaises(InvalidArgumentError):
            get_problem('rates:5', dims=3)
        with self.assertRaises(InvalidArgumentError):
            get_problem('rates:0')


class TestReferenceValue(unittest.TestCase):

    def test_sources(self):
        ref = ReferenceValue(1)
        self.assertEqual(ref, (1.0, CLOSED_FORM, None))
        with self.assertRaises(InvalidArgumentError):
            ReferenceValue(1.0, TABLE)
        with self.assertRaises(InvalidArgumentError):
            ReferenceValue(1.0, 'guess')


if __name__ == "__main__":
    unittest.main()
