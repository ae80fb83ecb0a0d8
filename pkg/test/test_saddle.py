# coding=utf-8
"""Characteristic point lambda_{E,t} and the effective non-Hermiticity parameters."""

import math
import unittest

import numpy as np

from wnhtool.Scripts.Utilities.diagnostics import SemicircleStieltjes, semicircle_m
from wnhtool.Scripts.Utilities.ensembles import RngStream, sample_gue
from wnhtool.Scripts.Utilities.errors import InputError, NumericalError
from wnhtool.Scripts.Utilities.saddle import (SaddleResult, saddle_for_pair, solve_lambda, tau_E_target, tau_Et,
                                              tau_Et_prediction, verify_eta_bounds)


def semicircle_lambda(E, t):
    """Closed form: (1 + t) m^2 + E m + 1 = 0 with Im m > 0."""
    m = (-E + 1j * math.sqrt(4.0 * (1.0 + t) - E * E)) / (2.0 * (1.0 + t))
    return E + t * m


class NoDerivative(SemicircleStieltjes):
    """Semicircle m with an unusable derivative, so Newton steps are not finite."""

    def m_prime(self, z):
        return complex(np.nan, np.nan)


class SemicircleSaddleTest(unittest.TestCase):

    def test_closed_form(self):
        for E, t in ((0.0, 0.01), (0.5, 0.1), (-1.2, 0.05), (1.8, 0.2)):
            result = solve_lambda(None, E, t)
            self.assertLess(abs(result.lam - semicircle_lambda(E, t)), 1e-10)
            self.assertLessEqual(result.residual, 1e-12)
            self.assertGreater(result.eta, 0.0)

    def test_fixed_point_equation(self):
        result = solve_lambda(SemicircleStieltjes(), 0.7, 0.1)
        self.assertLess(abs(result.lam - 0.7 - 0.1 * semicircle_m(result.lam)), 1e-12)

    def test_center_eta(self):
        t = 0.01
        result = solve_lambda(None, 0.0, t)
        self.assertAlmostEqual(result.eta, t / math.sqrt(1.0 + t), places=12)
        self.assertAlmostEqual(result.u, 0.0, places=12)

    def test_small_t_limit(self):
        E, t = 0.4, 1e-4
        result = solve_lambda(None, E, t)
        rho = math.sqrt(4.0 - E * E) / (2.0 * math.pi)
        self.assertAlmostEqual(result.eta / t, math.pi * rho, places=3)

    def test_fast_convergence(self):
        for E in np.linspace(-1.9, 1.9, 9):
            result = solve_lambda(None, E, 0.05)
            self.assertLessEqual(result.iterations, 30)
            self.assertEqual(result.method, 'newton')

    def test_newton_small_t(self):
        for t in (1e-1, 1e-2, 1e-3):
            result = solve_lambda(None, 0.5, t)
            self.assertEqual(result.method, 'newton')
            self.assertLessEqual(result.iterations, 30)
            self.assertLess(abs(result.lam - semicircle_lambda(0.5, t)), 1e-10)

    def test_fixed_point_fallback(self):
        result = solve_lambda(NoDerivative(), 0.3, 0.1)
        self.assertEqual(result.method, 'fixed-point')
        self.assertLessEqual(result.residual, 1e-12)
        self.assertLess(abs(result.lam - semicircle_lambda(0.3, 0.1)), 1e-10)

    def test_reflection(self):
        a = solve_lambda(None, 0.8, 0.1).lam
        b = solve_lambda(None, -0.8, 0.1).lam
        self.assertLess(abs(b + a.conjugate()), 1e-11)

    def test_eta_increases_with_t(self):
        etas = [solve_lambda(None, 0.3, t).eta for t in (0.01, 0.05, 0.1, 0.5)]
        self.assertTrue(all(a < b for a, b in zip(etas, etas[1:])))

    def test_invalid_time(self):
        for t in (0.0, -0.1):
            with self.assertRaises(InputError):
                solve_lambda(None, 0.0, t)

    def test_no_convergence(self):
        with self.assertRaises(NumericalError) as ctx:
            solve_lambda(None, 0.3, 0.1, tol=1e-300, max_iter=2)
        self.assertIn('iterates', ctx.exception.details)

    def test_result_dict(self):
        data = solve_lambda(None, 0.0, 0.1).to_dict()
        self.assertEqual(set(data['lambda']), {'re', 'im'})
        self.assertNotIn('tau_Et', data)


class EffectiveParameterTest(unittest.TestCase):

    def test_tau_Et(self):
        self.assertAlmostEqual(tau_Et(0.5, 100, 0.01, 0.1, 0.1), 0.6)
        with self.assertRaises(InputError):
            tau_Et(0.5, 100, 0.01, 0.0, 0.1)

    def test_targets(self):
        self.assertAlmostEqual(tau_E_target(100, 0.01, 0.0), 1.0)
        self.assertAlmostEqual(tau_Et_prediction(100, 0.01, 0.0, 0.1), 1.1)
        self.assertEqual(tau_E_target(100, 0.01, 2.5), 0.0)

    def test_pair(self):
        rng = RngStream(4).generator()
        W1, W2 = sample_gue(300, rng), sample_gue(300, rng)
        result = saddle_for_pair(W1, W2, 0.0, 0.1, 1.0 / 300)
        self.assertLessEqual(result.residual, 1e-12)
        self.assertGreaterEqual(result.beta, 0.0)
        # eta = t Im m(lambda) at the fixed point
        self.assertAlmostEqual(result.tau_E_bracket, result.tau_Et, places=8)
        self.assertLess(abs(result.tau_Et - result.tau_Et_prediction), 0.2 * result.tau_Et_prediction)
        self.assertIn('tau_Et', result.to_dict())


class EtaBoundsTest(unittest.TestCase):

    def test_bulk_point(self):
        report = verify_eta_bounds(solve_lambda(None, 1.0, 0.05), 10.0)
        self.assertTrue(report.passed)
        self.assertFalse(report.u_lower_skipped)

    def test_center_skips_lower_u_bound(self):
        report = verify_eta_bounds(solve_lambda(None, 0.0, 0.05), 10.0)
        self.assertTrue(report.u_lower_skipped)
        self.assertTrue(report.passed)

    def test_tight_constant_fails(self):
        result = SaddleResult(0.5 + 0.001j, 0.0, 1, 0.5, 0.1)
        self.assertFalse(verify_eta_bounds(result, 2.0).passed)
        with self.assertRaises(InputError):
            verify_eta_bounds(result, 0.5)


if __name__ == '__main__':
    unittest.main()
