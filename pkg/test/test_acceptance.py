# coding=utf-8
"""
Property sweeps over the kernel and the saddle point, plus the Monte Carlo
reproductions of the limiting bulk statistics.

The Monte Carlo cases take minutes; they run only with WNH_SLOW_TESTS=1.
"""

import contextlib
import io
import json
import math
import os
import tempfile
import unittest
from functools import partial

import numpy as np
from scipy import integrate

from wnhtool.Scripts.Utilities.correlation import (Window, compare, estimate_rho1, estimate_rho2, repulsion_ratio,
                                                   rescale_bulk, y_marginal)
from wnhtool.Scripts.Utilities.diagnostics import check_class_membership, semicircle_density
from wnhtool.Scripts.Utilities.ensembles import GAUSSIAN_ATOM, EnsembleSpec, RngStream, draw, sample_gue
from wnhtool.Scripts.Utilities.kernel import KernelParams, kernel_K, kernel_matrix, marginal_density, rho1_values, rho_k
from wnhtool.Scripts.Utilities.linalg import general_eigen
from wnhtool.Scripts.Utilities.misc import run_trials
from wnhtool.Scripts.Utilities.saddle import saddle_for_pair, solve_lambda
from wnhtool.WNHtool import main

SLOW = os.environ.get('WNH_SLOW_TESTS') == '1'
ENERGIES = (-1.0, -0.5, 0.0, 0.5, 1.0)


def bulk_trial(spec, trial):
    """Eigenvalues of one weakly non-Hermitian draw rescaled around every energy in ENERGIES."""
    values = general_eigen(draw(spec, trial)[0]).values
    return {E: rescale_bulk(values, E, spec.N * math.pi * semicircle_density(E)).zeta for E in ENERGIES}


class KernelPropertyTest(unittest.TestCase):

    def test_hermitian_and_shift(self):
        rng = np.random.default_rng(10)
        for _ in range(500):
            params = KernelParams(rng.uniform(0.1, 5.0))
            z, w = complex(*rng.uniform(-4, 4, 2)), complex(*rng.uniform(-4, 4, 2))
            s = rng.uniform(-10, 10)
            self.assertLessEqual(abs(kernel_K(params, w, z) - kernel_K(params, z, w).conjugate()), 1e-12)
            self.assertLessEqual(abs(kernel_K(params, z + s, w + s) - kernel_K(params, z, w)), 1e-12)

    def test_determinantal_positivity(self):
        rng = np.random.default_rng(11)
        for trial in range(200):
            params = KernelParams((0.25, 1.0, 4.0)[trial % 3])
            k = int(rng.integers(2, 5))
            points = rng.uniform(-5, 5, k) + 1j * rng.uniform(-3, 3, k)
            self.assertGreaterEqual(np.linalg.eigvalsh(kernel_matrix(params, points)).min(), -1e-10)
            rho1 = rho1_values(params, points[:2])
            self.assertLessEqual(rho_k(params, points[:2]), rho1[0] * rho1[1] + 1e-10)

    def test_quadrature(self):
        oracle = (2 * math.pi) ** -1.5 * integrate.quad(lambda l: math.exp(-2 * l * l), -1, 1, epsabs=1e-14)[0]
        self.assertLessEqual(abs(kernel_K(KernelParams(1.0), 0j, 0j) - oracle), 1e-10)
        rng = np.random.default_rng(12)
        for tau in (0.25, 1.0, 4.0):
            window = KernelParams(tau).validity_window()
            for _ in range(20):
                z = complex(rng.uniform(-5, 5), rng.uniform(-window, window) / 2)
                w = complex(rng.uniform(-5, 5), rng.uniform(-window, window) / 2)
                a = kernel_K(KernelParams(tau), z, w)
                b = kernel_K(KernelParams(tau, order=128), z, w)
                self.assertLessEqual(abs(a - b), 1e-12)


class SaddlePropertyTest(unittest.TestCase):

    def test_center_closed_form(self):
        for t in (1e-1, 1e-2, 1e-3):
            result = solve_lambda(None, 0.0, t)
            self.assertLessEqual(abs(result.eta - t / math.sqrt(1 + t)), 1e-10)
            self.assertLessEqual(result.residual, 1e-12)

    def test_small_time_density(self):
        for E in (0.0, 0.5, 1.0):
            ratio = solve_lambda(None, E, 1e-3).eta / 1e-3
            target = math.pi * semicircle_density(E)
            self.assertLessEqual(abs(ratio - target), 0.03 * target)

    def test_bracket_identity(self):
        rng = RngStream(13).generator()
        W1, W2 = sample_gue(200, rng), sample_gue(200, rng)
        for E in (-1.0, 0.0, 0.7):
            result = saddle_for_pair(W1, W2, E, 0.1, 1.0 / 200)
            self.assertLessEqual(abs(result.tau_E_bracket - result.tau_Et) / result.tau_Et, 1e-10)


@unittest.skipUnless(SLOW, 'set WNH_SLOW_TESTS=1 for the Monte Carlo reproductions')
class ClassMembershipMonteCarloTest(unittest.TestCase):

    def test_gue_pairs(self):
        passed = 0
        for seed in range(20):
            rng = RngStream(seed).generator()
            W1, W2 = sample_gue(400, rng), sample_gue(400, rng)
            passed += check_class_membership(W1, W2, 0.5).passed
            self.assertFalse(check_class_membership(W1, np.eye(400), 0.5).conditions['C2'].passed)
        self.assertGreaterEqual(passed, 19)


@unittest.skipUnless(SLOW, 'set WNH_SLOW_TESTS=1 for the Monte Carlo reproductions')
class BulkUniversalityMonteCarloTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        N = 256
        spec = EnsembleSpec(N, 1.0 / N, 0.0, GAUSSIAN_ATOM, 2024)
        results = run_trials(partial(bulk_trial, spec), range(2000), workers=os.cpu_count() or 1)
        cls.samples = {E: [r[E] for r in results] for E in ENERGIES}
        cls.tau = N * (1.0 / N) * math.pi * semicircle_density(0.0)

    def test_one_point_function(self):
        estimate = estimate_rho1(self.samples[0.0], Window(-3.0, 3.0, -4.0, 4.0), 3, 8)
        params = KernelParams(self.tau)
        report = compare(estimate, lambda z: rho1_values(params, z))
        self.assertLessEqual(report.rel_L1, 0.10)

    def test_marginal(self):
        window = Window(-2.0, 2.0, -4.0, 4.0)
        pooled = [zeta for E in ENERGIES for zeta in self.samples[E]]
        marginal = y_marginal(estimate_rho1(pooled, window, 4, 16))
        theory = marginal_density(KernelParams(self.tau), 0.0, (window.y0, window.y1))
        np.testing.assert_allclose(marginal, theory, rtol=0.05)

    def test_pair_repulsion(self):
        rho2 = estimate_rho2(self.samples[0.0], Window(-3.0, 3.0, -4.0, 4.0), 24)
        self.assertLessEqual(repulsion_ratio(rho2), 0.25)


@unittest.skipUnless(SLOW, 'set WNH_SLOW_TESTS=1 for the Monte Carlo reproductions')
class EffectiveParameterMonteCarloTest(unittest.TestCase):

    def test_tau_Et(self):
        N, t = 512, 0.05
        spec = EnsembleSpec(N, 1.0 / N, 0.0, GAUSSIAN_ATOM, 7)
        _, W1, W2 = draw(spec, 0)
        result = saddle_for_pair(W1, W2, 0.0, t, 1.0 / N)
        self.assertLessEqual(abs(result.tau_Et - result.tau_E_target), 0.1 * result.tau_E_target)
        self.assertLessEqual(abs(result.tau_Et - result.tau_Et_prediction), 0.1 * result.tau_Et_prediction)


@unittest.skipUnless(SLOW, 'set WNH_SLOW_TESTS=1 for the Monte Carlo reproductions')
class CorrelateCommandMonteCarloTest(unittest.TestCase):

    def test_default_bins_meet_tolerance(self):
        with tempfile.TemporaryDirectory() as out:
            argv = ['--out', out, '--workers', str(os.cpu_count() or 1), 'correlate', '--n', '256',
                    '--tau-n', '0.00390625', '--e', '0', '--trials', '2000', '--rho2', '--seed', '1']
            with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
                self.assertEqual(main(argv), 0)
            with open(os.path.join(out, 'correlate.json')) as handle:
                summary = json.load(handle)
        self.assertEqual((summary['estimate']['nx'], summary['estimate']['ny']), (1, 19))
        self.assertLessEqual(summary['comparison']['rel_L1'], 0.10)


if __name__ == '__main__':
    unittest.main()
