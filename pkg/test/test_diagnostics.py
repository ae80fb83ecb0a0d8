# coding=utf-8
"""Resolvent functionals, semicircle closed forms and the class checker."""

import json
import unittest

import numpy as np
from scipy import integrate

from wnhtool.Scripts.Utilities.diagnostics import (ResolventPair, SpectralDomainSpec, alpha_beta,
                                                   check_class_membership, contour_consistency,
                                                   local_law_deviation, m_prime, multi_resolvent_trace,
                                                   semicircle_density, semicircle_m, semicircle_m_prime,
                                                   stieltjes_m)
from wnhtool.Scripts.Utilities.ensembles import RngStream, sample_gue
from wnhtool.Scripts.Utilities.errors import DomainError, InputError
from wnhtool.Scripts.Utilities.linalg import HermitianMatrix, resolvent, traceless_part


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix(X / np.sqrt(4 * n))


def dense_chain(W1, W2, z_list):
    Wo = traceless_part(W2).entries
    P = np.eye(W1.n, dtype=complex)
    for z in z_list:
        P = P @ resolvent(W1, z).entries @ Wo
    return np.trace(P) / W1.n


class StieltjesTest(unittest.TestCase):

    def test_zero_matrix(self):
        z = 0.3 + 0.7j
        self.assertAlmostEqual(stieltjes_m(np.zeros((4, 4)), z), -1 / z, places=14)
        self.assertAlmostEqual(m_prime(np.zeros((4, 4)), z), 1 / z ** 2, places=14)

    def test_two_poles(self):
        z = 0.2 + 0.4j
        self.assertAlmostEqual(stieltjes_m(np.diag([1.0, -1.0]), z), z / (1 - z * z), places=14)

    def test_real_argument(self):
        with self.assertRaises(DomainError):
            stieltjes_m(np.eye(2), 1.5)

    def test_derivative_matches_finite_difference(self):
        H = random_hermitian(20, 1)
        z, h = 0.1 + 0.3j, 1e-6
        fd = (stieltjes_m(H, z + h) - stieltjes_m(H, z - h)) / (2 * h)
        self.assertLess(abs(m_prime(H, z) - fd), 1e-6)

    def test_herglotz(self):
        for seed in range(5):
            H = random_hermitian(15, seed)
            z = complex(np.random.default_rng(seed).uniform(-2, 2), 0.05 + seed / 10)
            m = stieltjes_m(H, z)
            self.assertGreater(m.imag, 0.0)
            self.assertLessEqual(abs(m_prime(H, z)), m.imag / z.imag * (1 + 1e-12))

    def test_gue_local_law(self):
        H = sample_gue(1000, RngStream(2))
        self.assertLess(abs(stieltjes_m(H, 1j) - 1j * (np.sqrt(5) - 1) / 2), 0.05)
        self.assertLess(local_law_deviation(H, [1j, 0.5 + 0.1j]), 0.05)


class AlphaBetaTest(unittest.TestCase):

    def test_identity_w2(self):
        self.assertEqual(alpha_beta(random_hermitian(6, 1), np.eye(6), 0.1 + 0.2j, 0.5), (0.0, 0.0))

    def test_scalar_resolvent(self):
        N, tau, z = 8, 0.25, 0.4 + 0.3j
        W2 = random_hermitian(N, 2)
        Wo = traceless_part(W2).entries
        u, eta = z.real, z.imag
        expected = N * tau * eta ** 2 / (u * u + eta * eta) ** 2 * np.trace(Wo @ Wo).real / N
        self.assertAlmostEqual(alpha_beta(np.zeros((N, N)), W2, z, tau)[1], expected, places=12)

    def test_dense_oracle(self):
        N, tau, z = 8, 0.3, -0.2 + 0.15j
        W1, W2 = random_hermitian(N, 3), random_hermitian(N, 4)
        G = resolvent(W1, z).entries
        Wo = traceless_part(W2).entries
        reG, imG = (G + G.conj().T) / 2, (G - G.conj().T) / 2j
        alpha = N * tau * np.trace(reG @ Wo @ reG @ Wo) / N
        beta = N * tau * np.trace(imG @ Wo @ imG @ Wo) / N
        a, b = alpha_beta(W1, W2, z, tau)
        self.assertAlmostEqual(a, alpha.real, places=12)
        self.assertAlmostEqual(b, beta.real, places=12)
        self.assertGreaterEqual(b, 0.0)

    def test_conjugate_symmetry(self):
        W1, W2 = random_hermitian(10, 5), random_hermitian(10, 6)
        z = 0.3 + 0.2j
        self.assertAlmostEqual(alpha_beta(W1, W2, z, 0.1)[1], alpha_beta(W1, W2, z.conjugate(), 0.1)[1], places=13)


class MultiResolventTest(unittest.TestCase):

    def test_scalar_w2(self):
        self.assertEqual(multi_resolvent_trace(random_hermitian(5, 1), 3.0 * np.eye(5), [0.2j]), 0.0)

    def test_zero_w1(self):
        W2 = random_hermitian(6, 2)
        Wo = traceless_part(W2).entries
        z = 0.5 + 0.5j
        expected = (-1 / z) ** 3 * np.trace(Wo @ Wo @ Wo) / 6
        self.assertAlmostEqual(multi_resolvent_trace(np.zeros((6, 6)), W2, [z] * 3), expected, places=13)

    def test_dense_oracle(self):
        W1, W2 = random_hermitian(6, 3), random_hermitian(6, 4)
        for z_list in ([0.1 + 0.2j, -0.3 + 0.1j], [0.2j, 0.4 - 0.3j, -0.1 + 0.5j, 0.3 + 0.2j]):
            self.assertLess(abs(multi_resolvent_trace(W1, W2, z_list) - dense_chain(W1, W2, z_list)), 1e-10)

    def test_cyclic_invariance(self):
        W1, W2 = random_hermitian(7, 5), random_hermitian(7, 6)
        z_list = [0.1 + 0.2j, -0.3 + 0.4j, 0.2 - 0.1j]
        a = multi_resolvent_trace(W1, W2, z_list)
        b = multi_resolvent_trace(W1, W2, z_list[1:] + z_list[:1])
        self.assertLess(abs(a - b), 1e-10 * abs(a))

    def test_prefix_traces(self):
        W1, W2 = random_hermitian(6, 7), random_hermitian(6, 8)
        z_list = [0.3j, -0.2 + 0.1j, 0.5 + 0.4j]
        traces = ResolventPair(W1, W2).chain_traces(z_list)
        for m in range(1, 4):
            self.assertLess(abs(traces[m - 1] - dense_chain(W1, W2, z_list[:m])), 1e-10)

    def test_empty_list(self):
        with self.assertRaises(InputError):
            multi_resolvent_trace(np.eye(2), np.eye(2), [])


class SemicircleTest(unittest.TestCase):

    def test_density(self):
        self.assertAlmostEqual(semicircle_density(0.0), 1 / np.pi)
        self.assertEqual(semicircle_density(2.0), 0.0)
        self.assertEqual(semicircle_density(-2.0), 0.0)
        self.assertAlmostEqual(integrate.quad(semicircle_density, -2, 2)[0], 1.0, places=9)

    def test_m_at_i(self):
        self.assertAlmostEqual(semicircle_m(1j), 1j * (np.sqrt(5) - 1) / 2, places=14)

    def test_reflection(self):
        for z in (0.3 + 0.2j, -1.5 + 0.01j, 3 + 2j):
            self.assertAlmostEqual(semicircle_m(z.conjugate()), semicircle_m(z).conjugate(), places=14)
            self.assertGreater(semicircle_m(z).imag, 0.0)

    def test_m_prime(self):
        z, h = 0.7 + 0.2j, 1e-6
        fd = (semicircle_m(z + h) - semicircle_m(z - h)) / (2 * h)
        self.assertLess(abs(semicircle_m_prime(z) - fd), 1e-7)

    def test_gue_agreement(self):
        H = sample_gue(2000, RngStream(3))
        self.assertLess(abs(stieltjes_m(H, 0.5 + 0.1j) - semicircle_m(0.5 + 0.1j)), 0.05)


class DomainTest(unittest.TestCase):

    def test_n_epsilon(self):
        self.assertEqual(SpectralDomainSpec(0.5, 100).n_epsilon, 96)
        self.assertEqual(SpectralDomainSpec(0.25, 100).n_epsilon, 192)

    def test_grid(self):
        domain = SpectralDomainSpec(0.5, 400)
        points = domain.grid()
        self.assertEqual(points.size, 50)
        self.assertTrue(all(domain.contains(z) for z in points))
        self.assertTrue(np.any(domain.bulk_mask(points)))

    def test_epsilon_range(self):
        with self.assertRaises(InputError):
            SpectralDomainSpec(0.9, 100)
        with self.assertRaises(InputError):
            SpectralDomainSpec(0.0, 100)


class ClassCheckerTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        rng = RngStream(1).generator()
        cls.W1 = sample_gue(200, rng)
        cls.W2 = sample_gue(200, rng)

    def test_gue_pair_bulk_conditions(self):
        report = check_class_membership(self.W1, self.W2, 0.5)
        for name in ('C0', 'C1.1', 'C1.2', 'C2'):
            self.assertTrue(report.conditions[name].passed, name)
        grid = set(SpectralDomainSpec(0.5, 200).grid())
        for record in report.conditions.values():
            for z in record.witness:
                self.assertIn(z, grid)

    def test_identity_w2_fails_c2(self):
        report = check_class_membership(self.W1, np.eye(200), 0.5)
        self.assertFalse(report.conditions['C2'].passed)
        self.assertFalse(report.passed)
        self.assertIn('C2', report.failed())

    def test_scaled_w1_fails_c0(self):
        report = check_class_membership(100.0 * self.W1.entries, self.W2, 0.5)
        self.assertFalse(report.conditions['C0'].passed)

    def test_report_json(self):
        report = check_class_membership(self.W1, self.W2, 0.5, m_values=[2, 3])
        data = json.loads(json.dumps(report.to_dict()))
        self.assertEqual(data['grid']['n_points'], 50)
        self.assertEqual(set(data['conditions']), {'C0', 'C1.1', 'C1.2', 'C2', 'C3.1', 'C3.2'})
        self.assertEqual(data['pass'], all(c['pass'] for c in data['conditions'].values()))
        self.assertIn('contour', data['diagnostics'])

    def test_contour_diagnostic(self):
        pair = ResolventPair(self.W1, self.W2)
        ratios = contour_consistency(pair, SpectralDomainSpec(0.5, 200).grid(), 0.5)
        self.assertEqual(sorted(ratios), [1, 2, 3])
        self.assertTrue(all(np.isfinite(r) for r in ratios.values()))


if __name__ == '__main__':
    unittest.main()
