# -*- coding: utf-8 -*-
"""
Bulk kernel of the weakly non-Hermitian ensembles

    K_tau(z, w) = (2 pi)^(-3/2) tau^(-1/2) exp(-((Im z)^2 + (Im w)^2) / (4 tau))
                  * int_{-1}^{1} exp(-2 tau l^2 - i l (z - conj(w))) dl

and the determinantal correlation functions rho_tau^(k) = det[K_tau(z_j, z_l)].

The integral is a Gauss-Legendre sum, so K_tau(z_j, z_l) = sum_k A_jk conj(A_lk)
with A_jk = sqrt(c_k) exp(-y_j^2/(4 tau) + l_k y_j - i l_k x_j). Kernel
matrices are assembled as A A^* and are positive semi-definite by
construction. Each exponent is summed before exponentiation so that the
Gaussian prefactor never underflows on its own.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pandas as pd
from scipy import special

from .errors import InputError, NumericalError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 64
MIN_ORDER = 16
MAX_K = 8
# |z - conj(w)| above which the quadrature order is doubled
OSCILLATION_LIMIT = 30.0


@dataclass(frozen=True)
class KernelParams:
    tau: float
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise InputError('tau must be finite and positive, got %r' % (self.tau,))
        if int(self.order) < MIN_ORDER:
            raise InputError('quadrature order must be at least %d' % MIN_ORDER)

    def validity_window(self):
        """|Im z| up to which kernel values are accurate to 1e-12."""
        return 6.0 * math.sqrt(self.tau) + 6.0


@lru_cache(maxsize=16)
def _nodes(order):
    return np.polynomial.legendre.leggauss(order)


def _features(params, points, order):
    """Matrix A with K = A A^*, one row per point."""
    points = np.asarray(points, dtype=np.complex128).ravel()
    lam, weights = _nodes(order)
    tau = params.tau
    # (2 pi)^(-3/2) tau^(-1/2) w_k exp(-2 tau l_k^2), split evenly between both factors
    log_c = -1.5 * math.log(2.0 * math.pi) - 0.5 * math.log(tau) + np.log(weights) - 2.0 * tau * lam ** 2
    x = points.real[:, None]
    y = points.imag[:, None]
    exponent = 0.5 * log_c[None, :] - y * y / (4.0 * tau) + lam[None, :] * y - 1j * lam[None, :] * x
    return np.exp(exponent)


def _order_for(params, spread):
    return 2 * params.order if spread > OSCILLATION_LIMIT else params.order


def kernel_K(params, z, w):
    """K_tau(z, w)."""
    z, w = complex(z), complex(w)
    if not (np.isfinite(z) and np.isfinite(w)):
        raise InputError('kernel arguments must be finite')
    order = _order_for(params, abs(z - w.conjugate()))
    A = _features(params, [z, w], order)
    return complex(np.sum(A[0] * A[1].conj()))


def kernel_matrix(params, points):
    """[K_tau(z_j, z_l)] as a Hermitian positive semi-definite array."""
    points = np.asarray(points, dtype=np.complex128).ravel()
    spread = np.max(np.abs(points[:, None] - points.conj()[None, :])) if points.size else 0.0
    A = _features(params, points, _order_for(params, spread))
    K = A @ A.conj().T
    return 0.5 * (K + K.conj().T)


def rho_k(params, z_list):
    """rho_tau^(k)(z_1, ..., z_k) = det[K_tau(z_j, z_l)], k <= MAX_K."""
    points = np.asarray(z_list, dtype=np.complex128).ravel()
    k = points.size
    if not 1 <= k <= MAX_K:
        raise InputError('rho_k needs 1 to %d points, got %d' % (MAX_K, k))
    if np.unique(points).size < k:
        logger.warning('repeated points in rho_k: the correlation function vanishes')
    det = complex(np.linalg.det(kernel_matrix(params, points)))
    if abs(det.imag) > 1e-10 * max(1.0, abs(det.real)):
        raise NumericalError('kernel determinant is not real', {'det': (det.real, det.imag)})
    return det.real


def marginal_density(params, x, y_window=None):
    """Integral of rho_tau^(1)(x + iy) over y.

    Over the whole line the Gaussian y-integral cancels exp(-2 tau l^2) and the
    marginal is 1/pi for every tau and x. Over a finite window [y0, y1] it is

        (1/(2 pi)) int_{-1}^{1} (erf((y1 - 2 tau l)/sqrt(2 tau)) - erf((y0 - 2 tau l)/sqrt(2 tau))) / 2 dl
    """
    if not math.isfinite(float(x)):
        raise InputError('x must be finite')
    if y_window is None:
        return 1.0 / math.pi
    y0, y1 = (float(v) for v in y_window)
    if not y1 > y0:
        raise InputError('empty y window')
    lam, weights = _nodes(params.order)
    s = math.sqrt(2.0 * params.tau)
    shift = 2.0 * params.tau * lam
    inner = 0.5 * (special.erf((y1 - shift) / s) - special.erf((y0 - shift) / s))
    return float(np.dot(weights, inner) / (2.0 * math.pi))


@dataclass
class KernelGrid:
    params: KernelParams
    points: np.ndarray
    values: np.ndarray

    def to_dict(self):
        return {'tau': self.params.tau,
                'points': [{'re': float(z.real), 'im': float(z.imag)} for z in self.points],
                'values': [[{'re': float(v.real), 'im': float(v.imag)} for v in row] for row in self.values]}


def kernel_grid(params, points):
    points = np.asarray(points, dtype=np.complex128).ravel()
    return KernelGrid(params, points, kernel_matrix(params, points))


def rho1_values(params, points):
    """K_tau(z, z) at every point."""
    points = np.asarray(points, dtype=np.complex128)
    spread = 2.0 * np.max(np.abs(points.imag)) if points.size else 0.0
    A = _features(params, points.ravel(), _order_for(params, spread))
    return np.sum(np.abs(A) ** 2, axis=1).reshape(points.shape)


def rho1_grid(params, xs, ys):
    """Plot table with columns x, y, rho1 on the tensor grid xs x ys."""
    X, Y = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), indexing='ij')
    values = rho1_values(params, X + 1j * Y)
    return pd.DataFrame({'x': X.ravel(), 'y': Y.ravel(), 'rho1': values.ravel()})


def _window_rule(window, nodes):
    x0, x1, y0, y1 = (float(v) for v in window)
    if not (x1 > x0 and y1 > y0):
        raise InputError('empty integration window')
    t, w = _nodes(nodes)
    xs = 0.5 * (x1 - x0) * t + 0.5 * (x1 + x0)
    ys = 0.5 * (y1 - y0) * t + 0.5 * (y1 + y0)
    X, Y = np.meshgrid(xs, ys, indexing='ij')
    W = np.outer(w, w) * 0.25 * (x1 - x0) * (y1 - y0)
    return (X + 1j * Y).ravel(), W.ravel()


def predicted_linear_statistic(f, params, window, k=1, nodes=32):
    """Integral of f against rho_tau^(k) over window = (x0, x1, y0, y1).

    For k=1, f maps complex arrays to values. For k=2 the test function is
    taken in product form f(a, b) = g(a) g(b) and ``f`` is g; the integral
    is (int g rho^(1))^2 - int int g(a) g(b) |K_tau(a, b)|^2.
    """
    if k not in (1, 2):
        raise InputError('only k=1 and k=2 statistics have a quadrature prediction')
    points, weights = _window_rule(window, nodes)
    g = np.real(np.asarray(f(points))) * weights
    K = kernel_matrix(params, points)
    first = float(np.dot(g, np.real(np.diagonal(K))))
    if k == 1:
        return first
    return first ** 2 - float(g @ (np.abs(K) ** 2) @ g)
