# -*- coding: utf-8 -*-
"""
One-dimensional reverse heat flow on a uniform grid of [-L, L].

The Ornstein-Uhlenbeck generator is taken in Fokker-Planck form

    L f = f''/2 + (x f)'

whose stationary density is exp(-x^2)/sqrt(pi); L exp(-x^2) H_k = -k exp(-x^2) H_k
for the Hermite polynomials H_k. T_n = sum_{m<n} (-t L)^m / m! undoes e^{tL}
up to O(t^n), so chi2(e^{tL} T_n f, f) = O(t^(2n)).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import integrate, special

from .errors import DomainError, InputError, NegativeDensityError

logger = logging.getLogger(__name__)

DEFAULT_L = 8.0
DEFAULT_H = 1.0 / 128.0
COARSE_H = 1.0 / 16.0
MASS_TOLERANCE = 1e-8
DENSITY_FLOOR = 1e-12


@dataclass
class GridDensity:
    L: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        if not (self.L > 0.0 and self.h > 0.0):
            raise InputError('grid half-width and spacing must be positive')
        n = int(round(2.0 * self.L / self.h)) + 1
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (n,):
            raise InputError('expected %d grid values, got shape %s' % (n, self.values.shape))

    @classmethod
    def from_function(cls, fn, L=DEFAULT_L, h=DEFAULT_H):
        n = int(round(2.0 * L / h)) + 1
        return cls(L, h, fn(np.linspace(-L, L, n)))

    @property
    def x(self):
        return np.linspace(-self.L, self.L, self.values.size)

    def integral(self):
        return float(integrate.trapezoid(self.values, dx=self.h))

    def is_nonnegative(self):
        return bool(np.all(self.values >= 0.0))

    def same_grid(self, other):
        return math.isclose(self.L, other.L) and math.isclose(self.h, other.h) \
            and self.values.size == other.values.size


def ou_generator_apply(f):
    """L f by second-order central differences, zero outside the grid."""
    if f.h > COARSE_H:
        logger.warning('grid spacing h=%g is too coarse for second differences', f.h)
    h = f.h
    padded = np.pad(f.values, 1)
    flux = np.pad(f.x * f.values, 1)
    second = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / (h * h)
    drift = (flux[2:] - flux[:-2]) / (2.0 * h)
    return GridDensity(f.L, h, 0.5 * second + drift)


def reverse_approx_Tn(f, t, n):
    """T_n f = sum_{m=0}^{n-1} (-t)^m L^m f / m!, accumulated Horner-style."""
    if n < 1:
        raise InputError('n must be at least 1')
    if t < 0.0:
        raise InputError('t must be non-negative')
    if n > 1 and 0.0 < t < 10.0 * f.h ** 2:
        logger.warning('t=%g is below 10 h^2: finite-difference noise dominates T_n', t)
    acc = f
    for m in range(n - 1, 0, -1):
        step = ou_generator_apply(acc)
        acc = GridDensity(f.L, f.h, f.values - (t / m) * step.values)
    return acc


def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = h / 2.0
    return w


def semigroup_apply(f, t, normalize=True):
    """e^{tL} f by quadrature against the Mehler kernel, renormalized to integral 1.

    From y the process moves to a normal law with mean e^{-t} y and variance
    (1 - e^{-2t})/2.
    """
    if not t > 0.0:
        raise InputError('t must be positive')
    x = f.x
    weights = _trapezoid_weights(x.size, f.h)
    mean = math.exp(-t) * x
    var = 0.5 * (1.0 - math.exp(-2.0 * t))
    sd = math.sqrt(var)
    mass = weights * f.values
    total = mass.sum()
    inside = special.ndtr((f.L - mean) / sd) - special.ndtr((-f.L - mean) / sd)
    lost = float(np.dot(np.abs(mass), 1.0 - inside) / np.abs(mass).sum())
    if lost > MASS_TOLERANCE:
        raise DomainError('%.3g of the mass leaves [-%g, %g]; enlarge the grid' % (lost, f.L, f.L))
    kernel = np.exp(-(x[:, None] - mean[None, :]) ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    out = kernel @ mass
    raw = float(np.dot(weights, out))
    logger.debug('semigroup mass defect %.3g', raw - total)
    return GridDensity(f.L, f.h, out / raw if normalize else out)


def chi2_divergence(g, f, strict=False, floor=DENSITY_FLOOR):
    """int (g - f)^2 / g exp(-x^2) dx with g floored at ``floor``.

    If g <= 0 where f carries mass a NegativeDensityError is raised when
    ``strict``; otherwise it is logged and the floor is used.
    """
    if not g.same_grid(f):
        raise InputError('densities live on different grids')
    support = f.values > floor * np.max(np.abs(f.values))
    bad = support & (g.values <= 0.0)
    if np.any(bad):
        points = g.x[bad]
        if strict:
            raise NegativeDensityError('denominator is not positive at %d grid points' % points.size, points.tolist())
        logger.warning('denominator is not positive at %d grid points; using floor %g', points.size, floor)
    denom = np.maximum(g.values, floor)
    integrand = (g.values - f.values) ** 2 / denom * np.exp(-g.x ** 2)
    return float(integrate.trapezoid(integrand, dx=g.h))


def perturbed_gaussian(L=DEFAULT_L, h=DEFAULT_H, amplitude=0.02, degree=1):
    """exp(-x^2) (1 + a H_degree(x)) / sqrt(pi); integral 1 for degree >= 1."""
    if degree < 1:
        raise InputError('degree must be at least 1')

    def density(x):
        return np.exp(-x * x) * (1.0 + amplitude * special.eval_hermite(degree, x)) / math.sqrt(math.pi)

    f = GridDensity.from_function(density, L, h)
    if not f.is_nonnegative():
        logger.warning('perturbed gaussian with a=%g, degree=%d is negative on the grid', amplitude, degree)
    return f


def scaling_experiment(f, ts=(0.2, 0.1, 0.05), ns=(1, 2)):
    """chi2(e^{tL} T_n f, f) over the (t, n) table and the log-log slope per n.

    :returns: (DataFrame with columns t, n, chi2; dict n -> fitted slope)
    """
    rows = []
    for n in ns:
        for t in ts:
            g = semigroup_apply(reverse_approx_Tn(f, t, n), t)
            rows.append({'t': float(t), 'n': int(n), 'chi2': chi2_divergence(g, f)})
    table = pd.DataFrame(rows, columns=['t', 'n', 'chi2'])
    slopes = {}
    for n, part in table.groupby('n'):
        if len(part) < 2 or np.any(part['chi2'] <= 0.0):
            slopes[int(n)] = float('nan')
            continue
        slopes[int(n)] = float(np.polyfit(np.log(part['t']), np.log(part['chi2']), 1)[0])
        logger.info('n=%d: chi2 ~ t^%.3f', n, slopes[int(n)])
    return table, slopes
