# -*- coding: utf-8 -*-
"""
Rescaled bulk spectra, binned Monte Carlo estimates of the one- and two-point
correlation functions, linear eigenvalue statistics and their comparison
against the determinantal prediction.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import DegenerateComparisonError, InputError, UnsupportedError
from .linalg import Spectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Window:
    """Rectangle [x0, x1] x [y0, y1] of the rescaled plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise InputError('empty window [%g, %g] x [%g, %g]' % (self.x0, self.x1, self.y0, self.y1))

    @property
    def area(self):
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, z):
        z = np.asarray(z)
        return (z.real >= self.x0) & (z.real <= self.x1) & (z.imag >= self.y0) & (z.imag <= self.y1)

    def as_tuple(self):
        return (self.x0, self.x1, self.y0, self.y1)


def default_window(tau):
    """|Re zeta| <= 3, |Im zeta| <= 3 sqrt(tau) + 1."""
    half = 3.0 * math.sqrt(tau) + 1.0
    return Window(-3.0, 3.0, -half, half)


DISPLACEMENT_WINDOW = Window(-3.0, 3.0, -3.0, 3.0)
# expected points per bin of the derived binning
DEFAULT_BIN_COUNT = 200
MAX_X_BINS = 24
MAX_Y_BINS = 32


@dataclass
class RescaledSpectrum:
    zeta: np.ndarray
    scale: float
    shift: complex
    E: float
    trial: int = 0
    source: np.ndarray = None


def rescale_bulk(eigs, E, scale, shift=0.0, trial=0):
    """zeta_i = scale (z_i - E - shift).

    Bulk convention: scale = N pi rho_sc(E), shift = 0. Gauss-divisible
    convention: scale = N eta_{E,t} / t, shift = i sqrt(tau_N) <W2>.
    """
    if not scale > 0.0:
        raise InputError('scale must be positive')
    values = eigs.values if isinstance(eigs, Spectrum) else np.asarray(eigs, dtype=np.complex128).ravel()
    zeta = scale * (values - float(E) - complex(shift))
    return RescaledSpectrum(zeta, float(scale), complex(shift), float(E), int(trial), values)


@dataclass
class BinnedDensity:
    window: Window
    nx: int
    ny: int
    density: np.ndarray
    trials: int
    total_points: int
    kind: str = 'rho1'
    metadata: dict = field(default_factory=dict)

    @property
    def dx(self):
        return (self.window.x1 - self.window.x0) / self.nx

    @property
    def dy(self):
        return (self.window.y1 - self.window.y0) / self.ny

    @property
    def bin_area(self):
        return self.dx * self.dy

    def centers(self):
        xs = self.window.x0 + self.dx * (np.arange(self.nx) + 0.5)
        ys = self.window.y0 + self.dy * (np.arange(self.ny) + 0.5)
        X, Y = np.meshgrid(xs, ys, indexing='ij')
        return X + 1j * Y

    def to_frame(self):
        c = self.centers()
        return pd.DataFrame({'x': c.real.ravel(), 'y': c.imag.ravel(), 'density': self.density.ravel()})

    def to_dict(self):
        return {'kind': self.kind, 'window': list(self.window.as_tuple()), 'nx': self.nx, 'ny': self.ny,
                'trials': self.trials, 'total_points': self.total_points, **self.metadata}

    @classmethod
    def from_frame(cls, frame, trials=1, kind='rho1', window=None):
        """Rebuild a density from its x, y, density table (bin centers on a regular grid).

        Without ``window`` the bin edges are inferred from the centers, which
        needs at least 2 x 2 bins.
        """
        missing = {'x', 'y', 'density'} - set(frame.columns)
        if missing:
            raise InputError('density table lacks columns %s' % ', '.join(sorted(missing)))
        xs = np.unique(frame['x'].to_numpy(dtype=float))
        ys = np.unique(frame['y'].to_numpy(dtype=float))
        if len(frame) != xs.size * ys.size:
            raise InputError('density table is not a regular grid')
        if window is None:
            if xs.size < 2 or ys.size < 2:
                raise InputError('a window is needed for a density table with fewer than 2 x 2 bins')
            dx, dy = xs[1] - xs[0], ys[1] - ys[0]
            window = Window(xs[0] - dx / 2, xs[-1] + dx / 2, ys[0] - dy / 2, ys[-1] + dy / 2)
        else:
            dx, dy = (window.x1 - window.x0) / xs.size, (window.y1 - window.y0) / ys.size
        ordered = frame.sort_values(['x', 'y'])
        density = ordered['density'].to_numpy(dtype=float).reshape(xs.size, ys.size)
        total = int(round(density.sum() * dx * dy * trials))
        return cls(window, xs.size, ys.size, density, int(trials), total, kind)


def _zeta(sample):
    return sample.zeta if isinstance(sample, RescaledSpectrum) else np.asarray(sample, dtype=np.complex128)


def default_bins(window, trials, per_bin=DEFAULT_BIN_COUNT):
    """(nx, ny) with about ``per_bin`` expected points per bin.

    A rescaled bulk spectrum has 1/pi points per unit of Re zeta, and rho1 does
    not depend on Re zeta, so the bins go to the y axis first.
    """
    expected = trials * (window.x1 - window.x0) / math.pi
    total = max(2, int(expected // per_bin))
    ny = min(total, MAX_Y_BINS)
    nx = max(1, min(MAX_X_BINS, total // ny))
    return nx, ny


def bin_rho1(sample, window, nx, ny):
    """Counts of one trial's rescaled points on the nx x ny grid of ``window``."""
    zeta = _zeta(sample)
    return np.histogram2d(zeta.real, zeta.imag, bins=(nx, ny),
                          range=((window.x0, window.x1), (window.y0, window.y1)))[0]


def rho1_from_counts(counts, window, trials):
    """Intensity count / (trials * bin_area) of summed per-trial counts."""
    counts = np.asarray(counts, dtype=float)
    if not trials >= 1:
        raise InputError('no samples to estimate from')
    nx, ny = counts.shape
    estimate = BinnedDensity(window, nx, ny, None, int(trials), int(round(counts.sum())))
    estimate.density = counts / (trials * estimate.bin_area)
    return estimate


def estimate_rho1(samples, window, nx, ny):
    """Histogram intensity count / (trials * bin_area) of the rescaled points."""
    if nx < 1 or ny < 1:
        raise InputError('bin counts must be positive')
    counts = np.zeros((nx, ny))
    trials = 0
    for sample in samples:
        counts += bin_rho1(sample, window, nx, ny)
        trials += 1
    return rho1_from_counts(counts, window, trials)


def _displacement_grid(displacement_bins, displacement_window):
    if np.ndim(displacement_bins) == 0:
        displacement_bins = (int(displacement_bins), int(displacement_bins))
    nx, ny = (int(b) for b in displacement_bins)
    return nx, ny, displacement_window or DISPLACEMENT_WINDOW


def bin_rho2(sample, window, displacement_bins=(24, 24), displacement_window=None):
    """Counts of d = zeta_j - zeta_i over ordered pairs i != j of one trial, zeta_i in ``window``."""
    nx, ny, d_window = _displacement_grid(displacement_bins, displacement_window)
    zeta = _zeta(sample)
    anchors = np.flatnonzero(window.contains(zeta))
    if anchors.size == 0:
        return np.zeros((nx, ny))
    diff = zeta[None, :] - zeta[anchors][:, None]
    keep = np.ones(diff.shape, dtype=bool)
    keep[np.arange(anchors.size), anchors] = False
    d = diff[keep]
    return np.histogram2d(d.real, d.imag, bins=(nx, ny),
                          range=((d_window.x0, d_window.x1), (d_window.y0, d_window.y1)))[0]


def rho2_from_counts(counts, window, trials, displacement_window=None):
    counts = np.asarray(counts, dtype=float)
    if not trials >= 1:
        raise InputError('no samples to estimate from')
    nx, ny = counts.shape
    d_window = displacement_window or DISPLACEMENT_WINDOW
    estimate = BinnedDensity(d_window, nx, ny, None, int(trials), int(round(counts.sum())), kind='rho2')
    estimate.density = counts / (trials * window.area * estimate.bin_area)
    estimate.metadata['anchor_window'] = list(window.as_tuple())
    return estimate


def estimate_rho2(samples, window, displacement_bins=(24, 24), displacement_window=None):
    """Pair-difference estimate of int rho^(2)(z, z + d) dz / |window| as a function of d.

    Ordered pairs (zeta_i, zeta_j), i != j, with zeta_i in ``window``; d = zeta_j - zeta_i.
    """
    nx, ny, d_window = _displacement_grid(displacement_bins, displacement_window)
    counts = np.zeros((nx, ny))
    trials = 0
    for sample in samples:
        counts += bin_rho2(sample, window, (nx, ny), d_window)
        trials += 1
    return rho2_from_counts(counts, window, trials, d_window)


def y_marginal(estimate):
    """Integral of the estimate over y, per x bin."""
    return estimate.density.sum(axis=1) * estimate.dy


def repulsion_ratio(rho2, near=0.25, far=1.5):
    """Mean of rho2 near d = 0 over its mean for |d| >= far."""
    centers = np.abs(rho2.centers())
    close = centers <= near
    if not np.any(close):
        close = centers == centers.min()
    plateau = centers >= far
    if not np.any(plateau) or rho2.density[plateau].mean() == 0.0:
        raise DegenerateComparisonError('no plateau bins with positive density')
    return float(rho2.density[close].mean() / rho2.density[plateau].mean())


@dataclass(frozen=True)
class GaussianBump:
    """amplitude exp(-|z - center|^2 / (2 width^2)), negligible beyond 6 widths."""

    center: complex = 0j
    width: float = 0.5
    amplitude: float = 1.0

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return self.amplitude * np.exp(-np.abs(z - self.center) ** 2 / (2.0 * self.width ** 2))

    def support(self):
        c, r = complex(self.center), 6.0 * self.width
        return Window(c.real - r, c.real + r, c.imag - r, c.imag + r)


def linear_statistic(f, eigs, E, scale, k=1, shift=0.0, window=None):
    """Sum of f over distinct k-tuples of rescaled eigenvalues (k = 1 or 2).

    f is vectorized: f(zeta) for k=1 and f(zeta_a, zeta_b) for k=2. Only
    points inside ``window`` (the support of f) are used when it is given.
    """
    if k > 2:
        raise UnsupportedError('empirical statistics are limited to k <= 2')
    if k < 1:
        raise InputError('k must be 1 or 2')
    zeta = rescale_bulk(eigs, E, scale, shift).zeta
    if window is not None:
        zeta = zeta[window.contains(zeta)]
    if k == 1:
        return float(np.sum(np.real(f(zeta))))
    values = np.real(f(zeta[:, None], zeta[None, :]))
    return float(np.sum(values) - np.trace(values))


@dataclass
class ComparisonReport:
    rel_L1: float
    rel_L2: float
    sup_err: float
    chi2_stat: float
    n_bins_used: int

    def to_dict(self):
        return {'rel_L1': self.rel_L1, 'rel_L2': self.rel_L2, 'sup_err': self.sup_err,
                'chi2_stat': self.chi2_stat, 'n_bins_used': self.n_bins_used}


def _evaluate(theory, points):
    values = np.asarray(theory(points))
    if values.shape != points.shape:
        values = np.vectorize(lambda z: float(theory(z)))(points)
    return np.real(values).astype(float)


def compare(estimate, theory, floor=None):
    """Relative L1, L2 and sup distances plus a Poisson chi2 over bins where theory >= floor.

    The default floor is 1e-3 times the largest theory value.
    """
    if estimate.total_points == 0:
        raise DegenerateComparisonError('the estimate holds no points')
    th = _evaluate(theory, estimate.centers())
    if floor is None:
        floor = 1e-3 * th.max()
    used = th >= floor
    if not np.any(used) or th.max() <= 0.0:
        raise DegenerateComparisonError('every bin lies below the theory floor %g' % floor)
    e, t = estimate.density[used], th[used]
    diff = e - t
    variance = t / (estimate.trials * estimate.bin_area)
    report = ComparisonReport(float(np.sum(np.abs(diff)) / np.sum(t)),
                              float(np.sqrt(np.sum(diff ** 2) / np.sum(t ** 2))),
                              float(np.max(np.abs(diff)) / np.max(t)),
                              float(np.sum(diff ** 2 / variance)),
                              int(used.sum()))
    logger.info('compare: rel_L1=%.4g over %d bins', report.rel_L1, report.n_bins_used)
    return report
