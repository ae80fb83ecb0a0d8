# -*- coding: utf-8 -*-
"""
Seedable samplers for the ensembles used by WNHtool: GUE, Wigner matrices with
a smooth atom distribution, the elliptic Ginibre ensemble, the weakly
non-Hermitian elliptic matrix A = W1 + i sqrt(tau_N) W2 and its Gauss-divisible
version A_t = A + sqrt(t) B.

Normalization: diagonal entries have variance 1/N, off-diagonal entries have
independent real and imaginary parts of variance 1/(2N).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import InputError
from .linalg import ComplexMatrix, HermitianMatrix, as_matrix

logger = logging.getLogger(__name__)

GAUSSIAN = 'gaussian'
SMOOTHED = 'smoothed'

# Half-width of the inverse-CDF grid is chosen so that the tail weight
# exp(-TAIL_EXPONENT) is negligible.
TAIL_EXPONENT = 60.0
CDF_POINTS = 16385

MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class AtomDistribution:
    """Atom law d nu(x) = exp(-V(x) - x^2) dx / Z with V(x) = sum_j a_j x^(2j), j = 1..4.

    ``delta`` is the margin in V(x) >= -(1 - delta) x^2.
    """

    kind: str = GAUSSIAN
    coefficients: tuple = (0.0, 0.0, 0.0, 0.0)
    delta: float = 0.5

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if len(coeffs) > 4:
            raise InputError('at most four coefficients a_1..a_4 are supported')
        coeffs = coeffs + (0.0,) * (4 - len(coeffs))
        object.__setattr__(self, 'coefficients', coeffs)
        if self.kind not in (GAUSSIAN, SMOOTHED):
            raise InputError('unknown atom kind %r' % (self.kind,))
        if self.kind == GAUSSIAN and any(coeffs):
            raise InputError('a gaussian atom has V = 0')
        if not 0.0 < self.delta <= 1.0:
            raise InputError('delta must lie in (0, 1]')
        validate_potential(coeffs, self.delta)

    def potential(self, x):
        x2 = np.asarray(x, dtype=float) ** 2
        a1, a2, a3, a4 = self.coefficients
        return x2 * (a1 + x2 * (a2 + x2 * (a3 + x2 * a4)))

    @property
    def tail_width(self):
        """Half-width L of a grid outside which the unnormalized density is below exp(-TAIL_EXPONENT)."""
        return float(np.sqrt(TAIL_EXPONENT / min(1.0, 1.0 + self.coefficients[0])))


def validate_potential(coefficients, delta):
    a1 = coefficients[0]
    higher = coefficients[1:]
    if a1 < -(1.0 - delta):
        raise InputError('V(x) >= -(1-delta) x^2 fails near 0: a_1=%g < -(1-delta)' % a1)
    leading = next((a for a in reversed(higher) if a != 0.0), 0.0)
    if leading < 0.0:
        raise InputError('density exp(-V(x)-x^2) is not normalizable: leading coefficient %g < 0' % leading)
    # intermediate negative coefficients can still break the bound
    x2 = np.linspace(0.0, 50.0, 2001) ** 2
    a2, a3, a4 = higher
    margin = (a1 + 1.0 - delta) + x2 * (a2 + x2 * (a3 + x2 * a4))
    if np.any(margin < 0.0):
        raise InputError('V(x) >= -(1-delta) x^2 fails for some x')


GAUSSIAN_ATOM = AtomDistribution()


@lru_cache(maxsize=32)
def _atom_tables(atom):
    """Normalization, moments and inverse-CDF tables of an atom, computed once."""
    def unnormalized(x):
        return np.exp(-atom.potential(x) - x * x)

    Z = integrate.quad(unnormalized, -np.inf, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    if not np.isfinite(Z) or Z <= 0.0:
        raise InputError('atom density is not normalizable')
    mean = integrate.quad(lambda x: x * unnormalized(x), -np.inf, np.inf, epsabs=1e-15, limit=200)[0] / Z
    var = integrate.quad(lambda x: (x - mean) ** 2 * unnormalized(x), -np.inf, np.inf,
                         epsabs=0.0, epsrel=1e-13, limit=200)[0] / Z
    L = atom.tail_width
    grid = np.linspace(-L, L, CDF_POINTS)
    cdf = integrate.cumulative_trapezoid(unnormalized(grid), grid, initial=0.0)
    cdf /= cdf[-1]
    return Z, mean, var, grid, cdf


def atom_density(atom, x):
    """Normalized density exp(-V(x) - x^2) / Z at x (scalar or array)."""
    Z = _atom_tables(atom)[0]
    x = np.asarray(x, dtype=float)
    value = np.exp(-atom.potential(x) - x * x) / Z
    return float(value) if value.ndim == 0 else value


def atom_moments(atom):
    """(mean, variance) of the raw atom law."""
    _, mean, var, _, _ = _atom_tables(atom)
    return mean, var


def sample_atom(atom, rng, size, standardize=True):
    """Draws of the atom, by default standardized to mean 0 and variance 1."""
    if atom.kind == GAUSSIAN and standardize:
        return rng.standard_normal(size)
    _, mean, var, grid, cdf = _atom_tables(atom)
    raw = np.interp(rng.random(size), cdf, grid)
    if not standardize:
        return raw
    return (raw - mean) / np.sqrt(var)


@dataclass(frozen=True)
class RngStream:
    """Counter-based substream (seed, index) of the master seed.

    Equal pairs reproduce the same draws bit for bit; distinct pairs are
    independent Philox streams.
    """

    seed: int
    index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < MAX_SEED:
            raise InputError('seed must be a 64-bit unsigned integer')
        if int(self.index) < 0:
            raise InputError('stream index must be non-negative')

    def generator(self):
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.index),))
        return np.random.Generator(np.random.Philox(ss))


def as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(int(rng)).generator()


@dataclass(frozen=True)
class EnsembleSpec:
    """Recipe for one draw of A_t = W1 + i sqrt(tau_N) W2 + sqrt(t) B."""

    N: int
    tau_N: float = 0.0
    t: float = 0.0
    atom: AtomDistribution = field(default=GAUSSIAN_ATOM)
    seed: int = 0

    def __post_init__(self):
        if int(self.N) < 2:
            raise InputError('N must be at least 2')
        check_tau(self.tau_N)
        if not self.t >= 0.0:
            raise InputError('t must be non-negative')
        RngStream(self.seed)

    def stream(self, trial=0):
        return RngStream(self.seed, trial)

    def to_dict(self):
        return {'N': int(self.N), 'tau_N': float(self.tau_N), 't': float(self.t),
                'atom': {'kind': self.atom.kind, 'coefficients': list(self.atom.coefficients),
                         'delta': self.atom.delta},
                'seed': int(self.seed)}


def check_tau(tau_N):
    if not 0.0 <= tau_N <= 1.0:
        raise InputError('tau_N must lie in [0, 1], got %r' % (tau_N,))


def _assemble_hermitian(N, diagonal, re, im):
    H = np.zeros((N, N), dtype=np.complex128)
    iu = np.triu_indices(N, k=1)
    H[iu] = re + 1j * im
    H = H + H.conj().T
    H[np.diag_indices(N)] = diagonal
    return HermitianMatrix(H, symmetrize=False)


def sample_gue(N, rng):
    """GUE draw: real N(0, 1/N) diagonal, N(0, 1/(2N)) real and imaginary parts off it."""
    if N < 2:
        raise InputError('N must be at least 2')
    rng = as_generator(rng)
    n_off = N * (N - 1) // 2
    diagonal = rng.standard_normal(N) / np.sqrt(N)
    off = rng.standard_normal((2, n_off)) / np.sqrt(2 * N)
    return _assemble_hermitian(N, diagonal, off[0], off[1])


def sample_wigner(N, atom, rng):
    """Wigner matrix with atom distribution nu: diagonal nu/sqrt(N), off-diagonal parts nu/sqrt(2N)."""
    if N < 2:
        raise InputError('N must be at least 2')
    rng = as_generator(rng)
    n_off = N * (N - 1) // 2
    diagonal = sample_atom(atom, rng, N) / np.sqrt(N)
    off = sample_atom(atom, rng, (2, n_off)) / np.sqrt(2 * N)
    return _assemble_hermitian(N, diagonal, off[0], off[1])


def sample_elliptic(N, tau_N, rng):
    """Elliptic Ginibre matrix B = V1 + i sqrt(tau_N) V2 with independent GUE V1, V2."""
    check_tau(tau_N)
    rng = as_generator(rng)
    V1 = sample_gue(N, rng)
    V2 = sample_gue(N, rng)
    return ComplexMatrix(V1.entries + 1j * np.sqrt(tau_N) * V2.entries)


def sample_weak_elliptic(N, tau_N, atom, rng):
    """A = W1 + i sqrt(tau_N) W2 with independent Wigner W1, W2.

    :returns: (A, W1, W2)
    """
    check_tau(tau_N)
    rng = as_generator(rng)
    W1 = sample_wigner(N, atom, rng)
    W2 = sample_wigner(N, atom, rng)
    if tau_N == 0.0:
        return ComplexMatrix(W1.entries), W1, W2
    return ComplexMatrix(W1.entries + 1j * np.sqrt(tau_N) * W2.entries), W1, W2


def sample_gauss_divisible(A, t, tau_N, rng, B=None):
    """A_t = A + sqrt(t) B with a fresh elliptic B at the same tau_N (or the given B)."""
    A = as_matrix(A)
    if not t >= 0.0:
        raise InputError('t must be non-negative')
    check_tau(tau_N)
    if B is None:
        if t == 0.0:
            return A
        B = sample_elliptic(A.n, tau_N, rng)
    B = as_matrix(B)
    if B.n != A.n:
        raise InputError('dimension mismatch: A is %d x %d, B is %d x %d' % (A.n, A.n, B.n, B.n))
    if t == 0.0:
        return A
    return ComplexMatrix(A.entries + np.sqrt(t) * B.entries)


def draw(spec, trial=0):
    """One draw of the full recipe: (A_t, W1, W2) for the given trial index."""
    rng = spec.stream(trial).generator()
    A, W1, W2 = sample_weak_elliptic(spec.N, spec.tau_N, spec.atom, rng)
    return sample_gauss_divisible(A, spec.t, spec.tau_N, rng), W1, W2


def tau_N_for(tau_E, N, E=0.0):
    """tau_N such that N tau_N pi rho_sc(E) = tau_E."""
    rho = np.sqrt(max(4.0 - E * E, 0.0)) / (2.0 * np.pi)
    if rho == 0.0:
        raise InputError('E=%g lies outside the bulk (-2, 2)' % E)
    return tau_E / (N * np.pi * rho)


ENSEMBLES = ('gue', 'wigner', 'elliptic', 'weak-elliptic', 'gauss-divisible')


def draw_named(ensemble, spec, trial=0):
    """One draw of a named ensemble from the trial substream of ``spec``.

    :returns: (ComplexMatrix, True when the draw is Hermitian)
    """
    rng = spec.stream(trial).generator()
    if ensemble == 'gue':
        return sample_gue(spec.N, rng), True
    if ensemble == 'wigner':
        return sample_wigner(spec.N, spec.atom, rng), True
    if ensemble == 'elliptic':
        return sample_elliptic(spec.N, spec.tau_N, rng), False
    if ensemble == 'weak-elliptic':
        return sample_weak_elliptic(spec.N, spec.tau_N, spec.atom, rng)[0], False
    if ensemble == 'gauss-divisible':
        return draw(spec, trial)[0], False
    raise InputError('unknown ensemble %r (expected one of %s)' % (ensemble, ', '.join(ENSEMBLES)))
