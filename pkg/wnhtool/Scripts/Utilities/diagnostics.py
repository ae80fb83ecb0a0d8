# -*- coding: utf-8 -*-
"""
Resolvent functionals of a pair (W1, W2): m_N, m_N', alpha_N, beta_N and the
alternating multi-resolvent traces <prod G_{z_j} W2o>, the semicircle closed
forms, and the checker for the conditions C0-C3 that define the class
W_{N,eps}.

W2o is the traceless part of W2. Every functional is evaluated in the
eigenbasis of W1 where G_z is the diagonal matrix 1/(lambda_i - z): the
eigendecomposition of W1 and the rotated W2o are computed once per pair.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InputError
from .linalg import as_hermitian, check_off_axis, operator_norm, traceless_part

logger = logging.getLogger(__name__)

# S_eps is bounded by |Re z| <= 10 and |Im z| <= 10
DOMAIN_RE_MAX = 10.0
DOMAIN_IM_MAX = 10.0


def _poles(values, z):
    return 1.0 / (values - check_off_axis(z))


def stieltjes_m(W1, z):
    """m_N(z) = <G_z> = (1/N) sum_i 1/(lambda_i - z)."""
    values = as_hermitian(W1).eigen[0]
    return complex(np.mean(_poles(values, z)))


def m_prime(W1, z):
    """m_N'(z) = <G_z^2>."""
    values = as_hermitian(W1).eigen[0]
    return complex(np.mean(_poles(values, z) ** 2))


class ResolventPair:
    """W1 in its eigenbasis together with U* W2o U.

    :param W1: HermitianMatrix (or array) whose resolvent is used
    :param W2: HermitianMatrix (or array); only its traceless part enters
    """

    def __init__(self, W1, W2):
        self.W1 = as_hermitian(W1)
        self.W2 = as_hermitian(W2)
        if self.W1.n != self.W2.n:
            raise InputError('W1 and W2 have different dimensions')
        self.N = self.W1.n

    @property
    def values(self):
        return self.W1.eigen[0]

    @cached_property
    def rotated(self):
        """U* W2o U."""
        U = self.W1.eigen[1]
        return U.conj().T @ traceless_part(self.W2).entries @ U

    @cached_property
    def rotated_abs2(self):
        return np.abs(self.rotated) ** 2

    def m(self, z):
        return complex(np.mean(_poles(self.values, z)))

    def m_prime(self, z):
        return complex(np.mean(_poles(self.values, z) ** 2))

    def alpha_beta(self, z, tau_N):
        d = _poles(self.values, z)
        re_part = d.real @ self.rotated_abs2 @ d.real
        im_part = d.imag @ self.rotated_abs2 @ d.imag
        return tau_N * float(re_part), tau_N * float(im_part)

    def single_trace(self, z, power=1):
        """<G_z^power W2o>."""
        d = _poles(self.values, z)
        return complex(np.mean(d ** power * np.diagonal(self.rotated)))

    def chain_traces(self, z_list):
        """Traces <prod_{j<=m} G_{z_j} W2o> of every prefix m = 1..len(z_list)."""
        if len(z_list) == 0:
            raise InputError('z_list must not be empty')
        W = self.rotated
        factors = [_poles(self.values, z)[:, None] * W for z in z_list]
        traces = [complex(np.trace(factors[0]) / self.N)]
        product = factors[0]
        for j, factor in enumerate(factors[1:], start=1):
            # tr(P X) without forming P X
            traces.append(complex(np.sum(product * factor.T) / self.N))
            if j < len(factors) - 1:
                product = product @ factor
        return traces


def alpha_beta(W1, W2, z, tau_N):
    """(alpha_N, beta_N) = N tau_N (<(Re(G) W2o)^2>, <(Im(G) W2o)^2>)."""
    return ResolventPair(W1, W2).alpha_beta(z, tau_N)


def multi_resolvent_trace(W1, W2_traceless, z_list):
    """<prod_{j=1}^m G_{z_j} W2o> for m = len(z_list)."""
    if len(z_list) == 0:
        raise InputError('z_list must not be empty')
    return ResolventPair(W1, W2_traceless).chain_traces(list(z_list))[-1]


def semicircle_density(E):
    E = float(E)
    if abs(E) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - E * E) / (2.0 * math.pi)


def semicircle_m(z):
    """Root of m^2 + z m + 1 = 0 with Im m * Im z > 0."""
    z = check_off_axis(z)
    root = np.sqrt(complex(z * z - 4.0))
    m = (-z + root) / 2.0
    if m.imag * z.imag <= 0.0:
        m = (-z - root) / 2.0
    return complex(m)


def semicircle_m_prime(z):
    """m_sc'(z) = -m / (2m + z), from differentiating m^2 + z m + 1 = 0."""
    m = semicircle_m(z)
    return complex(-m / (2.0 * m + z))


class SemicircleStieltjes:
    """m-provider backed by the semicircle law."""

    def m(self, z):
        return semicircle_m(z)

    def m_prime(self, z):
        return semicircle_m_prime(z)


class MatrixStieltjes:
    """m-provider backed by the spectrum of a concrete W1."""

    def __init__(self, W1):
        self.W1 = as_hermitian(W1)

    def m(self, z):
        return stieltjes_m(self.W1, z)

    def m_prime(self, z):
        return m_prime(self.W1, z)


def local_law_deviation(W1, points):
    """max over points of |m_N(z) - m_sc(z)|."""
    W1 = as_hermitian(W1)
    return max(abs(stieltjes_m(W1, z) - semicircle_m(z)) for z in points)


@dataclass(frozen=True)
class SpectralDomainSpec:
    """Deterministic grid of S_eps (upper half; conditions are conjugation symmetric)."""

    epsilon: float
    N: int
    n_eta: int = 5
    n_re: int = 6
    re_span: float = 2.5
    extra_re: tuple = (-9.0, -5.0, 5.0, 9.0)
    bulk_edge: float = 1.6
    bulk_eta_max: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.5:
            raise InputError('epsilon must lie in (0, 1/2], got %r' % (self.epsilon,))
        if self.N < 2:
            raise InputError('N must be at least 2')
        if self.n_eta < 1 or self.n_re < 1:
            raise InputError('grid sizes must be positive')

    @property
    def n_epsilon(self):
        return math.ceil(48.0 / self.epsilon)

    @property
    def eta_min(self):
        return self.N ** (-1.0 + self.epsilon)

    @property
    def eta_levels(self):
        return np.geomspace(self.eta_min, DOMAIN_IM_MAX, self.n_eta)

    @property
    def re_values(self):
        uniform = np.linspace(-self.re_span, self.re_span, self.n_re)
        return np.unique(np.concatenate([uniform, np.asarray(self.extra_re, dtype=float)]))

    def grid(self):
        re, eta = np.meshgrid(self.re_values, self.eta_levels, indexing='ij')
        return (re + 1j * eta).ravel()

    def bulk_mask(self, points):
        points = np.asarray(points)
        return (np.abs(points.real) <= self.bulk_edge) & (np.abs(points.imag) <= self.bulk_eta_max)

    def contains(self, z):
        return (abs(z.real) <= DOMAIN_RE_MAX
                and self.eta_min * (1 - 1e-12) <= abs(z.imag) <= DOMAIN_IM_MAX * (1 + 1e-12))


@dataclass(frozen=True)
class ClassConstants:
    c0: float = 4.0
    c_m: float = 10.0
    c_mprime: float = 0.05
    c_beta: float = 20.0
    c3: float = 10.0
    m_max: int = 8


@dataclass
class ConditionRecord:
    passed: bool
    margin: float
    witness: list = field(default_factory=list)
    measured: dict = field(default_factory=dict)

    def to_dict(self):
        return {'pass': bool(self.passed), 'margin': _finite(self.margin),
                'witness': [{'re': float(z.real), 'im': float(z.imag)} for z in self.witness],
                **{key: _jsonable(value) for key, value in self.measured.items()}}


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _finite(value)
    return value


@dataclass
class ClassReport:
    conditions: dict
    domain: SpectralDomainSpec
    n_points: int
    tau_N: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(record.passed for record in self.conditions.values())

    def failed(self):
        return [name for name, record in self.conditions.items() if not record.passed]

    def to_dict(self):
        return {'pass': self.passed,
                'conditions': {name: record.to_dict() for name, record in self.conditions.items()},
                'grid': {'epsilon': self.domain.epsilon, 'n_points': self.n_points,
                         'n_epsilon': self.domain.n_epsilon, 'eta_min': self.domain.eta_min,
                         'N': self.domain.N, 'tau_N': self.tau_N},
                'diagnostics': _jsonable(self.diagnostics)}


def _two_sided(values, lower, upper, points):
    """Worst relative slack of lower <= values <= upper and its witness point."""
    values = np.asarray(values, dtype=float)
    slack = np.minimum((values - lower) / lower, (upper - values) / upper)
    worst = int(np.argmin(slack))
    return float(slack[worst]), [complex(points[worst])]


def check_class_membership(W1, W2, epsilon, tau_N=None, grid_size=None, constants=None,
                           m_values=None, full_range=False):
    """Evaluate C0-C3 for (W1, W2) over a deterministic grid of S_eps.

    C0, C3.1 and C3.2 are checked on the whole grid, C1.1, C1.2 and C2 on its
    bulk sub-grid where Im m_N stays bounded below.

    :param grid_size: optional (n_re, n_eta)
    :param m_values: subset of m for C3.2; defaults to 2..min(4 n_eps, m_max)
    :param full_range: use every m up to 4 n_eps
    :returns: ClassReport
    """
    constants = constants or ClassConstants()
    pair = ResolventPair(W1, W2)
    N = pair.N
    if tau_N is None:
        tau_N = 1.0 / N
    if grid_size is None:
        domain = SpectralDomainSpec(epsilon, N)
    else:
        domain = SpectralDomainSpec(epsilon, N, n_re=int(grid_size[0]), n_eta=int(grid_size[1]))
    points = domain.grid()
    bulk = points[domain.bulk_mask(points)]
    if bulk.size == 0:
        raise InputError('the grid has no point in the bulk sub-domain')
    m_top = 4 * domain.n_epsilon if full_range else min(4 * domain.n_epsilon, constants.m_max)
    if m_values is None:
        m_values = list(range(2, m_top + 1))
    m_values = sorted(int(m) for m in m_values if 2 <= int(m) <= 4 * domain.n_epsilon)
    conditions = {}

    # C0
    norms = (operator_norm(pair.W1), operator_norm(pair.W2))
    measured = max(norms)
    conditions['C0'] = ConditionRecord(measured <= constants.c0, (constants.c0 - measured) / constants.c0,
                                       [], {'c0': measured, 'norm_W1': norms[0], 'norm_W2': norms[1]})

    # C1.1
    abs_m = np.array([abs(pair.m(z)) for z in bulk])
    margin, witness = _two_sided(abs_m, 1.0 / constants.c_m, constants.c_m, bulk)
    c_m = float(max(abs_m.max(), 1.0 / abs_m.min()))
    conditions['C1.1'] = ConditionRecord(margin >= 0.0, margin, witness, {'c_m': c_m})

    # C1.2
    ratio = np.array([z.imag * abs(pair.m_prime(z)) / pair.m(z).imag for z in bulk])
    worst = int(np.argmax(ratio))
    limit = 1.0 - constants.c_mprime
    conditions['C1.2'] = ConditionRecord(bool(ratio[worst] < limit), float(limit - ratio[worst]),
                                         [complex(bulk[worst])], {'c_mprime': float(1.0 - ratio[worst])})

    # C2
    beta = np.array([pair.alpha_beta(z, tau_N)[1] for z in bulk])
    margin, witness = _two_sided(beta, 1.0 / constants.c_beta, constants.c_beta, bulk)
    c_beta = float(max(beta.max(), 1.0 / beta.min())) if beta.min() > 0.0 else math.inf
    conditions['C2'] = ConditionRecord(margin >= 0.0, margin, witness, {'c_beta': c_beta})

    # C3.1
    eta = np.abs(points.imag)
    value = np.array([abs(pair.single_trace(z)) for z in points])
    bound = N ** (epsilon / 2.0) / (N * np.sqrt(eta))
    slack = (bound - value) / bound
    worst = int(np.argmin(slack))
    conditions['C3.1'] = ConditionRecord(bool(slack[worst] >= 0.0), float(slack[worst]), [complex(points[worst])],
                                         {'ratio': float(np.max(value / bound))})

    # C3.2 at z_j = z and at z, conj(z) alternating
    per_m = {m: 0.0 for m in m_values}
    witness = {m: points[0] for m in m_values}
    if m_values:
        length = max(m_values)
        for z in points:
            scale = abs(z.imag)
            for config in ([z] * length, [z if j % 2 == 0 else z.conjugate() for j in range(length)]):
                traces = pair.chain_traces(config)
                for m in m_values:
                    constant = abs(traces[m - 1]) * scale ** (m / 2.0 - 1.0)
                    if constant > per_m[m]:
                        per_m[m], witness[m] = constant, z
        worst_m = max(m_values, key=lambda m: per_m[m])
        measured_c3 = per_m[worst_m]
        growing = len(m_values) > 1 and all(per_m[a] < per_m[b] for a, b in zip(m_values, m_values[1:]))
        if growing:
            logger.warning('C3.2 constants grow with m: %s', ', '.join('%d:%.3g' % (m, per_m[m]) for m in m_values))
        conditions['C3.2'] = ConditionRecord(measured_c3 <= constants.c3, (constants.c3 - measured_c3) / constants.c3,
                                             [complex(witness[worst_m])],
                                             {'c3': measured_c3, 'per_m': per_m, 'growing': growing,
                                              'm_values': m_values})
    else:
        conditions['C3.2'] = ConditionRecord(True, 1.0, [], {'c3': 0.0, 'per_m': {}, 'm_values': []})

    report = ClassReport(conditions, domain, int(points.size), float(tau_N))
    report.diagnostics['contour'] = contour_consistency(pair, points, epsilon)
    report.diagnostics['local_law_deviation'] = float(max(abs(pair.m(z) - semicircle_m(z)) for z in bulk))
    for name, record in conditions.items():
        logger.info('%s: %s (margin %.3g)', name, 'pass' if record.passed else 'FAIL', record.margin)
    return report


def contour_consistency(pair, points, epsilon, powers=(1, 2, 3)):
    """Largest ratio |<G_z^{1+m} W2o>| / (N^{eps/2} / (N eta^{m+1/2})) over the grid, per m.

    Diagnostic only: ratios are expected to stay O(1) for Wigner pairs.
    """
    N = pair.N
    ratios = {}
    for m in powers:
        worst = 0.0
        for z in points:
            eta = abs(z.imag)
            bound = N ** (epsilon / 2.0) / (N * eta ** (m + 0.5))
            worst = max(worst, abs(pair.single_trace(z, power=1 + m)) / bound)
        ratios[m] = worst
        logger.info('contour check m=%d: max ratio %.3g', m, worst)
    return ratios
