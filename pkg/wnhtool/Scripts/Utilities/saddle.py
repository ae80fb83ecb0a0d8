# -*- coding: utf-8 -*-
"""
Characteristic point of the Gauss-divisible flow:
lambda_{E,t} = E + t m(lambda_{E,t}) with Im lambda > 0, and the effective
weak non-Hermiticity parameters tau_{E,t} and tau_E built on it.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .diagnostics import MatrixStieltjes, ResolventPair, SemicircleStieltjes, semicircle_density
from .errors import DomainError, InputError, NumericalError
from .linalg import HermitianMatrix

logger = logging.getLogger(__name__)

MAX_ITER = 200
DEFAULT_TOL = 1e-12
# below this |Re m(lambda)| the lower bound on |u - E| is not meaningful
RE_M_SKIP = 0.05
DAMPING = 0.5


@dataclass
class SaddleResult:
    lam: complex
    residual: float
    iterations: int
    E: float
    t: float
    tau_Et: float = None
    alpha: float = None
    beta: float = None
    tau_E_bracket: float = None
    tau_E_target: float = None
    tau_Et_prediction: float = None
    method: str = 'newton'

    @property
    def u(self):
        return self.lam.real

    @property
    def eta(self):
        return self.lam.imag

    def to_dict(self):
        out = {'lambda': {'re': self.lam.real, 'im': self.lam.imag}, 'u': self.u, 'eta': self.eta,
               'residual': self.residual, 'iterations': self.iterations, 'E': self.E, 't': self.t,
               'method': self.method}
        for key in ('tau_Et', 'alpha', 'beta', 'tau_E_bracket', 'tau_E_target', 'tau_Et_prediction'):
            value = getattr(self, key)
            if value is not None:
                out[key] = float(value)
        return out


def as_m_provider(source):
    """Anything with m(z) and m_prime(z); a matrix is wrapped as its Stieltjes transform."""
    if source is None:
        return SemicircleStieltjes()
    if hasattr(source, 'm') and hasattr(source, 'm_prime'):
        return source
    if isinstance(source, (HermitianMatrix, np.ndarray)):
        return MatrixStieltjes(source)
    raise InputError('cannot use %r as a Stieltjes transform' % (type(source).__name__,))


def solve_lambda(m_provider, E, t, tol=DEFAULT_TOL, max_iter=MAX_ITER):
    """Root of F(lambda) = lambda - E - t m(lambda) in the upper half plane.

    Newton's method (``scipy.optimize.newton`` on the complex variable) is
    started at E + i t pi rho_sc(E) (E + i t off the bulk). If an iterate
    leaves the upper half plane, or Newton stops short of ``tol``, the solver
    continues with the damped fixed-point map lambda <- lambda + w (E + t m(lambda) - lambda)
    from the last iterate inside it.

    :param m_provider: object with m(z) and m_prime(z), or a Hermitian W1
    :returns: SaddleResult
    """
    provider = as_m_provider(m_provider)
    E, t = float(E), float(t)
    if not t > 0.0:
        raise InputError('t must be positive, got %r' % (t,))
    if abs(E) >= 2.0:
        logger.warning('E=%g lies outside the bulk (-2, 2)', E)
    rho = semicircle_density(E)
    lam0 = complex(E, t * math.pi * rho) if rho > 0.0 else complex(E, t)
    trace = []

    def F(lam):
        lam = complex(lam)
        if not (lam.imag > 0.0 and np.isfinite(lam)):
            raise DomainError('iterate %r left the upper half plane' % (lam,))
        trace.append(lam)
        return lam - E - t * provider.m(lam)

    def dF(lam):
        return 1.0 - t * provider.m_prime(complex(lam))

    def residual(lam):
        return abs(lam - E - t * provider.m(lam))

    try:
        root, info = optimize.newton(F, lam0, fprime=dF, tol=tol, maxiter=max_iter, full_output=True, disp=False)
        lam = complex(root)
        iterations = int(info.iterations)
        if lam.imag > 0.0 and np.isfinite(lam):
            res = residual(lam)
            if res <= tol:
                return SaddleResult(lam, float(res), iterations, E, t, method='newton')
        else:
            lam = trace[-1] if trace else lam0
        logger.warning('Newton stopped at residual above %g for E=%g, t=%g; using the fixed-point map', tol, E, t)
    except DomainError:
        logger.warning('Newton left the upper half plane at E=%g, t=%g; using the fixed-point map', E, t)
        lam = trace[-1] if trace else lam0
        iterations = len(trace)

    for iteration in range(iterations + 1, iterations + max_iter + 1):
        lam = lam - DAMPING * F(lam)
        res = residual(lam)
        if res <= tol:
            if lam.imag <= 0.0:
                raise DomainError('saddle point converged to Im lambda = %g <= 0' % lam.imag)
            return SaddleResult(lam, float(res), iteration, E, t, method='fixed-point')
    raise NumericalError('saddle iteration did not converge in %d steps' % (iterations + max_iter),
                         {'E': E, 't': t, 'iterates': [(z.real, z.imag) for z in (trace + [lam])[-10:]]})


def tau_Et(beta_at_lambda, N, tau_N, eta, t):
    """tau_{E,t} = beta_{E,t} + N tau_N eta^2 / t."""
    if not eta > 0.0 or not t > 0.0:
        raise InputError('eta and t must be positive')
    return float(beta_at_lambda + N * tau_N * eta * eta / t)


def tau_E_target(N, tau_N, E):
    """N tau_N pi rho_sc(E), the large-N value of tau_E for Wigner pairs."""
    return float(N * tau_N * math.pi * semicircle_density(E))


def tau_Et_prediction(N, tau_N, E, t):
    """N tau_N pi rho_sc(E) (1 + pi t rho_sc(E))."""
    rho = semicircle_density(E)
    return float(N * tau_N * math.pi * rho * (1.0 + math.pi * t * rho))


@dataclass
class EtaBoundReport:
    passed: bool
    eta_margin: float
    u_margin: float
    u_lower_skipped: bool

    def to_dict(self):
        return {'pass': self.passed, 'eta_margin': self.eta_margin, 'u_margin': self.u_margin,
                'u_lower_skipped': self.u_lower_skipped}


def verify_eta_bounds(result, C):
    """Check t/C <= eta <= C t and t/C <= |u - E| <= C t.

    Re m(lambda) = (u - E)/t at the fixed point; when it is below RE_M_SKIP in
    modulus only the upper bound on |u - E| is checked.
    """
    if not C >= 1.0:
        raise InputError('C must be at least 1')
    t = result.t
    eta_ratio = result.eta / t
    eta_margin = min(eta_ratio - 1.0 / C, C - eta_ratio)
    u_ratio = abs(result.u - result.E) / t
    skipped = u_ratio < RE_M_SKIP
    u_margin = C - u_ratio if skipped else min(u_ratio - 1.0 / C, C - u_ratio)
    return EtaBoundReport(bool(eta_margin >= 0.0 and u_margin >= 0.0), float(eta_margin), float(u_margin), skipped)


def saddle_for_pair(W1, W2, E, t, tau_N, tol=DEFAULT_TOL):
    """Solve for lambda_{E,t} on a concrete pair and attach alpha, beta and tau_{E,t}."""
    pair = ResolventPair(W1, W2)
    result = solve_lambda(pair, E, t, tol)
    alpha, beta = pair.alpha_beta(result.lam, tau_N)
    result.alpha, result.beta = alpha, beta
    result.tau_Et = tau_Et(beta, pair.N, tau_N, result.eta, t)
    result.tau_E_bracket = float(beta + pair.N * tau_N * result.eta * pair.m(result.lam).imag)
    result.tau_E_target = tau_E_target(pair.N, tau_N, E)
    result.tau_Et_prediction = tau_Et_prediction(pair.N, tau_N, E, t)
    logger.info('lambda=%s tau_Et=%.6g (prediction %.6g)', result.lam, result.tau_Et, result.tau_Et_prediction)
    return result
