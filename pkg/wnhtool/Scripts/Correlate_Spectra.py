# -*- coding: utf-8 -*-
"""
correlate: the Monte Carlo pipeline

    draw A_t -> eigenvalues -> rescale -> per-trial bin counts -> merged histogram -> compare with rho_tau^(1)

``thm2`` rescales by N pi rho_sc(E) around E and compares with tau = N tau_N pi rho_sc(E).
``thm1`` solves lambda_{E,t} for every trial, rescales by N eta_{E,t}/t around
E + i sqrt(tau_N) <W2> and compares with the mean tau_{E,t} over trials.

Each trial returns only its bin counts; the parent sums them in trial order.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .Utilities.arguments import add_ensemble_arguments, ensemble_spec, integer, number, number_list
from .Utilities.correlation import (Window, bin_rho1, bin_rho2, compare, default_bins, default_window,
                                    repulsion_ratio, rescale_bulk, rho1_from_counts, rho2_from_counts, y_marginal)
from .Utilities.diagnostics import semicircle_density
from .Utilities.ensembles import draw
from .Utilities.errors import DegenerateComparisonError, DomainError, InputError, NumericalError
from .Utilities.kernel import KernelParams, marginal_density, rho1_values
from .Utilities.linalg import general_eigen, normalized_trace
from .Utilities.misc import run_trials, savecsv, savejson
from .Utilities.saddle import saddle_for_pair, tau_E_target

logger = logging.getLogger(__name__)

NAME = 'correlate'
HELP = 'Empirical correlation functions'
DESCRIPTION = ('Samples weakly non-Hermitian matrices, rescales their eigenvalues around E, histograms the '
               'one-point (and optionally two-point) function and compares it with rho_tau^(1).')

# fraction of trials whose saddle point may fail before the run is aborted
MAX_FAILED_FRACTION = 0.01


@dataclass
class TrialCounts:
    trial: int
    rho1: np.ndarray = None
    rho2: np.ndarray = None
    tau: float = None


@dataclass
class CorrelationTally:
    """Running sums of the per-trial counts."""

    rho1: np.ndarray
    rho2: np.ndarray = None
    trials: int = 0
    taus: list = field(default_factory=list)
    failed: list = field(default_factory=list)

    def add(self, counts):
        if counts.rho1 is None:
            self.failed.append(counts.trial)
            return self
        self.trials += 1
        self.rho1 += counts.rho1
        if counts.rho2 is not None:
            self.rho2 += counts.rho2
        if counts.tau is not None:
            self.taus.append(counts.tau)
        return self


def correlate_trial(spec, mode, E, window, bins, d_bins, trial):
    A, W1, W2 = draw(spec, trial)
    values = general_eigen(A).values
    tau = None
    if mode == 'thm2':
        scale, shift = spec.N * math.pi * semicircle_density(E), 0.0
    else:
        try:
            result = saddle_for_pair(W1, W2, E, spec.t, spec.tau_N)
        except (NumericalError, DomainError):
            return TrialCounts(trial)
        shift = 1j * math.sqrt(spec.tau_N) * normalized_trace(W2).real
        scale = spec.N * result.eta / spec.t
        tau = result.tau_Et
    zeta = rescale_bulk(values, E, scale, shift, trial).zeta
    rho2 = bin_rho2(zeta, window, d_bins) if d_bins else None
    return TrialCounts(trial, bin_rho1(zeta, window, *bins), rho2, tau)


def add_arguments(parser):
    add_ensemble_arguments(parser, ensemble=False, n=256, tau_n=None)
    parser.add_argument('--mode', choices=('thm2', 'thm1'), default='thm2', help='rescaling convention')
    parser.add_argument('--e', type=number(-2.0, 2.0), default=0.0, help='energy E in the bulk (default: 0)')
    parser.add_argument('--trials', type=integer(1), default=100, help='number of trials (default: 100)')
    parser.add_argument('--window', type=number_list(),
                        help='window x0,x1,y0,y1 (default |x|<=3, |y|<=3 sqrt(tau)+1)')
    parser.add_argument('--nx', type=integer(1), help='bins along Re (default: from the trial count)')
    parser.add_argument('--ny', type=integer(1), help='bins along Im (default: from the trial count)')
    parser.add_argument('--rho2', action='store_true', help='also estimate the two-point function')
    parser.add_argument('--d-bins', type=integer(1), default=24, help='displacement bins per axis for rho2')
    parser.add_argument('--floor', type=number(0.0), help='theory floor (default: 1e-3 of the maximum)')


def run(args, context):
    E, mode, N = args.e, args.mode, args.n
    tau_N = args.tau_n if args.tau_n is not None else 1.0 / N
    if semicircle_density(E) == 0.0:
        raise InputError('E=%g is not in the bulk (-2, 2)' % E)
    if mode == 'thm1' and not args.t > 0.0:
        raise InputError('thm1 rescaling needs t > 0')
    spec = ensemble_spec(args, context.seed, tau_N=tau_N)

    if args.window is not None:
        if len(args.window) != 4:
            raise InputError('window needs four numbers x0,x1,y0,y1')
        window = Window(*args.window)
    else:
        window = default_window(tau_E_target(N, tau_N, E))
    nx, ny = default_bins(window, args.trials)
    bins = (args.nx or nx, args.ny or ny)
    d_bins = (args.d_bins, args.d_bins) if args.rho2 else None

    # Sample, diagonalize, rescale and bin
    logger.info('%d trials of N=%d, tau_N=%g, t=%g on %d worker(s), %d x %d bins',
                args.trials, N, tau_N, spec.t, context.workers, bins[0], bins[1])
    tally = CorrelationTally(np.zeros(bins), np.zeros(d_bins) if d_bins else None)
    run_trials(partial(correlate_trial, spec, mode, E, window, bins, d_bins), range(args.trials),
               context.workers, combine=CorrelationTally.add, initial=tally)
    if len(tally.failed) > MAX_FAILED_FRACTION * args.trials:
        raise NumericalError('saddle point failed on %d of %d trials' % (len(tally.failed), args.trials),
                             {'seed': context.seed, 'trials': tally.failed})
    if tally.failed:
        logger.warning('saddle point failed on trials %s; they are skipped', tally.failed)
    if mode == 'thm2':
        tau = N * tau_N * math.pi * semicircle_density(E)
    else:
        tau = float(np.mean(tally.taus))

    # Histograms
    estimate = rho1_from_counts(tally.rho1, window, tally.trials)
    estimate.metadata.update({'seed': context.seed, 'mode': mode, 'E': E, 'tau': tau, 'ensemble': spec.to_dict()})
    savecsv(estimate.to_frame(), context.output_path('correlate_rho1.csv'))
    summary = {'estimate': estimate.to_dict(), 'tau': tau, 'failed_trials': tally.failed}
    if mode == 'thm1':
        summary['tau_Et'] = {'mean': tau, 'std': float(np.std(tally.taus)),
                             'target': tau_E_target(N, tau_N, E)}
    summary['y_marginal'] = {'values': y_marginal(estimate).tolist(),
                             'theory': marginal_density(KernelParams(tau), 0.0, (window.y0, window.y1))}
    if args.rho2:
        rho2 = rho2_from_counts(tally.rho2, window, tally.trials)
        savecsv(rho2.to_frame(), context.output_path('correlate_rho2.csv'))
        summary['rho2'] = rho2.to_dict()
        try:
            summary['repulsion_ratio'] = repulsion_ratio(rho2)
        except DegenerateComparisonError as exc:
            logger.warning('%s', exc)

    # Comparison with rho_tau^(1)
    params = KernelParams(tau)
    try:
        report = compare(estimate, lambda z: rho1_values(params, z), args.floor)
    except DegenerateComparisonError as exc:
        summary['comparison'] = {'error': str(exc)}
        savejson(summary, context.output_path('correlate.json'))
        raise
    summary['comparison'] = report.to_dict()
    logger.info('rel_L1 = %.4f over %d bins', report.rel_L1, report.n_bins_used)
    savejson(summary, context.output_path('correlate.json'))
