# -*- coding: utf-8 -*-
"""
check-class: evaluate the conditions C0-C3 of the class W_{N,eps} for a pair
(W1, W2) drawn from the seed or loaded from ``i,j,re,im`` matrix files.
"""

import logging

import numpy as np

from .Utilities.arguments import add_ensemble_arguments, ensemble_spec, integer, number
from .Utilities.diagnostics import ClassConstants, check_class_membership
from .Utilities.ensembles import sample_gue, sample_wigner
from .Utilities.errors import InputError
from .Utilities.linalg import HermitianMatrix
from .Utilities.misc import readmatrix, savejson

logger = logging.getLogger(__name__)

NAME = 'check-class'
HELP = 'Check class membership'
DESCRIPTION = ('Evaluates the norm bound C0, the Stieltjes bounds C1, the beta bound C2 and the resolvent trace '
               'bounds C3 over a grid of S_eps. Exit code 1 when a condition fails.')

SOURCES = ('wigner', 'gue', 'identity', 'file')


def add_arguments(parser):
    add_ensemble_arguments(parser, ensemble=False, n=400, tau_n=None, with_t=False)
    parser.add_argument('--epsilon', type=number(0.0, 0.5, strict=True), default=0.5,
                        help='epsilon of S_eps, in (0, 1/2] (default: 0.5)')
    parser.add_argument('--w1', choices=SOURCES, default='wigner', help='source of W1 (default: wigner)')
    parser.add_argument('--w2', choices=SOURCES, default='wigner', help='source of W2 (default: wigner)')
    parser.add_argument('--w1-file', help='W1 matrix CSV (i,j,re,im)')
    parser.add_argument('--w2-file', help='W2 matrix CSV (i,j,re,im)')
    parser.add_argument('--grid-re', type=integer(1), default=6, help='uniform Re z values in [-2.5, 2.5]')
    parser.add_argument('--grid-eta', type=integer(1), default=5, help='logarithmic Im z levels')
    parser.add_argument('--m-max', type=integer(2), default=8, help='largest m checked in C3.2 (default: 8)')
    parser.add_argument('--full-range', action='store_true', help='check C3.2 for every m up to 4 n_eps')
    defaults = ClassConstants()
    for key in ('c0', 'c_m', 'c_mprime', 'c_beta', 'c3'):
        parser.add_argument('--' + key.replace('_', '-'), type=number(0.0), default=getattr(defaults, key),
                            help='constant %s (default: %s)' % (key, getattr(defaults, key)))


def pair_matrix(source, path, N, rng, atom):
    if source == 'file':
        if path is None:
            raise InputError('a matrix file is required when the source is "file"')
        return HermitianMatrix(readmatrix(path))
    if source == 'identity':
        return HermitianMatrix(np.eye(N))
    if source == 'gue':
        return sample_gue(N, rng)
    return sample_wigner(N, atom, rng)


def run(args, context):
    spec = ensemble_spec(args, context.seed, tau_N=0.0, t=0.0)
    rng = spec.stream(0).generator()
    W1 = pair_matrix(args.w1, args.w1_file, spec.N, rng, spec.atom)
    W2 = pair_matrix(args.w2, args.w2_file, W1.n, rng, spec.atom)
    tau_N = args.tau_n if args.tau_n is not None else 1.0 / W1.n
    logger.info('Checking C0-C3 for N=%d, eps=%g, tau_N=%g', W1.n, args.epsilon, tau_N)

    constants = ClassConstants(args.c0, args.c_m, args.c_mprime, args.c_beta, args.c3, args.m_max)
    report = check_class_membership(W1, W2, args.epsilon, tau_N, (args.grid_re, args.grid_eta), constants,
                                    full_range=args.full_range)
    for name in report.failed():
        logger.warning('%s failed (margin %.3g)', name, report.conditions[name].margin)
    savejson(report.to_dict(), context.output_path('check_class.json'))
    return report.passed
