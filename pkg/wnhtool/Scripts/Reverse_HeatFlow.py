# -*- coding: utf-8 -*-
"""
heatflow: chi2 between e^{tL} T_n f and f for a perturbed gaussian f over a
(t, n) table, with the fitted log-log slope per n.
"""

import logging

from .Utilities.arguments import integer, number, number_list
from .Utilities.heatflow import DEFAULT_H, DEFAULT_L, perturbed_gaussian, scaling_experiment
from .Utilities.misc import savecsv, savejson

logger = logging.getLogger(__name__)

NAME = 'heatflow'
HELP = 'Reverse heat flow'
DESCRIPTION = ('Applies T_n = sum_{m<n} (-tL)^m/m! and the Ornstein-Uhlenbeck semigroup to a perturbed gaussian '
               'and reports chi2 against the original, which decays like t^(2n).')


def add_arguments(parser):
    parser.add_argument('--n', type=number_list(int), default=[1, 2], help='truncation orders n (default: 1,2)')
    parser.add_argument('--t', type=number_list(), default=[0.2, 0.1, 0.05], help='times t (default: 0.2,0.1,0.05)')
    parser.add_argument('--l', type=number(0.0, strict=True), default=DEFAULT_L,
                        help='grid half-width L (default: %g)' % DEFAULT_L)
    parser.add_argument('--h', type=number(0.0, strict=True), default=DEFAULT_H,
                        help='grid spacing h (default: %g)' % DEFAULT_H)
    parser.add_argument('--amplitude', type=number(), default=0.02, help='perturbation amplitude a (default: 0.02)')
    parser.add_argument('--degree', type=integer(1), default=1, help='Hermite degree of the perturbation')


def run(args, context):
    f = perturbed_gaussian(args.l, args.h, args.amplitude, args.degree)
    logger.info('Reverse heat flow for n in %s, t in %s', args.n, args.t)
    table, slopes = scaling_experiment(f, args.t, args.n)
    for n, slope in sorted(slopes.items()):
        logger.info('n=%d: slope %.3f (expected %d)', n, slope, 2 * n)
    savecsv(table, context.output_path('heatflow.csv'))
    savejson({'slopes': {str(n): s for n, s in slopes.items()}, 'expected': {str(n): 2 * n for n in slopes}},
             context.output_path('heatflow.json'))
