# -*- coding: utf-8 -*-
"""
compare: compare an ``x,y,density`` table written by correlate with
rho_tau^(1).
"""

import logging

import pandas as pd

from .Utilities.arguments import integer, number, number_list
from .Utilities.correlation import BinnedDensity, Window, compare
from .Utilities.errors import InputError
from .Utilities.kernel import KernelParams, rho1_values
from .Utilities.misc import savejson

logger = logging.getLogger(__name__)

NAME = 'compare'
HELP = 'Compare a density with rho1'
DESCRIPTION = 'Relative L1, L2 and sup errors and a Poisson chi2 of a binned density against rho_tau^(1).'


def add_arguments(parser):
    parser.add_argument('--density', help='density CSV with columns x, y, density')
    parser.add_argument('--tau', type=number(0.0), default=1.0, help='kernel parameter tau (default: 1)')
    parser.add_argument('--trials', type=integer(1), default=1, help='trials behind the estimate (default: 1)')
    parser.add_argument('--window', type=number_list(),
                        help='window x0,x1,y0,y1 of the table, needed below 2 x 2 bins')
    parser.add_argument('--floor', type=number(0.0), help='theory floor (default: 1e-3 of the maximum)')


def run(args, context):
    if args.density is None:
        raise InputError('compare needs --density')
    window = None
    if args.window is not None:
        if len(args.window) != 4:
            raise InputError('window needs four numbers x0,x1,y0,y1')
        window = Window(*args.window)
    estimate = BinnedDensity.from_frame(pd.read_csv(args.density), args.trials, window=window)
    params = KernelParams(args.tau)
    logger.info('Comparing %d x %d bins with rho1 at tau=%g', estimate.nx, estimate.ny, params.tau)
    report = compare(estimate, lambda z: rho1_values(params, z), args.floor)
    savejson(report.to_dict(), context.output_path('compare.json'))
