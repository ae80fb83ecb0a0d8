# -*- coding: utf-8 -*-
"""
kernel: rho_tau^(1) on a regular grid as ``x,y,rho1`` plot data, and
optionally the kernel matrix of a list of points as JSON.
"""

import logging

import numpy as np

from .Utilities.arguments import integer, number, value_range
from .Utilities.errors import InputError
from .Utilities.kernel import DEFAULT_ORDER, KernelParams, kernel_grid, rho1_grid
from .Utilities.misc import savecsv, savejson

logger = logging.getLogger(__name__)

NAME = 'kernel'
HELP = 'Bulk kernel K_tau'
DESCRIPTION = 'Evaluates K_tau(z, z) on a grid for plotting and the matrix [K_tau(z_j, z_l)] of given points.'


def grid_axis(bounds):
    start, stop, step = bounds
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_points(text):
    """``0+1j,0.5-0.2j`` into complex numbers."""
    try:
        return [complex(item.strip().replace(' ', '')) for item in text.split(',') if item.strip()]
    except ValueError:
        raise InputError('cannot parse kernel points %r' % text)


def add_arguments(parser):
    parser.add_argument('--tau', type=number(0.0), default=1.0, help='kernel parameter tau (default: 1)')
    parser.add_argument('--grid', type=value_range, default=(-3.0, 3.0, 0.1),
                        help='x range start:stop:step (default: -3:3:0.1)')
    parser.add_argument('--ygrid', type=value_range, help='y range start:stop:step, defaults to the x range')
    parser.add_argument('--order', type=integer(16), default=DEFAULT_ORDER,
                        help='Gauss-Legendre order (default: %d)' % DEFAULT_ORDER)
    parser.add_argument('--points', help='comma separated complex points for the kernel matrix')


def run(args, context):
    params = KernelParams(args.tau, args.order)
    xs = grid_axis(args.grid)
    ys = grid_axis(args.ygrid or args.grid)
    logger.info('rho1 for tau=%g on %d x %d points', params.tau, xs.size, ys.size)
    savecsv(rho1_grid(params, xs, ys), context.output_path('kernel_rho1.csv'))
    if args.points:
        grid = kernel_grid(params, parse_points(args.points))
        savejson(grid.to_dict(), context.output_path('kernel.json'))
