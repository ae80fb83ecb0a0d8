# -*- coding: utf-8 -*-
"""
saddle: solve lambda_{E,t} = E + t m(lambda_{E,t}) for the semicircle law or
for a drawn pair and report eta_{E,t}, u_{E,t} and tau_{E,t}.
"""

import json
import logging

from .Utilities.arguments import add_ensemble_arguments, ensemble_spec, number
from .Utilities.ensembles import sample_weak_elliptic
from .Utilities.misc import savejson
from .Utilities.saddle import DEFAULT_TOL, saddle_for_pair, solve_lambda, verify_eta_bounds

logger = logging.getLogger(__name__)

NAME = 'saddle'
HELP = 'Saddle point lambda_{E,t}'
DESCRIPTION = ('Newton iteration on lambda - E - t m(lambda) from E + i t pi rho_sc(E). With --semicircle m is the '
               'semicircle transform; otherwise a pair (W1, W2) is drawn and tau_{E,t} is reported.')


def add_arguments(parser):
    add_ensemble_arguments(parser, ensemble=False, n=256, tau_n=None, with_t=False)
    parser.add_argument('--semicircle', action='store_true', help='use the semicircle Stieltjes transform')
    parser.add_argument('--e', type=number(), default=0.0, help='energy E (default: 0)')
    parser.add_argument('--t', type=number(0.0, strict=True), default=0.01,
                        help='flow time t of the fixed point (default: 0.01)')
    parser.add_argument('--tol', type=number(0.0, strict=True), default=DEFAULT_TOL, help='residual tolerance')
    parser.add_argument('--bound-c', type=number(1.0), default=2.0,
                        help='constant C of the eta and u bounds (default: 2)')


def run(args, context):
    E, t = args.e, args.t
    if args.semicircle:
        logger.info('Saddle point of the semicircle law at E=%g, t=%g', E, t)
        result = solve_lambda(None, E, t, args.tol)
    else:
        tau_N = args.tau_n if args.tau_n is not None else 1.0 / args.n
        spec = ensemble_spec(args, context.seed, tau_N=tau_N, t=0.0)
        _, W1, W2 = sample_weak_elliptic(spec.N, spec.tau_N, spec.atom, spec.stream(0).generator())
        logger.info('Saddle point of a drawn pair, N=%d, at E=%g, t=%g', spec.N, E, t)
        result = saddle_for_pair(W1, W2, E, t, tau_N, args.tol)

    data = result.to_dict()
    data['eta_bounds'] = verify_eta_bounds(result, args.bound_c).to_dict()
    savejson(data, context.output_path('saddle.json'))
    print(json.dumps(data, sort_keys=True))
