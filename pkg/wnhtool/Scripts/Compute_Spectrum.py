# -*- coding: utf-8 -*-
"""
spectrum: eigenvalues of many draws of a named ensemble, computed in a
worker pool, without the matrix dump.
"""

import logging
from functools import partial

from .Utilities.arguments import add_ensemble_arguments, ensemble_spec, integer
from .Utilities.ensembles import draw_named
from .Utilities.linalg import general_eigen, hermitian_eigen
from .Utilities.misc import eigenvalue_frame, run_trials, savecsv

logger = logging.getLogger(__name__)

NAME = 'spectrum'
HELP = 'Eigenvalue spectra'
DESCRIPTION = 'Writes trial,index,re,im for every draw. The output does not depend on the number of workers.'


def spectrum_trial(ensemble, spec, trial):
    M, hermitian = draw_named(ensemble, spec, trial)
    spectrum = hermitian_eigen(M.entries)[0] if hermitian else general_eigen(M)
    return trial, spectrum.values


def add_arguments(parser):
    add_ensemble_arguments(parser)
    parser.add_argument('--trials', type=integer(1), default=10, help='number of draws (default: 10)')


def run(args, context):
    spec = ensemble_spec(args, context.seed)
    logger.info('Eigenvalues of %d %s draws on %d worker(s)', args.trials, args.ensemble, context.workers)
    spectra = run_trials(partial(spectrum_trial, args.ensemble, spec), range(args.trials), context.workers)
    savecsv(eigenvalue_frame(spectra), context.output_path('spectrum.csv'))
