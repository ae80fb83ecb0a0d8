# -*- coding: utf-8 -*-
"""
sample: draw matrices of a named ensemble, dump them as ``i,j,re,im`` and
write their eigenvalues as ``trial,index,re,im``.
"""

import logging

import pandas as pd

from .Utilities.arguments import add_ensemble_arguments, ensemble_spec, integer
from .Utilities.ensembles import draw_named
from .Utilities.linalg import general_eigen, hermitian_eigen
from .Utilities.misc import eigenvalue_frame, matrix_frame, savecsv

logger = logging.getLogger(__name__)

NAME = 'sample'
HELP = 'Sample an ensemble'
DESCRIPTION = ('Draws GUE, Wigner, elliptic Ginibre, weakly non-Hermitian elliptic or Gauss-divisible matrices '
               'from the (seed, trial) substreams and writes the matrices and their eigenvalues.')


def add_arguments(parser):
    add_ensemble_arguments(parser)
    parser.add_argument('--trials', type=integer(1), default=1, help='number of draws (default: 1)')
    parser.add_argument('--no-matrix', action='store_true', help='skip the matrix dump')


def run(args, context):
    spec = ensemble_spec(args, context.seed)
    logger.info('Drawing %d %s matrices of size %d', args.trials, args.ensemble, spec.N)

    spectra = []
    matrices = []
    for trial in range(args.trials):
        M, hermitian = draw_named(args.ensemble, spec, trial)
        spectrum = hermitian_eigen(M.entries)[0] if hermitian else general_eigen(M)
        spectra.append((trial, spectrum.values))
        if not args.no_matrix:
            matrices.append(matrix_frame(M.entries, trial))

    savecsv(eigenvalue_frame(spectra), context.output_path('sample_eigenvalues.csv'))
    if matrices:
        savecsv(pd.concat(matrices, ignore_index=True), context.output_path('sample_matrices.csv'))
