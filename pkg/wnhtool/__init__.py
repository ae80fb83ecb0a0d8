# -*- coding: utf-8 -*-
"""
WNHtool: sampling, resolvent diagnostics, bulk kernels and reverse heat flow
for weakly non-Hermitian random matrices.
"""

__version__ = '0.1.0'


def main(argv=None):
    from .WNHtool import main as run
    return run(argv)
