# -*- coding: utf-8 -*-
"""
argparse value types and the ensemble options shared by the WNHtool
subcommands.

Every type accepts the string form a user types and the string form of a JSON
config value (lists arrive joined by commas), so the same conversion runs
for flags and for config defaults.
"""

import argparse

from .ensembles import ENSEMBLES, GAUSSIAN, SMOOTHED, AtomDistribution, EnsembleSpec


def _split(text, separators=','):
    for sep in separators[1:]:
        text = text.replace(sep, separators[0])
    return [item.strip() for item in text.split(separators[0]) if item.strip()]


def integer(minimum=None):
    def convert(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError('not an integer: %r' % text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError('not an integer: %r' % text)
        value = int(value)
        if minimum is not None and value < minimum:
            raise argparse.ArgumentTypeError('must be >= %d, got %d' % (minimum, value))
        return value
    return convert


def number(minimum=None, maximum=None, strict=False):
    """Float in [minimum, maximum]; ``strict`` excludes the minimum."""
    def convert(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError('not a number: %r' % text)
        if minimum is not None and (value < minimum or (strict and value == minimum)):
            raise argparse.ArgumentTypeError('must be %s %s, got %s' % ('>' if strict else '>=', minimum, value))
        if maximum is not None and value > maximum:
            raise argparse.ArgumentTypeError('must be <= %s, got %s' % (maximum, value))
        return value
    return convert


def number_list(cast=float):
    """Comma separated numbers, e.g. ``0.2,0.1,0.05``."""
    def convert(text):
        try:
            values = [float(item) for item in _split(text)]
        except ValueError:
            raise argparse.ArgumentTypeError('not a list of numbers: %r' % text)
        if cast is int:
            if not all(v.is_integer() for v in values):
                raise argparse.ArgumentTypeError('not a list of integers: %r' % text)
            values = [int(v) for v in values]
        if not values:
            raise argparse.ArgumentTypeError('needs at least one number')
        return values
    return convert


def value_range(text):
    """``start:stop:step``, both ends included, e.g. ``-3:3:0.1``."""
    try:
        parts = [float(item) for item in _split(text, ':,')]
    except ValueError:
        raise argparse.ArgumentTypeError('not a start:stop:step range: %r' % text)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError('expected start:stop:step, got %r' % text)
    start, stop, step = parts
    if not (step > 0.0 and stop >= start):
        raise argparse.ArgumentTypeError('empty range %r' % text)
    return start, stop, step


def add_ensemble_arguments(parser, ensemble=True, n=64, tau_n=0.0, with_t=True):
    """Options of an EnsembleSpec (and optionally the ensemble name).

    ``tau_n=None`` leaves tau_N unset so the command can default it to 1/N.
    """
    if ensemble:
        parser.add_argument('--ensemble', choices=ENSEMBLES, default='gue', help='ensemble (default: gue)')
    parser.add_argument('--n', type=integer(2), default=n, help='matrix dimension N (default: %d)' % n)
    parser.add_argument('--tau-n', type=number(0.0, 1.0), default=tau_n,
                        help='non-Hermiticity tau_N in [0, 1] (default: %s)' % ('1/N' if tau_n is None else tau_n))
    if with_t:
        parser.add_argument('--t', type=number(0.0), default=0.0, help='Gauss-divisible time t (default: 0)')
    parser.add_argument('--atom', choices=(GAUSSIAN, SMOOTHED), default=GAUSSIAN, help='atom distribution')
    parser.add_argument('--atom-coefficients', type=number_list(), default=[0.0, 0.0, 0.0, 0.0],
                        help='coefficients a_1..a_4 of V')
    parser.add_argument('--atom-delta', type=number(0.0, 1.0), default=0.5,
                        help='margin delta in V >= -(1-delta) x^2 (default: 0.5)')


def ensemble_spec(args, seed, tau_N=None, t=None):
    atom = AtomDistribution(args.atom, tuple(args.atom_coefficients), args.atom_delta)
    if tau_N is None:
        tau_N = args.tau_n
    if t is None:
        t = getattr(args, 't', 0.0)
    return EnsembleSpec(args.n, tau_N, t, atom, seed)
