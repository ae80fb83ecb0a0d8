# -*- coding: utf-8 -*-
"""
WNHtool command line: one subcommand per module under ``Scripts``.

    python -m wnhtool [--seed S] [--workers W] [--out DIR] [--config FILE] [-v|-q] <command> [--param value ...]

Parameters come from the argparse defaults, then from the JSON config file
(``{"<command>": {...}}`` or a flat object), then from the command line.
"""

import argparse
import json
import logging
import re
import sys

from . import __version__
from .Scripts import (Check_Class, Compare_Density, Compute_Spectrum, Correlate_Spectra, Evaluate_Kernel,
                      Reverse_HeatFlow, Sample_Ensemble, Solve_Saddle)
from .Scripts.Utilities.errors import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, InputError, exit_code_for
from .Scripts.Utilities.misc import RunContext

logger = logging.getLogger('wnhtool')

COMMANDS = (Sample_Ensemble, Compute_Spectrum, Check_Class, Solve_Saddle, Evaluate_Kernel, Correlate_Spectra,
            Compare_Density, Reverse_HeatFlow)
GLOBAL_KEYS = ('seed', 'workers', 'out')
# parser bookkeeping, never command parameters
RESERVED_KEYS = GLOBAL_KEYS + ('command', 'config', 'verbose', 'quiet')
NEGATIVE_VALUE = re.compile(r'^-\.?\d')


def merge_config(command, config):
    """(parameter values, global settings) of ``command`` in a loaded config."""
    if not isinstance(config, dict):
        raise InputError('the config file must hold a JSON object')
    section = config.get(command)
    if isinstance(section, dict):
        values = dict(section)
        values.update({k: v for k, v in config.items() if k in GLOBAL_KEYS})
    else:
        values = {k: v for k, v in config.items() if not isinstance(v, dict)}
    values = {k.replace('-', '_'): v for k, v in values.items()}
    settings = {k: values.pop(k) for k in GLOBAL_KEYS if k in values}
    return values, settings


def config_tokens(values):
    """Config values as command-line tokens, so they go through the same argparse checks as flags."""
    tokens = []
    for key, value in sorted(values.items()):
        flag = '--' + key.replace('_', '-')
        if value is None or value is False:
            continue
        if value is True:
            tokens.append(flag)
        elif isinstance(value, (list, tuple)):
            tokens.append('%s=%s' % (flag, ','.join(str(v) for v in value)))
        else:
            tokens.append('%s=%s' % (flag, value))
    return tokens


def load_config(path):
    if path is None:
        return {}
    with open(path) as handle:
        try:
            return json.load(handle)
        except ValueError as exc:
            raise InputError('cannot parse config %s: %s' % (path, exc))


def join_negative_values(argv):
    """``--grid -3:3:0.1`` as ``--grid=-3:3:0.1`` so argparse does not read the value as an option."""
    joined = []
    for token in argv:
        if (joined and NEGATIVE_VALUE.match(token) and joined[-1].startswith('--') and '=' not in joined[-1]):
            joined[-1] = '%s=%s' % (joined[-1], token)
        else:
            joined.append(token)
    return joined


def build_parser():
    """(parser, {command name: subparser})."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='master seed (64-bit unsigned)')
    common.add_argument('--workers', type=int, default=argparse.SUPPRESS, help='worker processes for trials')
    common.add_argument('--out', default=argparse.SUPPRESS, help='output directory')
    common.add_argument('--config', default=argparse.SUPPRESS, help='JSON config file')
    common.add_argument('-v', '--verbose', action='count', default=argparse.SUPPRESS)
    common.add_argument('-q', '--quiet', action='count', default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog='wnhtool', parents=[common],
                                     description='Weakly non-Hermitian random matrix toolkit')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    commands = {}
    for module in COMMANDS:
        sub = subparsers.add_parser(module.NAME, parents=[common], help=module.HELP, description=module.DESCRIPTION)
        module.add_arguments(sub)
        sub.set_defaults(module=module)
        commands[module.NAME] = sub
    return parser, commands


def configure_logging(verbosity):
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG if verbosity > 0 else logging.ERROR)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    root = logging.getLogger('wnhtool')
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def parse_arguments(argv):
    """Parse once to find the command and the config, then again with the config as defaults.

    :returns: (namespace, global settings)
    """
    argv = join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    config = load_config(getattr(args, 'config', None))
    values, settings = merge_config(args.command, config)
    if values:
        sub = commands[args.command]
        configured = vars(sub.parse_args(config_tokens(values)))
        unknown = sorted(set(values) - set(configured) | set(values) & set(RESERVED_KEYS))
        if unknown:
            raise InputError('unknown parameter(s) for %s: %s' % (args.command, ', '.join(unknown)))
        sub.set_defaults(**{k: configured[k] for k in values})
        args = parser.parse_args(argv)
    settings.update({k: getattr(args, k) for k in GLOBAL_KEYS if hasattr(args, k)})
    return args, settings


def main(argv=None):
    configure_logging(0)
    try:
        args, settings = parse_arguments(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except Exception as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        return exit_code_for(exc)
    configure_logging(getattr(args, 'verbose', 0) - getattr(args, 'quiet', 0))

    context = RunContext(args.command, settings.get('out') or '.', int(settings.get('seed') or 0),
                         max(1, int(settings.get('workers') or 1)), __version__)
    parameters = {k: v for k, v in vars(args).items() if k not in RESERVED_KEYS and k != 'module'}
    try:
        passed = args.module.run(args, context)
    except Exception as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        details = getattr(exc, 'details', None)
        if details:
            logger.error('details: %s', details)
        return exit_code_for(exc)
    finally:
        if context.produced():
            context.write_provenance(parameters)
    return EXIT_CHECK_FAILED if passed is False else EXIT_OK
