# -*- coding: utf-8 -*-
"""
Output writers, matrix readers and the ordered trial pool shared by the
WNHtool commands.

CSV files use ',' separators, LF line endings and 17 significant digits so
that floats round-trip exactly.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np
import pandas as pd

from .errors import InputError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def savecsv(frame, filename):
    frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return filename


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    return value


def savejson(data, filename):
    with open(filename, 'w', newline='\n') as handle:
        json.dump(_plain(data), handle, indent=2, sort_keys=True)
        handle.write('\n')
    return filename


def eigenvalue_frame(spectra):
    """``trial,index,re,im`` rows for (trial, values) pairs."""
    frames = []
    for trial, values in spectra:
        values = np.asarray(values, dtype=np.complex128)
        frames.append(pd.DataFrame({'trial': trial, 'index': np.arange(values.size),
                                    're': values.real, 'im': values.imag}))
    if not frames:
        return pd.DataFrame(columns=['trial', 'index', 're', 'im'])
    return pd.concat(frames, ignore_index=True)


def matrix_frame(matrix, trial=None):
    """``i,j,re,im`` rows of a dense matrix (``trial`` column first when given)."""
    entries = np.asarray(matrix, dtype=np.complex128)
    i, j = np.indices(entries.shape)
    frame = pd.DataFrame({'i': i.ravel(), 'j': j.ravel(), 're': entries.real.ravel(), 'im': entries.imag.ravel()})
    if trial is not None:
        frame.insert(0, 'trial', trial)
    return frame


def readmatrix(filename):
    """Dense complex matrix from an ``i,j,re,im`` CSV."""
    frame = pd.read_csv(filename)
    missing = {'i', 'j', 're', 'im'} - set(frame.columns)
    if missing:
        raise InputError('%s lacks columns %s' % (filename, ', '.join(sorted(missing))))
    n = int(max(frame['i'].max(), frame['j'].max())) + 1
    if len(frame) != n * n:
        raise InputError('%s does not hold a full %d x %d matrix' % (filename, n, n))
    entries = np.zeros((n, n), dtype=np.complex128)
    entries[frame['i'].to_numpy(), frame['j'].to_numpy()] = frame['re'].to_numpy() + 1j * frame['im'].to_numpy()
    return entries


def run_trials(worker, tasks, workers=1, combine=None, initial=None, chunksize=1):
    """worker(task) for every task, consumed in task order.

    With more than one worker the tasks go through ``Pool.imap``, which keeps
    the order, so the output does not depend on ``workers``. Without
    ``combine`` the results come back as a list; with it they are folded as
    ``initial = combine(initial, result)`` as they arrive and the fold is
    returned, so only one partial result is held at a time.
    """
    tasks = list(tasks)
    results = []
    if workers <= 1:
        iterator = map(worker, tasks)
        pool = None
    else:
        pool = Pool(workers)
        iterator = pool.imap(worker, tasks, chunksize)
    try:
        for count, result in enumerate(iterator, start=1):
            if combine is None:
                results.append(result)
            else:
                initial = combine(initial, result)
            logger.debug('trial %d/%d done', count, len(tasks))
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()
    return results if combine is None else initial


@dataclass
class RunContext:
    """Output directory, seed and worker count of one command run."""

    command: str
    out_dir: str = '.'
    seed: int = 0
    workers: int = 1
    version: str = None
    outputs: list = field(default_factory=list)

    def output_path(self, filename):
        os.makedirs(self.out_dir, exist_ok=True)
        path = os.path.join(self.out_dir, filename)
        self.outputs.append(path)
        return path

    def produced(self):
        return [path for path in self.outputs if os.path.exists(path)]

    def write_provenance(self, parameters):
        """<out>/<command>.config.json next to the outputs."""
        os.makedirs(self.out_dir, exist_ok=True)
        config = {'command': self.command, 'version': self.version, 'seed': self.seed, 'workers': self.workers,
                  'parameters': dict(sorted(parameters.items()))}
        return savejson(config, os.path.join(self.out_dir, '%s.config.json' % self.command))
