"""
    CSV files.

    Performance files come in two modes::

        # units: ms
        n,onset_p1,onset_p2
        0,0,10
        1,500,505
        ...

        # units: s
        # t0: 0,0.01
        n,ioi_p1,ioi_p2
        1,0.5,0.495
        ...

    Gain files are long-format, one row per step and ordered pair::

        n,i,j,alpha_mean,alpha_var,beta_mean,beta_var,mode

    Numbers are written with 17 significant digits.
"""
import io

import numpy as np
import pandas as pd

from . import logger
from .ensemble_model import GainIndex, IoiSeries, OnsetTimeline
from .interface import FormatError
from .utils import raise_desc, raise_wrapped

__all__ = [
    'PerformanceFile',
    'write_gains',
    'read_gains',
    'write_truth',
    'read_truth',
    'FLOAT_FORMAT',
]

FLOAT_FORMAT = '%.17g'
UNITS = {'ms': 1.0, 's': 1000.0}
MODES = ('onset', 'ioi')
GAIN_COLUMNS = ['n', 'i', 'j', 'alpha_mean', 'alpha_var', 'beta_mean', 'beta_var', 'mode']
TRUTH_COLUMNS = ['n', 'i', 'j', 'alpha', 'beta']


def _split_comments(text):
    """ Returns the ``# key: value`` directives and the remaining CSV text. """
    directives = {}
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith('#'):
            key, sep, value = stripped[1:].partition(':')
            if sep:
                directives[key.strip().lower()] = value.strip()
        elif stripped:
            body.append(line)
    return directives, '\n'.join(body) + '\n'


def _read_table(text, path):
    try:
        return pd.read_csv(io.StringIO(text), float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise_wrapped(FormatError, e, 'Cannot parse the CSV in %s.' % path)


def _read_text(path):
    with open(path) as f:
        return f.read()


def _finite_block(df, columns, path):
    try:
        values = df[columns].to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise_wrapped(FormatError, e, 'Non-numeric values in %s.' % path)
    if not np.all(np.isfinite(values)):
        raise_desc(FormatError, 'Missing or non-finite values in %s.' % path,
                   rows=np.argwhere(~np.isfinite(values))[:, 0].tolist())
    return values


class PerformanceFile(object):
    """
        A performance as stored on disk. ``data`` is always in ms;
        ``units`` and ``mode`` only matter when writing.
    """

    def __init__(self, data, mode='onset', units='ms', onsets=None):
        if mode not in MODES:
            raise_desc(ValueError, 'Unknown mode.', mode=mode)
        if units not in UNITS:
            raise_desc(ValueError, 'Unknown units; use ms or s.', units=units)
        self.data = data
        # exact onsets, when known, so that writing does not re-accumulate IOIs
        self.onsets = onsets
        self.mode = mode
        self.units = units

    @staticmethod
    def from_timeline(timeline, units='ms'):
        return PerformanceFile(IoiSeries(np.diff(timeline.onsets, axis=0), timeline.onsets[0]),
                               'onset', units, onsets=timeline.onsets)

    @staticmethod
    def read(path):
        """
            :raise: FormatError for anything that is not a valid performance.
        """
        directives, body = _split_comments(_read_text(path))
        units = directives.get('units', 'ms')
        if units not in UNITS:
            raise_desc(FormatError, 'Unknown units in %s.' % path, units=units)
        scale = UNITS[units]

        df = _read_table(body, path)
        columns = list(df.columns)
        if not columns or columns[0] != 'n' or len(columns) < 2:
            raise_desc(FormatError, 'The header must start with "n".', path=path,
                       header=columns)
        K = len(columns) - 1
        for mode, prefix in (('onset', 'onset_p'), ('ioi', 'ioi_p')):
            if columns[1:] == ['%s%d' % (prefix, i) for i in range(1, K + 1)]:
                break
        else:
            raise_desc(FormatError, 'Expected onset_p1..onset_pK or ioi_p1..ioi_pK.',
                       path=path, header=columns)

        values = _finite_block(df, columns[1:], path) * scale
        n = _finite_block(df, ['n'], path)[:, 0]
        first = 0 if mode == 'onset' else 1
        if not np.array_equal(n, np.arange(first, first + len(n))):
            raise_desc(FormatError, 'Column n must count up from %d.' % first, path=path)

        try:
            if mode == 'onset':
                data = IoiSeries(np.diff(OnsetTimeline(values).onsets, axis=0), values[0])
            else:
                if 't0' in directives:
                    t0 = _parse_t0(directives['t0'], K, path) * scale
                else:
                    logger.warning('%s has no "# t0:" line; assuming all players '
                                   'start together at 0.' % path)
                    t0 = np.zeros(K)
                data = IoiSeries(values, t0)
        except ValueError as e:
            raise_wrapped(FormatError, e, 'Invalid performance in %s.' % path)
        logger.debug('Read %s (%s mode, K=%d, N=%d).' % (path, mode, data.K, data.N))
        return PerformanceFile(data, mode, units, values if mode == 'onset' else None)

    def write(self, path):
        scale = UNITS[self.units]
        K = self.data.K
        lines = ['# units: %s' % self.units]
        if self.mode == 'onset':
            onsets = self.onsets if self.onsets is not None else self.data.to_timeline().onsets
            values = onsets / scale
            n = np.arange(0, values.shape[0])
            names = ['onset_p%d' % i for i in range(1, K + 1)]
        else:
            values = self.data.iois / scale
            n = np.arange(1, values.shape[0] + 1)
            names = ['ioi_p%d' % i for i in range(1, K + 1)]
            t0 = self.data.initial_onsets / scale
            lines.append('# t0: %s' % ','.join(FLOAT_FORMAT % x for x in t0))
        df = pd.DataFrame(values, columns=names)
        df.insert(0, 'n', n)
        with open(path, 'w') as f:
            f.write('\n'.join(lines) + '\n')
            df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def _parse_t0(text, K, path):
    try:
        t0 = np.array([float(x) for x in text.split(',')])
    except ValueError as e:
        raise_wrapped(FormatError, e, 'Invalid "# t0:" line in %s.' % path)
    if t0.shape != (K,) or not np.all(np.isfinite(t0)):
        raise_desc(FormatError, 'The "# t0:" line needs %d finite values.' % K,
                   path=path, t0=text)
    return t0


def write_gains(path, trajectory):
    """ One row per (n, ordered pair), pairs in index order within each n. """
    df = pd.DataFrame(list(trajectory.rows()), columns=GAIN_COLUMNS)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def read_gains(path):
    """ Reads a gain file back as a DataFrame, checking its layout. """
    df = _read_table(_read_text(path), path)
    if list(df.columns) != GAIN_COLUMNS:
        raise_desc(FormatError, 'Unexpected gain-file header.', path=path,
                   header=list(df.columns))
    if len(df) and not set(df['mode']) <= {'filtered', 'smoothed'}:
        raise_desc(FormatError, 'mode must be filtered or smoothed.', path=path)
    return df


def write_truth(path, truth):
    """ Ground-truth gains: header ``n,i,j,alpha,beta``. """
    rows = []
    for n in range(truth.N):
        for c, (i, j) in enumerate(truth.index):
            rows.append((n + 1, i, j, truth.alpha[n, c], truth.beta[n, c]))
    df = pd.DataFrame(rows, columns=TRUTH_COLUMNS)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def read_truth(path, K):
    """
        :return: ``(alpha, beta)``, each N x K(K-1) in pair-index order.
    """
    df = _read_table(_read_text(path), path)
    if list(df.columns) != TRUTH_COLUMNS:
        raise_desc(FormatError, 'Unexpected truth-file header.', path=path,
                   header=list(df.columns))
    index = GainIndex(K)
    npairs = len(index)
    if npairs == 0:
        return np.zeros((0, 0)), np.zeros((0, 0))
    if len(df) % npairs:
        raise_desc(FormatError, 'Row count is not a multiple of K(K-1).', path=path,
                   rows=len(df), K=K)
    N = len(df) // npairs
    expected_pairs = np.array(list(index) * N)
    expected_n = np.repeat(np.arange(1, N + 1), npairs)
    if (not np.array_equal(df['n'].to_numpy(), expected_n) or
            not np.array_equal(df[['i', 'j']].to_numpy(), expected_pairs)):
        raise_desc(FormatError, 'Rows must be ordered by n, then by pair.', path=path)
    values = _finite_block(df, ['alpha', 'beta'], path)
    return values[:, 0].reshape(N, npairs), values[:, 1].reshape(N, npairs)
