"""
    ``key = value`` configuration files for :py:class:`EnsembleConfig`::

        # quartet, default noise levels
        sigma_T2 = 500
        rho_alpha = -0.1   # within-performer correlation
        init_Tr_var = None

    Keys are the field names of :py:class:`EnsembleConfig`.
"""
from pyparsing import (Optional, ParseException, Regex, Suppress, Word, alphanums,
                       alphas, python_style_comment)

from .ensemble_model import EnsembleConfig
from .interface import ConfigError, FormatError, Where
from .utils import raise_desc

__all__ = ['parse_config', 'read_config', 'load_config', 'dump_config']

key = Word(alphas + '_', alphanums + '_')('key')
value = Regex(r'[^#\s]([^#]*[^#\s])?')('value')
assignment = key + Suppress('=') + value
config_line = Optional(assignment) + Suppress(Optional(python_style_comment))


def _coerce(name, spec, text):
    if text == 'None':
        return None
    try:
        if spec.startswith('int'):
            return int(text)
        return float(text)
    except ValueError:
        raise_desc(ConfigError, 'Cannot read a number for %r.' % name, value=text)


def parse_config(text, source='<string>'):
    """
        :return: dict of the values found, already typed.
        :raise: FormatError for syntax errors, ConfigError for unknown keys.
    """
    specs = dict((name, spec) for name, spec, _ in EnsembleConfig.FIELDS)
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            tokens = config_line.parse_string(line, parse_all=True)
        except ParseException as e:
            where = Where(line, min(e.loc, len(line)))
            raise FormatError('%s:%d: expected "key = value".\n%s' %
                              (source, lineno, where)) from None
        if 'key' not in tokens:
            continue
        name = tokens['key']
        if name not in specs:
            raise_desc(ConfigError, '%s:%d: unknown key %r.' % (source, lineno, name),
                       known=', '.join(EnsembleConfig.FIELD_NAMES))
        if name in values:
            raise FormatError('%s:%d: %r given twice.' % (source, lineno, name))
        values[name] = _coerce(name, specs[name], tokens['value'])
    return values


def read_config(path):
    with open(path) as f:
        return parse_config(f.read(), source=path)


def load_config(path, K):
    """
        The configuration for a K-player performance: defaults, overridden
        by the file if ``path`` is given.
    """
    values = read_config(path) if path is not None else {}
    if values.get('K', K) != K:
        raise_desc(ConfigError, 'The configuration is for a different ensemble size.',
                   config_K=values['K'], data_K=K)
    values['K'] = K
    return EnsembleConfig(**values)


def dump_config(config):
    """ The text of a file that :py:func:`parse_config` reads back to ``config``. """
    lines = []
    for name in EnsembleConfig.FIELD_NAMES:
        v = getattr(config, name)
        if v is None:
            lines.append('%s = None' % name)
        elif isinstance(v, float):
            lines.append('%s = %.17g' % (name, v))
        else:
            lines.append('%s = %d' % (name, v))
    return '\n'.join(lines) + '\n'
