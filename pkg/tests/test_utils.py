#!/usr/bin/env python
"""
Tests for the message helpers in ensync.utils.
"""
import numpy as np
import pytest

from ensync.interface import ConfigError, NumericalError, describe_value
from ensync.utils import (check_isinstance, format_obs, indent, raise_desc,
                          raise_type_mismatch, raise_wrapped)


def test_indent():
    assert indent("line1\nline2", "+ ") == "+ line1\n+ line2"
    assert indent("line1\nline2", "+ ", first="* ") == "* line1\n+ line2"
    assert indent(123, "+ ") == "+ 123"


def test_check_isinstance():
    check_isinstance(0.25, float)
    with pytest.raises(ValueError):
        check_isinstance('0.25', float)


def test_raise_type_mismatch():
    with pytest.raises(ValueError) as excinfo:
        raise_type_mismatch(4, str, context='ensemble size')
    message = str(excinfo.value)
    assert 'expected: ' in message
    assert 'obtained: ' in message
    assert 'context: ' in message


def test_format_obs_shows_arrays():
    result = format_obs(dict(W=np.eye(2), step=3))
    assert result.startswith(' W: array[2x2](float64)')
    assert describe_value(np.eye(2)).startswith('array[2x2](float64) ')
    assert '\nstep: Instance of int.' in result


def test_format_obs_truncates_large_values():
    result = format_obs(dict(name='x' * 1000))
    assert result.endswith(' [truncated]')
    assert len(result) < 600


def test_raise_desc():
    with pytest.raises(NumericalError) as excinfo:
        raise_desc(NumericalError, 'Covariance is not PSD.', min_eig=-0.5)
    message = str(excinfo.value)
    assert message.startswith('Covariance is not PSD.')
    assert 'min_eig' in message

    with pytest.raises(ConfigError) as excinfo:
        raise_desc(ConfigError, 'Unknown key.', args_first=True, key='tempo')
    message = str(excinfo.value)
    assert message.find('key') < message.find('Unknown key.')


def test_raise_wrapped():
    try:
        float('lots')
    except ValueError as e:
        with pytest.raises(ConfigError) as excinfo:
            raise_wrapped(ConfigError, e, 'Invalid value.', key='v_alpha')
    message = str(excinfo.value)
    assert 'Invalid value.' in message
    assert 'v_alpha' in message
    assert "| could not convert string to float: 'lots'" in message
    assert isinstance(excinfo.value.__cause__, ValueError)
