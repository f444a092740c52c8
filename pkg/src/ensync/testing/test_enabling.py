import os

from ensync import check, contract
from ensync.enabling import ENV_VARIABLE, Switches, all_disabled, disable_all, enable_all


def test_disable_enable_all():
    original_state = Switches.disable_all
    try:
        enable_all()
        assert not all_disabled()

        disable_all()
        assert all_disabled()

        enable_all()
        assert not all_disabled()
    finally:
        Switches.disable_all = original_state


def test_environment_variable_blocks_enable():
    original_state = Switches.disable_all
    original_env = os.environ.get(ENV_VARIABLE, None)
    try:
        Switches.disable_all = True
        os.environ[ENV_VARIABLE] = '1'
        enable_all()
        assert all_disabled()

        del os.environ[ENV_VARIABLE]
        enable_all()
        assert not all_disabled()
    finally:
        Switches.disable_all = original_state
        if original_env is not None:
            os.environ[ENV_VARIABLE] = original_env
        elif ENV_VARIABLE in os.environ:
            del os.environ[ENV_VARIABLE]


def test_disabled_checks_are_skipped():
    original_state = Switches.disable_all
    try:
        enable_all()

        @contract(a='int')
        def f(a):
            return a

        disable_all()
        assert f('not an int') == 'not an int'
        assert check('int', 'not an int') == {}
    finally:
        Switches.disable_all = original_state
