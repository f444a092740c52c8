from . import logger
import os

ENV_VARIABLE = 'ENSYNC_DISABLE_CONTRACTS'


class Switches:
    # default to ENV variable
    disable_all = bool(os.environ.get(ENV_VARIABLE, False))


def disable_all():
    """ Disables all argument checks. """
    Switches.disable_all = True
    logger.info('All contracts checking disabled.')


def enable_all():
    """
    Enables all argument checks.
    Can be overridden by the ENSYNC_DISABLE_CONTRACTS environment variable.
    """
    if not os.environ.get(ENV_VARIABLE, False):
        Switches.disable_all = False
        logger.info('All contracts checking enabled.')


def all_disabled():
    """ Returns true if all argument checks are disabled. """
    return Switches.disable_all
