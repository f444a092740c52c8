__version__ = '1.0.0'

import logging

logger = logging.getLogger(__name__)

from .interface import (Contract, ContractNotRespected, ContractSyntaxError,
                        ContractException, EnsyncException, NumericalError,
                        DegenerateCovariance, DegenerateInnovationCovariance,
                        DegeneratePriorCovariance, NotPositiveDefinite,
                        SimulationUnstable, ConfigError, FormatError,
                        OracleSizeError)

from .main import (check, check_multiple, contract_decorator,
                   contracts_decorate as decorate, new_contract,
                   parse_flexible_spec as parse)


# Just make it appear as belonging to the "ensync" module
def contract(*args, **kwargs):
    return contract_decorator(*args, **kwargs)


contract.__doc__ = contract_decorator.__doc__

from .enabling import disable_all, enable_all, all_disabled

from .interface import describe_value, describe_type

# After the argument-checking layer is loaded, load the numerical modules.
from .kalman_core import (GaussianBelief, StepModel, FilterStep, SmoothedStep,
                          predict, update, filter, smooth, forecast,
                          innovation_loglik)
from .ensemble_model import (EnsembleConfig, OnsetTimeline, IoiSeries,
                             GainTrajectory, run_filter, run_smoother)
