"""Link-level simulator for downlink coordinated beamforming under OCI and CSI errors."""

from .errors import (ConfigParseError, ConfigValidationError, InvalidArgumentError,
                     NumericalFailureError)
from .metrics import (RateBounds, SumRateSample, cluster_sum_rate, relative_oci_power,
                      stream_sinr, theory_bounds)
from .model import (PERFECT_CSI, ChannelRealization, ClusterConfig, ReceptionNoise,
                    Scenario)
from .schemes import (SCHEMES, BeamformerSolution, DesignProblem, SchemeOptions,
                      build_problem)
from .simulate import ResultTable, TrialResult, derive_trial_seed, run_sweep, run_trial

__version__ = "0.1.0"

__all__ = [
    "ConfigParseError", "ConfigValidationError", "InvalidArgumentError", "NumericalFailureError",
    "RateBounds", "SumRateSample", "cluster_sum_rate", "relative_oci_power", "stream_sinr",
    "theory_bounds", "PERFECT_CSI", "ChannelRealization", "ClusterConfig", "ReceptionNoise",
    "Scenario", "SCHEMES", "BeamformerSolution", "DesignProblem", "SchemeOptions",
    "build_problem", "ResultTable", "TrialResult", "derive_trial_seed", "run_sweep", "run_trial",
]
