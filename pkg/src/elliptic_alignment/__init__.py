"""Field-free alignment of a linear molecule kicked by an elliptically polarized pulse."""

__version__ = "0.1.0"

from .angular import (
    BasisBlock,
    OperatorMatrix,
    build_cos2_theta_x,
    build_cos2_theta_y,
    build_cos2_theta_z,
)
from .dynamics import (
    TAU_ROT,
    KickOperator,
    PhysicalPulse,
    PulseParams,
    WavePacket,
    apply_kick,
    free_evolve,
    integrate_timedependent,
    kick_strength_from_pulse,
    prepare_kick,
)
from .errors import ConvergenceError, ValidationError
from .observables import AngularGrid, TraceSeries, angular_distribution, expectation, kerr_signal
from .scan import ScanResult, ellipticity_scan, find_crossing, max_over_time
from .thermal import EnsembleSpec, ensemble_trace, enumerate_initial_states
