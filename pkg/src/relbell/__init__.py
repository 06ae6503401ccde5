"""CHSH statistics of relativistic spin-1/2 singlet pairs whose spins are
measured along the apparatus magnetic field seen in each particle's rest
frame."""
from .averaging import (
    AcceptanceCone,
    QuadratureSpec,
    averaged_correlators,
    averaged_correlators_s,
    averaged_s,
    cone_statistics,
)
from .correlations import (
    REST_FRAME,
    TSIRELSON,
    ChshSettings,
    FrameConfig,
    MomentumShell,
    chsh_s,
    chsh_s_velocity,
    direction,
    particle_a_axis,
    quantization_axis,
    singlet_expectation,
)
from .kinematics import (
    EmField,
    boost_field,
    gamma,
    rest_frame_field,
    rest_frame_field_boosted,
    rest_frame_field_composed,
)
from .solvers import OptimizationResult, optimize_directions, solve_compensating_field

__version__ = "0.1.0"
