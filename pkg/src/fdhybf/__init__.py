"""Hybrid beamforming and combining for the K-pair full-duplex mmWave
massive-MIMO interference channel: channel models, weighted-sum-rate
optimizer, fully digital benchmarks and a Monte-Carlo sweep harness."""

from .channels import (
    ArrayGeometry,
    ChannelSet,
    ClusterChannelParams,
    SiChannelParams,
    draw_channel_set,
    draw_cluster_channel,
    draw_si_channel,
    si_los_channel,
    ula_response,
)
from .config import SystemConfig, load_config, parse_config, serialize_config
from .covariance import (
    BeamformerState,
    CovarianceWorkspace,
    assemble_covariances,
    compute_mmse_digital_combiner,
    compute_wsr,
    transmit_covariance,
)
from .benchmarks import run_fully_digital_fd, run_fully_digital_hd
from .errors import (
    ConditioningError,
    ConfigError,
    DimensionError,
    DivergenceError,
    FdhybfError,
    GeometryError,
    PencilSizeError,
)
from .harness import dump_channels, run_experiment
from .linalg import (
    GevdResult,
    hermitian_gevd,
    kron,
    phase_project,
    positive_part_diag,
    unvec,
    vec,
)
from .optimizer import (
    GradientPair,
    SigmaPair,
    SolverOptions,
    TrialResult,
    bisect_multiplier,
    compute_gradients,
    compute_sigma_matrices,
    run_hybf,
    update_analog_beamformer,
    update_analog_combiner,
    update_digital_beamformer,
    update_power_allocation,
)

__version__ = "0.1.0"
