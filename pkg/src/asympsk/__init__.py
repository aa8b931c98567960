"""Asymmetric PSK for joint information and power transfer over multi-carrier links."""

__version__ = "0.1.0"

from .constellation import (
    Constellation,
    ConstellationError,
    InvalidOrderError,
    InvalidRangeError,
    PmfError,
    build_constellation,
    flipped,
    project_to_simplex,
    uniform_pmf,
    validate_pmf,
    vertex_pmf,
)
from .energy import (
    DiodeParams,
    EnergyParams,
    dbm_to_watts,
    scaling_continuous,
    scaling_discrete,
    taylor_coefficients,
    zdc_from_moments,
)
from .info_rate import (
    AwgnChannel,
    ConvergenceError,
    DecisionRegions,
    DmcChannel,
    QuadratureError,
    ba_optimal_input,
    blahut_arimoto,
    map_decision_regions,
    max_mutual_information,
    mutual_information,
    mutual_information_mc,
    output_grid,
    phase_pdf,
    q_function,
    sum_rate,
    transition_matrix,
)
from .phase_stats import (
    ThetaDistribution,
    continuous_theta_pdf,
    expected_cos_continuous,
    gaussian_theta_approx,
    theta_pmf,
    theta_support,
    xi,
)
from .region import (
    EsmTable,
    RegionPoint,
    esm_oracle,
    esm_table,
    grad_entropy,
    grad_xi,
    kkt_residual,
    simplex_lattice,
    solve_region_point,
    sweep_region,
)
from .waveform import (
    ConstellationPhase,
    MonteCarloResult,
    TxConfig,
    UniformPhase,
    monte_carlo_zdc,
    synthesize_envelope,
)
