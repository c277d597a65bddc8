"""Pseudospectral toolkit for the quintic focusing NLS-Szego equation.

Simulation of i u_t + u_xx = lambda Pi(|u|^{2m} u) on a periodized line,
variational computation of the associated Gagliardo-Nirenberg ground states,
and the experiment layer tying the two together (traveling waves, orbital
stability, scattering diagnostics).
"""

from .errors import InvalidArgumentError, NumericalBlowupError
from .grid import Grid, make_grid
from .field import (
    HardyField,
    SpectralField,
    hdot_norm,
    hs_norm,
    inner_product,
    lp_norm,
    mass_center,
    momentum,
    phase_rotate,
    projected_nonlinearity,
    read_snapshot,
    resample,
    spectral_derivative,
    szego_project,
    time_reflect,
    translate,
    write_snapshot,
)
from .profiles import (
    PeriodicSoliton,
    gaussian_hardy,
    periodic_soliton,
    qplus,
    reference_profile,
    traveling_qc,
    weinstein_r,
    zero_mean_soliton,
)
from .evolution import (
    ConservedSet,
    EvolutionParams,
    TrajectoryRecord,
    conserved_set,
    duhamel_scattering_state,
    evolve,
    free_decay_profile,
    free_propagate,
    step_rk4,
    step_strang,
)
from .functional import (
    FunctionalParams,
    elliptic_residual,
    evaluate_functional,
    first_variation,
    fit_elliptic_multipliers,
)
from .canonical import canonicalize, linear_phase_fit, positive_rearrangement
from .minimize import (
    GroundStateResult,
    Multipliers,
    SobolevRatioResult,
    default_ground_state,
    minimize_functional,
    multipliers_from_norms,
    sobolev_ratio_min,
)
from .experiments import (
    ExperimentConfig,
    OrbitDistance,
    RunReport,
    band_noise,
    orbit_distance,
    scattering_run,
    stability_run,
    sweep,
    threshold_scan,
    traveling_wave_run,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
