"""Manoeuvring model for a submerged vehicle with an internal moving mass.

The model couples a six degree of freedom rigid body with a point mass
sliding on a body-fixed rail. Forces are assembled either from energy
gradients (Kirchhoff form) or from Coriolis/centripetal matrices; a
center-of-gravity substitution reproduces the lumped formulation of
Woolsey and Leonard (2002) for cross-validation.
"""

from .config import (RunConfig, load_config, packaged_config_text,
                     parse_config)
from .coriolis import (EnergyGradients, build_C, build_C_P, coriolis_force,
                       energy_gradients, gradient_check, kinetic_energy,
                       kirchhoff_force)
from .engine import (HYDRO_COMPENSATED, HYDRO_FULL, HYDRO_OFF, EnergyReport,
                     LinearQuadraticDamping, RailSpec, SimState,
                     StateDerivative, energy_report, project_to_rail,
                     rk4_step, solve_accelerations, state_derivative)
from .errors import (ConfigError, GridMismatch, NotNeutrallyBuoyant,
                     NotPositiveDefinite, OutputError, ParseError,
                     SimulationError, SingularAttitude, SingularMatrix,
                     ValidationError)
from .hydrostatics import (HydrostaticEnv, env_from_params,
                           restoring_compensated, restoring_full,
                           restoring_remus, restoring_split, weight_in_body)
from .kinematics import (EPS_SING, angular_transform, attitude_is_singular,
                         eta_dot, r_p_dot, rotation_matrix, skew)
from .mass import (VehicleParams, body_inertia, build_M_A, build_M_P,
                   build_M_S, build_M_total, center_of_gravity,
                   ellipsoid_inertia, spheroid_added_mass, validate_params)
from .output import (HEADER, metadata_path, read_trajectory, write_metadata,
                     write_trajectory)
from .scenario import (COLUMNS, NEWTON_EULER, WOOLSEY, ForceScheduleState,
                       Phase, ScenarioSpec, Trajectory, TrajectoryRecord,
                       force_schedule, remus_params, run_scenario)
from .woolsey import (STATE_COLUMNS, ChannelDiff, ComparisonReport,
                      compare_trajectories, substituted_params,
                      woolsey_state_derivative)

__version__ = "0.1.0"
