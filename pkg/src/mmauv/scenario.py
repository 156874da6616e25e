"""Remus 100 parameterization and the open-loop depth-cycling run.

The vehicle dives under a constant surge force while the internal mass
is pushed forward; at the deep threshold the mass force reverses and the
vehicle climbs; at the shallow threshold it reverses again. The latch
has hysteresis: nothing switches between the thresholds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .engine import (HYDRO_COMPENSATED, LinearQuadraticDamping, RailSpec,
                     SimState, _RailStepper, project_to_rail)
from .errors import SimulationError, ValidationError
from .hydrostatics import HydrostaticEnv
from .mass import VehicleParams, ellipsoid_inertia

NEWTON_EULER = "newton-euler"
WOOLSEY = "woolsey"
FORMULATIONS = (NEWTON_EULER, WOOLSEY)

#: Column order of trajectory arrays and of the CSV writer.
COLUMNS = ("t", "x", "y", "z", "phi", "theta", "psi",
           "u", "v", "w", "p", "q", "r",
           "x_p", "vpx", "vpy", "vpz", "tau_X", "tau_Xp", "kinetic")

ADDED_MASS_KEYS = ("X_ud", "Y_vd", "Z_wd", "K_pd", "M_qd", "N_rd")


class Phase(enum.Enum):
    MASS_FORWARD = 1
    MASS_BACKWARD = -1


@dataclass(frozen=True)
class ForceScheduleState:
    phase: Phase = Phase.MASS_FORWARD
    last_switch_time: float = 0.0


@dataclass(frozen=True)
class ScenarioSpec:
    duration: float
    dt: float
    surge_force: float
    mass_force_magnitude: float
    depth_deep: float
    depth_shallow: float
    rail: RailSpec
    initial_state: SimState | None = None

    def __post_init__(self) -> None:
        if not self.duration > 0.0:
            raise ValidationError("scenario duration must be positive")
        if not self.dt > 0.0:
            raise ValidationError("scenario dt must be positive")
        if not (0.0 < self.depth_shallow < self.depth_deep):
            raise ValidationError(
                "depth thresholds must satisfy 0 < depth_shallow < "
                f"depth_deep (got {self.depth_shallow} and {self.depth_deep})")


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    eta: np.ndarray
    nu: np.ndarray
    x_p: float
    v_p: np.ndarray
    tau_X: float
    tau_Xp: float
    kinetic: float


@dataclass
class Trajectory:
    """Sampled run, one row per record in COLUMNS order.

    diagnostic is None for a completed run; an aborted run keeps the
    rows integrated so far and the failure description.
    """

    data: np.ndarray
    diagnostic: str | None = None

    @property
    def aborted(self) -> bool:
        return self.diagnostic is not None

    def __len__(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, COLUMNS.index(name)]

    def records(self) -> Iterator[TrajectoryRecord]:
        for row in self.data:
            yield TrajectoryRecord(
                t=float(row[0]), eta=row[1:7].copy(), nu=row[7:13].copy(),
                x_p=float(row[13]), v_p=row[14:17].copy(),
                tau_X=float(row[17]), tau_Xp=float(row[18]),
                kinetic=float(row[19]))


def remus_params(source_values: Mapping) -> VehicleParams:
    """Vehicle parameters from the configured source values.

    Expects mass_total, semi_axis_a, semi_axis_b, rho, the six added-mass
    coefficients (SNAME-signed, e.g. X_ud = -0.84), and optionally
    gravity and displaced_volume. One sixth of the total mass is the
    moving mass; the static mass sits at the origin; the rigid-body
    inertia is that of the solid spheroid carrying the static mass.
    """
    m = float(source_values["mass_total"])
    a = float(source_values["semi_axis_a"])
    b = float(source_values["semi_axis_b"])
    rho = float(source_values["rho"])
    gravity = float(source_values.get("gravity", 9.81))
    if not m > 0.0:
        raise ValidationError("mass_total must be positive")
    added = source_values["added_mass"]
    missing = [k for k in ADDED_MASS_KEYS if k not in added]
    if missing:
        raise ValidationError(f"added_mass is missing {missing}")
    coeffs = np.array([float(added[k]) for k in ADDED_MASS_KEYS])
    if np.any(coeffs > 0.0):
        raise ValidationError(
            "added-mass coefficients use the SNAME sign convention and "
            "must be nonpositive")

    m_p = m / 6.0
    m_s = m - m_p
    volume = m / rho
    if "displaced_volume" in source_values:
        volume = float(source_values["displaced_volume"])
        if abs(rho * volume - m) > 1e-9 * m:
            raise ValidationError(
                "displaced_volume breaks neutral buoyancy "
                f"(rho*volume = {rho * volume!r}, mass_total = {m!r})")
    return VehicleParams(
        m_s=m_s, m_p=m_p, r_s=np.zeros(3),
        I_g=ellipsoid_inertia(m_s, a, b),
        added_linear=-coeffs[0:3], added_angular=-coeffs[3:6],
        rho=rho, displaced_volume=volume, gravity=gravity,
        semi_axes=(a, b))


def _schedule_step(spec: ScenarioSpec, z: float, sched: ForceScheduleState,
                   t: float) -> tuple[np.ndarray, ForceScheduleState]:
    phase = sched.phase
    if phase is Phase.MASS_FORWARD and z >= spec.depth_deep:
        sched = ForceScheduleState(Phase.MASS_BACKWARD, t)
    elif phase is Phase.MASS_BACKWARD and z <= spec.depth_shallow:
        sched = ForceScheduleState(Phase.MASS_FORWARD, t)
    tau = np.zeros(9)
    tau[0] = spec.surge_force
    tau[6:9] = (sched.phase.value * spec.mass_force_magnitude) \
        * spec.rail.axis
    return tau, sched


def force_schedule(spec: ScenarioSpec, state: SimState,
                   sched: ForceScheduleState, t: float
                   ) -> tuple[np.ndarray, ForceScheduleState]:
    """Constant surge force plus the depth-latched moving-mass force.

    The mass force acts along the rail axis, +magnitude in the forward
    phase and -magnitude in the backward phase. The phase flips to
    backward at z >= depth_deep, to forward at z <= depth_shallow, and
    holds in between.
    """
    return _schedule_step(spec, float(state.eta[2]), sched, t)


def run_scenario(params: VehicleParams, env: HydrostaticEnv,
                 spec: ScenarioSpec, formulation: str = NEWTON_EULER, *,
                 damping: LinearQuadraticDamping | None = None,
                 track_cg: bool = False) -> Trajectory:
    """Integrate the depth-cycling scenario and record every step.

    formulation selects the Newton-Euler model or the collocated
    (CG-substituted) comparison model. track_cg runs the Newton-Euler
    pipeline with the static-mass offset moved to the instantaneous
    combined CG; with that flag the two formulations describe the same
    vehicle, which is what the equivalence check exercises.

    The schedule is evaluated at step boundaries with the depth at the
    step start; switching-time quantization error is below one dt.
    Engine failures abort the run and return the partial trajectory with
    a diagnostic.
    """
    if formulation not in FORMULATIONS:
        raise ValidationError(
            f"formulation must be one of {FORMULATIONS}, got {formulation!r}")
    stepper = _RailStepper(
        params, env, spec.rail, hydro=HYDRO_COMPENSATED, damping=damping,
        substitute_cg=(formulation == WOOLSEY) or track_cg,
        force_route="matrix" if formulation == WOOLSEY else "gradient")

    dt = spec.dt
    n_steps = int(round(spec.duration / dt))
    if n_steps < 1 or abs(n_steps * dt - spec.duration) > 1e-9 * dt:
        raise ValidationError("duration must be a positive multiple of dt")

    state0 = spec.initial_state
    if state0 is None:
        state0 = SimState.rest(spec.rail.position(0.0))
    y = stepper.pack(project_to_rail(state0, spec.rail))

    axis = spec.rail.axis
    origin = spec.rail.origin
    data = np.empty((n_steps + 1, 20))
    sched = ForceScheduleState()
    diagnostic = None
    rows = 0
    for i in range(n_steps + 1):
        t = i * dt
        tau, sched = _schedule_step(spec, float(y[2]), sched, t)
        row = data[i]
        row[0] = t
        row[1:7] = y[0:6]
        row[7:13] = y[7:13]
        s = y[6]
        r_p = origin + s * axis
        row[13] = r_p[0]
        row[14:17] = y[7:10] + np.cross(y[10:13], r_p) + y[13] * axis
        row[17] = tau[0]
        row[18] = float(axis @ tau[6:9])
        rows = i + 1
        if i == n_steps:
            row[19] = stepper.kinetic(y)
            break
        try:
            y, kinetic = stepper.step(y, tau, dt)
        except SimulationError as exc:
            row[19] = stepper.kinetic(y)
            diagnostic = f"{type(exc).__name__} at t = {t:g} s: {exc}"
            break
        row[19] = kinetic
    return Trajectory(data[:rows], diagnostic)
