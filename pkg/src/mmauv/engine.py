"""Equations of motion: assembly, linear solve, RK4 integration, rail constraint.

The free model carries an 18-dimensional state (pose, mass position, body
velocities, mass velocity). When the moving mass rides its rail the state
collapses to 14 dimensions (pose, stroke coordinate s, body velocities,
stroke rate); the integrator then works in rail coordinates directly, so
the off-axis components of r_p are exact zeros of the representation
instead of quantities a projection has to clean up. The derivative of the
stroke rate is obtained by solving the free 9x9 system and keeping only
the axial component of the relative mass acceleration; the lateral part
is carried by the hull. This is the small-step limit of stepping the free
model and projecting afterwards, and it preserves the integrator's
fourth-order convergence between stop and switching events.

Stroke-limit contact is perfectly inelastic: an outward stroke rate at a
limit is zeroed and the mass is held until the axial force reverses.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import lapack

from .coriolis import build_C, build_C_P, kirchhoff_force
from .errors import (NotNeutrallyBuoyant, SingularAttitude, SingularMatrix,
                     ValidationError)
from .hydrostatics import (HydrostaticEnv, restoring_compensated,
                           restoring_full, restoring_split, weight_in_body)
from .kinematics import EPS_SING, attitude_is_singular, eta_dot, r_p_dot
from .mass import (VehicleParams, build_M_A, build_M_P, build_M_S,
                   build_M_total, center_of_gravity)

HYDRO_FULL = "full"
HYDRO_COMPENSATED = "compensated"
HYDRO_OFF = "off"

SOLVE_RTOL = 1e-10

# Stroke rates below this are treated as rest when deciding whether the
# mass is pressed against a stop.
REST_SPEED = 1e-14


def _cross3(a, b) -> np.ndarray:
    """Cross product for length-3 arrays; avoids np.cross ufunc overhead."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


@dataclass(frozen=True)
class SimState:
    """Free-model state: pose, mass position, body velocities, mass velocity.

    v_p is the absolute velocity of the moving mass expressed in the body
    frame (not the velocity relative to the hull).
    """

    eta: np.ndarray
    r_p: np.ndarray
    nu: np.ndarray
    v_p: np.ndarray

    def __post_init__(self) -> None:
        for name, n in (("eta", 6), ("r_p", 3), ("nu", 6), ("v_p", 3)):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
            object.__setattr__(self, name, arr)

    @classmethod
    def rest(cls, r_p=(0.0, 0.0, 0.0)) -> "SimState":
        """All velocities and pose zero, mass parked at r_p."""
        return cls(np.zeros(6), np.asarray(r_p, dtype=float), np.zeros(6),
                   np.zeros(3))

    @property
    def nu_prime(self) -> np.ndarray:
        out = np.empty(9)
        out[0:6] = self.nu
        out[6:9] = self.v_p
        return out


@dataclass(frozen=True)
class StateDerivative:
    eta_dot: np.ndarray
    r_p_dot: np.ndarray
    nu_prime_dot: np.ndarray

    def as_vector(self) -> np.ndarray:
        """Flatten in the state packing order [eta, r_p, nu, v_p]."""
        return np.concatenate(
            [self.eta_dot, self.r_p_dot, self.nu_prime_dot])


@dataclass(frozen=True)
class RailSpec:
    """Line segment in the body frame that carries the moving mass."""

    origin: np.ndarray
    axis: np.ndarray
    stroke_min: float
    stroke_max: float

    def __post_init__(self) -> None:
        origin = np.asarray(self.origin, dtype=float)
        axis = np.asarray(self.axis, dtype=float)
        if origin.shape != (3,) or axis.shape != (3,):
            raise ValidationError("rail origin and axis must be 3-vectors")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > 1e-9:
            raise ValidationError(
                f"rail axis must be a unit vector (norm {norm:.12g})")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "axis", axis / norm)
        if not (self.stroke_min < self.stroke_max):
            raise ValidationError("rail stroke_min must be below stroke_max")

    def position(self, s: float) -> np.ndarray:
        return self.origin + s * self.axis

    def coordinate(self, r_p: np.ndarray) -> float:
        return float(self.axis @ (np.asarray(r_p, dtype=float) - self.origin))


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    work_input_rate: float
    residual: float


@dataclass(frozen=True)
class LinearQuadraticDamping:
    """Dissipative hydrodynamic wrench added to the hull force balance.

    wrench = linear @ nu + quadratic * |nu| * nu, with SNAME-signed
    coefficients, so dissipative entries are negative.
    """

    linear: np.ndarray
    quadratic: np.ndarray

    def __post_init__(self) -> None:
        lin = np.asarray(self.linear, dtype=float)
        quad = np.asarray(self.quadratic, dtype=float)
        if lin.shape != (6, 6) or quad.shape != (6,):
            raise ValidationError(
                "damping needs a 6x6 linear matrix and 6 quadratic diagonals")
        if np.any(quad > 0.0):
            raise ValidationError(
                "quadratic damping diagonals must be dissipative (<= 0)")
        if np.any(np.diag(lin) > 0.0):
            raise ValidationError(
                "linear damping diagonal must be dissipative (<= 0)")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "quadratic", quad)

    def wrench(self, nu: np.ndarray) -> np.ndarray:
        return self.linear @ nu + self.quadratic * np.abs(nu) * nu


def solve_accelerations(M_total: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve M' x = rhs for the generalized accelerations.

    Cholesky first (the physical M' is symmetric positive definite), LU
    with partial pivoting as fallback, and an unconditional residual
    check: ||M'x - rhs||_inf <= 1e-10 (1 + ||rhs||_inf).
    """
    c, info = lapack.dpotrf(M_total, lower=1)
    if info == 0:
        x, info = lapack.dpotrs(c, rhs, lower=1)
    if info != 0:
        try:
            x = np.linalg.solve(M_total, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix("mass matrix is exactly singular") from exc
    residual = float(np.max(np.abs(M_total @ x - rhs)))
    bound = SOLVE_RTOL * (1.0 + float(np.max(np.abs(rhs))))
    if not residual <= bound:
        raise SingularMatrix(
            f"solve residual {residual:.3e} exceeds {bound:.3e}; "
            "mass matrix is numerically singular")
    return x


def _restoring9(params: VehicleParams, env: HydrostaticEnv, eta: np.ndarray,
                r_p: np.ndarray, hydro: str) -> np.ndarray:
    if hydro == HYDRO_OFF:
        return np.zeros(9)
    if hydro == HYDRO_FULL:
        return restoring_full(env, params, eta, r_p)
    if hydro == HYDRO_COMPENSATED:
        return restoring_compensated(env, eta, r_p, params.r_s)
    raise ValueError(f"unknown hydro mode {hydro!r}")


def state_derivative(params: VehicleParams, env: HydrostaticEnv,
                     state: SimState, tau_prime: np.ndarray, *,
                     hydro: str = HYDRO_FULL,
                     damping: LinearQuadraticDamping | None = None
                     ) -> StateDerivative:
    """Free-model state derivative.

    The velocity force is assembled from the kinetic-energy gradients,
    which coincides with the block-matrix product (C + C_P) nu' wherever
    that transcription is valid (zero added-mass coupling) and remains
    correct beyond it.
    """
    ed = eta_dot(state.eta, state.nu)
    rpd = r_p_dot(state.r_p, state.nu, state.v_p)
    nu9 = state.nu_prime
    M = build_M_total(params, state.r_p)
    rhs = np.asarray(tau_prime, dtype=float) \
        - kirchhoff_force(params, state.r_p, nu9) \
        - _restoring9(params, env, state.eta, state.r_p, hydro)
    if damping is not None:
        rhs[0:6] += damping.wrench(state.nu)
    return StateDerivative(ed, rpd, solve_accelerations(M, rhs))


def project_to_rail(state: SimState, rail: RailSpec) -> SimState:
    """Snap the mass position onto the rail segment and make its velocity
    rail-consistent.

    Keeps the axial stroke coordinate (clamped to the stroke limits) and
    the axial relative speed; lateral relative position and velocity are
    discarded. An outward stroke rate at a limit is zeroed (inelastic
    stop). Idempotent for states already on the rail.
    """
    s = rail.coordinate(state.r_p)
    s = min(max(s, rail.stroke_min), rail.stroke_max)
    r_new = rail.position(s)
    v, w = state.nu[0:3], state.nu[3:6]
    transport = v + _cross3(w, r_new)
    s_dot = float(rail.axis @ (state.v_p - transport))
    if (s >= rail.stroke_max and s_dot > 0.0) or \
       (s <= rail.stroke_min and s_dot < 0.0):
        s_dot = 0.0
    return SimState(state.eta, r_new, state.nu, transport + s_dot * rail.axis)


def _pack18(state: SimState) -> np.ndarray:
    return np.concatenate([state.eta, state.r_p, state.nu, state.v_p])


def _unpack18(y: np.ndarray) -> SimState:
    return SimState(y[0:6], y[6:9], y[9:15], y[15:18])


def rk4_step(params: VehicleParams, env: HydrostaticEnv, state: SimState,
             force_fn, t: float, dt: float, *, rail: RailSpec | None = None,
             hydro: str = HYDRO_FULL,
             damping: LinearQuadraticDamping | None = None) -> SimState:
    """One classic Runge-Kutta step of length dt.

    force_fn(t, state) supplies the 9-vector generalized force at the
    stage times. With rail=None the full 18-dimensional free model is
    integrated; with a rail the stepping happens in rail coordinates (see
    module docstring) and the returned state satisfies the rail
    constraint exactly.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if rail is not None:
        stepper = _RailStepper(params, env, rail, hydro=hydro,
                               damping=damping)
        y = stepper.pack(project_to_rail(state, rail))
        y_new, _ = stepper.step_with_callback(y, t, dt, force_fn)
        return project_to_rail(stepper.unpack(y_new), rail)

    def deriv(ti, si):
        tau = np.asarray(force_fn(ti, si), dtype=float)
        return state_derivative(params, env, si, tau, hydro=hydro,
                                damping=damping).as_vector()

    y = _pack18(state)
    k1 = deriv(t, state)
    k2 = deriv(t + 0.5 * dt, _unpack18(y + (0.5 * dt) * k1))
    k3 = deriv(t + 0.5 * dt, _unpack18(y + (0.5 * dt) * k2))
    k4 = deriv(t + dt, _unpack18(y + dt * k3))
    return _unpack18(y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4))


def energy_report(params: VehicleParams, env: HydrostaticEnv,
                  state: SimState, tau_prime: np.ndarray, *,
                  hydro: str = HYDRO_FULL,
                  prev_state: SimState | None = None,
                  prev_tau: np.ndarray | None = None,
                  dt: float | None = None) -> EnergyReport:
    """Kinetic energy, work input rate, and (given the previous accepted
    step) the finite-difference energy residual.

    The velocity force drops out of the work balance (nu' . C'nu' = 0),
    so the residual isolates integration and modelling error.
    """
    def rate(st: SimState, tau) -> tuple[float, float]:
        nu9 = st.nu_prime
        M = build_M_total(params, st.r_p)
        g9 = _restoring9(params, env, st.eta, st.r_p, hydro)
        kin = 0.5 * float(nu9 @ (M @ nu9))
        return kin, float(nu9 @ (np.asarray(tau, dtype=float) - g9))

    kinetic, work_rate = rate(state, tau_prime)
    residual = 0.0
    if prev_state is not None:
        if dt is None or not dt > 0.0:
            raise ValueError("residual needs the step size dt")
        kin_prev, work_prev = rate(
            prev_state, tau_prime if prev_tau is None else prev_tau)
        residual = (kinetic - kin_prev) / dt - 0.5 * (work_rate + work_prev)
    return EnergyReport(kinetic, work_rate, residual)


class _RailStepper:
    """RK4 stepping in rail coordinates y = [eta, s, nu, s_dot].

    substitute_cg moves the static-mass offset to the instantaneous
    combined centre of gravity at every evaluation (the collocated
    formulation); force_route selects the gradient assembly ("gradient")
    or the block-matrix product ("matrix") for the velocity force. The
    two routes are algebraically equal here and exist so trajectories of
    one can cross-validate the other.
    """

    def __init__(self, params: VehicleParams, env: HydrostaticEnv,
                 rail: RailSpec, *, hydro: str = HYDRO_COMPENSATED,
                 damping: LinearQuadraticDamping | None = None,
                 substitute_cg: bool = False,
                 force_route: str = "gradient"):
        if hydro not in (HYDRO_FULL, HYDRO_COMPENSATED, HYDRO_OFF):
            raise ValueError(f"unknown hydro mode {hydro!r}")
        if force_route not in ("gradient", "matrix"):
            raise ValueError(f"unknown force route {force_route!r}")
        if hydro != HYDRO_OFF and not env.is_neutral:
            raise NotNeutrallyBuoyant(
                "restoring model requires neutral buoyancy")
        self.params = params
        self.env = env
        self.rail = rail
        self.hydro = hydro
        self.damping = damping
        self.substitute_cg = substitute_cg
        self.force_route = force_route
        self.axis = rail.axis
        self.origin = rail.origin
        self.smin = rail.stroke_min
        self.smax = rail.stroke_max
        self.m_p = params.m_p
        self.M_A = build_M_A(params)
        # r_p-independent part of M'; with CG substitution M_S moves with
        # r_p, so everything is rebuilt per evaluation instead.
        self.M_base = None if substitute_cg else build_M_S(params) + self.M_A

    def pack(self, state: SimState) -> np.ndarray:
        y = np.empty(14)
        y[0:6] = state.eta
        s = self.rail.coordinate(state.r_p)
        y[6] = s
        y[7:13] = state.nu
        rel = state.v_p - state.nu[0:3] \
            - _cross3(state.nu[3:6], self.rail.position(s))
        y[13] = float(self.axis @ rel)
        return y

    def unpack(self, y: np.ndarray) -> SimState:
        r_p = self.origin + y[6] * self.axis
        v_p = y[7:10] + _cross3(y[10:13], r_p) + y[13] * self.axis
        return SimState(y[0:6], r_p, y[7:13], v_p)

    def _params_at(self, r_p: np.ndarray) -> VehicleParams:
        if not self.substitute_cg:
            return self.params
        return replace(self.params,
                       r_s=center_of_gravity(self.params, r_p))

    def _eval(self, y: np.ndarray, tau: np.ndarray, locked: bool
              ) -> tuple[np.ndarray, float]:
        eta = y[0:6]
        s = y[6]
        nu = y[7:13]
        s_dot = y[13]
        theta = float(eta[4])
        if attitude_is_singular(theta):
            raise SingularAttitude(
                f"pitch {theta:.9f} rad is within {EPS_SING} of +-pi/2")
        r_p = self.origin + s * self.axis
        v = nu[0:3]
        w = nu[3:6]
        v_p = v + _cross3(w, r_p) + s_dot * self.axis
        nu9 = np.empty(9)
        nu9[0:6] = nu
        nu9[6:9] = v_p

        pr = self._params_at(r_p)
        if self.M_base is not None:
            M = self.M_base + build_M_P(self.m_p, r_p)
        else:
            M = build_M_S(pr) + self.M_A + build_M_P(self.m_p, r_p)

        p9 = M @ nu9
        kinetic = 0.5 * float(nu9 @ p9)
        if self.force_route == "gradient":
            force = _kirchhoff_from_momentum(nu9, p9)
        else:
            force = (build_C(pr, nu9)
                     + build_C_P(self.m_p, r_p, nu9)) @ nu9

        rhs = np.asarray(tau, dtype=float) - force
        if self.hydro == HYDRO_COMPENSATED:
            phi = float(eta[3])
            rhs[3:6] += _cross3(r_p, weight_in_body(phi, theta, self.env.W_p))
            r_st = pr.r_s
            if r_st[0] != 0.0 or r_st[1] != 0.0 or r_st[2] != 0.0:
                rhs[3:6] += _cross3(
                    r_st, weight_in_body(phi, theta, self.env.W_s))
        elif self.hydro == HYDRO_FULL:
            g, g_P = restoring_split(self.env, pr, eta, r_p)
            rhs -= g
            rhs -= g_P
        if self.damping is not None:
            rhs[0:6] += self.damping.wrench(nu)

        acc = solve_accelerations(M, rhs)
        ydot = np.empty(14)
        ydot[0:6] = eta_dot(eta, nu)
        ydot[7:13] = acc[0:6]
        if locked:
            ydot[6] = 0.0
            ydot[13] = 0.0
        else:
            # Axial component of the relative mass acceleration; the
            # transport part follows the hull and is not integrated.
            carry = acc[0:3] + _cross3(acc[3:6], r_p) \
                + _cross3(w, s_dot * self.axis)
            ydot[6] = s_dot
            ydot[13] = float(self.axis @ (acc[6:9] - carry))
        return ydot, kinetic

    def step(self, y: np.ndarray, tau: np.ndarray, dt: float
             ) -> tuple[np.ndarray, float]:
        """Advance one step under a force held constant over the step.

        Returns the new packed state and the kinetic energy at the start
        of the step.
        """
        locked = False
        s = y[6]
        at_min = s <= self.smin
        at_max = s >= self.smax
        if (at_min or at_max) and abs(y[13]) < REST_SPEED:
            if y[13] != 0.0:
                y = y.copy()
                y[13] = 0.0
            k1, kinetic = self._eval(y, tau, False)
            if (at_max and k1[13] > 0.0) or (at_min and k1[13] < 0.0):
                # Pressed against the stop: hold the stroke for the step.
                locked = True
                k1[13] = 0.0
        else:
            k1, kinetic = self._eval(y, tau, False)
        half = 0.5 * dt
        k2, _ = self._eval(y + half * k1, tau, locked)
        k3, _ = self._eval(y + half * k2, tau, locked)
        k4, _ = self._eval(y + dt * k3, tau, locked)
        y_new = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        self._clamp(y_new)
        return y_new, kinetic

    def step_with_callback(self, y: np.ndarray, t: float, dt: float,
                           force_fn) -> tuple[np.ndarray, float]:
        """Like step, but the force is re-evaluated at the stage times."""
        def tau_at(ti, yi):
            return np.asarray(force_fn(ti, self.unpack(yi)), dtype=float)

        locked = False
        s = y[6]
        at_min = s <= self.smin
        at_max = s >= self.smax
        if (at_min or at_max) and abs(y[13]) < REST_SPEED:
            if y[13] != 0.0:
                y = y.copy()
                y[13] = 0.0
            k1, kinetic = self._eval(y, tau_at(t, y), False)
            if (at_max and k1[13] > 0.0) or (at_min and k1[13] < 0.0):
                locked = True
                k1[13] = 0.0
        else:
            k1, kinetic = self._eval(y, tau_at(t, y), False)
        half = 0.5 * dt
        y2 = y + half * k1
        k2, _ = self._eval(y2, tau_at(t + half, y2), locked)
        y3 = y + half * k2
        k3, _ = self._eval(y3, tau_at(t + half, y3), locked)
        y4 = y + dt * k3
        k4, _ = self._eval(y4, tau_at(t + dt, y4), locked)
        y_new = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        self._clamp(y_new)
        return y_new, kinetic

    def _clamp(self, y: np.ndarray) -> None:
        """Stroke limits with an inelastic stop, in place."""
        if y[6] >= self.smax:
            y[6] = self.smax
            if y[13] > 0.0:
                y[13] = 0.0
        elif y[6] <= self.smin:
            y[6] = self.smin
            if y[13] < 0.0:
                y[13] = 0.0

    def kinetic(self, y: np.ndarray) -> float:
        r_p = self.origin + y[6] * self.axis
        v_p = y[7:10] + _cross3(y[10:13], r_p) + y[13] * self.axis
        nu9 = np.empty(9)
        nu9[0:6] = y[7:13]
        nu9[6:9] = v_p
        if self.M_base is not None:
            M = self.M_base + build_M_P(self.m_p, r_p)
        else:
            M = build_M_S(self._params_at(r_p)) + self.M_A \
                + build_M_P(self.m_p, r_p)
        return 0.5 * float(nu9 @ (M @ nu9))


def _kirchhoff_from_momentum(nu9: np.ndarray, p9: np.ndarray) -> np.ndarray:
    """Velocity force from the generalized momentum p = M' nu'.

    The kinetic-energy gradients are the block rows of p, so the force is
    three cross products: [w x p1, v x p1 + w x p2 + vp x p3, w x p3].
    Unrolled because this sits in the innermost integration loop.
    """
    v0, v1, v2 = nu9[0], nu9[1], nu9[2]
    w0, w1, w2 = nu9[3], nu9[4], nu9[5]
    u0, u1, u2 = nu9[6], nu9[7], nu9[8]
    a0, a1, a2 = p9[0], p9[1], p9[2]
    b0, b1, b2 = p9[3], p9[4], p9[5]
    c0, c1, c2 = p9[6], p9[7], p9[8]
    out = np.empty(9)
    out[0] = w1 * a2 - w2 * a1
    out[1] = w2 * a0 - w0 * a2
    out[2] = w0 * a1 - w1 * a0
    out[3] = (v1 * a2 - v2 * a1) + (w1 * b2 - w2 * b1) + (u1 * c2 - u2 * c1)
    out[4] = (v2 * a0 - v0 * a2) + (w2 * b0 - w0 * b2) + (u2 * c0 - u0 * c2)
    out[5] = (v0 * a1 - v1 * a0) + (w0 * b1 - w1 * b0) + (u0 * c1 - u1 * c0)
    out[6] = w1 * c2 - w2 * c1
    out[7] = w2 * c0 - w0 * c2
    out[8] = w0 * c1 - w1 * c0
    return out
