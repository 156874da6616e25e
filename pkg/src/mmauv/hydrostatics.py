"""Gravity and buoyancy restoring forces in the body frame.

The model assumes the centre of buoyancy sits at the body origin and the
vehicle is neutrally buoyant, so the net linear restoring force is zero
and only attitude-dependent torques (plus gravity on the moving mass)
remain. Sign convention: the returned vectors enter the equations of
motion on the left-hand side, i.e. the right-hand side subtracts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotNeutrallyBuoyant
from .mass import VehicleParams

NEUTRALITY_RTOL = 1e-9

_ZERO3 = np.zeros(3)


@dataclass(frozen=True)
class HydrostaticEnv:
    """Weights and buoyancy of the configured vehicle, in newtons.

    r_b is the centre-of-buoyancy offset from the body origin; the model
    assumes it is zero and it is kept only to make that assumption
    explicit.
    """

    W_s: float
    W_p: float
    B: float
    r_b: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        object.__setattr__(self, "r_b", np.asarray(self.r_b, dtype=float))

    @property
    def is_neutral(self) -> bool:
        return abs(self.W_s + self.W_p - self.B) < NEUTRALITY_RTOL * self.B


def env_from_params(params: VehicleParams) -> HydrostaticEnv:
    """Weights from the masses, buoyancy from the displaced volume."""
    g = params.gravity
    return HydrostaticEnv(W_s=params.m_s * g, W_p=params.m_p * g,
                          B=params.rho * g * params.displaced_volume)


def weight_in_body(phi: float, theta: float, weight: float) -> np.ndarray:
    """Rotate the inertial force [0, 0, weight] into the body frame.

    Equals R(phi, theta, psi)^T [0, 0, weight]; yaw drops out, so the
    closed form avoids building the rotation matrix.
    """
    ct = math.cos(theta)
    return weight * np.array([-math.sin(theta),
                              math.sin(phi) * ct,
                              math.cos(phi) * ct])


def _require_neutral(env: HydrostaticEnv) -> None:
    if not env.is_neutral:
        raise NotNeutrallyBuoyant(
            f"|W_s + W_p - B| = {abs(env.W_s + env.W_p - env.B):.6e} N "
            f"exceeds {NEUTRALITY_RTOL:g}*B; the restoring model assumes "
            "neutral buoyancy")


def restoring_split(env: HydrostaticEnv, params: VehicleParams,
                    eta: np.ndarray, r_p: np.ndarray
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Restoring force split into static-mass and moving-mass parts.

    Neutral buoyancy with the CB at the origin cancels the linear force
    block, leaving

        g   = -[0; S(r_s) R^T f_s; 0]
        g_P = -[0; S(r_p) R^T f_p; R^T f_p]

    with f_s = [0, 0, W_s] and f_p = [0, 0, W_p] in the inertial frame.
    """
    _require_neutral(env)
    phi, theta = eta[3], eta[4]
    f_s = weight_in_body(phi, theta, env.W_s)
    f_p = weight_in_body(phi, theta, env.W_p)
    g = np.zeros(9)
    g[3:6] = -np.cross(params.r_s, f_s)
    g_P = np.zeros(9)
    g_P[3:6] = -np.cross(r_p, f_p)
    g_P[6:9] = -f_p
    return g, g_P


def restoring_full(env: HydrostaticEnv, params: VehicleParams,
                   eta: np.ndarray, r_p: np.ndarray) -> np.ndarray:
    """Total restoring vector, the sum of the two parts of restoring_split."""
    g, g_P = restoring_split(env, params, eta, r_p)
    return g + g_P


def restoring_compensated(env: HydrostaticEnv, eta: np.ndarray,
                          r_p: np.ndarray, r_static: np.ndarray = _ZERO3
                          ) -> np.ndarray:
    """Restoring vector when the rail actuator carries the weight of the
    moving mass.

    A constraint force directly counteracting gravity on m_p zeroes the
    moving-mass force block; the torque terms survive. r_static is the
    static-mass lever arm (zero for a balanced hull, the combined CG in
    the collocated formulation).
    """
    phi, theta = eta[3], eta[4]
    f_p = weight_in_body(phi, theta, env.W_p)
    out = np.zeros(9)
    out[3:6] = -np.cross(r_p, f_p)
    if r_static is not _ZERO3 and np.any(r_static):
        f_s = weight_in_body(phi, theta, env.W_s)
        out[3:6] -= np.cross(r_static, f_s)
    return out


def restoring_remus(env: HydrostaticEnv, eta: np.ndarray,
                    r_p: np.ndarray) -> np.ndarray:
    """Restoring vector for a hull with its static mass at the origin:
    only the moving-mass torque remains, and the gravity compensation
    removes the force on the mass itself.

    Equals restoring_full with its third block dropped when r_s = 0.
    """
    return restoring_compensated(env, eta, r_p)
