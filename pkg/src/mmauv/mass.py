"""Generalized mass matrices for a vehicle with an internal moving mass.

The extended velocity nu' = [v, omega, v_p] is nine dimensional: body
linear velocity, body angular velocity, and the absolute velocity of the
moving point mass expressed in body axes. The generalized mass splits into
a configuration-independent part (static rigid body plus hydrodynamic
added mass) and a part that depends on the current mass position r_p.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveDefinite, ValidationError
from .kinematics import skew


@dataclass(frozen=True)
class VehicleParams:
    """Masses, geometry and hydrodynamic inertia of one vehicle.

    added_linear and added_angular hold the nonnegative diagonal of the
    added-mass blocks, i.e. (-X_udot, -Y_vdot, -Z_wdot) and
    (-K_pdot, -M_qdot, -N_rdot) in SNAME notation. added_coupling is the
    off-diagonal 3x3 block, zero for slender symmetric hulls.
    """

    m_s: float
    m_p: float
    r_s: np.ndarray
    I_g: np.ndarray
    added_linear: np.ndarray
    added_angular: np.ndarray
    added_coupling: np.ndarray = field(
        default_factory=lambda: np.zeros((3, 3)))
    rho: float = 1026.0
    displaced_volume: float = 0.0
    gravity: float = 9.81
    semi_axes: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "r_s", np.asarray(self.r_s, dtype=float))
        object.__setattr__(self, "I_g", np.asarray(self.I_g, dtype=float))
        object.__setattr__(
            self, "added_linear", np.asarray(self.added_linear, dtype=float))
        object.__setattr__(
            self, "added_angular", np.asarray(self.added_angular, dtype=float))
        object.__setattr__(
            self, "added_coupling",
            np.asarray(self.added_coupling, dtype=float))
        validate_params(self)

    @property
    def m(self) -> float:
        """Total mass m_s + m_p."""
        return self.m_s + self.m_p


def validate_params(p: VehicleParams) -> None:
    """Check the physical invariants of a parameter set."""
    if not (p.m_s > 0.0):
        raise ValidationError("m_s must be positive")
    if not (p.m_p >= 0.0):
        raise ValidationError("m_p must be nonnegative")
    if not (p.m_p < p.m_s):
        raise ValidationError(
            "moving mass must stay strictly below the static mass "
            f"(m_p={p.m_p}, m_s={p.m_s})")
    if p.m_p > p.m_s / 5.0:
        warnings.warn(
            "m_p exceeds m_s/5; the model assumes a small moving mass",
            stacklevel=2)
    if p.I_g.shape != (3, 3) or not np.allclose(p.I_g, p.I_g.T, atol=1e-12):
        raise ValidationError("I_g must be a symmetric 3x3 matrix")
    if np.any(np.linalg.eigvalsh(p.I_g) <= 0.0):
        raise ValidationError("I_g must be positive definite")
    if np.any(p.added_linear < 0.0) or np.any(p.added_angular < 0.0):
        raise ValidationError(
            "added-mass diagonals must be nonnegative "
            "(store -X_udot etc., not the signed coefficients)")
    if not np.all(np.isfinite(p.added_coupling)):
        raise ValidationError("added_coupling must be finite")
    if not (p.rho > 0.0 and p.gravity > 0.0):
        raise ValidationError("rho and gravity must be positive")
    if p.displaced_volume < 0.0:
        raise ValidationError("displaced_volume must be nonnegative")


def center_of_gravity(params: VehicleParams, r_p: np.ndarray) -> np.ndarray:
    """Mass-weighted location of the combined CG in body axes.

    Always lies on the segment between r_s and the moving mass.
    """
    return (params.m_s * params.r_s + params.m_p * np.asarray(r_p)) \
        / (params.m_s + params.m_p)


def body_inertia(params: VehicleParams) -> np.ndarray:
    """Rigid-body inertia about the body origin, I_b = I_g - m_s S^2(r_s)."""
    Ss = skew(params.r_s)
    return params.I_g - params.m_s * (Ss @ Ss)


def build_M_S(params: VehicleParams) -> np.ndarray:
    """Static 9x9 mass matrix (rigid hull plus the moving mass treated
    through its own velocity coordinate).

    Block layout, with m = m_s + m_p:

        [ m I          -m_s S(r_s)   m_p I ]
        [ m_s S(r_s)    I_b          0     ]
        [ m_p I         0            m_p I ]
    """
    m = params.m
    Ss = skew(params.r_s) * params.m_s
    M = np.zeros((9, 9))
    M[0:3, 0:3] = m * np.eye(3)
    M[0:3, 3:6] = -Ss
    M[3:6, 0:3] = Ss
    M[3:6, 3:6] = body_inertia(params)
    M[0:3, 6:9] = params.m_p * np.eye(3)
    M[6:9, 0:3] = params.m_p * np.eye(3)
    M[6:9, 6:9] = params.m_p * np.eye(3)
    return M


def build_M_P(m_p: float, r_p: np.ndarray) -> np.ndarray:
    """Configuration-dependent 9x9 mass contribution of the moving mass.

    Symmetric, zero at r_p = 0:

        [ 0            -m_p S(r_p)      0          ]
        [ m_p S(r_p)   -m_p S^2(r_p)    m_p S(r_p) ]
        [ 0            -m_p S(r_p)      0          ]
    """
    Sp = skew(r_p)
    M = np.zeros((9, 9))
    M[0:3, 3:6] = -m_p * Sp
    M[3:6, 0:3] = m_p * Sp
    M[3:6, 3:6] = -m_p * (Sp @ Sp)
    M[3:6, 6:9] = m_p * Sp
    M[6:9, 3:6] = -m_p * Sp
    return M


def build_M_A(params: VehicleParams) -> np.ndarray:
    """Hydrodynamic added-mass matrix, padded with zero moving-mass blocks."""
    M = np.zeros((9, 9))
    M[0:3, 0:3] = np.diag(params.added_linear)
    M[0:3, 3:6] = params.added_coupling
    M[3:6, 0:3] = params.added_coupling.T
    M[3:6, 3:6] = np.diag(params.added_angular)
    return M


def build_M_total(params: VehicleParams, r_p: np.ndarray) -> np.ndarray:
    """Full generalized mass M' = M_S + M_A + M_P(r_p).

    Verifies positive definiteness by Cholesky factorization; a failure
    signals an unphysical parameter set (for example m_p = 0, which makes
    the moving-mass block singular).
    """
    M = build_M_S(params) + build_M_A(params) + build_M_P(params.m_p, r_p)
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            "generalized mass matrix is not positive definite") from exc
    return M


def ellipsoid_inertia(m_s: float, a: float, b: float) -> np.ndarray:
    """Inertia of a solid prolate spheroid of mass m_s about its center.

    a is the long (surge-axis) semi-axis, b the transverse semi-axis.
    """
    if not (a > 0.0 and b > 0.0):
        raise ValidationError("spheroid semi-axes must be positive")
    ixx = 0.4 * m_s * b * b
    iyy = 0.2 * m_s * (a * a + b * b)
    return np.diag([ixx, iyy, iyy])


def spheroid_added_mass(rho: float, a: float, b: float):
    """Potential-flow added mass of a prolate spheroid (Lamb 1932, sec. 124).

    Returns the SNAME-signed coefficients
    (X_udot, Y_vdot, Z_wdot, K_pdot, M_qdot, N_rdot). The rolling
    coefficient of an ideal spheroid is exactly zero; practical vehicle
    models substitute a small nonzero estimate for it.
    """
    if not (a > b > 0.0):
        raise ValidationError("need a > b > 0 for a prolate spheroid")
    m_fluid = rho * (4.0 / 3.0) * math.pi * a * b * b
    e = math.sqrt(1.0 - (b / a) ** 2)
    L = math.log((1.0 + e) / (1.0 - e))
    alpha0 = (2.0 * (1.0 - e * e) / e ** 3) * (0.5 * L - e)
    beta0 = 1.0 / (e * e) - ((1.0 - e * e) / (2.0 * e ** 3)) * L
    k1 = alpha0 / (2.0 - alpha0)
    k2 = beta0 / (2.0 - beta0)
    kp = (e ** 4 * (beta0 - alpha0)) / (
        (2.0 - e * e) * (2.0 * e * e - (2.0 - e * e) * (beta0 - alpha0)))
    iy_fluid = m_fluid * (a * a + b * b) / 5.0
    x_ud = -k1 * m_fluid
    y_vd = -k2 * m_fluid
    m_qd = -kp * iy_fluid
    return (x_ud, y_vd, y_vd, 0.0, m_qd, m_qd)
