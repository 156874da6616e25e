"""Attitude kinematics for a body-fixed frame in a NED world frame.

Conventions follow Fossen (2021): ZYX Euler angles (roll phi, pitch theta,
yaw psi), world z positive down so depth equals z, body axes x forward,
y starboard, z down. The pose vector eta stacks position and Euler angles;
the velocity vector nu stacks body linear velocity v and body angular
velocity omega.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SingularAttitude

# Guard band around the pitch singularity at +-pi/2. Inside the band the
# Euler rate transform is treated as singular and operations raise.
EPS_SING = 1e-6


def skew(a) -> np.ndarray:
    """Skew-symmetric matrix S(a) with S(a) @ b == cross(a, b)."""
    return np.array([
        [0.0, -a[2], a[1]],
        [a[2], 0.0, -a[0]],
        [-a[1], a[0], 0.0],
    ])


def rotation_matrix(phi: float, theta: float, psi: float) -> np.ndarray:
    """Body-to-world rotation for ZYX Euler angles."""
    cph, sph = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cps, sps = math.cos(psi), math.sin(psi)
    return np.array([
        [cps * cth, -sps * cph + cps * sth * sph, sps * sph + cps * cph * sth],
        [sps * cth, cps * cph + sph * sth * sps, -cps * sph + sth * sps * cph],
        [-sth, cth * sph, cth * cph],
    ])


def attitude_is_singular(theta: float) -> bool:
    """True when pitch lies inside the guard band around +-pi/2."""
    return abs(theta) >= math.pi / 2.0 - EPS_SING


def angular_transform(phi: float, theta: float) -> np.ndarray:
    """Matrix T with euler_rates = T @ omega for the ZYX convention.

    Raises SingularAttitude inside the pitch guard band rather than
    returning unbounded entries.
    """
    if attitude_is_singular(theta):
        raise SingularAttitude(
            f"pitch {theta:.9f} rad is within {EPS_SING} of +-pi/2")
    cph, sph = math.cos(phi), math.sin(phi)
    cth, tth = math.cos(theta), math.tan(theta)
    return np.array([
        [1.0, sph * tth, cph * tth],
        [0.0, cph, -sph],
        [0.0, sph / cth, cph / cth],
    ])


def eta_dot(eta: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """World-frame pose rate: position rate R(Theta) v, angle rate T(Theta) omega."""
    phi, theta, psi = float(eta[3]), float(eta[4]), float(eta[5])
    out = np.empty(6)
    out[0:3] = rotation_matrix(phi, theta, psi) @ nu[0:3]
    out[3:6] = angular_transform(phi, theta) @ nu[3:6]
    return out


def r_p_dot(r_p: np.ndarray, nu: np.ndarray, v_p: np.ndarray) -> np.ndarray:
    """Body-frame rate of the moving-mass position.

    v_p is the absolute velocity of the mass expressed in the body frame,
    so the body-relative rate removes the hull translation and the
    transport term: r_p_dot = v_p - v - S(omega) r_p.
    """
    return v_p - nu[0:3] - np.cross(nu[3:6], r_p)
