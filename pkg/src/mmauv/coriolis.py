"""Velocity-dependent (Coriolis and centripetal) forces.

Two equivalent assemblies are provided. kirchhoff_force builds the force
directly from the kinetic-energy gradients (the momentum-style rows of
Kirchhoff's equations) and is valid for any added-mass matrix.
coriolis_force materializes the block matrices C and C_P and multiplies;
the C transcription carries no coupling term for the off-diagonal
added-mass block, so the two routes agree exactly when added_coupling is
zero (slender symmetric hulls), which is the validity domain of the
block form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import skew
from .mass import VehicleParams, body_inertia, build_M_total


@dataclass(frozen=True)
class EnergyGradients:
    """Partial derivatives of the kinetic energy with respect to the three
    velocity blocks of nu' = [v, omega, v_p]."""

    dT_dv: np.ndarray
    dT_dw: np.ndarray
    dT_dvp: np.ndarray


def kinetic_energy(M_total: np.ndarray, nu_prime: np.ndarray) -> float:
    """Quadratic form T = 1/2 nu'^T M' nu'."""
    return 0.5 * float(nu_prime @ M_total @ nu_prime)


def energy_gradients(params: VehicleParams, r_p: np.ndarray,
                     nu_prime: np.ndarray) -> EnergyGradients:
    """Closed-form gradients of the kinetic energy.

    Each gradient equals the corresponding block row of M' nu'; the closed
    forms below are kept explicit so they can be checked independently
    against numerical differentiation of kinetic_energy.
    """
    v, w, vp = nu_prime[0:3], nu_prime[3:6], nu_prime[6:9]
    m_p = params.m_p
    m = params.m
    A11 = np.diag(params.added_linear)
    A22 = np.diag(params.added_angular)
    A12 = params.added_coupling
    Ss = skew(params.r_s)
    Sp = skew(r_p)
    I_b = body_inertia(params)

    dT_dv = m * v + A11 @ v \
        + (-params.m_s * Ss + A12 - m_p * Sp) @ w + m_p * vp
    dT_dw = (params.m_s * Ss + A12.T + m_p * Sp) @ v \
        + (I_b + A22 - m_p * (Sp @ Sp)) @ w + m_p * (Sp @ vp)
    dT_dvp = m_p * (v + np.cross(w, r_p) + vp)
    return EnergyGradients(dT_dv, dT_dw, dT_dvp)


def build_C(params: VehicleParams, nu_prime: np.ndarray) -> np.ndarray:
    """Static-plus-added-mass velocity coupling matrix C(nu').

    Block transcription (valid for zero added_coupling):

        (1,2) = (2,1) = -m S(v) - S(A11 v) - m_s S(S(omega) r_s)
        (2,2) = -m_s S(S(r_s) v) - S(A12^T v) - S(I_b omega) - S(A22 omega)
        (2,3) = (3,2) = -m_p S(v)

    with every other block zero.
    """
    v, w = nu_prime[0:3], nu_prime[3:6]
    m_p = params.m_p
    A11 = np.diag(params.added_linear)
    A22 = np.diag(params.added_angular)
    C12 = -params.m * skew(v) - skew(A11 @ v) \
        - params.m_s * skew(np.cross(w, params.r_s))
    C22 = -params.m_s * skew(np.cross(params.r_s, v)) \
        - skew(params.added_coupling.T @ v) \
        - skew(body_inertia(params) @ w) - skew(A22 @ w)
    C23 = -m_p * skew(v)
    C = np.zeros((9, 9))
    C[0:3, 3:6] = C12
    C[3:6, 0:3] = C12
    C[3:6, 3:6] = C22
    C[3:6, 6:9] = C23
    C[6:9, 3:6] = C23
    return C


def build_C_P(m_p: float, r_p: np.ndarray, nu_prime: np.ndarray) -> np.ndarray:
    """Moving-mass velocity coupling matrix C_P(r_p, nu').

    The skew arguments are the transport velocity of the mass position,
    S(omega) r_p + v_p, and its moment about the origin,
    S(r_p)(v + S(omega) r_p + v_p):

        (1,2) = (2,1) = (2,3) = (3,2) = -m_p S(S(omega) r_p + v_p)
        (2,2) = -m_p S(S(r_p)(v + S(omega) r_p + v_p))

    This is the form consistent with the energy gradients; block variants
    that flip the transport-term sign or drop the S(r_p) factor in the
    middle block fail the Kirchhoff cross-check (see tests).
    """
    v, w, vp = nu_prime[0:3], nu_prime[3:6], nu_prime[6:9]
    transport = np.cross(w, r_p) + vp
    off = -m_p * skew(transport)
    mid = -m_p * skew(np.cross(r_p, v + transport))
    C = np.zeros((9, 9))
    C[0:3, 3:6] = off
    C[3:6, 0:3] = off
    C[3:6, 3:6] = mid
    C[3:6, 6:9] = off
    C[6:9, 3:6] = off
    return C


def coriolis_force(params: VehicleParams, r_p: np.ndarray,
                   nu_prime: np.ndarray) -> np.ndarray:
    """Velocity force as the block-matrix product (C + C_P) nu'."""
    return (build_C(params, nu_prime)
            + build_C_P(params.m_p, r_p, nu_prime)) @ nu_prime


def kirchhoff_force(params: VehicleParams, r_p: np.ndarray,
                    nu_prime: np.ndarray) -> np.ndarray:
    """Velocity force assembled from the energy gradients.

    Rows follow the non-derivative terms of Kirchhoff's equations:

        row 1 = S(omega) dT/dv
        row 2 = S(v) dT/dv + S(omega) dT/domega + S(v_p) dT/dv_p
        row 3 = S(omega) dT/dv_p

    Valid for any added-mass matrix, and exactly energy-neutral
    (nu' . force = 0) by the cyclic property of the triple product.
    """
    g = energy_gradients(params, r_p, nu_prime)
    v, w, vp = nu_prime[0:3], nu_prime[3:6], nu_prime[6:9]
    out = np.empty(9)
    out[0:3] = np.cross(w, g.dT_dv)
    out[3:6] = np.cross(v, g.dT_dv) + np.cross(w, g.dT_dw) \
        + np.cross(vp, g.dT_dvp)
    out[6:9] = np.cross(w, g.dT_dvp)
    return out


def gradient_check(params: VehicleParams, r_p: np.ndarray,
                   nu_prime: np.ndarray, h: float = 1e-6) -> float:
    """Max relative deviation of energy_gradients from central differences
    of kinetic_energy. Diagnostic used by the self-check command."""
    g = energy_gradients(params, r_p, nu_prime)
    closed = np.concatenate([g.dT_dv, g.dT_dw, g.dT_dvp])
    M = build_M_total(params, r_p)
    num = np.empty(9)
    for i in range(9):
        up = nu_prime.copy()
        dn = nu_prime.copy()
        up[i] += h
        dn[i] -= h
        num[i] = (kinetic_energy(M, up) - kinetic_energy(M, dn)) / (2.0 * h)
    scale = max(1.0, float(np.max(np.abs(closed))))
    return float(np.max(np.abs(closed - num)) / scale)
