"""Collocated comparison formulation and trajectory comparison.

In the comparison model (after Woolsey & Leonard 2002) the static mass
is taken at the combined centre of gravity instead of its own offset, so
the CG location enters the mass matrix, the velocity force, and the
hydrostatic lever, and it moves with the actuator. Everything is routed
through the same builders as the primary model with r_s replaced by
r_g(r_p) at every evaluation; the velocity force uses the block-matrix
product rather than the gradient assembly, so trajectories of the two
models cross-validate two independent force paths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .coriolis import build_C, build_C_P
from .engine import (HYDRO_FULL, LinearQuadraticDamping, SimState,
                     StateDerivative, _restoring9, solve_accelerations)
from .errors import GridMismatch
from .hydrostatics import HydrostaticEnv
from .kinematics import eta_dot, r_p_dot
from .mass import VehicleParams, build_M_total, center_of_gravity
from .scenario import COLUMNS, Trajectory

#: Trajectory columns that carry state (excludes time, inputs, energy).
STATE_COLUMNS = COLUMNS[1:17]


def substituted_params(params: VehicleParams,
                       r_p: np.ndarray) -> VehicleParams:
    """params with the static mass moved to the combined CG for this r_p."""
    return replace(params, r_s=center_of_gravity(params, r_p))


def woolsey_state_derivative(params: VehicleParams, env: HydrostaticEnv,
                             state: SimState, tau_prime: np.ndarray, *,
                             hydro: str = HYDRO_FULL,
                             damping: LinearQuadraticDamping | None = None
                             ) -> StateDerivative:
    """State derivative of the collocated formulation.

    Identical pipeline to the primary model with r_s := r_g(r_p)
    recomputed each evaluation, assembled through the shared builders.
    """
    pr = substituted_params(params, state.r_p)
    ed = eta_dot(state.eta, state.nu)
    rpd = r_p_dot(state.r_p, state.nu, state.v_p)
    nu9 = state.nu_prime
    M = build_M_total(pr, state.r_p)
    C = build_C(pr, nu9) + build_C_P(pr.m_p, state.r_p, nu9)
    rhs = np.asarray(tau_prime, dtype=float) - C @ nu9 \
        - _restoring9(pr, env, state.eta, state.r_p, hydro)
    if damping is not None:
        rhs[0:6] += damping.wrench(state.nu)
    return StateDerivative(ed, rpd, solve_accelerations(M, rhs))


@dataclass(frozen=True)
class ChannelDiff:
    max_abs: float
    mean_abs: float
    sign_agreement: float


@dataclass(frozen=True)
class ComparisonReport:
    channels: dict[str, ChannelDiff]
    max_state_diff: float
    n_samples: int

    def channel(self, name: str) -> ChannelDiff:
        return self.channels[name]


def compare_trajectories(run_a: Trajectory, run_b: Trajectory,
                         norms=STATE_COLUMNS) -> ComparisonReport:
    """Per-channel absolute differences and sign-pattern agreement
    between two runs on the same time grid."""
    a, b = run_a.data, run_b.data
    if a.shape[0] != b.shape[0]:
        raise GridMismatch(
            f"runs have {a.shape[0]} and {b.shape[0]} samples")
    if not np.array_equal(a[:, 0], b[:, 0]):
        raise GridMismatch("runs are sampled on different time grids")
    channels = {}
    worst = 0.0
    for name in norms:
        idx = COLUMNS.index(name)
        diff = np.abs(a[:, idx] - b[:, idx])
        agree = float(np.mean(np.sign(a[:, idx]) == np.sign(b[:, idx])))
        channels[name] = ChannelDiff(float(diff.max()), float(diff.mean()),
                                     agree)
        if name in STATE_COLUMNS:
            worst = max(worst, float(diff.max()))
    return ComparisonReport(channels, worst, a.shape[0])
