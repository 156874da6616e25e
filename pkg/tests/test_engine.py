import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from mmauv.engine import (HYDRO_COMPENSATED, HYDRO_OFF,
                          LinearQuadraticDamping, RailSpec, SimState,
                          energy_report, project_to_rail, rk4_step,
                          solve_accelerations, state_derivative)
from mmauv.errors import (NotNeutrallyBuoyant, SingularAttitude,
                          SingularMatrix, ValidationError)
from mmauv.hydrostatics import HydrostaticEnv, env_from_params
from mmauv.kinematics import eta_dot as kin_eta_dot
from mmauv.kinematics import r_p_dot as kin_r_p_dot
from mmauv.mass import build_M_total

from conftest import make_params, random_nu9, random_r_p
from oracles import PITCH_ACCEL_MASS_FORWARD, solve_gauss

RAIL = RailSpec(origin=np.array([0.0, 0.0, 0.05]),
                axis=np.array([1.0, 0.0, 0.0]),
                stroke_min=-0.05, stroke_max=0.05)


def fixture_params(seed=21):
    rng = np.random.default_rng(seed)
    p = make_params(rng)
    return p, env_from_params(p)


def moving_state(rng, scale=0.3):
    return SimState(
        eta=np.concatenate([rng.normal(size=3),
                             rng.uniform(-0.8, 0.8, 3)]),
        r_p=rng.uniform(-0.1, 0.1, 3),
        nu=scale * rng.normal(size=6),
        v_p=scale * rng.normal(size=3))


def carried_state(rng, scale=0.3):
    """Like moving_state but with the mass riding with the hull."""
    state = moving_state(rng, scale)
    v, w = state.nu[0:3], state.nu[3:6]
    return SimState(state.eta, state.r_p, state.nu,
                    v + np.cross(w, state.r_p))


class TestSimState:
    def test_shapes_are_enforced(self):
        with pytest.raises(ValueError):
            SimState(np.zeros(5), np.zeros(3), np.zeros(6), np.zeros(3))
        with pytest.raises(ValueError):
            SimState(np.zeros(6), np.zeros(2), np.zeros(6), np.zeros(3))

    def test_rest_state(self):
        s = SimState.rest(np.array([0.01, 0.0, 0.05]))
        assert np.all(s.eta == 0.0)
        assert np.all(s.nu == 0.0)
        assert np.all(s.v_p == 0.0)
        assert np.array_equal(s.r_p, [0.01, 0.0, 0.05])

    def test_nu_prime_concatenates_velocities(self):
        rng = np.random.default_rng(0)
        s = moving_state(rng)
        assert np.array_equal(s.nu_prime,
                              np.concatenate([s.nu, s.v_p]))


class TestRailSpec:
    def test_axis_must_be_unit(self):
        with pytest.raises(ValidationError):
            RailSpec(np.zeros(3), np.array([1.0, 1.0, 0.0]), -0.1, 0.1)

    def test_stroke_interval_must_be_ordered(self):
        with pytest.raises(ValidationError):
            RailSpec(np.zeros(3), np.array([1.0, 0.0, 0.0]), 0.1, 0.1)

    def test_position_coordinate_roundtrip(self):
        for s in (-0.05, -0.01, 0.0, 0.03, 0.05):
            assert RAIL.coordinate(RAIL.position(s)) == s


class TestSolver:
    def test_matches_gaussian_elimination_oracle(self):
        rng = np.random.default_rng(2)
        p = make_params(rng)
        for _ in range(25):
            M = build_M_total(p, random_r_p(rng))
            rhs = rng.uniform(-10.0, 10.0, 9)
            x = solve_accelerations(M, rhs)
            ref = solve_gauss(M, rhs)
            assert np.allclose(x, ref, rtol=1e-9, atol=1e-12)

    def test_residual_bound(self):
        rng = np.random.default_rng(4)
        p = make_params(rng)
        M = build_M_total(p, random_r_p(rng))
        rhs = rng.uniform(-100.0, 100.0, 9)
        x = solve_accelerations(M, rhs)
        assert np.abs(M @ x - rhs).max() <= 1e-10 * (1 + np.abs(rhs).max())

    def test_indefinite_but_invertible_falls_back(self):
        M = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, -9.0])
        rhs = np.arange(9.0)
        x = solve_accelerations(M, rhs)
        assert np.allclose(M @ x, rhs, atol=1e-12)

    def test_singular_matrix_raises(self):
        with pytest.raises(SingularMatrix):
            solve_accelerations(np.zeros((9, 9)), np.ones(9))


class TestStateDerivative:
    def test_frozen_pitch_acceleration(self, remus):
        state = SimState(np.zeros(6), np.array([0.05, 0.0, 0.05]),
                         np.zeros(6), np.zeros(3))
        out = state_derivative(remus.params, remus.env, state, np.zeros(9),
                               hydro=HYDRO_COMPENSATED)
        assert math.isclose(out.nu_prime_dot[4], PITCH_ACCEL_MASS_FORWARD,
                            rel_tol=1e-12)
        # nose-down response to a forward mass
        assert out.nu_prime_dot[4] < 0.0

    def test_kinematic_blocks_match_kinematics_module(self):
        p, env = fixture_params()
        rng = np.random.default_rng(8)
        state = moving_state(rng)
        out = state_derivative(p, env, state, np.zeros(9), hydro=HYDRO_OFF)
        assert np.array_equal(out.eta_dot, kin_eta_dot(state.eta,
                                                       state.nu))
        assert np.array_equal(
            out.r_p_dot,
            kin_r_p_dot(state.r_p, state.nu, state.v_p))

    def test_accelerations_satisfy_newton_balance(self):
        from mmauv.coriolis import kirchhoff_force
        p, env = fixture_params(33)
        rng = np.random.default_rng(12)
        state = moving_state(rng)
        tau = rng.uniform(-5.0, 5.0, 9)
        out = state_derivative(p, env, state, tau, hydro=HYDRO_OFF)
        M = build_M_total(p, state.r_p)
        residual = (M @ out.nu_prime_dot
                    + kirchhoff_force(p, state.r_p, state.nu_prime) - tau)
        assert np.abs(residual).max() <= 1e-9 * (1 + np.abs(tau).max())

    def test_rest_state_with_no_forces_stays_at_rest(self):
        p, env = fixture_params()
        state = SimState.rest(np.array([0.0, 0.0, 0.05]))
        out = state_derivative(p, env, state, np.zeros(9), hydro=HYDRO_OFF)
        assert np.all(out.as_vector() == 0.0)

    def test_vertical_attitude_raises(self):
        p, env = fixture_params()
        eta = np.zeros(6)
        eta[4] = math.pi / 2
        state = SimState(eta, np.zeros(3), np.zeros(6), np.zeros(3))
        with pytest.raises(SingularAttitude):
            state_derivative(p, env, state, np.zeros(9), hydro=HYDRO_OFF)

    def test_damping_hook_adds_body_wrench(self):
        p, env = fixture_params()
        rng = np.random.default_rng(14)
        state = moving_state(rng)
        damping = LinearQuadraticDamping(
            linear=-np.eye(6) * 2.0, quadratic=-np.ones(6))
        plain = state_derivative(p, env, state, np.zeros(9), hydro=HYDRO_OFF)
        damped = state_derivative(p, env, state, np.zeros(9),
                                  hydro=HYDRO_OFF, damping=damping)
        M = build_M_total(p, state.r_p)
        delta = M @ (damped.nu_prime_dot - plain.nu_prime_dot)
        expected = np.zeros(9)
        expected[0:6] = damping.wrench(state.nu)
        assert np.allclose(delta, expected, atol=1e-9)


class TestProjection:
    def test_projection_is_idempotent_and_exact(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            state = moving_state(rng, scale=0.5)
            once = project_to_rail(state, RAIL)
            twice = project_to_rail(once, RAIL)
            assert np.array_equal(once.r_p, twice.r_p)
            assert np.array_equal(once.v_p, twice.v_p)
            assert once.r_p[1] == 0.0
            assert once.r_p[2] == 0.05
            assert -0.05 <= once.r_p[0] <= 0.05

    def test_outward_velocity_is_absorbed_at_the_stop(self):
        state = SimState(np.zeros(6), np.array([0.08, 0.0, 0.05]),
                         np.zeros(6), np.array([1.0, 0.0, 0.0]))
        out = project_to_rail(state, RAIL)
        assert out.r_p[0] == 0.05
        # inelastic stop: the outward relative velocity is removed
        assert np.array_equal(out.v_p, np.zeros(3))

    def test_inward_velocity_survives_at_the_stop(self):
        state = SimState(np.zeros(6), np.array([0.08, 0.0, 0.05]),
                         np.zeros(6), np.array([-1.0, 0.0, 0.0]))
        out = project_to_rail(state, RAIL)
        assert out.r_p[0] == 0.05
        assert out.v_p[0] == -1.0


class TestRk4Free:
    def test_matches_adaptive_reference_integrator(self):
        p, env = fixture_params(42)
        rng = np.random.default_rng(10)
        state = moving_state(rng, scale=0.1)

        def rhs(t, y):
            s = SimState(y[0:6], y[6:9], y[9:15], y[15:18])
            return state_derivative(p, env, s, np.zeros(9),
                                    hydro=HYDRO_OFF).as_vector()

        y0 = np.concatenate([state.eta, state.r_p, state.nu,
                             state.v_p])
        ref = solve_ivp(rhs, (0.0, 0.5), y0, rtol=1e-11, atol=1e-13,
                        dense_output=False)
        current = state
        dt = 1e-3
        for i in range(500):
            current = rk4_step(p, env, current,
                               lambda t, s: np.zeros(9), i * dt, dt,
                               hydro=HYDRO_OFF)
        got = np.concatenate([current.eta, current.r_p, current.nu,
                              current.v_p])
        assert np.abs(got - ref.y[:, -1]).max() <= 1e-8

    def test_energy_is_conserved_when_the_mass_rides_with_the_hull(self):
        # the momentum equations omit the mass-matrix rate term, so plain
        # kinetic-energy conservation is exact only while r_p holds still
        p, env = fixture_params(5)
        rng = np.random.default_rng(18)
        state = carried_state(rng, scale=0.005)
        drift = self._coast_drift(p, env, state)
        assert drift <= 1e-6

    def test_relative_sliding_leaves_the_conserving_regime(self):
        p, env = fixture_params(5)
        rng = np.random.default_rng(18)
        carried = self._coast_drift(p, env, carried_state(rng, scale=0.05))
        rng = np.random.default_rng(18)
        sliding = self._coast_drift(p, env, moving_state(rng, scale=0.05))
        assert carried < 1e-4
        assert sliding > 1e-3
        assert sliding > 10.0 * carried

    @staticmethod
    def _coast_drift(p, env, state):
        from mmauv.coriolis import kinetic_energy
        T0 = kinetic_energy(build_M_total(p, state.r_p), state.nu_prime)
        current = state
        for i in range(100):
            current = rk4_step(p, env, current, lambda t, s: np.zeros(9),
                               i * 0.01, 0.01, hydro=HYDRO_OFF)
        T1 = kinetic_energy(build_M_total(p, current.r_p),
                            current.nu_prime)
        return abs(T1 - T0) / T0

    def test_damping_dissipates_energy(self):
        from mmauv.coriolis import kinetic_energy
        p, env = fixture_params(5)
        rng = np.random.default_rng(19)
        state = moving_state(rng, scale=0.2)
        damping = LinearQuadraticDamping(
            linear=-np.eye(6) * 5.0, quadratic=-np.full(6, 10.0))
        T0 = kinetic_energy(build_M_total(p, state.r_p), state.nu_prime)
        current = state
        for i in range(100):
            current = rk4_step(p, env, current, lambda t, s: np.zeros(9),
                               i * 0.01, 0.01, hydro=HYDRO_OFF,
                               damping=damping)
        T1 = kinetic_energy(build_M_total(p, current.r_p),
                            current.nu_prime)
        assert T1 < T0

    def test_nonpositive_dt_rejected(self):
        p, env = fixture_params()
        state = SimState.rest(np.zeros(3))
        with pytest.raises(ValueError):
            rk4_step(p, env, state, lambda t, s: np.zeros(9), 0.0, 0.0)


class TestRk4Rail:
    def test_rail_geometry_is_exact_along_a_chain(self, remus):
        state = SimState.rest(RAIL.position(0.0))
        force = np.zeros(9)
        force[0] = 1.0
        force[6] = 0.4
        current = project_to_rail(state, RAIL)
        for i in range(150):
            current = rk4_step(remus.params, remus.env, current,
                               lambda t, s: force, i * 0.01, 0.01,
                               rail=RAIL, hydro=HYDRO_COMPENSATED,
                               damping=remus.damping)
            assert current.r_p[1] == 0.0
            assert current.r_p[2] == 0.05
            assert -0.05 <= current.r_p[0] <= 0.05

    def test_pressed_stop_stays_locked(self, remus):
        state = project_to_rail(
            SimState.rest(RAIL.position(RAIL.stroke_max)), RAIL)
        force = np.zeros(9)
        force[6] = 0.5
        out = rk4_step(remus.params, remus.env, state,
                       lambda t, s: force, 0.0, 0.01, rail=RAIL,
                       hydro=HYDRO_COMPENSATED)
        assert out.r_p[0] == RAIL.stroke_max
        transport = out.nu[0:3] + np.cross(out.nu[3:6], out.r_p)
        assert np.allclose(out.v_p, transport, atol=1e-15)

    def test_inward_force_releases_the_stop(self, remus):
        state = project_to_rail(
            SimState.rest(RAIL.position(RAIL.stroke_max)), RAIL)
        force = np.zeros(9)
        force[6] = -0.5
        out = rk4_step(remus.params, remus.env, state,
                       lambda t, s: force, 0.0, 0.01, rail=RAIL,
                       hydro=HYDRO_COMPENSATED)
        assert out.r_p[0] < RAIL.stroke_max

    def test_nonneutral_vehicle_is_rejected_on_the_rail_path(self):
        p, _ = fixture_params()
        env = HydrostaticEnv(W_s=p.m_s * 9.81, W_p=p.m_p * 9.81, B=1.0)
        state = SimState.rest(RAIL.position(0.0))
        with pytest.raises(NotNeutrallyBuoyant):
            rk4_step(p, env, state, lambda t, s: np.zeros(9), 0.0, 0.01,
                     rail=RAIL, hydro=HYDRO_COMPENSATED)


class TestEnergyReport:
    def test_free_coast_report_is_clean(self):
        p, env = fixture_params(5)
        rng = np.random.default_rng(23)
        state = carried_state(rng, scale=0.02)
        dt = 1e-3
        nxt = rk4_step(p, env, state, lambda t, s: np.zeros(9), 0.0, dt,
                       hydro=HYDRO_OFF)
        rep = energy_report(p, env, nxt, np.zeros(9), hydro=HYDRO_OFF,
                            prev_state=state, prev_tau=np.zeros(9), dt=dt)
        assert rep.kinetic > 0.0
        assert rep.work_input_rate == 0.0
        assert abs(rep.residual) <= 1e-9

    def test_forced_step_residual_shrinks_with_dt(self):
        p, env = fixture_params(5)
        rng = np.random.default_rng(29)
        state = carried_state(rng, scale=0.1)
        tau = np.zeros(9)
        tau[0] = 2.0

        def residual(dt):
            nxt = rk4_step(p, env, state, lambda t, s: tau, 0.0, dt,
                           hydro=HYDRO_OFF)
            rep = energy_report(p, env, nxt, tau, hydro=HYDRO_OFF,
                                prev_state=state, prev_tau=tau, dt=dt)
            return abs(rep.residual)

        # dominated by the first-order mass-rate term: halving dt should
        # halve the residual
        coarse, fine = residual(2e-3), residual(1e-3)
        assert fine <= 0.55 * coarse
        assert fine <= 1e-4

    def test_missing_dt_is_rejected(self):
        p, env = fixture_params()
        state = SimState.rest(np.zeros(3))
        with pytest.raises(ValueError):
            energy_report(p, env, state, np.zeros(9), hydro=HYDRO_OFF,
                          prev_state=state, prev_tau=np.zeros(9))


class TestDampingModel:
    def test_wrench_formula(self):
        linear = -np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        quadratic = -np.array([1.0, 0.5, 0.5, 0.1, 0.2, 0.2])
        d = LinearQuadraticDamping(linear, quadratic)
        nu = np.array([2.0, -1.0, 0.5, 0.3, -0.2, 0.1])
        expected = linear @ nu + quadratic * np.abs(nu) * nu
        assert np.allclose(d.wrench(nu), expected, atol=1e-15)

    def test_positive_quadratic_entry_rejected(self):
        with pytest.raises(ValidationError):
            LinearQuadraticDamping(-np.eye(6), np.array(
                [1.0, -1.0, -1.0, -1.0, -1.0, -1.0]))

    def test_positive_linear_diagonal_rejected(self):
        bad = -np.eye(6)
        bad[2, 2] = 1.0
        with pytest.raises(ValidationError):
            LinearQuadraticDamping(bad, -np.ones(6))

    def test_offdiagonal_lift_terms_are_allowed(self):
        linear = -np.diag([0.0, 30.0, 30.0, 0.0, 0.0, 0.0])
        linear[5, 1] = 20.0
        linear[4, 2] = -20.0
        d = LinearQuadraticDamping(linear, -np.ones(6))
        assert d.wrench(np.zeros(6)) == pytest.approx(np.zeros(6))