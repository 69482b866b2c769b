import cmath
import math

import numpy as np
import pytest

import qsteer as q
from qsteer.control import FrameHistory

from conftest import SX


class TestApplyPhase:
    def test_identity(self):
        w = (0.02, -0.01, 0.03 + 0.01j)
        assert q.apply_phase(*w, 0.0, 0.0, 0.0, 0.0) == w

    def test_optimal_choice_kills_diagonals(self):
        w_gg, w_ee, _ = q.apply_phase(0.02, -0.01, 0.03j, 0.1, 0.2, -0.02, 0.01)
        assert w_gg == 0.0
        assert w_ee == 0.0

    def test_pi_phase_difference_flips_offdiagonal(self):
        _, _, w_ge = q.apply_phase(0.0, 0.0, 0.05, 0.0, math.pi, 0.0, 0.0)
        assert w_ge == pytest.approx(-0.05, abs=1e-15)


class TestHsNorm:
    def test_zero(self):
        assert q.hs_norm(0.0, 0.0, 0j) == 0.0

    def test_arithmetic(self):
        assert q.hs_norm(0.05, -0.05, 0.05) == pytest.approx(0.1)

    def test_offdiagonal_only(self):
        assert q.hs_norm(0.0, 0.0, 0.05) == pytest.approx(math.sqrt(2) * 0.05)


def history_of(path, n=801, t0=0.0, t1=None):
    return q.sample_history(path, t0, path.duration if t1 is None else t1, n)


class TestOptimalSchedule:
    def test_constant_when_diagonals_vanish(self):
        # static path: w identically zero
        path = q.ControlPath(
            kind="custom", b=lambda t: (0.3, 0.1, 0.9), b_dot=lambda t: (0, 0, 0),
            coupling_A=SX, duration=10.0,
        )
        sched = q.optimal_schedule(history_of(path, 101, t1=10.0), lambda_g0=0.4)
        np.testing.assert_allclose(sched.lambda_g_values, 0.4, atol=1e-15)
        assert sched.lambda_g(3.7) == pytest.approx(0.4)

    def test_cone_ground_branch_linear_in_time(self):
        # w_gg = -omega sin^2(theta/2) = -0.05 on the ground branch
        path = q.rotating_cone(1.0, math.pi / 2, 0.1, SX)
        sched = q.optimal_schedule(history_of(path, 2001), lambda_g0=0.25)
        for t in (5.0, 20.0, 50.0):
            assert sched.lambda_g(t) == pytest.approx(0.05 * t + 0.25, abs=1e-10)

    def test_schedule_invariants(self, cone_path):
        sched = q.optimal_schedule(history_of(cone_path, 501), 0.1, -0.2)
        assert sched.lambda_g_values[0] == pytest.approx(0.1)
        assert sched.lambda_e_values[0] == pytest.approx(-0.2)
        frames = history_of(cone_path, 501).frames
        np.testing.assert_allclose(
            sched.dlambda_g_values, [-f.w_gg for f in frames], atol=1e-15
        )
        assert sched.quadrature_error < 1e-8

    def test_minimality_against_random_schedules(self, cone_path, rng):
        hist = history_of(cone_path, 301)
        sched = q.optimal_schedule(hist)
        ts = hist.times
        w = [(f.w_gg, f.w_ee, f.w_ge) for f in hist.frames]
        hs_opt = np.array(
            [
                q.hs_norm(*q.apply_phase(*wk, 0.0, 0.0, -wk[0], -wk[1]))
                for wk in w
            ]
        )
        for _ in range(25):
            c = rng.uniform(-0.1, 0.1, 4)
            mu = lambda t: c[0] * t + c[1] * t**2 + c[2] * np.sin(c[3] * t)
            dmu = lambda t: c[0] + 2 * c[1] * t + c[2] * c[3] * np.cos(c[3] * t)
            hs_mu = np.array(
                [
                    q.hs_norm(*q.apply_phase(*wk, mu(t), 0.3 * mu(t), dmu(t), 0.3 * dmu(t)))
                    for wk, t in zip(w, ts)
                ]
            )
            assert np.all(hs_mu >= hs_opt - 1e-15)
            mismatch = np.abs([dmu(t) + wk[0] for wk, t in zip(w, ts)])
            strict = mismatch > 1e-7
            assert np.all(hs_mu[strict] > hs_opt[strict])

    def test_offdiagonal_modulus_invariant_under_any_schedule(self, cone_path, rng):
        hist = history_of(cone_path, 101)
        for f in hist.frames[:: 20]:
            lam = rng.uniform(-3, 3, 2)
            dlam = rng.uniform(-1, 1, 2)
            _, _, w_ge = q.apply_phase(f.w_gg, f.w_ee, f.w_ge, *lam, *dlam)
            assert abs(w_ge) == pytest.approx(abs(f.w_ge), rel=1e-15)

    def test_grid_validation(self, cone_path):
        hist = history_of(cone_path, 301)
        bad = FrameHistory(
            times=hist.times[::-1], frames=hist.frames[::-1],
            b_start=hist.b_start, b_end=hist.b_end,
        )
        with pytest.raises(q.NonUniformGridUnsupported):
            q.optimal_schedule(bad)
        tiny = FrameHistory(
            times=hist.times[:2], frames=hist.frames[:2],
            b_start=hist.b_start, b_end=hist.b_end,
        )
        with pytest.raises(q.NonUniformGridUnsupported):
            q.optimal_schedule(tiny)

    def test_nonuniform_grid_resampled(self, cone_path):
        ts = np.sort(np.concatenate([np.linspace(0, 40.0, 900), [13.37]]))
        frames = [q.frame_at(cone_path, float(t)) for t in ts]
        hist = FrameHistory(times=ts, frames=frames, b_start=cone_path.b(0), b_end=cone_path.b(40.0))
        sched = q.optimal_schedule(hist)
        ref = q.optimal_schedule(history_of(cone_path, 901, t1=40.0))
        assert sched.lambda_g(20.0) == pytest.approx(ref.lambda_g(20.0), abs=1e-8)


class TestBerryPhase:
    def test_static_loop_zero(self):
        path = q.ControlPath(
            kind="custom", b=lambda t: (0.3, 0.1, 0.9), b_dot=lambda t: (0, 0, 0),
            coupling_A=SX, duration=10.0,
        )
        bp = q.berry_phase(history_of(path, 101, t1=10.0))
        assert bp.delta_lambda_g == 0.0
        assert bp.delta_lambda_e == 0.0

    @pytest.mark.parametrize("theta", [math.pi / 3, math.pi / 2])
    def test_cone_solid_angle(self, theta):
        path = q.rotating_cone(1.0, theta, 0.1, SX)
        bp = q.berry_phase(history_of(path, 1025))
        assert abs(bp.delta_lambda_g) == pytest.approx(math.pi * (1 - math.cos(theta)), abs=1e-4)

    def test_loop_additivity(self):
        path = q.rotating_cone(1.0, math.pi / 3, 0.1, SX)
        single = q.berry_phase(q.sample_history(path, 0.0, path.duration, 801))
        double = q.berry_phase(q.sample_history(path, 0.0, 2 * path.duration, 1601))
        assert double.delta_lambda_g == pytest.approx(2 * single.delta_lambda_g, abs=1e-9)

    def test_retraced_loop_zero(self):
        # phi sweeps out and back: zero enclosed solid angle
        Omega, theta, T = 1.0, math.pi / 3, 50.0

        def b(t):
            phi = 2.0 * math.sin(math.pi * t / T) ** 2
            st = math.sin(theta)
            return (Omega * st * math.cos(phi), Omega * st * math.sin(phi), Omega * math.cos(theta))

        def b_dot(t):
            phi = 2.0 * math.sin(math.pi * t / T) ** 2
            dphi = 2.0 * math.pi / T * math.sin(2 * math.pi * t / T)
            st = math.sin(theta)
            return (-Omega * st * math.sin(phi) * dphi, Omega * st * math.cos(phi) * dphi, 0.0)

        path = q.ControlPath(kind="custom", b=b, b_dot=b_dot, coupling_A=SX, duration=T)
        bp = q.berry_phase(history_of(path, 2001, t1=T))
        assert abs(bp.delta_lambda_g) < 1e-8
        assert abs(bp.delta_lambda_e) < 1e-8

    def test_mod_2pi_reporting(self):
        path = q.rotating_cone(1.0, 2.0, 0.1, SX)  # theta > pi/2: winding-rich branch
        bp = q.berry_phase(history_of(path, 1201))
        assert -math.pi < bp.delta_lambda_g_mod <= math.pi
        diff = bp.delta_lambda_g - bp.delta_lambda_g_mod
        assert diff == pytest.approx(2 * math.pi * round(diff / (2 * math.pi)), abs=1e-9)

    def test_open_arc_rejected(self):
        path = q.rotating_cone(1.0, math.pi / 3, 0.1, SX)
        with pytest.raises(q.LoopNotClosed):
            q.berry_phase(q.sample_history(path, 0.0, 0.7 * path.duration, 301))


class TestPhaseShiftedFrame:
    def test_zero_diagonals_and_invariants(self, cone_path):
        hist = history_of(cone_path, 801)
        sched = q.optimal_schedule(hist)
        f = q.frame_at(cone_path, 31.0)
        pf = q.phase_shifted_frame(f, sched, 31.0)
        assert pf.w_gg == 0.0 and pf.w_ee == 0.0
        assert abs(pf.w_ge) == pytest.approx(abs(f.w_ge), rel=1e-15)
        assert abs(pf.m2) == pytest.approx(abs(f.m2), rel=1e-15)
        assert pf.m1 == f.m1
        assert pf.omega01 == f.omega01
        assert pf.alpha == pytest.approx(math.sqrt(2) * abs(f.w_ge) / f.omega01, rel=1e-15)

    def test_trivial_schedule_constant_phase_only(self):
        # diagonals already vanish: only the constant phase e^{i(le0-lg0)} acts
        path = q.ControlPath(
            kind="custom", b=lambda t: (0.5, 0.0, 0.8), b_dot=lambda t: (0, 0, 0),
            coupling_A=SX, duration=10.0,
        )
        hist = history_of(path, 101, t1=10.0)
        sched = q.optimal_schedule(hist, lambda_g0=0.3, lambda_e0=0.9)
        f = hist.frames[40]
        pf = q.phase_shifted_frame(f, sched, hist.times[40])
        rot = cmath.exp(1j * 0.6)
        assert abs(pf.m2 - f.m2 * rot) < 1e-12
        assert abs(pf.w_ge - f.w_ge * rot) < 1e-12

    def test_apply_phase_frame_consistency(self, cone_path):
        f = q.frame_at(cone_path, 5.0)
        g = q.apply_phase_frame(f, 0.2, -0.1, -f.w_gg, -f.w_ee)
        assert g.w_gg == 0.0 and g.w_ee == 0.0
        assert abs(g.w_ge) == pytest.approx(abs(f.w_ge), rel=1e-15)
        assert g.alpha == pytest.approx(math.sqrt(2) * abs(f.w_ge) / f.omega01, rel=1e-12)
        assert type(g) is q.AdiabaticFrame

    def test_observables_match_unshifted_run_flat_spectrum(self, cone_path):
        # same physics in two gauges: rho_gg(t) and |rho_ge(t)| must agree;
        # a flat spectrum keeps the spectral-shift question out of the way
        sd = q.flat(0.4)
        t1 = cone_path.duration
        sched = q.optimal_schedule(q.sample_history(cone_path, 0.0, t1, 2049))
        cfg = q.SolverConfig(method="rk4_fixed", t0=0.0, t1=t1, dt=t1 / 8192, record_stride=32)
        rhs = lambda t, s, f: q.rhs_full(s, f, sd)
        plain = q.integrate(
            rhs, q.DensityState(1.0, 0j), cfg,
            frame_provider=lambda t: q.frame_at(cone_path, t),
        )
        shifted = q.integrate(
            rhs, q.DensityState(1.0, 0j), cfg,
            frame_provider=lambda t: q.phase_shifted_frame(
                q.frame_at(cone_path, t), sched, t
            ),
        )
        diff = max(
            max(
                abs(a.state.rho_gg - b.state.rho_gg),
                abs(abs(complex(a.state.rho_ge)) - abs(complex(b.state.rho_ge))),
            )
            for a, b in zip(plain.samples, shifted.samples)
        )
        assert diff < 1e-10
