import math

import numpy as np
import numpy.testing as npt
import pytest

from locact import signals
from locact.errors import SignalDomainError, SmoothingTooWide
from locact.signals import (
    MollifiedTwoPulse,
    MollifierComplex,
    MollifierReal,
    Sampled,
    TwoPulse,
    eval_signal,
    l2_distance,
    mollifier,
    mollifier_cdf,
    mollifier_derivative,
    mollify_two_pulse,
    signal_from_json,
    signal_to_json,
)


class TestMollifier:
    def test_center_value(self):
        assert mollifier(0.0) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_zero_at_support_edge(self):
        assert mollifier(1.0) == 0.0
        assert mollifier(-1.0) == 0.0
        assert mollifier(1.5) == 0.0

    def test_half_value(self):
        # 1 / (0.25 - 1) = -4/3
        assert mollifier(0.5) == pytest.approx(math.exp(-4.0 / 3.0), rel=1e-15)

    def test_positive_inside_support(self):
        t = np.linspace(-0.999, 0.999, 1001)
        assert np.all(mollifier(t) > 0.0)

    def test_derivative_center_and_edges(self):
        assert mollifier_derivative(0.0) == 0.0
        assert mollifier_derivative(1.0) == 0.0
        assert mollifier_derivative(-1.0) == 0.0

    def test_derivative_half_value(self):
        expected = -2.0 * 0.5 / 0.5625 * math.exp(-4.0 / 3.0)
        assert mollifier_derivative(0.5) == pytest.approx(expected, rel=1e-13)

    def test_derivative_matches_central_difference(self):
        t = np.arange(-0.999, 0.999, 1e-3)
        h = 1e-6
        fd = (mollifier(t + h) - mollifier(t - h)) / (2.0 * h)
        assert np.max(np.abs(mollifier_derivative(t) - fd)) <= 1e-6

    def test_no_overflow_near_edges(self):
        t = np.array([-1.0 + 1e-13, 1.0 - 1e-13, 1.0 - 1e-8])
        assert np.all(np.isfinite(mollifier_derivative(t)))

    def test_cdf_endpoints_and_monotone(self):
        assert mollifier_cdf(-1.0) == 0.0
        assert mollifier_cdf(1.0) == pytest.approx(1.0, abs=1e-12)
        y = np.linspace(-1.0, 1.0, 201)
        c = mollifier_cdf(y)
        assert np.all(np.diff(c) >= -1e-14)  # monotone up to quadrature noise

    def test_cdf_against_trapezoid_oracle(self):
        s = np.linspace(-1.0, 1.0, 400001)
        r = mollifier(s)
        dense = np.concatenate([[0.0], np.cumsum(0.5 * (r[1:] + r[:-1]))]) * (s[1] - s[0])
        dense /= dense[-1]
        for y in (-0.8, -0.3, 0.0, 0.4, 0.9):
            i = np.argmin(np.abs(s - y))
            assert mollifier_cdf(y) == pytest.approx(dense[i], abs=1e-6)


class TestEvalSignal:
    def test_two_pulse_on_first_pulse(self):
        sig = TwoPulse(a=1.0, b=1.0, k=1.0, T=2.0, direction=[1.0, 0.0, 0.0])
        npt.assert_allclose(eval_signal(sig, 0.5), [1.0, 0.0, 0.0])

    def test_two_pulse_gap_is_zero(self):
        sig = TwoPulse(a=1.0, b=1.0, k=1.0, T=3.0, direction=[1.0])
        npt.assert_allclose(eval_signal(sig, 1.5), [0.0])

    def test_two_pulse_left_continuous_at_jumps(self):
        sig = TwoPulse(a=2.0, b=-3.0, k=1.0, T=4.0, direction=[1.0])
        assert eval_signal(sig, 1.0)[0] == 2.0    # end of first pulse
        assert eval_signal(sig, 3.0)[0] == 0.0    # gap value persists
        assert eval_signal(sig, 3.0 + 1e-9)[0] == -3.0

    def test_two_pulse_requires_disjoint_pulses(self):
        with pytest.raises(ValueError):
            TwoPulse(a=1.0, b=1.0, k=0.4, T=2.0, direction=[1.0])

    def test_mollifier_real_zero_slope_at_center(self):
        sig = MollifierReal(lam=1.0, v=[1.0], T=1.0)
        npt.assert_allclose(eval_signal(sig, 0.5), [0.0], atol=1e-15)

    def test_mollifier_complex_window(self):
        sig = MollifierComplex(alpha=0.1, beta=1.0, v1=[1.0, 0.0], v2=[0.0, -1.0],
                               t0=2.0, eps=1.0, T=4.0)
        assert np.linalg.norm(eval_signal(sig, 0.5)) == 0.0  # outside window
        assert np.linalg.norm(eval_signal(sig, 2.5)) > 0.0

    def test_outside_domain_raises(self):
        sig = MollifierReal(lam=0.0, v=[1.0], T=1.0)
        with pytest.raises(SignalDomainError):
            eval_signal(sig, 1.5)
        with pytest.raises(SignalDomainError):
            eval_signal(sig, -0.5)

    def test_sampled_linear_interpolation(self):
        sig = Sampled(times=[0.0, 1.0, 2.0], values=[[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
        npt.assert_allclose(eval_signal(sig, 0.5), [1.0, 2.0])
        assert sig.T == 2.0

    def test_vectorized_evaluation_shape(self):
        sig = TwoPulse(a=1.0, b=2.0, k=1.0, T=3.0, direction=[0.0, 1.0])
        out = eval_signal(sig, np.linspace(0.0, 3.0, 7))
        assert out.shape == (7, 2)


class TestMollify:
    def test_plateau_preserved_at_pulse_center(self):
        base = TwoPulse(a=3.0, b=-1.0, k=1.0, T=4.0, direction=[1.0])
        smooth = mollify_two_pulse(base, 0.2)
        center = eval_signal(smooth, 0.5)[0]
        assert center == pytest.approx(3.0, abs=1e-12)

    def test_gap_is_zero(self):
        base = TwoPulse(a=1.0, b=1.0, k=1.0, T=4.0, direction=[1.0])
        smooth = mollify_two_pulse(base, 0.1)
        assert eval_signal(smooth, 2.0)[0] == pytest.approx(0.0, abs=1e-14)

    def test_l2_distance_decreases_and_bounded(self):
        base = TwoPulse(a=1.0, b=-1.0, k=1.0, T=4.0, direction=[1.0])
        dists = []
        for eps in (0.2, 0.1, 0.05):
            smooth = mollify_two_pulse(base, eps)
            d = l2_distance(smooth, base, 4.0)
            assert d <= math.sqrt(2.0 * (1.0 + 1.0) * 2.0 * eps)
            dists.append(d)
        assert dists[0] > dists[1] > dists[2]

    def test_smoothing_too_wide_rejected(self):
        base = TwoPulse(a=1.0, b=1.0, k=1.0, T=4.0, direction=[1.0])
        with pytest.raises(SmoothingTooWide):
            mollify_two_pulse(base, 0.6)  # > 1/(2k)
        with pytest.raises(SmoothingTooWide):
            mollify_two_pulse(base, 1.2)  # > (T - 2/k)/2

    def test_continuity_at_transition_edges(self):
        base = TwoPulse(a=1.0, b=2.0, k=1.0, T=5.0, direction=[1.0])
        smooth = mollify_two_pulse(base, 0.25)
        t = np.linspace(0.0, 5.0, 4001)
        vals = eval_signal(smooth, t)[:, 0]
        assert np.max(np.abs(np.diff(vals))) < 0.02  # no jumps at grid scale


class TestSolutionIdentities:
    def test_rotating_window_signal_solution_identity(self):
        # on the rotation block [[a, -b], [b, a]] the windowed rotating input
        # u = h'(t) e^(at) (sin(bt) v1 + cos(bt) v2) has the closed-form
        # solution x(t) = h(t) e^(at) (cos(bt) v2 + sin(bt) v1)
        from locact import linsys

        alpha, beta = 0.3, 2.0
        A = np.array([[alpha, -beta], [beta, alpha]])
        sys = linsys.make_system(A, np.eye(2))
        v1 = np.array([1.0, 0.0])
        v2 = np.array([0.0, -1.0])
        sig = MollifierComplex(alpha=alpha, beta=beta, v1=v1, v2=v2,
                               t0=1.5, eps=1.0, T=3.0)
        traj = linsys.solve_forced(sys, sig, 3.0, 6000)
        t = traj.times
        h = mollifier((t - 1.5) / 1.0)
        expected = (h * np.exp(alpha * t))[:, None] * (
            np.outer(np.cos(beta * t), v2) + np.outer(np.sin(beta * t), v1))
        npt.assert_allclose(traj.states, expected, atol=1e-8)


class TestSerialization:
    @pytest.mark.parametrize("sig", [
        TwoPulse(a=1.0, b=-1.0, k=2.0, T=3.0, direction=[0.6, 0.8]),
        MollifierReal(lam=0.7, v=[1.0, 2.0], T=2.0),
        MollifierComplex(alpha=0.1, beta=2.0, v1=[1.0, 0.0], v2=[0.0, 1.0],
                         t0=1.0, eps=0.5, T=3.0),
        MollifiedTwoPulse(base=TwoPulse(a=1.0, b=1.0, k=1.0, T=4.0,
                                        direction=[1.0]), eps_s=0.1),
        Sampled(times=[0.0, 0.5, 1.0], values=[[0.0], [1.0], [0.0]]),
    ])
    def test_round_trip(self, sig):
        back = signal_from_json(signal_to_json(sig))
        assert type(back) is type(sig)
        t = np.linspace(0.0, signals.horizon(sig), 50)
        npt.assert_allclose(eval_signal(back, t), eval_signal(sig, t), atol=1e-14)

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            signal_from_json({"variant": "Nope"})
