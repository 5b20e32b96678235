import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qspeedup import measures
from qspeedup.dynamics import (DensityMatrix, density_trajectory,
                               population_rate, trajectory)
from qspeedup.measures import (GenericQslResult, ReportStatus, bures_angle,
                               evaluate_point, monotone_segments,
                               nonmarkov_three_level, nonmarkov_two_level,
                               qsl_generic, qsl_three_level, qsl_two_level,
                               schatten_norm, trace_distance)
from qspeedup.spectral import AtomKind, ModelParams

TWO = ModelParams(gamma0=1.0, n_atoms=3)
VEE = ModelParams(gamma0=1.0, n_atoms=3, theta=0.4, kind=AtomKind.THREE_LEVEL_V)
# gamma0 = lam = 2, N = 1: d = 2i, so g(t) = exp(-t)(cos t + sin t) and the
# population rate vanishes inside [0, 5] only at 3*pi/4 (g = 0) and pi
# (g' = 0); the single ascending segment lifts p from 0 to exp(-2*pi)
RESONANT = ModelParams(gamma0=2.0, n_atoms=1)


class TestNorms:
    def test_identity_values(self):
        eye = np.eye(2, dtype=complex)
        assert schatten_norm(eye, 1) == pytest.approx(2.0)
        assert schatten_norm(eye, 2) == pytest.approx(math.sqrt(2.0))
        assert schatten_norm(eye, math.inf) == pytest.approx(1.0)

    def test_accepts_density_matrix_wrapper(self):
        rho = DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
        assert schatten_norm(rho, 1) == pytest.approx(1.0)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError, match="square"):
            schatten_norm(np.ones((2, 3)), 1)
        with pytest.raises(ValueError, match="order"):
            schatten_norm(np.eye(2), 3)

    @given(st.integers(0, 2**32 - 1))
    def test_order_hierarchy_and_triangle(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        slack = 1e-12
        n_inf, n_2, n_1 = (schatten_norm(a, p) for p in (math.inf, 2, 1))
        assert n_inf <= n_2 + slack
        assert n_2 <= n_1 + slack
        for p in (1, 2, math.inf):
            assert schatten_norm(a + b, p) <= (schatten_norm(a, p)
                                               + schatten_norm(b, p) + slack)

    def test_trace_distance_extremes(self):
        up = np.diag([1.0, 0.0]).astype(complex)
        down = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(up, up) == pytest.approx(0.0, abs=1e-15)
        assert trace_distance(up, down) == pytest.approx(1.0)
        with pytest.raises(ValueError, match="equal dimension"):
            trace_distance(up, np.eye(3, dtype=complex) / 3)


class TestBuresAngle:
    def test_reference_angles(self):
        up = np.diag([1.0, 0.0]).astype(complex)
        down = np.diag([0.0, 1.0]).astype(complex)
        plus = np.full((2, 2), 0.5, dtype=complex)
        assert bures_angle(up, up) == pytest.approx(0.0, abs=1e-12)
        assert bures_angle(up, down) == pytest.approx(math.pi / 2)
        assert bures_angle(up, plus) == pytest.approx(math.pi / 4)

    def test_requires_pure_initial(self):
        mixed = np.eye(2, dtype=complex) / 2
        with pytest.raises(ValueError, match="pure"):
            bures_angle(mixed, mixed)


class TestMonotoneSegments:
    def test_known_zero_structure(self):
        segments = monotone_segments(lambda t: population_rate(t, RESONANT), 5.0)
        cuts = [a for a, _, _ in segments] + [segments[-1][1]]
        assert np.allclose(cuts, [0.0, 3 * math.pi / 4, math.pi, 5.0], atol=1e-9)
        assert [up for _, _, up in segments] == [False, True, False]

    def test_stationary_rate_returns_none(self):
        assert monotone_segments(lambda t: np.zeros_like(np.asarray(t)), 5.0) is None

    def test_segments_tile_the_window(self):
        segments = monotone_segments(lambda t: population_rate(t, TWO), 5.0)
        assert segments[0][0] == 0.0 and segments[-1][1] == 5.0
        for (_, b, _), (a, _, _) in zip(segments, segments[1:]):
            assert a == b


class TestFunctionals:
    def test_backflow_closed_form_value(self):
        assert nonmarkov_two_level(RESONANT, 5.0) == pytest.approx(
            math.exp(-2 * math.pi), abs=1e-10)

    def test_monotone_regime_is_exact(self):
        weak = ModelParams(gamma0=0.1, n_atoms=1)
        report = evaluate_point(weak, 5.0)
        assert report.nonmarkov == 0.0
        assert report.ratio == 1.0
        assert abs(report.tau_qsl - 5.0) < 1e-12
        assert report.status is ReportStatus.NORMAL

    def test_stationary_point(self):
        report = evaluate_point(ModelParams(gamma0=0.0, n_atoms=4), 5.0)
        assert report.status is ReportStatus.STATIONARY
        assert report.tau_qsl == 0.0
        assert report.ratio == 1.0
        assert report.nonmarkov == 0.0
        assert report.final_population == 1.0

    @pytest.mark.parametrize("params", [RESONANT, TWO, VEE])
    def test_rate_integral_identity(self, params):
        # (1 - p_tau) + 2 R must equal the independently sampled
        # integral of |dp/dt|
        tau = 5.0
        report = evaluate_point(params, tau)
        t = np.linspace(0.0, tau, 2**17 + 1)
        dense = np.trapezoid(np.abs(population_rate(t, params)), t)
        assembled = (1.0 - report.final_population) + 2.0 * report.nonmarkov
        assert assembled == pytest.approx(dense, abs=1e-6)
        assert report.tau_qsl == pytest.approx(
            tau * (1.0 - report.final_population) / assembled, abs=1e-12)

    def test_flat_v_backflow_matches_two_level(self):
        flat = ModelParams(gamma0=2.0, n_atoms=3, kind=AtomKind.THREE_LEVEL_V)
        two = ModelParams(gamma0=2.0, n_atoms=3)
        assert nonmarkov_three_level(flat, 5.0) == pytest.approx(
            nonmarkov_two_level(two, 5.0), abs=1e-10)
        assert qsl_three_level(flat, 5.0) == pytest.approx(
            qsl_two_level(two, 5.0), abs=1e-10)

    def test_backflow_grows_with_the_window(self):
        values = [nonmarkov_two_level(RESONANT, tau) for tau in (2.5, 5.0, 10.0)]
        assert values[0] < values[1] < values[2]
        # windows past the last rate zero pick up whole e**(-2 pi k) rises
        assert values[2] == pytest.approx(
            sum(math.exp(-2 * math.pi * k) for k in (1, 2, 3)), abs=1e-10)

    def test_kind_guards(self):
        with pytest.raises(ValueError):
            nonmarkov_two_level(VEE, 5.0)
        with pytest.raises(ValueError):
            nonmarkov_three_level(TWO, 5.0)
        with pytest.raises(ValueError):
            qsl_two_level(VEE, 5.0)
        with pytest.raises(ValueError):
            qsl_three_level(TWO, 5.0)


class TestGenericQsl:
    def test_matches_population_functionals(self):
        times, rhos, rates = density_trajectory(TWO, 5.0, steps=8192)
        result = qsl_generic(times, rhos, rho_rates=rates)
        assert result.status is ReportStatus.NORMAL
        assert result.tau_qsl == pytest.approx(qsl_two_level(TWO, 5.0), rel=1e-5)
        pop = trajectory(TWO, 5.0).population[-1]
        assert math.sin(result.bures) ** 2 == pytest.approx(1 - pop, abs=1e-12)

    def test_gradient_fallback_agrees_with_exact_rates(self):
        times, rhos, rates = density_trajectory(VEE, 5.0, steps=8192)
        with_rates = qsl_generic(times, rhos, rho_rates=rates)
        without = qsl_generic(times, rhos)
        assert without.tau_qsl == pytest.approx(with_rates.tau_qsl, rel=1e-3)

    def test_rate_hierarchy(self):
        times, rhos, rates = density_trajectory(TWO, 5.0, steps=4096)
        lam1, lam2, lam_inf = qsl_generic(times, rhos, rho_rates=rates).rates
        assert lam_inf <= lam2 <= lam1

    def test_stationary_stack(self):
        times = np.linspace(0.0, 5.0, 4097)
        rhos = np.broadcast_to(np.diag([1.0, 0.0]).astype(complex),
                               (4097, 2, 2)).copy()
        result = qsl_generic(times, rhos)
        assert result.status is ReportStatus.STATIONARY
        assert result.tau_qsl == 0.0

    def test_input_validation(self):
        times, rhos, rates = density_trajectory(TWO, 5.0, steps=4096)
        with pytest.raises(ValueError, match="4096"):
            qsl_generic(times[:100], rhos[:100])
        bad_times = times.copy()
        bad_times[5] = bad_times[4]
        with pytest.raises(ValueError, match="increasing"):
            qsl_generic(bad_times, rhos)
        with pytest.raises(ValueError, match="one state per snapshot"):
            qsl_generic(times, rhos[:-1])
        with pytest.raises(ValueError, match="match rhos"):
            qsl_generic(times, rhos, rho_rates=rates[:-1])
        mixed = np.broadcast_to(np.eye(2, dtype=complex) / 2,
                                rhos.shape).copy()
        with pytest.raises(ValueError, match="pure"):
            qsl_generic(times, mixed)


def test_clear_caches_resets_memoisation():
    measures.clear_caches()
    nonmarkov_two_level(TWO, 5.0)
    assert measures._functionals.cache_info().currsize > 0
    measures.clear_caches()
    assert measures._functionals.cache_info().currsize == 0
