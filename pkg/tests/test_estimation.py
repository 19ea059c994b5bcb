import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from arimakit import datasets
from arimakit.errors import (DegenerateSeriesError, InsufficientDataError, InvalidParamsError,
                             NonpositiveDofError, NoViableModelError, UnusableSeriesError)
from arimakit.estimation import (ArimaOrder, ArimaParams, css_objective, fit, fixed_fit,
                                 is_invertible, is_stationary, ljung_box, residual_diagnostics,
                                 select_model)
from arimakit.series import Series
from arimakit.synthgen import SimSpec, simulate, standard_normals


def sim(phi=(), theta=(), n=500, seed=42, mu=0.0):
    return simulate(SimSpec(ArimaParams(phi=phi, theta=theta, mu=mu), n=n, seed=seed))


def brute_ljung_box(x, lags):
    """Oracle: Q from raw Python sums."""
    n = len(x)
    m = sum(x) / n
    den = sum((v - m) ** 2 for v in x)
    q = 0.0
    for k in range(1, lags + 1):
        rk = sum((x[t] - m) * (x[t + k] - m) for t in range(n - k)) / den
        q += rk * rk / (n - k)
    return n * (n + 2) * q


class TestOrderAndParams:
    def test_parse(self):
        assert ArimaOrder.parse("1,0,1") == ArimaOrder(1, 0, 1)
        assert ArimaOrder.parse("(2, 1, 0)") == ArimaOrder(2, 1, 0)
        with pytest.raises(ValueError):
            ArimaOrder.parse("1,0")
        with pytest.raises(ValueError):
            ArimaOrder(-1, 0, 0)

    @pytest.mark.parametrize("phi,ok", [((0.5,), True), ((1.0,), False), ((-1.1,), False),
                                        ((1.8, -0.9), True), ((1.5, -0.5), False),
                                        ((0.2, 0.0), True)])
    def test_stationarity(self, phi, ok):
        assert is_stationary(phi) is ok

    def test_boundary_margin(self):
        assert not is_stationary((1.0 - 1e-12,))
        assert is_stationary((1.0 - 1e-6,))

    def test_invalid_params_name_the_condition(self):
        with pytest.raises(InvalidParamsError, match="nonstationary"):
            ArimaParams(phi=(1.1,))
        with pytest.raises(InvalidParamsError, match="noninvertible"):
            ArimaParams(theta=(-2.0,))
        with pytest.raises(InvalidParamsError, match="sigma2"):
            ArimaParams(sigma2=0.0)
        assert is_invertible((0.4,))


class TestCssObjective:
    def test_white_noise_reduction(self):
        w = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0])
        css, a = css_objective(ArimaParams(mu=w.mean()), w)
        assert css == pytest.approx(float(np.sum((w - w.mean()) ** 2)), abs=1e-12)
        assert len(a) == 6

    def test_ar_term_vanishes(self):
        css, a = css_objective(ArimaParams(phi=(0.0,)), [1.0, 2.0, 3.0])
        assert_allclose(a, [2.0, 3.0])
        assert css == 13.0

    def test_hand_recursion(self):
        css, a = css_objective(ArimaParams(phi=(0.5,), theta=(0.5,)), [0.0, 4.0, 2.0])
        assert_allclose(a, [4.0, 2.0])
        assert css == 20.0

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            css_objective(ArimaParams(phi=(0.1, 0.1)), [1.0, 2.0])


class TestFit:
    def test_white_noise(self):
        f = fit(sim(n=500, seed=42), ArimaOrder(1, 0, 1))
        assert abs(f.params.phi[0]) < 0.2
        assert abs(f.params.theta[0]) < 0.2
        assert 0.8 <= f.params.sigma2 <= 1.2

    def test_white_noise_identifiable_part(self):
        # phi and theta are not separately identified for white noise; their
        # difference (the first psi weight) is
        for seed in range(5):
            f = fit(sim(n=500, seed=seed), ArimaOrder(1, 0, 1))
            assert abs(f.params.phi[0] - f.params.theta[0]) < 0.15

    def test_arma11_recovery(self):
        f = fit(sim((0.6,), (0.3,), n=500, seed=42), ArimaOrder(1, 0, 1))
        assert f.params.phi[0] == pytest.approx(0.6, abs=0.15)
        assert f.params.theta[0] == pytest.approx(0.3, abs=0.15)
        assert f.converged

    def test_mean_model_closed_form(self):
        s = datasets.builtin("deaths").get("accidents")
        x = np.array(s.values)
        f = fit(s, ArimaOrder(0, 0, 0))
        assert f.params.mu == pytest.approx(x.mean(), abs=1e-9)
        assert f.params.sigma2 == pytest.approx(x.var(), rel=1e-12)

    def test_bookkeeping(self):
        f = fit(sim((0.5,), (), n=120, seed=9), ArimaOrder(1, 0, 0))
        k = 3
        assert len(f.residuals) == f.n_effective == 120
        assert f.residuals[0] == 0.0
        assert f.css == pytest.approx(float(np.sum(f.residuals ** 2)), abs=1e-9)
        recomputed, _ = css_objective(f.params, np.array(sim((0.5,), (), n=120, seed=9).values))
        assert f.css == pytest.approx(recomputed, abs=1e-9)
        assert f.params.sigma2 == pytest.approx(f.css / 120, rel=1e-14)
        ll = -60 * (math.log(2 * math.pi * f.params.sigma2) + 1)
        assert f.loglik == pytest.approx(ll, rel=1e-14)
        assert f.aic == pytest.approx(-2 * ll + 2 * k, rel=1e-14)
        assert f.bic == pytest.approx(-2 * ll + math.log(120) * k, rel=1e-14)
        assert not f.small_sample

    def test_differenced_fit(self):
        s = simulate(SimSpec(ArimaParams(phi=(0.5,)), n=300, d=1, seed=42))
        f = fit(s, ArimaOrder(1, 1, 0))
        assert f.n_effective == 299
        assert f.params.phi[0] == pytest.approx(0.5, abs=0.12)
        assert f.params.mu == 0.0

    def test_random_walk_has_no_drift(self):
        s = Series("x", 0, (1.0, 3.0, 4.0, 8.0))
        f = fit(s, ArimaOrder(0, 1, 0))
        assert f.params.mu == 0.0
        assert f.params.sigma2 == pytest.approx((4 + 1 + 16) / 3)

    def test_small_sample_table_series(self):
        s = datasets.builtin("deaths").get("pneumonia")
        f = fit(s, ArimaOrder(1, 0, 1))
        assert f.n_effective == 5 and f.small_sample
        assert f.source_years == (2012, 2016)

    def test_insufficient_message(self):
        s = datasets.builtin("deaths").get("pneumonia")
        with pytest.raises(InsufficientDataError, match="need ≥ 6, have 5"):
            fit(s, ArimaOrder(2, 0, 2))

    def test_unusable_and_degenerate(self):
        with pytest.raises(UnusableSeriesError):
            fit(Series("x", 2000, (None, None)), ArimaOrder(0, 0, 0))
        with pytest.raises(DegenerateSeriesError):
            fit(Series("x", 2000, (2.0, 2.0, 2.0)), ArimaOrder(0, 0, 0))

    def test_uses_latest_contiguous_run(self):
        s = Series("x", 2000, (1.0, None, 4.0, 2.0, 7.0, 3.0, 5.0))
        f = fit(s, ArimaOrder(0, 0, 0))
        assert f.source_years == (2002, 2006)

    def test_location_shift_equivariance(self):
        base = sim((0.6,), (0.3,), n=200, seed=42)
        shifted = Series("y", base.start_year, tuple(v + 1000.0 for v in base.values))
        f0 = fit(base, ArimaOrder(1, 0, 1))
        f1 = fit(shifted, ArimaOrder(1, 0, 1))
        assert_allclose(f1.params.phi, f0.params.phi, atol=1e-6)
        assert_allclose(f1.params.theta, f0.params.theta, atol=1e-6)
        assert f1.params.sigma2 == pytest.approx(f0.params.sigma2, abs=1e-6)
        assert f1.params.mu - f0.params.mu == pytest.approx(1000.0, abs=1e-6)

    def test_deterministic(self):
        s = sim((0.6,), (0.3,), n=300, seed=1)
        a, b = fit(s, (1, 0, 1)), fit(s, (1, 0, 1))
        assert a.to_dict() == b.to_dict()
        assert a.residuals.tobytes() == b.residuals.tobytes()

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=8, max_size=30),
           st.sampled_from([(1, 0, 1), (2, 0, 1), (1, 0, 2), (0, 1, 1), (2, 1, 0)]))
    def test_accepted_params_are_admissible(self, xs, order):
        if np.ptp(np.diff(xs) if order[1] else xs) < 1e-3:
            return
        f = fit(Series("h", 0, tuple(xs)), ArimaOrder(*order))
        assert is_stationary(f.params.phi)
        assert is_invertible(f.params.theta)
        assert f.params.sigma2 > 0


class TestFixedFit:
    def test_matches_css(self):
        s = Series("x", 0, (0.0, 4.0, 2.0))
        prm = ArimaParams(phi=(0.5,), theta=(0.5,), sigma2=2.0)
        f = fixed_fit(s, ArimaOrder(1, 0, 1), prm)
        assert f.css == 20.0
        assert list(f.residuals) == [0.0, 4.0, 2.0]
        assert f.params.sigma2 == 2.0

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            fixed_fit(Series("x", 0, (1.0, 2.0)), ArimaOrder(1, 0, 0), ArimaParams())


class TestLjungBox:
    def test_direct_summation(self):
        x = standard_normals(123, 60).tolist()
        q, dof = ljung_box(x, 12, 2)
        assert q == pytest.approx(brute_ljung_box(x, 12), rel=0, abs=1e-9)
        assert dof == 10

    def test_degenerate(self):
        with pytest.raises(DegenerateSeriesError):
            ljung_box([1.0] * 20, 5, 0)

    def test_nonpositive_dof(self):
        with pytest.raises(NonpositiveDofError):
            ljung_box(standard_normals(1, 50), 2, 2)

    def test_monte_carlo_size(self):
        below = sum(ljung_box(standard_normals(1000 + i, 200), 10, 0)[0] < 15.99
                    for i in range(100))
        assert below >= 85

    def test_residual_diagnostics(self):
        f = fit(sim((0.6,), (0.3,), n=300, seed=42), ArimaOrder(1, 0, 1))
        lb, note = residual_diagnostics(f)
        assert note is None and lb.lags == 10 and lb.dof == 8
        assert 0.0 <= lb.p_value <= 1.0
        # five-point series: 4 conditioned residuals allow 3 lags, dof 1
        f = fit(datasets.builtin("deaths").get("pneumonia"), ArimaOrder(1, 0, 1))
        lb, note = residual_diagnostics(f)
        assert lb.lags == 3 and lb.dof == 1

    def test_diagnostics_unavailable(self):
        f = fit(datasets.builtin("deaths").get("pneumonia"), ArimaOrder(2, 0, 1))
        lb, note = residual_diagnostics(f)
        assert lb is None and "too few residuals" in note


class TestSelectModel:
    def test_singleton_grid(self):
        s = datasets.builtin("deaths").get("pneumonia")
        sel = select_model(s, orders=[(1, 0, 1)])
        assert sel.to_dict() == fit(s, ArimaOrder(1, 0, 1)).to_dict()
        assert sel.residuals.tobytes() == fit(s, ArimaOrder(1, 0, 1)).residuals.tobytes()
        assert [c.order for c in sel.candidates] == [ArimaOrder(1, 0, 1)]

    def test_ar1_selection(self):
        f = select_model(sim((0.8,), n=500, seed=42), 2, 2, {0})
        assert f.order.p >= 1 and f.order.q <= 1
        assert len(f.candidates) == 9
        assert all(c.status == "fitted" for c in f.candidates)
        assert f.aic == min(c.aic for c in f.candidates)

    def test_short_series_skips_cells(self):
        s = datasets.builtin("deaths").get("pneumonia")
        f = select_model(s, 2, 2, {0})
        skipped = {c.order for c in f.candidates if c.status == "skipped"}
        assert skipped == {ArimaOrder(p, 0, q) for p in range(3) for q in range(3) if p + q + 2 > 5}
        for c in f.candidates:
            if c.status == "skipped":
                assert "insufficient data" in c.reason

    def test_tie_break(self):
        # identical AIC cannot be forced easily; check the key ordering directly
        from arimakit.estimation import _selection_key

        class F:
            def __init__(self, p, d, q):
                self.order, self.aic = ArimaOrder(p, d, q), 1.0
        cands = [F(1, 0, 1), F(0, 1, 1), F(1, 0, 0), F(0, 0, 1)]
        best = min(cands, key=_selection_key)
        assert best.order == ArimaOrder(0, 0, 1)

    def test_no_viable_model(self):
        with pytest.raises(NoViableModelError) as err:
            select_model(Series("x", 0, (5.0, 5.0, 5.0)), 1, 1, [0, 1])
        assert len(err.value.failures) == 8
