import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collinear_lens import (
    CauseHint,
    Dataset,
    DegenerateRegressorError,
    center,
    classify_cause,
    difference_model,
    fit_ols,
    fwl_residualize,
    geometric_report,
    pairwise_slopes,
    recover_partials,
    sign_expectation_deviation,
    structure_compare,
    univariate_slopes,
    vif,
)

import oracles
from conftest import dgp_dataset, orthogonal_design, random_dataset


class TestSignExpectationDeviation:
    def test_orthogonal_design_never_flags(self, rng):
        X = orthogonal_design(rng, 30, 3)
        y = X @ np.array([1.0, -2.0, 0.5]) + 0.3 * rng.standard_normal(30)
        flags = sign_expectation_deviation(Dataset.from_arrays(X, y))
        assert flags == {"x1": False, "x2": False, "x3": False}

    def test_structural_deviation_flagged_at_large_n(self):
        # negative direct effect buried under a strong positive indirect one
        ds = dgp_dataset(seed=5, n=10000, rho=0.8, beta1=-0.1)
        flags = sign_expectation_deviation(ds)
        assert flags["x1"] is True
        assert flags["x2"] is False

    def test_matches_two_fit_oracle_on_near_duplicate_columns(self, rng):
        x1 = rng.standard_normal(40)
        x2 = x1 + 0.05 * rng.standard_normal(40)
        y = x1 + x2 + 0.5 * rng.standard_normal(40)
        ds = Dataset.from_arrays(np.column_stack([x1, x2]), y)
        flags = sign_expectation_deviation(ds)
        partial = oracles.normal_equation_slopes(ds.X.tolist(), y.tolist())
        for j, name in enumerate(("x1", "x2")):
            uni = oracles.covariance_slope(ds.X[:, j].tolist(), y.tolist())
            assert flags[name] == (uni * partial[j] < 0
                                   and abs(partial[j]) > 1e-12)

    def test_invariant_to_positive_rescaling(self, rng):
        ds = dgp_dataset(seed=8, n=60, rho=0.8, beta1=-0.1)
        base = sign_expectation_deviation(ds)
        for scales in ((2.0, 1.0, 1.0), (1.0, 0.25, 1.0), (1.0, 1.0, 30.0)):
            cols = [(name, scale * ds.column(name))
                    for name, scale in zip(ds.names, scales)]
            scaled = sign_expectation_deviation(Dataset(cols, "y"))
            assert scaled == base

    @given(st.floats(min_value=0.01, max_value=100.0),
           st.floats(min_value=0.01, max_value=100.0))
    @settings(max_examples=25, deadline=None)
    def test_rescaling_property(self, cx, cy):
        ds = dgp_dataset(seed=14, n=40, rho=0.5, beta1=0.1)
        base = sign_expectation_deviation(ds)
        cols = [("x1", cx * ds.column("x1")), ("x2", ds.column("x2")),
                ("y", cy * ds.column("y"))]
        assert sign_expectation_deviation(Dataset(cols, "y")) == base

    def test_flag_iff_recovered_partial_flips_sign(self, rng):
        # p = 2 cross-check through the pairwise-slope inversion
        for seed in range(12):
            ds = dgp_dataset(seed=100 + seed, n=30, rho=0.8, beta1=0.05)
            cd = center(ds)
            uni = univariate_slopes(cd)
            recovered = recover_partials(pairwise_slopes(cd), uni)
            flags = sign_expectation_deviation(ds)
            expected = bool(uni[0] * recovered[0] < 0
                            and abs(recovered[0]) > 1e-10)
            assert flags["x1"] == expected


class TestVIF:
    def test_orthogonal_design_all_ones(self, rng):
        X = orthogonal_design(rng, 25, 3)
        cd = center(Dataset.from_arrays(X, rng.standard_normal(25)))
        np.testing.assert_allclose(vif(cd), np.ones(3), atol=1e-10)

    def test_bivariate_closed_form(self, rng):
        for r in (0.3, 0.6, 0.9):
            u = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0]) / np.sqrt(6)
            v = np.array([1.0, 1.0, -1.0, -1.0, 1.0, -1.0])
            v -= v.mean()
            v -= u * (u @ v)
            v /= np.linalg.norm(v)
            x2 = r * u + np.sqrt(1 - r * r) * v
            cd = center(Dataset.from_arrays(np.column_stack([u, x2]),
                                            rng.standard_normal(6)))
            np.testing.assert_allclose(
                vif(cd), [1.0 / (1.0 - r * r)] * 2, rtol=1e-10
            )

    def test_dgp_large_n_approaches_population_value(self):
        ds = dgp_dataset(seed=9, n=100000, rho=0.8, beta1=0.2)
        values = vif(center(ds))
        np.testing.assert_allclose(values, [1.0 / (1.0 - 0.64)] * 2,
                                   atol=0.05)

    def test_at_least_one(self, rng):
        for _ in range(10):
            ds = random_dataset(rng, 20, 3, correlate=0.7)
            assert np.all(vif(center(ds)) >= 1.0 - 1e-12)

    def test_exact_collinearity_flags_infinity(self, rng):
        x1 = rng.standard_normal(20)
        ds = Dataset.from_arrays(np.column_stack([x1, 2.0 * x1]),
                                 rng.standard_normal(20))
        values = vif(center(ds))
        assert np.all(np.isinf(values))

    def test_single_regressor_is_one(self, rng):
        assert vif(center(random_dataset(rng, 15, 1))).tolist() == [1.0]

    def test_scale_invariance(self, rng):
        ds = random_dataset(rng, 30, 3, correlate=0.5)
        base = vif(center(ds))
        X = ds.X * np.array([3.0, -0.5, 10.0])
        scaled = vif(center(Dataset.from_arrays(X, ds.y)))
        np.testing.assert_allclose(scaled, base, rtol=1e-9)

    def test_constant_column_rejected(self, rng):
        ds = Dataset([("a", np.full(10, 1.5)), ("b", rng.standard_normal(10)),
                      ("y", rng.standard_normal(10))], "y")
        with pytest.raises(DegenerateRegressorError, match="'a'"):
            vif(center(ds))


class TestGeometricReport:
    def test_noise_free_flags_infinite_significance(self):
        ds = Dataset([("x1", [0.0, 1.0, 2.0, 3.0]),
                      ("y", [1.0, 3.0, 5.0, 7.0])], "y")
        report = geometric_report(ds)
        assert report.infinite_significance
        assert report.per_variable[0].t_paper == np.inf
        assert report.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_report_t_equals_fwl_t(self):
        ds = dgp_dataset(seed=17, n=90, rho=0.8, beta1=0.3)
        report = geometric_report(ds)
        cd = center(ds)
        for j, row in enumerate(report.per_variable):
            assert row.t_paper == pytest.approx(
                fwl_residualize(cd, j).t_value, abs=1e-9
            )

    def test_f_significant_while_no_t_is(self, rng):
        # joint signal through two nearly identical columns, small n
        gen = np.random.default_rng(0)
        n = 18
        x1 = gen.standard_normal(n)
        x2 = x1 + 0.05 * gen.standard_normal(n)
        y = x1 + x2 + 1.0 * gen.standard_normal(n)
        ds = Dataset.from_arrays(np.column_stack([x1, x2]), y)
        report = geometric_report(ds, alpha=0.05)
        from scipy import stats
        fit = fit_ols(center(ds))
        crit_t = stats.t.ppf(0.975, fit.df)
        crit_f = stats.f.ppf(0.95, 2, fit.df)
        assert report.f_stat > crit_f
        assert all(row.t_paper < crit_t for row in report.per_variable)

    def test_pythagorean_identity_reverified(self, rng):
        for _ in range(5):
            ds = random_dataset(rng, 25, 3)
            report = geometric_report(ds)
            assert report.geometric.pythagorean_gap < 1e-8

    def test_norm_bookkeeping(self):
        ds = dgp_dataset(seed=4, n=50, rho=0.5, beta1=0.3)
        report = geometric_report(ds)
        cd = center(ds)
        fit = fit_ols(cd)
        g = report.geometric
        assert g.y_norm == pytest.approx(float(np.linalg.norm(cd.y)),
                                         rel=1e-12)
        # t ratio reconstructed from the reported norms
        for j, row in enumerate(report.per_variable):
            t_from_norms = (np.sqrt(fit.df) * g.net_effect_norms[j]
                            / g.residual_norm)
            assert row.t_paper == pytest.approx(t_from_norms, rel=1e-10)
        assert np.all(g.scaled_regressor_norms >= g.net_effect_norms - 1e-12)

    def test_conventional_block_present(self, rng):
        report = geometric_report(random_dataset(rng, 20, 2))
        assert report.df_conventional == 20 - 2 - 1
        assert report.sigma_sq_conventional is not None

    def test_correlation_matrix_shape_and_diagonal(self, rng):
        report = geometric_report(random_dataset(rng, 20, 3))
        assert report.correlation_matrix.shape == (3, 3)
        np.testing.assert_allclose(np.diag(report.correlation_matrix),
                                   np.ones(3), atol=1e-12)


class TestClassifyCause:
    def test_orthogonal_all_significant_gives_none(self, rng):
        X = orthogonal_design(rng, 60, 2)
        y = 3.0 * X[:, 0] + 2.0 * X[:, 1] + 0.1 * rng.standard_normal(60)
        assert classify_cause(Dataset.from_arrays(X, y)) is CauseHint.NONE

    def test_small_sample_weak_slope_hints(self):
        # weak true slope, strong correlation, small n
        for seed in (0, 1, 2, 12, 13):
            ds = dgp_dataset(seed=seed, n=30, rho=0.8, beta1=0.05)
            hint = classify_cause(ds)
            assert hint in (CauseHint.SAMPLE_SELECTION_SUSPECTED,
                            CauseHint.INDETERMINATE)

    def test_deviation_without_difference_evidence_is_indeterminate(self):
        ds = dgp_dataset(seed=12, n=30, rho=0.8, beta1=0.05)
        assert sign_expectation_deviation(ds)["x1"]
        assert classify_cause(ds) is CauseHint.INDETERMINATE

    def test_structural_deviation_confirmed_by_difference_model(self):
        for seed in (0, 1, 2, 3):
            ds = dgp_dataset(seed=seed, n=100, rho=0.8, beta1=-0.2)
            orig = fit_ols(center(ds))
            comp = structure_compare(orig, difference_model(ds), ds)
            hint = classify_cause(ds, diff_comparison=comp)
            assert hint is CauseHint.STRUCTURE_SUSPECTED

    def test_report_embeds_hint(self):
        ds = dgp_dataset(seed=12, n=30, rho=0.8, beta1=0.05)
        report = geometric_report(ds)
        assert report.classification_hint is classify_cause(ds)
