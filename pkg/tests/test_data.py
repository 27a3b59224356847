import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggmnet.data import (
    CovarianceMatrix,
    RawDataset,
    load_csv,
    ridge_condition,
    sample_covariance,
    standardize,
)
from ggmnet.errors import NumericalError, ValidationError


def write_csv(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_fixture_shape(self, table1_path):
        raw = load_csv(table1_path)
        assert raw.n == 19
        assert raw.p == 41
        assert raw.domain_labels is not None
        assert raw.domain_labels.count("Somatic") == 7
        assert raw.domain_labels.count("PTSD") == 19

    def test_tiny_file(self, tmp_path):
        raw = load_csv(write_csv(tmp_path, "a,b\n1,2\n3,4\n"))
        assert raw.n == 2 and raw.p == 2
        assert raw.variable_names == ["a", "b"]

    def test_non_numeric_cell_names_location(self, tmp_path):
        path = write_csv(tmp_path, "Som1,Som2\n1,2\n3,4\n5,oops\n")
        with pytest.raises(ValidationError, match=r"row 3.*'Som2'"):
            load_csv(path)

    def test_duplicate_names(self, tmp_path):
        with pytest.raises(ValidationError, match="duplicate"):
            load_csv(write_csv(tmp_path, "a,a\n1,2\n3,4\n"))

    def test_too_few_rows(self, tmp_path):
        with pytest.raises(ValidationError):
            load_csv(write_csv(tmp_path, "a,b\n1,2\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="no such file"):
            load_csv(tmp_path / "nope.csv")

    def test_domain_sidecar_json(self, tmp_path):
        data = write_csv(tmp_path, "a,b\n1,2\n3,4\n")
        sidecar = write_csv(tmp_path, '{"a": "X", "b": "Y"}', name="domains.json")
        raw = load_csv(data, domains_path=sidecar)
        assert raw.domain_labels == ["X", "Y"]

    def test_domain_sidecar_csv(self, tmp_path):
        data = write_csv(tmp_path, "a,b\n1,2\n3,4\n")
        sidecar = write_csv(tmp_path, "a,X\nb,Y\n", name="domains.csv")
        raw = load_csv(data, domains_path=sidecar)
        assert raw.domain_labels == ["X", "Y"]


class TestStandardize:
    def test_simple_column(self):
        raw = RawDataset(
            values=np.array([[1.0, 5.0], [2.0, 5.5], [3.0, 7.0]]),
            variable_names=["a", "b"],
        )
        std = standardize(raw)
        np.testing.assert_allclose(std.X[:, 0], [-1.0, 0.0, 1.0], atol=1e-12)

    def test_zero_variance_names_column(self):
        raw = RawDataset(
            values=np.array([[2.0, 1.0], [2.0, 2.0], [2.0, 3.0]]),
            variable_names=["const", "ok"],
        )
        with pytest.raises(NumericalError, match="'const'"):
            standardize(raw)

    def test_fixture_moments(self, table1_path):
        raw = load_csv(table1_path)
        som3 = raw.values[:, raw.variable_names.index("Som3")]
        assert som3.mean() == pytest.approx(1.11, abs=1e-4)
        assert som3.std(ddof=1) == pytest.approx(0.74, abs=1e-4)
        std = standardize(raw)
        np.testing.assert_allclose(std.X.mean(axis=0), 0.0, atol=1e-10)
        np.testing.assert_allclose(std.X.std(axis=0, ddof=1), 1.0, atol=1e-10)

    def test_divisor_n(self):
        raw = RawDataset(
            values=np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 8.0]]),
            variable_names=["a", "b"],
        )
        std = standardize(raw, divisor="n")
        np.testing.assert_allclose(std.X.std(axis=0, ddof=0), 1.0, atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        raw = RawDataset(
            values=rng.normal(size=(8, 4)) * rng.uniform(0.5, 4.0, size=4)
            + rng.normal(size=4),
            variable_names=list("abcd"),
        )
        once = standardize(raw)
        twice = standardize(
            RawDataset(values=once.X, variable_names=raw.variable_names)
        )
        np.testing.assert_allclose(twice.X, once.X, atol=1e-10)


class TestSampleCovariance:
    def test_identical_columns(self):
        rng = np.random.default_rng(0)
        col = rng.normal(size=10)
        raw = RawDataset(values=np.column_stack([col, col]), variable_names=["a", "b"])
        cov = sample_covariance(standardize(raw))
        assert cov.S[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_columns(self):
        a = np.array([1.0, -1.0, 1.0, -1.0])
        b = np.array([1.0, 1.0, -1.0, -1.0])
        raw = RawDataset(values=np.column_stack([a, b]), variable_names=["a", "b"])
        cov = sample_covariance(standardize(raw))
        assert cov.S[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_unit_diagonal(self, table1_path):
        cov = sample_covariance(standardize(load_csv(table1_path)))
        np.testing.assert_allclose(np.diag(cov.S), 1.0, atol=1e-12)

    def test_rank_deficient_when_n_lt_p(self):
        rng = np.random.default_rng(3)
        raw = RawDataset(
            values=rng.normal(size=(19, 41)),
            variable_names=[f"V{i}" for i in range(41)],
        )
        cov = sample_covariance(standardize(raw))
        eigvals = np.linalg.eigvalsh(cov.S)
        assert np.sum(eigvals > 1e-10) <= 18
        assert eigvals[0] == pytest.approx(0.0, abs=1e-10)

    def test_exactly_symmetric(self):
        rng = np.random.default_rng(4)
        raw = RawDataset(values=rng.normal(size=(12, 6)), variable_names=list("abcdef"))
        cov = sample_covariance(standardize(raw))
        assert np.array_equal(cov.S, cov.S.T)


class TestRidgeCondition:
    def test_identity_untouched(self):
        cov = CovarianceMatrix(S=np.eye(4))
        out = ridge_condition(cov, kappa_max=100.0)
        assert out.ridge_epsilon == 0.0
        assert out.condition_number == pytest.approx(1.0)

    def test_singular_closed_form(self):
        # Eigenvalues {0, 2}: (2 + e)/e = 100 gives e = 2/99.
        v = np.array([1.0, 1.0]) / np.sqrt(2)
        S = 2.0 * np.outer(v, v)
        out = ridge_condition(CovarianceMatrix(S=S), kappa_max=100.0)
        assert out.ridge_epsilon == pytest.approx(2.0 / 99.0, rel=1e-5)
        assert out.condition_number <= 100.0 * (1 + 1e-9)

    def test_fixture_condition_bound(self, table1_path):
        cov = sample_covariance(standardize(load_csv(table1_path)))
        out = ridge_condition(cov, kappa_max=1e4)
        assert out.condition_number <= 1e4 * (1 + 1e-6)
        eigvals = np.linalg.eigvalsh(out.S)
        assert eigvals[0] >= out.ridge_epsilon * (1 - 1e-6)

    def test_monotone_in_kappa(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(10, 20))
        S = X.T @ X / 9
        S = (S + S.T) / 2
        cov = CovarianceMatrix(S=S)
        eps = [
            ridge_condition(cov, kappa_max=k).ridge_epsilon
            for k in (1e2, 1e3, 1e4, 1e5)
        ]
        assert all(a >= b - 1e-12 for a, b in zip(eps, eps[1:]))

    def test_invalid_kappa(self):
        with pytest.raises(ValidationError):
            ridge_condition(CovarianceMatrix(S=np.eye(2)), kappa_max=0.5)
