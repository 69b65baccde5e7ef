import numpy as np
import pytest

from hkan.datasets import (
    TARGET_FUNCTIONS,
    Dataset,
    NormStats,
    apply_normalization,
    fit_normalization,
    gen_tf,
    get_target_function,
    load_abalone,
    load_csv,
    read_table,
    save_csv,
    split,
    tf1,
    tf2,
    tf3,
    tf4,
    tf5,
)
from hkan.errors import DataError, DimensionMismatch, EmptyDataset, InvalidInput, ParseError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_basic(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,b,t\n0,0,0\n1,0,1\n0,1,1\n"), "t")
        assert ds.n_samples == 3 and ds.n_inputs == 2
        assert ds.column_names == ["a", "b"]
        np.testing.assert_array_equal(ds.y, [0, 1, 1])

    def test_target_defaults_to_last_column(self, tmp_path):
        ds = load_csv(write(tmp_path, "t,a,b\n5,1,2\n6,3,4\n"))
        np.testing.assert_array_equal(ds.y, [2, 4])
        assert ds.column_names == ["t", "a"]

    def test_target_in_middle(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,t,b\n1,2,3\n"), "t")
        np.testing.assert_array_equal(ds.X, [[1, 3]])
        np.testing.assert_array_equal(ds.y, [2])

    def test_header_only(self, tmp_path):
        with pytest.raises(EmptyDataset):
            load_csv(write(tmp_path, "a,b,t\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(EmptyDataset):
            load_csv(write(tmp_path, ""))

    def test_nan_cell_names_row(self, tmp_path):
        with pytest.raises(ParseError, match="row 3"):
            load_csv(write(tmp_path, "a,t\n1,2\nNaN,3\n"))

    def test_non_numeric_cell(self, tmp_path):
        with pytest.raises(ParseError, match="row 2"):
            load_csv(write(tmp_path, "a,t\nfoo,2\n"))

    def test_ragged_row(self, tmp_path):
        with pytest.raises(ParseError, match="row 3"):
            load_csv(write(tmp_path, "a,t\n1,2\n1,2,3\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "nope.csv")

    def test_too_few_columns(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, "t\n1\n2\n"))

    def test_unknown_target(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, "a,t\n1,2\n"), "z")

    def test_read_table_single_column(self, tmp_path):
        header, values = read_table(write(tmp_path, "x\n1.5\n2\n"))
        assert header == ["x"]
        np.testing.assert_array_equal(values, [[1.5], [2.0]])

    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(0)
        ds = Dataset(rng.normal(size=(7, 3)), rng.normal(size=7), ["p", "q", "r"])
        save_csv(ds, tmp_path / "o.csv", "target")
        back = load_csv(tmp_path / "o.csv", "target")
        assert back.X.tobytes() == ds.X.tobytes()
        assert back.y.tobytes() == ds.y.tobytes()
        assert back.column_names == ds.column_names


class TestDataset:
    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInput):
            Dataset([[1.0], [np.inf]], [1.0, 2.0])

    def test_rejects_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Dataset([[1.0], [2.0]], [1.0])

    def test_rejects_empty(self):
        with pytest.raises(EmptyDataset):
            Dataset(np.empty((0, 2)), [])

    def test_default_names(self):
        assert Dataset([[1.0, 2.0]], [0.0]).column_names == ["x1", "x2"]


class TestNormalization:
    def test_column_scaling(self):
        ds = Dataset([[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]], [1.0, 2.0, 3.0])
        out = apply_normalization(ds, fit_normalization(ds))
        np.testing.assert_array_equal(out.X[:, 0], [0, 0.5, 1])
        np.testing.assert_array_equal(out.X[:, 1], [0, 0, 0])
        np.testing.assert_array_equal(out.y, [0, 0.5, 1])

    def test_test_values_may_leave_unit_interval(self):
        train = Dataset([[0.0], [10.0]], [0.0, 1.0])
        test = Dataset([[-5.0], [20.0]], [2.0, -1.0])
        out = apply_normalization(test, fit_normalization(train))
        np.testing.assert_array_equal(out.X[:, 0], [-0.5, 2.0])
        np.testing.assert_array_equal(out.y, [2.0, -1.0])

    def test_roundtrip(self):
        rng = np.random.default_rng(1)
        X, y = rng.normal(scale=100, size=(50, 4)), rng.normal(scale=30, size=50)
        stats = fit_normalization(Dataset(X, y))
        np.testing.assert_allclose(stats.inverse_X(stats.transform_X(X)), X, atol=1e-12 * 1000)
        np.testing.assert_allclose(stats.inverse_y(stats.transform_y(y)), y, atol=1e-12 * 100)
        assert stats.transform_X(X).min() == 0.0 and stats.transform_X(X).max() == 1.0

    def test_identity_stats(self):
        X = np.array([[3.0, -2.0]])
        s = NormStats.identity(2)
        np.testing.assert_array_equal(s.transform_X(X), X)
        assert s.inverse_y(7.5) == 7.5

    def test_dict_roundtrip(self):
        s = NormStats([0.1, 2.0], [1.0 / 3, 5.0], -1.5, 2.0)
        back = NormStats.from_dict(s.to_dict())
        assert back.to_dict() == s.to_dict()

    def test_width_check(self):
        with pytest.raises(DimensionMismatch):
            NormStats.identity(2).transform_X(np.ones((3, 3)))


class TestSplit:
    def test_sizes(self):
        ds = Dataset(np.arange(10.0)[:, None], np.arange(10.0))
        a, b = split(ds, 0.8, 0)
        assert (a.n_samples, b.n_samples) == (8, 2)

    def test_partition_and_determinism(self):
        ds = Dataset(np.arange(37.0)[:, None], np.arange(37.0))
        a, b = split(ds, 0.7, 3)
        a2, b2 = split(ds, 0.7, 3)
        assert a.y.tobytes() == a2.y.tobytes() and b.y.tobytes() == b2.y.tobytes()
        assert not set(a.y) & set(b.y)
        assert sorted(set(a.y) | set(b.y)) == list(range(37))

    @pytest.mark.parametrize("frac", [0.0, 1.0, -0.1, 1.5])
    def test_bad_fraction(self, frac):
        with pytest.raises(InvalidInput):
            split(Dataset([[1.0], [2.0]], [1.0, 2.0]), frac, 0)


class TestTargetFunctions:
    def test_tf1(self):
        np.testing.assert_array_equal(tf1(np.array([[0.5, 0.5], [1, 1], [0, 1]])), [0, 1, -1])

    def test_tf4_origin(self):
        assert tf4(np.zeros((1, 10)))[0] == 0.0

    def test_tf5_origin(self):
        assert tf5(np.zeros((1, 2)))[0] == 0.0

    def test_tf3_extremum(self):
        assert tf3(np.array([[420.9687, 420.9687]]))[0] == pytest.approx(-837.965774544325, abs=1e-9)

    def test_tf2_zero(self):
        assert tf2(np.zeros((1, 2)))[0] == 0.0

    def test_reference_sample_counts(self):
        sizes = {k: (v.n_train, v.n_test) for k, v in TARGET_FUNCTIONS.items()}
        assert sizes == {"TF1": (5000, 10000), "TF2": (5000, 10000), "TF3": (5000, 10000),
                         "TF4": (3750, 1250), "TF5": (5000, 10000), "TF5-5": (7500, 2500)}

    def test_name_aliases(self):
        assert get_target_function("tf5_5") is TARGET_FUNCTIONS["TF5-5"]
        with pytest.raises(InvalidInput):
            get_target_function("TF9")


class TestGenTf:
    @pytest.mark.parametrize("name", sorted(TARGET_FUNCTIONS))
    def test_training_inputs_in_unit_box(self, name):
        train, test = gen_tf(name, 300, 100, seed=2)
        assert train.X.min() >= 0.0 and train.X.max() <= 1.0
        assert train.n_inputs == TARGET_FUNCTIONS[name].n_inputs
        assert (train.n_samples, test.n_samples) == (300, 100)

    @pytest.mark.parametrize("name", ["TF3", "TF4", "TF5", "TF5-5"])
    def test_normalized_targets(self, name):
        train, _ = gen_tf(name, 300, 100, seed=2)
        assert train.y.min() == 0.0 and train.y.max() == 1.0

    def test_tf1_natural_range(self):
        train, test = gen_tf("TF1", 200, 50, seed=0)
        np.testing.assert_array_equal(train.y, tf1(train.X))
        np.testing.assert_array_equal(test.y, tf1(test.X))

    def test_tf2_noise_only_on_training(self):
        train, test = gen_tf("TF2", 2000, 500, seed=5)
        np.testing.assert_array_equal(test.y - tf2(test.X), 0.0)
        noise = train.y - tf2(train.X)
        assert np.all(np.abs(noise) <= 0.2)
        assert noise.std() == pytest.approx(0.4 / np.sqrt(12), rel=0.05)

    def test_seed_determinism(self):
        a, b = gen_tf("TF4", 50, 20, 9), gen_tf("TF4", 50, 20, 9)
        assert a[0].X.tobytes() == b[0].X.tobytes() and a[1].y.tobytes() == b[1].y.tobytes()
        assert gen_tf("TF4", 50, 20, 10)[0].X.tobytes() != a[0].X.tobytes()

    def test_default_sizes(self):
        train, test = gen_tf("TF4", seed=0)
        assert (train.n_samples, test.n_samples) == (3750, 1250)

    def test_bad_counts(self):
        with pytest.raises(InvalidInput):
            gen_tf("TF1", 0, 5)


class TestLoadAbalone:
    RAW = "M,0.455,0.365,0.095,0.514,0.2245,0.101,0.15,15\nI,0.35,0.265,0.09,0.2255,0.0995,0.0485,0.07,7\n"

    def test_raw_layout(self, tmp_path):
        ds = load_abalone(write(tmp_path, self.RAW, "abalone.data"))
        assert ds.n_inputs == 8 and ds.n_samples == 2
        np.testing.assert_array_equal(ds.X[:, 0], [1.0, 3.0])
        np.testing.assert_array_equal(ds.y, [15.0, 7.0])

    def test_header_and_numeric_sex(self, tmp_path):
        text = "Sex,Length,Diam,Height,W,S,V,Sh,Rings\n2,0.5,0.4,0.1,0.6,0.2,0.1,0.2,9\n"
        ds = load_abalone(write(tmp_path, text))
        assert ds.X[0, 0] == 2.0 and ds.y[0] == 9.0

    def test_bad_rows(self, tmp_path):
        with pytest.raises(ParseError, match="row 3"):
            load_abalone(write(tmp_path, self.RAW + "F,1,2\n"))
        with pytest.raises(ParseError, match="row 2"):
            load_abalone(write(tmp_path, "h,a,b,c,d,e,f,g,r\nX,1,2,3,4,5,6,7,8\n"))
        with pytest.raises(EmptyDataset):
            load_abalone(write(tmp_path, "h,a,b,c,d,e,f,g,r\n"))
        with pytest.raises(DataError):
            load_abalone(tmp_path / "missing.data")
