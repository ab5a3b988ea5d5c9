import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from structrank import EmbeddingMatrix, ParseError, fixed_embedding, load_embedding, random_embedding, standardize
from structrank.features import degree

from conftest import path_graph, star_graph


def write(tmp_path, text):
    p = tmp_path / "e.csv"
    p.write_text(text, encoding="utf-8")
    return p


@pytest.fixture
def abc():
    from structrank import Graph

    return Graph(["a", "b", "c"], [(0, 1), (1, 2)])


def test_load_three_by_four(tmp_path, abc):
    e = load_embedding(write(tmp_path, "a,1,2,3,4\nb,5,6,7,8\nc,9,10,11,12\n"), abc)
    assert e.shape == (3, 4)
    np.testing.assert_array_equal(e.values[2], [9, 10, 11, 12])


def test_missing_node_is_named(tmp_path, abc):
    with pytest.raises(KeyError, match="'c'"):
        load_embedding(write(tmp_path, "a,1\nb,2\n"), abc)


def test_shuffled_rows_reordered(tmp_path, abc):
    ordered = load_embedding(write(tmp_path, "a,1,2\nb,3,4\nc,5,6\n"), abc)
    shuffled = load_embedding(write(tmp_path, "c,5,6\na,1,2\nb,3,4\n"), abc)
    np.testing.assert_array_equal(ordered.values, shuffled.values)


def test_header_detected_and_extra_rows_dropped(tmp_path, abc):
    e = load_embedding(write(tmp_path, "node_id,d0\nzz,0\na,1\nb,2\nc,3\n"), abc, name="emb")
    np.testing.assert_array_equal(e.values[:, 0], [1, 2, 3])
    assert e.dropped_ids == 1 and e.source_name == "emb"


def test_non_numeric_cell_reports_row_and_column(tmp_path, abc):
    with pytest.raises(ParseError) as exc:
        load_embedding(write(tmp_path, "a,1,2\nb,3,x\nc,5,6\n"), abc)
    assert (exc.value.line, exc.value.column) == (2, 3)


def test_ragged_row_is_an_error(tmp_path, abc):
    with pytest.raises(ParseError):
        load_embedding(write(tmp_path, "a,1,2\nb,3\nc,5,6\n"), abc)


def test_roundtrip(tmp_path):
    g = star_graph(6)
    e = random_embedding(g, 5, seed=3)
    e.to_csv(tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text().startswith("node_id,d0,d1,d2,d3,d4\n")
    np.testing.assert_array_equal(load_embedding(tmp_path / "e.csv", g).values, e.values)


def test_random_embedding_reproducible():
    g = path_graph(100)
    a = random_embedding(g, 8, seed=11)
    assert a.shape == (100, 8) and np.all(np.isfinite(a.values))
    np.testing.assert_array_equal(a.values, random_embedding(g, 8, seed=11).values)
    assert not np.array_equal(a.values, random_embedding(g, 8, seed=12).values)
    assert a.values.min() >= 0 and a.values.max() < 1


def test_fixed_embedding_copies_feature():
    g = star_graph(9)
    d = degree(g)
    e = fixed_embedding(g, d, 8, target_dim=0, seed=1)
    np.testing.assert_array_equal(e.values[:, 0], d)
    assert np.corrcoef(e.values[:, 0], d)[0, 1] == 1.0
    np.testing.assert_array_equal(e.values, fixed_embedding(g, d, 8, seed=1).values)
    np.testing.assert_array_equal(fixed_embedding(g, d, 1).values[:, 0], d)
    np.testing.assert_array_equal(fixed_embedding(g, d, 4, target_dim=3, seed=0).values[:, 3], d)


def test_fixed_embedding_validation():
    g = path_graph(3)
    with pytest.raises(ValueError):
        fixed_embedding(g, [1, 2, 3], 4, target_dim=4)
    with pytest.raises(ValueError):
        fixed_embedding(g, [1, 2], 4)
    with pytest.raises(ValueError):
        random_embedding(g, 0)
    with pytest.raises(ValueError):
        EmbeddingMatrix(np.array([[np.inf]]), ("a",))


def test_standardize_examples():
    np.testing.assert_allclose(standardize([1.0, 2.0, 3.0], "minmax"), [0, 0.5, 1])
    # population stdev of [1, 2, 3] is sqrt(2/3)
    np.testing.assert_allclose(standardize([1.0, 2.0, 3.0]), [-1.2247448713915890, 0, 1.2247448713915890], rtol=1e-12)
    for scaler in ("standard", "minmax"):
        np.testing.assert_array_equal(standardize([5.0, 5.0, 5.0], scaler), [0, 0, 0])
    with pytest.raises(ValueError):
        standardize([1.0, 2.0], "robust")


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 4)),
              elements=st.floats(-1e6, 1e6, allow_nan=False)))
def test_standardize_postconditions(m):
    z = standardize(m)
    mm = standardize(m, "minmax")
    varying = np.ptp(m, axis=0) > 1e-6 * np.maximum(1.0, np.abs(m).max(axis=0))
    assert np.all(np.abs(z.mean(axis=0)) < 1e-9)
    np.testing.assert_allclose(z.std(axis=0)[varying], 1.0, atol=1e-9)
    assert np.all((mm >= 0) & (mm <= 1))
    np.testing.assert_array_equal(z[:, np.ptp(m, axis=0) == 0], 0.0)
