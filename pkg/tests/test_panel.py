import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from adaptometry.errors import DataError, FormatError, InsufficientHistory, InvalidDepth
from adaptometry.panel import (Block, ParameterMeta, TimeSeriesPanel, format_panel, load_panel,
                               standardize, window_slice, write_panel)


def make_panel(values, first_tick=1, labels=None):
    values = np.asarray(values, dtype=float)
    n, T = values.shape
    labels = labels or [f"p{i + 1}" for i in range(n)]
    return TimeSeriesPanel.from_arrays(labels, range(first_tick, first_tick + T), values)


CSV = b"t,a,b,c\n1,1.0,2,3\n2,4,5,6\n3,7,8,9.5\n"


def test_load_basic():
    p = load_panel(CSV)
    assert p.n == 3 and p.T == 3
    assert p.labels == ["a", "b", "c"]
    assert p.ticks.tolist() == [1, 2, 3]
    assert p.column("c").tolist() == [3.0, 6.0, 9.5]
    assert [m.index for m in p.meta] == [1, 2, 3]
    assert all(m.block is Block.UNASSIGNED for m in p.meta)


def test_load_from_stream_and_path(tmp_path):
    assert load_panel(io.BytesIO(CSV)).T == 3
    f = tmp_path / "p.csv"
    f.write_bytes(b"\xef\xbb\xbf" + CSV)  # BOM is tolerated
    assert load_panel(f).labels == ["a", "b", "c"]
    assert load_panel(str(f)).n == 3


def test_blank_rows_skipped():
    p = load_panel(b"t,a,b\n1,1,2\n\n2,3,4\n,\n")
    assert p.T == 2


def test_header_errors():
    with pytest.raises(FormatError):
        load_panel(b"")
    with pytest.raises(FormatError, match="'t'"):
        load_panel(b"tick,a,b\n1,1,2\n")
    with pytest.raises(FormatError, match="at least 2"):
        load_panel(b"t,a\n1,1\n")
    with pytest.raises(FormatError, match="empty label"):
        load_panel(b"t,a,,c\n1,1,2,3\n")


def test_duplicate_labels():
    with pytest.raises(DataError, match="duplicate"):
        load_panel(b"t,a,b,a\n1,1,2,3\n")


def test_non_numeric_cell_located():
    with pytest.raises(DataError, match=r"row 3, column 3"):
        load_panel(b"t,a,b\n1,1,2\n2,3,x\n")


def test_missing_and_non_finite_cells():
    with pytest.raises(DataError, match=r"missing value at \(row 2, column 3\)"):
        load_panel(b"t,a,b\n1,1\n")
    with pytest.raises(DataError, match="non-finite"):
        load_panel(b"t,a,b\n1,1,nan\n")
    with pytest.raises(DataError, match="row 2"):
        load_panel(b"t,a,b\n1,1,2,3\n")


def test_non_contiguous_ticks():
    with pytest.raises(DataError, match="non-contiguous"):
        load_panel(b"t,a,b\n1,1,2\n3,3,4\n")
    with pytest.raises(DataError, match="non-integer tick"):
        load_panel(b"t,a,b\n1.5,1,2\n")


def test_invalid_utf8():
    with pytest.raises(FormatError):
        load_panel(b"t,a,b\n1,\xff,2\n")


def test_panel_validation():
    with pytest.raises(DataError):
        make_panel([[1.0, 2.0]])  # one parameter
    with pytest.raises(DataError):
        TimeSeriesPanel.from_arrays(["a", "b"], [1, 3], np.ones((2, 2)))
    with pytest.raises(DataError):
        TimeSeriesPanel.from_arrays(["a", "a"], [1, 2], np.ones((2, 2)))
    with pytest.raises(DataError):
        make_panel([[1.0, np.inf], [1.0, 2.0]])
    with pytest.raises(DataError):
        ParameterMeta(0, "x")


def test_panel_is_immutable():
    p = make_panel(np.arange(6.0).reshape(2, 3))
    with pytest.raises(ValueError):
        p.values[0, 0] = 5.0


def test_window_slice_order():
    # values[i, c] = 10*i + tick
    vals = np.array([[10 * i + t for t in range(1, 8)] for i in range(3)], dtype=float)
    p = make_panel(vals)
    w = window_slice(p, 6, 3)
    assert w.rows.shape == (3, 3)
    assert w.rows[:, 0].tolist() == [5.0, 4.0, 3.0]  # t-1, t-2, t-3
    assert w.rows[:, 2].tolist() == [25.0, 24.0, 23.0]


def test_window_slice_bounds():
    p = make_panel(np.random.default_rng(0).normal(size=(2, 10)), first_tick=5)
    window_slice(p, 8, 3)  # needs ticks 5..7
    with pytest.raises(InsufficientHistory):
        window_slice(p, 7, 3)
    with pytest.raises(InvalidDepth):
        window_slice(p, 10, 2)
    window_slice(p, 15, 3)  # anchor one past the last tick is allowed
    with pytest.raises(InsufficientHistory):
        window_slice(p, 16, 3)


def test_standardize_known_values():
    # (1, 0, 1, 0): mean 0.5, sample sd sqrt(1/3)
    p = make_panel([[0, 1, 0, 1, 0], [3, 1, 4, 1, 5]])
    z = standardize(window_slice(p, 5, 4))
    expected = np.array([1, -1, 1, -1]) * 0.5 / np.sqrt(1 / 3)
    np.testing.assert_allclose(z.rows[:, 0], expected, atol=1e-12)
    assert abs(expected[0] - 0.8660254037844386) < 1e-12
    assert not z.degenerate.any()


def test_standardize_flags_constant_column():
    p = make_panel([[2, 2, 2, 2], [1, 2, 3, 4]])
    z = standardize(window_slice(p, 4, 3))
    assert z.degenerate.tolist() == [True, False]
    assert np.all(z.rows[:, 0] == 0.0)


@settings(max_examples=60, deadline=None)
@given(hnp.arrays(np.float64, st.tuples(st.integers(3, 12), st.integers(2, 5)),
                  elements=st.floats(-1e6, 1e6, allow_nan=False)))
def test_standardized_columns_have_zero_mean_unit_sd(rows):
    from adaptometry.panel import WindowMatrix

    z = standardize(WindowMatrix(anchor_t=0, depth_k=rows.shape[0], rows=rows))
    for c in range(rows.shape[1]):
        col = z.rows[:, c]
        if z.degenerate[c]:
            assert np.all(col == 0)
        else:
            assert abs(col.mean()) < 1e-9
            assert abs(col.std(ddof=1) - 1.0) < 1e-9


@settings(max_examples=40, deadline=None)
@given(hnp.arrays(np.float64, st.tuples(st.integers(2, 5), st.integers(1, 8)),
                  elements=st.floats(-1e12, 1e12, allow_nan=False, allow_subnormal=False)),
       st.integers(-50, 50))
def test_csv_round_trip_is_lossless(values, first_tick):
    p = make_panel(values, first_tick=first_tick)
    q = load_panel(format_panel(p).encode())
    assert q.labels == p.labels
    assert q.ticks.tolist() == p.ticks.tolist()
    assert np.array_equal(q.values, p.values)


def test_format_panel_digits():
    p = make_panel([[1.23456789, 2.5], [1e-3, 123456789.0]])
    text = format_panel(p, digits=6)
    assert text.splitlines() == ["t,p1,p2", "1,1.23457,0.001", "2,2.5,123457000"]


def test_write_panel_targets(tmp_path):
    p = make_panel([[1.0, 2.0], [3.0, 4.0]])
    write_panel(p, tmp_path / "x.csv")
    assert load_panel(tmp_path / "x.csv").values.tolist() == p.values.tolist()
    buf = io.BytesIO()
    write_panel(p, buf)
    assert buf.getvalue().startswith(b"t,p1,p2\n")
    sbuf = io.StringIO()
    write_panel(p, sbuf)
    assert sbuf.getvalue() == buf.getvalue().decode()
