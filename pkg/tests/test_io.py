import json

import numpy as np
import pytest

from svdkit import io as sio
from svdkit.errors import IoError, ParseError
from svdkit.grains import Grain
from svdkit.rollcall import Vote, VoteRecord


def test_scalar_roundtrip():
    for z in [1.5, -0.0, 1e-300, 2 - 3j, -1.25 + 0.5j, complex(0, -0.0)]:
        back = sio.parse_scalar(sio.format_scalar(z))
        assert back == z
    assert sio.parse_scalar(" 3+4i ") == 3 + 4j
    assert sio.parse_scalar("2i") == 2j
    with pytest.raises(ParseError):
        sio.parse_scalar("abc")
    with pytest.raises(ParseError):
        sio.parse_scalar("")


def test_matrix_csv_roundtrip(rng):
    A = rng.standard_normal((3, 4))
    np.testing.assert_array_equal(sio.parse_matrix_csv(sio.format_matrix_csv(A)), A)
    Z = A + 1j * rng.standard_normal((3, 4))
    back = sio.parse_matrix_csv(sio.format_matrix_csv(Z))
    assert back.dtype == np.complex128
    np.testing.assert_array_equal(back, Z)


def test_matrix_csv_errors():
    with pytest.raises(ParseError, match="ragged"):
        sio.parse_matrix_csv("1,2\n3\n")
    with pytest.raises(ParseError):
        sio.parse_matrix_csv("\n\n")


def test_points_csv():
    pts = sio.parse_points_csv("x,y,z\n1,2,3\n4,5,6\n")
    np.testing.assert_array_equal(pts, [[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ParseError):
        sio.parse_points_csv("1,2\n")


def test_rollcall_csv_roundtrip():
    recs = [VoteRecord("a", "R", "b1", Vote.YEA), VoteRecord("b", "D", "b1", Vote.ABSENT)]
    assert sio.parse_rollcall_csv(sio.format_rollcall_csv(recs)) == recs


def test_rollcall_case_insensitive():
    recs = sio.parse_rollcall_csv("Legislator_ID,Party,Bill_ID,Vote\nx,R,1,YEA\ny,D,1,Nay\n\n")
    assert [r.vote for r in recs] == [Vote.YEA, Vote.NAY]


def test_rollcall_errors():
    with pytest.raises(ParseError, match="header"):
        sio.parse_rollcall_csv("id,party,bill,vote\n")
    with pytest.raises(ParseError, match="line 2"):
        sio.parse_rollcall_csv("legislator_id,party,bill_id,vote\nx,R,1,maybe\n")
    with pytest.raises(ParseError, match="4 fields"):
        sio.parse_rollcall_csv("legislator_id,party,bill_id,vote\nx,R,1\n")
    with pytest.raises(ParseError):
        sio.parse_rollcall_csv("")


def test_tensor_format():
    T = np.arange(1, 9, dtype=float).reshape(2, 2, 2)
    text = sio.format_tensor(T)
    lines = text.splitlines()
    assert lines[0] == "2 2 2"
    # k fastest: entries (0,0,0), (0,0,1), ...
    assert lines[1:3] == ["1.0", "2.0"]
    np.testing.assert_array_equal(sio.parse_tensor(text), T)


def test_tensor_errors():
    with pytest.raises(ParseError):
        sio.parse_tensor("2 2")
    with pytest.raises(ParseError, match="expected 8"):
        sio.parse_tensor("2 2 2\n1\n2\n")
    with pytest.raises(ParseError):
        sio.parse_tensor("2 0 2\n")


def test_population_roundtrip():
    g = [Grain(np.array([[0.0, 1.0, 2.0], [3.0, 4.0, 5.0]]), 2)]
    back = sio.parse_population(sio.dumps(sio.population_to_json(g)))
    assert back[0].birth_step == 2
    np.testing.assert_array_equal(back[0].points, g[0].points)
    with pytest.raises(ParseError):
        sio.parse_population('[{"points": []}]')


def test_dumps_nan_and_numpy():
    out = json.loads(sio.dumps({"a": np.array([1.0, np.nan]), "b": np.int64(3), "c": np.bool_(True), "z": 1j}))
    assert out == {"a": [1.0, None], "b": 3, "c": True, "z": "0.0+1.0i"}


def test_read_text_missing(tmp_path):
    with pytest.raises(IoError):
        sio.read_text(tmp_path / "nope.csv")


def test_write_files_atomic(tmp_path):
    out = tmp_path / "out"
    sio.write_files_atomic(out, {"a.txt": "1", "b.txt": "2"})
    assert sorted(p.name for p in out.iterdir()) == ["a.txt", "b.txt"]
    assert (out / "b.txt").read_text() == "2"
