"""JSON input parsing and deterministic payload dumps."""

import math

import numpy as np
import pytest

from latsum import (
    InputFormatError,
    LatticeSpace,
    NormEstimate,
    dump_json,
    estimate_payload,
    load_exponent,
    load_json_file,
    load_operator,
    load_sequence,
    load_space,
    load_tensor,
    space_payload,
)


def test_load_exponent():
    assert load_exponent(2, "r") == 2.0
    assert load_exponent("inf", "r") == math.inf
    with pytest.raises(InputFormatError):
        load_exponent("two", "r")
    with pytest.raises(InputFormatError):
        load_exponent(0.5, "r")
    with pytest.raises(InputFormatError):
        load_exponent(True, "r")


def test_load_space_roundtrip_and_errors():
    space = load_space({"dim": 2, "r": 1.5, "weights": [1.0, 2.0]})
    assert space == LatticeSpace(2, 1.5, [1.0, 2.0])
    assert load_space({"dim": 3, "r": "inf"}).exponent == math.inf
    with pytest.raises(InputFormatError, match="space.dim"):
        load_space({"dim": 0, "r": 2})
    with pytest.raises(InputFormatError, match="space.r"):
        load_space({"dim": 2})
    with pytest.raises(InputFormatError, match="space.weights"):
        load_space({"dim": 2, "r": 2, "weights": [1.0]})
    with pytest.raises(InputFormatError, match="space.weights"):
        load_space({"dim": 2, "r": 2, "weights": [1.0, -1.0]})
    with pytest.raises(InputFormatError):
        load_space([1, 2])


def test_load_sequence():
    seq = load_sequence({"space": {"dim": 2, "r": 2}, "vectors": [[1, 2], [3, 4]]})
    np.testing.assert_array_equal(seq.array, [[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(InputFormatError, match="vectors"):
        load_sequence({"space": {"dim": 2, "r": 2}, "vectors": [[1, 2, 3]]})
    with pytest.raises(InputFormatError, match="vectors"):
        load_sequence({"space": {"dim": 2, "r": 2}, "vectors": [[1, float("nan")]]})
    with pytest.raises(InputFormatError, match="space"):
        load_sequence({"vectors": [[1, 2]]})


def test_load_operator():
    obj = {
        "matrix": [[1, 0], [0, 2], [1, 1]],
        "domain": {"dim": 2, "r": 1},
        "codomain": {"dim": 3, "r": "inf"},
    }
    T = load_operator(obj)
    assert T.matrix.shape == (3, 2)
    assert T.domain.exponent == 1.0
    with pytest.raises(InputFormatError, match="matrix"):
        load_operator({**obj, "matrix": [[1, 0], [0, 2]]})


def test_load_tensor():
    u = load_tensor({"p": 1.5, "space": {"dim": 2, "r": 2}, "rows": [[1, 2]]})
    assert u.left_exponent == 1.5
    with pytest.raises(InputFormatError, match="rows"):
        load_tensor({"p": 2, "space": {"dim": 2, "r": 2}, "rows": [[1, 2, 3]]})
    with pytest.raises(InputFormatError, match="p"):
        load_tensor({"space": {"dim": 2, "r": 2}, "rows": [[1, 2]]})


def test_load_json_file(tmp_path):
    good = tmp_path / "doc.json"
    good.write_text('{"dim": 2, "r": 2}')
    assert load_json_file(str(good)) == {"dim": 2, "r": 2}
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(InputFormatError, match="file"):
        load_json_file(str(bad))
    with pytest.raises(InputFormatError, match="file"):
        load_json_file(str(tmp_path / "absent.json"))


def test_space_payload_uses_inf_token():
    payload = space_payload(LatticeSpace(2, math.inf, [1.0, 2.0]))
    assert payload == {"dim": 2, "r": "inf", "weights": [1.0, 2.0]}
    again = load_space(payload)
    assert again == LatticeSpace(2, math.inf, [1.0, 2.0])


def test_estimate_payload_shape():
    est = NormEstimate(
        value=1.5,
        certificate=np.array([1.0, 0.0]),
        exact=True,
        method="vertex_enum",
        starts_used=3,
        iterations=0,
        seed=7,
    )
    payload = estimate_payload(est)
    assert payload["value"] == 1.5
    assert payload["certificate"] == [1.0, 0.0]
    assert payload["method"] == "vertex_enum"
    assert payload["seed"] == 7


def test_dump_json_deterministic_and_sorted():
    payload = {"b": np.float64(2.0), "a": np.array([1.0, math.inf]), "c": (1, 2)}
    out = dump_json(payload)
    assert out == dump_json(payload)
    assert out.index('"a"') < out.index('"b"') < out.index('"c"')
    assert '"inf"' in out
    assert out.endswith("\n")


def test_dump_json_handles_tuple_certificates():
    est = NormEstimate(
        value=2.0,
        certificate=(np.eye(2), np.ones((1, 2))),
        exact=False,
        method="multistart_ascent",
        starts_used=8,
        iterations=40,
        seed=0,
    )
    text = dump_json(estimate_payload(est))
    assert '"certificate"' in text
    assert text == dump_json(estimate_payload(est))
