import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boolean_info.serialize import csv_text, dumps, format_float, parse_extended


def test_format_float():
    assert format_float(0.1, 17) == "0.10000000000000001"
    assert format_float(0.1, 12) == "0.1"
    assert format_float(2.0, 17) == "2"
    assert format_float(-0.0, 17) == "0"
    assert format_float(math.inf, 17) == "inf"
    assert format_float(-math.inf, 12) == "-inf"
    with pytest.raises(ValueError):
        format_float(math.nan, 17)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_json_round_trip_exact(x):
    assert json.loads(dumps({"v": x}))["v"] == x


def test_dumps_extended_and_numpy():
    text = dumps({"a": math.inf, "b": np.float64(0.5), "c": [np.int64(3), None, True]})
    doc = json.loads(text)
    assert doc == {"a": "inf", "b": 0.5, "c": [3, None, True]}
    assert parse_extended(doc["a"]) == math.inf
    assert parse_extended("-inf") == -math.inf
    assert parse_extended(1.5) == 1.5


def test_csv_text():
    text = csv_text(("n", "x", "ok"), [{"n": 1, "x": 1 / 3, "ok": True}, {"n": 2, "x": None, "ok": False}])
    assert text == "n,x,ok\n1,0.333333333333,true\n2,,false\n"


def test_dumps_is_deterministic():
    obj = {"z": 1.0, "a": [0.1, 0.2]}
    assert dumps(obj) == dumps(dict(obj))
    assert dumps(obj).endswith("\n")
