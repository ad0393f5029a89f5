import json
import math
import os

import pytest

from pitchside.util import (atomic_write_json, atomic_write_text,
                            canonical_json, derive_seed, fingerprint,
                            read_json)


def test_canonical_json_sorts_keys():
    a = canonical_json({"b": 1, "a": 2})
    b = canonical_json({"a": 2, "b": 1})
    assert a == b
    assert a.index('"a"') < a.index('"b"')


def test_canonical_json_round_trips_floats():
    value = math.exp(-3.0)
    restored = json.loads(canonical_json({"v": value}))
    assert restored["v"] == value


def test_canonical_json_rejects_nan():
    with pytest.raises(ValueError):
        canonical_json({"v": float("nan")})


def test_atomic_write_and_read(tmp_path):
    path = tmp_path / "sub" / "out.json"
    atomic_write_json(path, {"x": [1, 2, 3]})
    assert read_json(path) == {"x": [1, 2, 3]}
    # no temp file debris left next to the output
    assert os.listdir(path.parent) == ["out.json"]


def test_atomic_write_overwrites(tmp_path):
    path = tmp_path / "out.txt"
    atomic_write_text(path, "first")
    atomic_write_text(path, "second")
    assert path.read_text() == "second"


def test_derive_seed_is_stable_and_spread():
    assert derive_seed(0, 1) == derive_seed(0, 1)
    seeds = {derive_seed(0, fold) for fold in range(100)}
    assert len(seeds) == 100
    assert derive_seed(0, 1) != derive_seed(1, 0)


def test_fingerprint_tracks_content_and_config(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("hello")
    b.write_text("world")
    base = fingerprint([a, b], extra={"k": 5})
    assert fingerprint([b, a], extra={"k": 5}) == base  # order-insensitive
    assert fingerprint([a, b], extra={"k": 6}) != base
    a.write_text("hello!")
    assert fingerprint([a, b], extra={"k": 5}) != base
