"""Interpolation kernel: frozen values, properties, backend parity."""

import functools
import operator
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mojikit import _kernels as pure
from mojikit.kernels import BACKEND, ease_weight, sample_angle, sample_path, xor_checksum

try:
    from mojikit import _speedups as compiled
except ImportError:  # extension not built in this environment
    compiled = None


def _direct_poly(u: float) -> float:
    # independent transcription of the cubic, different operation order
    return 3.0 * u * u - 2.0 * u ** 3


# Dyadic-rational inputs give bit-exact expected values.
FROZEN_EASE = [
    (0.0, 0.0),
    (0.25, 0.15625),
    (0.5, 0.5),
    (0.75, 0.84375),
    (1.0, 1.0),
]


@pytest.mark.parametrize("u,expected", FROZEN_EASE)
def test_ease_frozen_values(u, expected):
    assert ease_weight(u) == expected


def test_ease_clamps_outside_unit_interval():
    assert ease_weight(-0.5) == 0.0
    assert ease_weight(1.5) == 1.0
    assert ease_weight(-1e-9) == 0.0


@given(st.floats(0, 1, allow_nan=False))
def test_ease_matches_reference_polynomial(u):
    assert ease_weight(u) == pytest.approx(_direct_poly(u), abs=1e-12)


@given(st.floats(0, 1), st.floats(0, 1))
def test_ease_monotone(a, b):
    lo, hi = sorted((a, b))
    assert ease_weight(lo) <= ease_weight(hi)


@given(st.floats(0, 1))
def test_ease_point_symmetry(u):
    # w(u) + w(1-u) == 1
    assert ease_weight(u) + ease_weight(1.0 - u) == pytest.approx(1.0, abs=1e-12)


def test_ease_slope_bounded():
    # peak slope of the cubic is 1.5 at the midpoint
    h = 1e-6
    worst = max(
        (ease_weight(u + h) - ease_weight(u)) / h
        for u in [i / 1000 for i in range(1000)]
    )
    assert worst <= 1.5 + 1e-4


def test_sample_midpoint_frozen():
    # halfway through an 800 ms motion from 0 to 40: exactly 20 degrees
    assert sample_angle(0.0, 40.0, 400, 800) == 20.0


def test_sample_endpoints_exact():
    assert sample_angle(-12.5, 33.1, 0, 600) == -12.5
    assert sample_angle(-12.5, 33.1, 600, 600) == 33.1
    assert sample_angle(-12.5, 33.1, 5000, 600) == 33.1
    assert sample_angle(-12.5, 33.1, -100, 600) == -12.5


def test_sample_degenerate_motion():
    # zero-length motion snaps to the target
    assert sample_angle(5.0, 9.0, 0, 0) == 9.0
    assert sample_angle(5.0, 9.0, 10, -5) == 9.0


@given(
    st.floats(-90, 90),
    st.floats(-90, 90),
    st.integers(0, 5000),
    st.integers(1, 5000),
)
def test_sample_stays_between_endpoints(a, b, elapsed, motion):
    lo, hi = sorted((a, b))
    assert lo - 1e-9 <= sample_angle(a, b, elapsed, motion) <= hi + 1e-9


def test_sample_path_matches_pointwise():
    times = list(range(0, 801, 20))
    path = sample_path(10.0, -30.0, 800, times)
    assert len(path) == len(times)
    for t, v in zip(times, path):
        assert v == sample_angle(10.0, -30.0, t, 800)


def test_xor_checksum_reference():
    rng = random.Random(7)
    for _ in range(200):
        payload = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 30)))
        expected = functools.reduce(operator.xor, payload, 0)
        assert xor_checksum(payload) == expected


def test_xor_checksum_ping_payload():
    # the payload of a PING with sequence 0 is " 0 "
    assert xor_checksum(b" 0 ") == 0x30


@pytest.mark.skipif(compiled is None, reason="compiled extension not built")
def test_backend_parity_bitwise():
    """Both backends must produce identical floats, not merely close ones."""
    rng = random.Random(2024)
    for _ in range(5000):
        u = rng.uniform(-0.2, 1.2)
        assert compiled.ease_weight(u) == pure.ease_weight(u)
    for _ in range(5000):
        a = rng.uniform(-90, 90)
        b = rng.uniform(-90, 90)
        m = rng.randint(1, 4000)
        e = rng.randint(-10, 4200)
        assert compiled.sample_angle(a, b, e, m) == pure.sample_angle(a, b, e, m)
    for _ in range(300):
        payload = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 40)))
        assert compiled.xor_checksum(payload) == pure.xor_checksum(payload)


def test_selected_backend_is_sane():
    assert BACKEND in ("pure", "compiled")
    if compiled is not None:
        # when the extension builds, the default selection should use it
        import os
        if os.environ.get("MOJIKIT_KERNELS") in (None, "", "compiled"):
            assert BACKEND == "compiled"
