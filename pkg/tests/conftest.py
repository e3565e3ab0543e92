import math

import mpmath
import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from boolean_info.certify import random_symmetric_measure
from boolean_info.measure import AtomicMeasure, normalize_variance

SQRT2 = math.sqrt(2.0)
MEASURE_B = AtomicMeasure([-SQRT2, -1 / SQRT2, 1 / SQRT2, SQRT2], [1 / 6, 1 / 3, 1 / 3, 1 / 6], name="B")

mpmath.mp.dps = 40

settings.register_profile("repo", deadline=None)
settings.load_profile("repo")


@pytest.fixture
def measure_b():
    return MEASURE_B


def fuzz_measure(seed: int, pairs: int | None = None, normalized: bool = False) -> AtomicMeasure:
    if pairs is None:
        pairs = 1 + seed % 6
    mu = random_symmetric_measure(seed, pairs, (0.1, 3.0))
    return normalize_variance(mu) if normalized else mu


def mp_cauchy(mu: AtomicMeasure, z) -> mpmath.mpc:
    return mpmath.fsum(mpmath.mpf(w) / (z - mpmath.mpf(x)) for x, w in mu)


# -- hypothesis strategies ---------------------------------------------------------------


@st.composite
def atomic_measures(draw, max_atoms=6, lo=-3.0, hi=3.0, min_sep=0.05):
    n = draw(st.integers(1, max_atoms))
    raw = draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n))
    # tiny nonzero locations collide with their mirror images under merge_tol
    xs = sorted(x if abs(x) >= 1e-6 else 0.0 for x in raw)
    kept = [xs[0]]
    for x in xs[1:]:
        if x - kept[-1] >= min_sep:
            kept.append(x)
    ws = draw(st.lists(st.floats(0.05, 1.0), min_size=len(kept), max_size=len(kept)))
    ws = np.array(ws) / sum(ws)
    return AtomicMeasure(kept, ws)


@st.composite
def symmetric_measures(draw, max_pairs=4, lo=0.1, hi=3.0, min_sep=0.05):
    n = draw(st.integers(1, max_pairs))
    raw = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n)))
    kept = [raw[0]]
    for r in raw[1:]:
        if r - kept[-1] >= min_sep:
            kept.append(r)
    ws = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=len(kept), max_size=len(kept))))
    ws = ws / ws.sum() / 2
    return AtomicMeasure([-r for r in kept] + kept, list(ws) + list(ws))


@st.composite
def normalized_symmetric_measures(draw, max_pairs=4):
    return normalize_variance(draw(symmetric_measures(max_pairs=max_pairs)))
