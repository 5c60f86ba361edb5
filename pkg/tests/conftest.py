import sys
import random

import pytest
from hypothesis import settings, strategies as st

from minsat.geometry import PointSet, normalize

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def semiperms(draw, max_c=6, max_m=10, min_m=1):
    """Normalized semi-permutations: one point per row, columns 2, 4, ..., 2c."""
    c = draw(st.integers(1, max_c))
    m = draw(st.integers(min_m, max_m))
    xs = draw(st.lists(st.integers(1, c), min_size=m, max_size=m))
    return normalize(PointSet([(x, y) for y, x in enumerate(xs, start=1)]))


@st.composite
def perms(draw, max_m=7):
    m = draw(st.integers(1, max_m))
    xs = draw(st.permutations(list(range(1, m + 1))))
    return normalize(PointSet([(x, y) for y, x in enumerate(xs, start=1)]))


@st.composite
def point_sets(draw, max_x=8, max_y=8, max_size=12):
    pts = draw(st.sets(st.tuples(st.integers(0, max_x), st.integers(1, max_y)), max_size=max_size))
    return PointSet(pts, kind="union")


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
