import sys
import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from fsmat import _pykernels, kernels
from fsmat.matrix import Matrix, Pattern
from fsmat.setfamily import SetFamily

KERNEL_NAMES = [
    "trace_size", "shattered_masks", "compress_masks", "down_close_masks",
    "contains_cols", "contribution_windows", "alive_after", "fs_subtree",
]

BACKENDS = ["python"] + (["cython"] if kernels.compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = _pykernels if request.param == "python" else kernels.compiled
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


# -- independent oracles ---------------------------------------------------


def brute_contains(matrix: Matrix, pattern: Pattern) -> bool:
    """Try every choice of k increasing rows and l increasing columns."""
    k, l = pattern.rows, pattern.width
    for rows in combinations(range(matrix.rows), k):
        for cols in combinations(range(matrix.n), l):
            if all(
                (matrix.columns[c] >> r & 1) == (pattern.columns[j] >> i & 1)
                for i, r in enumerate(rows)
                for j, c in enumerate(cols)
            ):
                return True
    return False


def brute_trace_size(masks, s) -> int:
    return len({frozenset(i for i in range(64) if a >> i & 1 and s >> i & 1) for a in masks})


def random_family(rng: random.Random, m: int, max_size: int | None = None) -> SetFamily:
    universe = 1 << m
    size = rng.randint(0, min(universe, max_size or universe))
    return SetFamily(m, frozenset(rng.sample(range(universe), size)))


def random_simple_matrix(rng: random.Random, m: int, n: int) -> Matrix:
    return Matrix(m, tuple(rng.sample(range(1 << m), n)))


@st.composite
def families(draw, max_m=6, max_sets=None):
    m = draw(st.integers(0, max_m))
    universe = 1 << m
    masks = draw(st.sets(st.integers(0, universe - 1), max_size=max_sets or universe))
    return SetFamily(m, frozenset(masks))


@st.composite
def simple_matrices(draw, max_m=4, max_n=10):
    m = draw(st.integers(1, max_m))
    cols = draw(st.lists(st.integers(0, (1 << m) - 1), unique=True, max_size=min(max_n, 1 << m)))
    return Matrix(m, tuple(cols))


@st.composite
def patterns(draw, max_k=2, max_l=3):
    k = draw(st.integers(1, max_k))
    l = draw(st.integers(1, max_l))
    cols = draw(st.lists(st.integers(0, (1 << k) - 1), min_size=l, max_size=l))
    return Pattern(k, tuple(cols))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
