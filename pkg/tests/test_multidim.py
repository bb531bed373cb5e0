import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from repeatfree.errors import InvalidArgument, ResourceLimit
from repeatfree.lab import count_repeat_free
from repeatfree.multidim import NdArray, md_count_repeat_free, md_frequency, md_is_repeat_free

GOLDEN = json.loads((Path(__file__).parent / "golden" / "md_counts.json").read_text())

W1 = NdArray.parse("0110\n1000\n1010\n1111\n", (4, 4))
W2 = NdArray.parse("1100\n1010\n1001\n1111\n", (4, 4))
U = [[1, 0], [0, 1]]


def test_example_frequencies():
    assert md_frequency(W1, 2).frequency(U) == 0
    assert md_frequency(W2, 2).frequency(U) == Fraction(2, 9)


def test_example_support():
    table = md_frequency(W1, 2)
    expected = {
        (0, 1, 1, 0), (1, 1, 0, 0), (1, 0, 0, 0), (1, 0, 1, 0),
        (0, 0, 0, 1), (0, 0, 1, 0), (1, 0, 1, 1), (0, 1, 1, 1),
    }
    assert table.support == expected
    assert table.total == 9
    assert not md_is_repeat_free(W1, 2)


def test_trivial_cases():
    const = NdArray(np.zeros((3, 3), dtype=int))
    table = md_frequency(const, 2)
    assert len(table.support) == 1 and table.frequency([[0, 0], [0, 0]]) == 1
    assert not md_is_repeat_free(const, 2)
    assert md_is_repeat_free(W1, 4)


def test_validation():
    with pytest.raises(InvalidArgument):
        NdArray(np.array([[0, 2]]))
    with pytest.raises(InvalidArgument):
        NdArray.parse("01\n1\n", (2, 2))
    with pytest.raises(InvalidArgument):
        md_frequency(W1, 5)
    with pytest.raises(ResourceLimit):
        md_count_repeat_free(6, 2, 2)


def test_parse_slices():
    cube = NdArray.parse("01\n10\n\n11\n00\n", (2, 2, 2))
    assert cube.data.tolist() == [[[0, 1], [1, 0]], [[1, 1], [0, 0]]]
    assert cube.d == 3


@settings(max_examples=100, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(2, 6), st.integers(2, 6)), elements=st.integers(0, 2)), st.integers(1, 3))
def test_repeat_free_iff_max_count_one(a, k):
    w = NdArray(a, q=3)
    k = min(k, *w.dims)
    table = md_frequency(w, k)
    assert sum(table.counts.values()) == table.total
    assert md_is_repeat_free(w, k) == (table.max_count <= 1)
    # two equal (k+1)-cubes contain two equal k-cubes at their corners
    if k < min(w.dims) and not md_is_repeat_free(w, k + 1):
        assert not md_is_repeat_free(w, k)


@pytest.mark.parametrize("case", GOLDEN, ids=lambda c: f"n{c['n']}-d{c['d']}-k{c['k']}-q{c['q']}")
def test_counts_match_golden(case):
    assert md_count_repeat_free(case["n"], case["d"], case["k"], case["q"]) == case["count"]


def test_one_dimension_matches_lab_counter():
    for n in range(1, 12):
        for k in range(1, n + 1):
            assert md_count_repeat_free(n, 1, k) == count_repeat_free(n, k)
    assert md_count_repeat_free(7, 1, 3, q=3) == count_repeat_free(7, 3, 3)


def test_single_window_counts_everything():
    assert md_count_repeat_free(2, 2, 2) == 16
