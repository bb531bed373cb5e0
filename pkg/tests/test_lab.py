import json
import math
from pathlib import Path

import numpy as np
import pytest

from repeatfree.codec_general import GeneralParams, encode_general
from repeatfree.codec_k2 import K2Params, encode_k2
from repeatfree.core import BitWord
from repeatfree.errors import InvalidArgument, NotReconstructible, ResourceLimit
from repeatfree.lab import (
    count_repeat_free,
    debruijn_count_formula,
    estimate_repeat_free_probability,
    reconstruct_from_multiset,
    resolve_threads,
    union_bound_floor,
    wilson_interval,
    windows,
)

import oracles

GOLDEN = json.loads((Path(__file__).parent / "golden" / "repeat_free_counts.json").read_text())


def test_small_counts():
    assert count_repeat_free(5, 2) == 4
    assert count_repeat_free(10, 3) == 16
    assert count_repeat_free(6, 2) == 0
    assert count_repeat_free(12, 3) == 0


def test_formula():
    assert debruijn_count_formula(2, 3) == 2
    assert debruijn_count_formula(2, 2) == 1
    assert debruijn_count_formula(2, 4) == 16
    assert debruijn_count_formula(3, 2) == 24


@pytest.mark.parametrize("q, k", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_linear_sequences_are_rotations(q, k):
    assert q ** k * debruijn_count_formula(q, k) == count_repeat_free(q ** k + k - 1, k, q)


@pytest.mark.parametrize("table", ["q2_grid", "q2_diagonal", "q3_grid"])
def test_counts_match_golden(table):
    q = 3 if table.startswith("q3") else 2
    for row in GOLDEN[table]:
        assert count_repeat_free(row["n"], row["k"], q) == row["count"], row


def test_count_monotonicity():
    grid = {(r["n"], r["k"]): r["count"] for r in GOLDEN["q2_grid"]}
    for n in range(1, 17):
        assert all(grid[n, k] <= grid[n, k + 1] for k in range(1, n))
    # prefixes of repeat-free words are repeat-free, so one more bit at most doubles the count
    assert grid[3, 3] < grid[4, 3]
    for k in range(1, 16):
        assert all(grid[n + 1, k] <= 2 * grid[n, k] for n in range(k, 16))
    # past the De Bruijn length the count collapses to zero and stays there
    assert all(grid[n, 2] == 0 for n in range(6, 17))


def test_count_limits():
    with pytest.raises(ResourceLimit):
        count_repeat_free(26, 10)
    with pytest.raises(InvalidArgument):
        count_repeat_free(5, 0)


@pytest.mark.slow
def test_golden_counts_rederived():
    fresh = oracles.derive_counts()
    assert fresh == GOLDEN
    stored = json.loads((Path(__file__).parent / "golden" / "md_counts.json").read_text())
    assert oracles.derive_md_counts() == stored


def test_monte_carlo_full_window_is_certain():
    est = estimate_repeat_free_probability(40, 40, 100, seed=1)
    assert est.estimate == 1.0 and est.successes == 100


def test_monte_carlo_reproducible_across_threads():
    a = estimate_repeat_free_probability(256, 12, 3000, seed=5, threads=1)
    b = estimate_repeat_free_probability(256, 12, 3000, seed=5, threads=4)
    assert a == b
    assert a != estimate_repeat_free_probability(256, 12, 3000, seed=6)


def test_monte_carlo_agrees_with_enumeration():
    for n, k in [(16, 6), (18, 7), (20, 8)]:
        exact = count_repeat_free(n, k) / 2 ** n
        est = estimate_repeat_free_probability(n, k, 20_000, seed=n)
        assert abs(est.estimate - exact) <= 3 * math.sqrt(exact * (1 - exact) / est.trials)


def test_monte_carlo_increases_with_k():
    ests = [estimate_repeat_free_probability(128, k, 4000, seed=2) for k in range(8, 18, 2)]
    for a, b in zip(ests, ests[1:]):
        assert b.estimate >= a.estimate - 3 * max(a.sigma, b.sigma, 1e-3)


def test_monte_carlo_above_union_floor():
    n, k = 1024, 22
    est = estimate_repeat_free_probability(n, k, 5000, seed=3)
    assert union_bound_floor(n, k) == pytest.approx(0.875)
    assert est.estimate >= union_bound_floor(n, k) - 3 * est.sigma


def test_wilson_interval():
    est = wilson_interval(50, 100)
    assert est.low < 0.5 < est.high
    assert est.high - est.low == pytest.approx(0.1923, abs=1e-3)
    assert wilson_interval(0, 10).low == 0.0
    assert set(est.as_dict()) == {"successes", "trials", "estimate", "sigma", "low", "high"}


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("REPEATFREE_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("REPEATFREE_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    monkeypatch.setenv("REPEATFREE_THREADS", "x")
    with pytest.raises(InvalidArgument):
        resolve_threads()


def test_reconstruct_codewords():
    rng = np.random.default_rng(4)
    p = K2Params(128)
    for _ in range(30):
        c = encode_k2(BitWord(rng.integers(0, 2, p.payload_len, dtype=np.uint8)), p)
        shuffled = windows(c, p.k + 1)
        rng.shuffle(shuffled)
        assert reconstruct_from_multiset(shuffled) == c
    g = GeneralParams(1 << 12)
    c = encode_general(BitWord(rng.integers(0, 2, 500, dtype=np.uint8)), g)
    assert reconstruct_from_multiset(windows(c, g.k + 1)[::-1]) == c


def test_reconstruct_edge_cases():
    assert reconstruct_from_multiset(["0110"]) == "0110"
    with pytest.raises(NotReconstructible):
        reconstruct_from_multiset(windows("01" * 10, 3))
    with pytest.raises(InvalidArgument):
        reconstruct_from_multiset([])
    with pytest.raises(InvalidArgument):
        windows("0101", 5)
