"""Counting, sampling and reconstruction experiments on repeat-free words."""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import Dict, Iterable, List, Optional

import numpy as np

from .core import BitLike, BitWord, is_repeat_free, raw, window_keys
from .errors import InvalidArgument, NotReconstructible, ResourceLimit

MAX_ENUMERATION_BITS = 25
THREADS_ENV = "REPEATFREE_THREADS"
# trials per independent random stream; fixed so results depend on the seed only
CHUNK_TRIALS = 512


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit value, else ``$REPEATFREE_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        if not env:
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise InvalidArgument(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if threads < 1:
        raise InvalidArgument(f"thread count must be positive, got {threads}")
    return threads


def count_repeat_free(n: int, k: int, q: int = 2) -> int:
    """Exact number of length-``n`` words over ``q`` symbols with no repeated ``k``-window."""
    if n < 0 or k < 1 or q < 2:
        raise InvalidArgument("need n >= 0, k >= 1 and q >= 2")
    if n * math.log2(q) > MAX_ENUMERATION_BITS:
        raise ResourceLimit(
            f"exhaustive count needs n * log2(q) <= {MAX_ENUMERATION_BITS}, got {n * math.log2(q):.1f}"
        )
    if n < k:
        return q ** n
    if n - k + 1 > q ** k:
        return 0
    mask = q ** k
    seen = bytearray(mask)

    def extend(depth: int, window: int) -> int:
        base = (window * q) % mask
        if depth == n - 1:
            if depth + 1 < k:
                return q
            return sum(1 for a in range(q) if not seen[base + a])
        total = 0
        for a in range(q):
            w = base + a
            if depth + 1 >= k:
                if seen[w]:
                    continue
                seen[w] = 1
                total += extend(depth + 1, w)
                seen[w] = 0
            else:
                total += extend(depth + 1, w)
        return total

    if n == 0:
        return 1
    return extend(0, 0)


def debruijn_count_formula(q: int, k: int) -> int:
    """Number of cyclic De Bruijn sequences of span ``k`` over ``q`` symbols."""
    if q < 2 or k < 1:
        raise InvalidArgument("need q >= 2 and k >= 1")
    m = q ** (k - 1)
    return math.factorial(q - 1) ** m * q ** (m - k)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo fraction with a 95% Wilson score interval."""

    successes: int
    trials: int
    estimate: float
    sigma: float
    low: float
    high: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Estimate:
    if trials < 1:
        raise InvalidArgument("need at least one trial")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    sigma = math.sqrt(p * (1 - p) / trials)
    # the interval touches 0 (or 1) exactly when no trial failed (or succeeded); avoid round-off there
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return Estimate(successes, trials, p, sigma, low, high)


def _chunk_successes(n: int, k: int, trials: int, seed_seq: np.random.SeedSequence) -> int:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    words = rng.integers(0, 2, size=(trials, n), dtype=np.uint8)
    if k >= n:
        return trials
    if k > 63:
        return sum(is_repeat_free(row.tobytes(), k) for row in words)
    keys = np.stack([window_keys(row.tobytes(), k) for row in words])
    keys.sort(axis=1)
    return int(np.count_nonzero(~np.any(keys[:, 1:] == keys[:, :-1], axis=1)))


def estimate_repeat_free_probability(
    n: int,
    k: int,
    trials: int,
    seed: int = 0,
    *,
    threads: Optional[int] = None,
) -> Estimate:
    """Fraction of uniform random ``n``-bit words that are ``k``-repeat-free.

    Randomness is PCG64.  Trials are cut into fixed chunks of
    ``CHUNK_TRIALS``, each drawing from its own child of
    ``SeedSequence(seed)``, so the result depends on the seed alone and not
    on the worker count.
    """
    if trials < 1:
        raise InvalidArgument("need at least one trial")
    if n < 1 or k < 1:
        raise InvalidArgument("need n >= 1 and k >= 1")
    sizes = [CHUNK_TRIALS] * (trials // CHUNK_TRIALS)
    if trials % CHUNK_TRIALS:
        sizes.append(trials % CHUNK_TRIALS)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    workers = resolve_threads(threads)
    if workers == 1:
        hits = sum(_chunk_successes(n, k, s, ss) for s, ss in zip(sizes, seeds))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda a: _chunk_successes(n, k, *a), zip(sizes, seeds)))
    return wilson_interval(hits, trials)


def union_bound_floor(n: int, k: int) -> float:
    """``1 - n^2 2^(-k-1)``: a lower bound on the repeat-free probability."""
    return 1.0 - n * n * 2.0 ** (-k - 1)


def windows(w: BitLike, r: int) -> List[BitWord]:
    """All ``len(w) - r + 1`` length-``r`` windows, in order (a multiset)."""
    data = raw(w)
    if not 1 <= r <= len(data):
        raise InvalidArgument(f"window length {r} must be in [1, {len(data)}]")
    return [BitWord._wrap(data[t:t + r]) for t in range(len(data) - r + 1)]


def reconstruct_from_multiset(substrings: Iterable[BitLike]) -> BitWord:
    """Rebuild a word from the multiset of its length-``r`` windows.

    Works when the word has no repeated ``(r-1)``-window: every
    ``(r-1)``-mer then has at most one successor and the walk from the only
    mer without a predecessor spells the word.
    """
    items = [raw(s) for s in substrings]
    if not items:
        raise InvalidArgument("the multiset is empty")
    r = len(items[0])
    if any(len(s) != r for s in items):
        raise InvalidArgument("all substrings must have the same length")
    if len(items) == 1:
        return BitWord._wrap(items[0])
    if r < 2:
        raise NotReconstructible("single symbols carry no order information")
    multiplicity = Counter(items)
    repeated = [s for s, c in multiplicity.items() if c > 1]
    if repeated:
        raise NotReconstructible(
            f"window {BitWord._wrap(repeated[0])} occurs {multiplicity[repeated[0]]} times"
        )
    succ: Dict[bytes, bytes] = {}
    has_pred = set()
    for s in items:
        head, tail = s[:-1], s[1:]
        if head in succ:
            raise NotReconstructible(f"({r - 1})-mer {BitWord._wrap(head)} has two successors")
        if tail in has_pred:
            raise NotReconstructible(f"({r - 1})-mer {BitWord._wrap(tail)} has two predecessors")
        succ[head] = tail
        has_pred.add(tail)
    starts = [m for m in succ if m not in has_pred]
    if len(starts) != 1:
        raise NotReconstructible(f"expected one starting ({r - 1})-mer, found {len(starts)}")
    node = starts[0]
    out = bytearray(node)
    for _ in range(len(items)):
        if node not in succ:
            raise NotReconstructible("chain ends before every window is used")
        node = succ[node]
        out.append(node[-1])
    if len(out) != len(items) + r - 1:
        raise NotReconstructible("chain does not use every window exactly once")
    return BitWord._wrap(bytes(out))
