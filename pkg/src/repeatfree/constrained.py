"""Deterministic labeled graphs, Perron data and max-entropy Markov chains.

A constrained system is the set of label sequences read along paths of a
:class:`LabeledGraph`.  :func:`perron` finds the dominant eigenvalue and the
positive eigenvectors by power iteration, :func:`max_entropy_chain` builds
the walk that attains the capacity ``log2(lambda)``, and the remaining
helpers sample from it and count repeat-free words inside the system.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from .core import BitWord
from .errors import InvalidArgument, ResourceLimit

Edge = Tuple[int, int, int]

MAX_XCOUNT_LENGTH = 30


@dataclass(frozen=True)
class LabeledGraph:
    """Graph on vertices ``0..vertex_count-1`` with edges ``(src, dst, label)``.

    Construction checks that the presentation is deterministic (distinct
    outgoing labels per vertex) and strongly connected.
    """

    vertex_count: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(int(x) for x in e) for e in self.edges))
        if self.vertex_count < 1:
            raise InvalidArgument("a graph needs at least one vertex")
        seen = set()
        for src, dst, label in self.edges:
            if not (0 <= src < self.vertex_count and 0 <= dst < self.vertex_count):
                raise InvalidArgument(f"edge ({src}, {dst}) references a missing vertex")
            if label < 0:
                raise InvalidArgument(f"edge label {label} must be non-negative")
            if (src, label) in seen:
                raise InvalidArgument(f"vertex {src} has two outgoing edges labeled {label}")
            seen.add((src, label))
        if not self._strongly_connected():
            raise InvalidArgument("graph is not strongly connected")

    @classmethod
    def parse(cls, text: str) -> "LabeledGraph":
        """Read one ``src dst label`` edge per line; ``#`` starts a comment."""
        edges = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise InvalidArgument(f"line {lineno}: expected 'src dst label', got {line!r}")
            try:
                edges.append(tuple(int(x) for x in parts))
            except ValueError:
                raise InvalidArgument(f"line {lineno}: vertices and labels must be integers") from None
        if not edges:
            raise InvalidArgument("graph file has no edges")
        count = 1 + max(max(s, d) for s, d, _ in edges)
        return cls(count, tuple(edges))

    def to_text(self) -> str:
        return "".join(f"{s} {d} {a}\n" for s, d, a in self.edges)

    @cached_property
    def alphabet_size(self) -> int:
        return 1 + max(a for _, _, a in self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count))
        for src, dst, _ in self.edges:
            a[src, dst] += 1
        return a

    @cached_property
    def transitions(self) -> List[Dict[int, int]]:
        """``transitions[v][label]`` is the vertex reached from ``v`` by ``label``."""
        out: List[Dict[int, int]] = [{} for _ in range(self.vertex_count)]
        for src, dst, label in self.edges:
            out[src][label] = dst
        return out

    def _strongly_connected(self) -> bool:
        fwd = [[] for _ in range(self.vertex_count)]
        back = [[] for _ in range(self.vertex_count)]
        for src, dst, _ in self.edges:
            fwd[src].append(dst)
            back[dst].append(src)
        for adj in (fwd, back):
            seen = {0}
            todo = [0]
            while todo:
                for v in adj[todo.pop()]:
                    if v not in seen:
                        seen.add(v)
                        todo.append(v)
            if len(seen) != self.vertex_count:
                return False
        return True

    def accepts(self, word: Iterable[int]) -> bool:
        """True iff ``word`` is the label sequence of some path."""
        states = set(range(self.vertex_count))
        for a in word:
            states = {self.transitions[v][a] for v in states if a in self.transitions[v]}
            if not states:
                return False
        return True


def rll_graph(d: int, k: int, *, inverted: bool = False) -> LabeledGraph:
    """Presentation of the ``(d, k)`` run-length-limited system.

    Vertex ``r`` means the current run of zeros has length ``r``.  Between
    consecutive ones there are at least ``d`` and at most ``k`` zeros.  With
    ``inverted`` the roles of the symbols swap, so ``rll_graph(0, 1,
    inverted=True)`` presents the words without ``11``.
    """
    if not 0 <= d <= k:
        raise InvalidArgument(f"need 0 <= d <= k, got d={d}, k={k}")
    run, stop = (1, 0) if inverted else (0, 1)
    edges = [(r, r + 1, run) for r in range(k)]
    edges += [(r, 0, stop) for r in range(d, k + 1)]
    return LabeledGraph(k + 1, tuple(edges))


def full_shift(q: int = 2) -> LabeledGraph:
    return LabeledGraph(1, tuple((0, 0, a) for a in range(q)))


@dataclass(frozen=True)
class PerronData:
    """Dominant eigenvalue ``lam`` with positive eigenvectors, ``left @ right == 1``."""

    lam: float
    left: np.ndarray
    right: np.ndarray

    @property
    def capacity(self) -> float:
        return math.log2(self.lam)

    @property
    def d(self) -> float:
        """Largest ratio ``right[v] / right[u]``."""
        return float(self.right.max() / self.right.min())

    @property
    def d_min(self) -> float:
        return float(self.right.min() / self.right.max())


def _power_iteration(b: np.ndarray, tol: float, max_iter: int) -> Tuple[float, np.ndarray]:
    x = np.full(b.shape[0], 1.0 / math.sqrt(b.shape[0]))
    rho = 0.0
    for _ in range(max_iter):
        y = b @ x
        rho = float(x @ y)
        residual = np.linalg.norm(y - rho * x)
        x = y / np.linalg.norm(y)
        if residual <= tol * rho:
            return rho, x
    raise ResourceLimit(f"power iteration did not converge in {max_iter} steps")


def perron(g: LabeledGraph, *, tol: float = 1e-12, max_iter: int = 1_000_000) -> PerronData:
    """Perron eigen-data of ``g``'s adjacency matrix.

    Iterates on ``A + I``, which has the same eigenvectors and a strictly
    dominant eigenvalue even when ``A`` is periodic.
    """
    a = g.adjacency
    shifted = a + np.eye(a.shape[0])
    rho, right = _power_iteration(shifted, tol, max_iter)
    _, left = _power_iteration(shifted.T, tol, max_iter)
    right = np.abs(right)
    left = np.abs(left)
    scale = math.sqrt(float(left @ right))
    return PerronData(lam=rho - 1.0, left=left / scale, right=right / scale)


@dataclass(frozen=True)
class MarkovChain:
    """Row-stochastic ``transition`` matrix with stationary vector ``stationary``.

    ``edge_probability[e]`` is the probability of taking edge ``e`` of the
    underlying graph (parallel edges share their matrix entry equally).
    """

    transition: np.ndarray
    stationary: np.ndarray
    edge_probability: np.ndarray


def max_entropy_chain(g: LabeledGraph, pd: Optional[PerronData] = None) -> MarkovChain:
    pd = perron(g) if pd is None else pd
    a = g.adjacency
    nu = pd.right
    p = a * nu[None, :] / (pd.lam * nu[:, None])
    mu = pd.left * pd.right
    edge_p = np.array([p[s, d] / a[s, d] for s, d, _ in g.edges])
    return MarkovChain(transition=p, stationary=mu / mu.sum(), edge_probability=edge_p)


def entropy(g: LabeledGraph, chain: MarkovChain) -> float:
    """Entropy rate in bits per symbol of the edge walk described by ``chain``."""
    total = 0.0
    for (src, _, _), pe in zip(g.edges, chain.edge_probability):
        if pe > 0:
            total -= chain.stationary[src] * pe * math.log2(pe)
    return total


def collision_bound(g: LabeledGraph, pd: PerronData, k: int) -> float:
    """Upper bound ``|V| d^2 / lambda^k`` on the chance that two ``k``-windows agree."""
    if k < 1:
        raise InvalidArgument("window length must be positive")
    return g.vertex_count * pd.d ** 2 / pd.lam ** k


class _Walker:
    """Vectorised sampler of many independent walks at once."""

    def __init__(self, g: LabeledGraph, chain: MarkovChain):
        width = max(len(t) for t in g.transitions)
        self.cum = np.full((g.vertex_count, width), 2.0)
        self.nxt = np.zeros((g.vertex_count, width), dtype=np.int64)
        self.lab = np.zeros((g.vertex_count, width), dtype=np.uint8)
        slots = [0] * g.vertex_count
        acc = [0.0] * g.vertex_count
        for (src, dst, label), pe in zip(g.edges, chain.edge_probability):
            s = slots[src]
            acc[src] += pe
            self.cum[src, s] = acc[src]
            self.nxt[src, s] = dst
            self.lab[src, s] = label
            slots[src] += 1
        for v in range(g.vertex_count):
            # guard against round-off: the last real edge absorbs the remainder
            if slots[v]:
                self.cum[v, slots[v] - 1] = 2.0
        self.start = np.cumsum(chain.stationary)
        self.start[-1] = 2.0

    def walk(self, rng: np.random.Generator, count: int, length: int) -> Tuple[np.ndarray, np.ndarray]:
        if count == 1:
            return self._walk_one(rng, length)
        state = np.searchsorted(self.start, rng.random(count), side="right")
        labels = np.empty((count, length), dtype=np.uint8)
        visits = np.empty((count, length), dtype=np.int64)
        for t in range(length):
            visits[:, t] = state
            u = rng.random(count)
            slot = (u[:, None] >= self.cum[state]).sum(axis=1)
            labels[:, t] = self.lab[state, slot]
            state = self.nxt[state, slot]
        return labels, visits

    def _walk_one(self, rng: np.random.Generator, length: int) -> Tuple[np.ndarray, np.ndarray]:
        # same draws as the batched loop (one double per step), without per-step numpy overhead
        draws = rng.random(length + 1).tolist()
        cum = self.cum.tolist()
        nxt = self.nxt.tolist()
        lab = self.lab.tolist()
        state = bisect.bisect_right(self.start.tolist(), draws[0])
        labels = bytearray(length)
        visits = [0] * length
        for t in range(length):
            visits[t] = state
            slot = bisect.bisect_right(cum[state], draws[t + 1])
            labels[t] = lab[state][slot]
            state = nxt[state][slot]
        return np.frombuffer(bytes(labels), dtype=np.uint8)[None, :], np.array(visits, dtype=np.int64)[None, :]


def sample_path(
    chain: MarkovChain,
    g: LabeledGraph,
    length: int,
    seed: Optional[int] = None,
    *,
    return_states: bool = False,
) -> Union[BitWord, np.ndarray, Tuple[Union[BitWord, np.ndarray], np.ndarray]]:
    """Labels of a walk of ``length`` edges started from the stationary vector.

    Binary systems give a :class:`BitWord`, larger alphabets a ``uint8``
    array.  With ``return_states`` the visited start vertices come back too.
    """
    if length < 1:
        raise InvalidArgument("path length must be positive")
    rng = np.random.default_rng(seed)
    labels, visits = _Walker(g, chain).walk(rng, 1, length)
    word = labels[0]
    out = BitWord(word) if g.alphabet_size <= 2 else word
    if return_states:
        return out, visits[0]
    return out


def collision_rate(
    g: LabeledGraph,
    chain: MarkovChain,
    k: int,
    pairs: int,
    seed: Optional[int] = None,
    *,
    max_offset: Optional[int] = None,
    batch: int = 250_000,
) -> float:
    """Fraction of sampled walks whose windows at ``0`` and ``i`` agree.

    Each pair draws its own walk and an offset ``i`` uniform on
    ``1..max_offset`` (default ``2k``).
    """
    if pairs < 1:
        raise InvalidArgument("need at least one pair")
    max_offset = 2 * k if max_offset is None else max_offset
    rng = np.random.default_rng(seed)
    walker = _Walker(g, chain)
    hits = 0
    done = 0
    cols = np.arange(k)
    while done < pairs:
        count = min(batch, pairs - done)
        labels, _ = walker.walk(rng, count, max_offset + k)
        offset = rng.integers(1, max_offset + 1, size=count)
        shifted = labels[np.arange(count)[:, None], offset[:, None] + cols]
        hits += int(np.all(shifted == labels[:, :k], axis=1).sum())
        done += count
    return hits / pairs


def count_constrained_repeat_free(g: LabeledGraph, n: int, k: int) -> int:
    """Exact number of length-``n`` words of the system with no repeated ``k``-window."""
    if n > MAX_XCOUNT_LENGTH:
        raise ResourceLimit(f"exhaustive count supports n <= {MAX_XCOUNT_LENGTH}, got {n}")
    if n < 0 or k < 1:
        raise InvalidArgument("need n >= 0 and k >= 1")
    q = g.alphabet_size
    trans = g.transitions
    mask = q ** k
    seen: set = set()

    def dfs(states: frozenset, depth: int, window: int) -> int:
        if depth == n:
            return 1
        total = 0
        for a in range(q):
            nxt = frozenset(trans[v][a] for v in states if a in trans[v])
            if not nxt:
                continue
            w = (window * q + a) % mask
            if depth + 1 >= k:
                if w in seen:
                    continue
                seen.add(w)
                total += dfs(nxt, depth + 1, w)
                seen.discard(w)
            else:
                total += dfs(nxt, depth + 1, w)
        return total

    return dfs(frozenset(range(g.vertex_count)), 0, 0)
