"""Finite simple graphs: k-cores, degeneracy, sampling from graphons."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import comb
from typing import Iterable, TextIO

import numpy as np

from .errors import BadParameter, TooManyBlocks
from .graphon import AnalyticGraphon, StepGraphon

BRUTE_FORCE_MAX_NODES = 16


@dataclass(frozen=True)
class FiniteGraph:
    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise BadParameter(f"node count {n} < 0")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise BadParameter(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise BadParameter(f"self-loop at node {u}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def complete(cls, n: int) -> "FiniteGraph":
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> "FiniteGraph":
        return cls(n, ((u, u + 1) for u in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> "FiniteGraph":
        return cls(leaves + 1, ((0, v) for v in range(1, leaves + 1)))

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class GraphCoreResult:
    shells: tuple[int, ...]
    degeneracy: int

    def k_core_members(self, k: int) -> set[int]:
        return {v for v, s in enumerate(self.shells) if s >= k}


def k_core(G: FiniteGraph, k: int) -> set[int]:
    """Nodes of the k-core: repeatedly drop nodes with fewer than k neighbours left."""
    if k < 0:
        raise BadParameter(f"k={k} < 0")
    adj = G.adjacency()
    deg = [len(a) for a in adj]
    alive = [True] * G.n
    stack = [v for v in range(G.n) if deg[v] < k]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] < k:
                    alive[u] = False
                    stack.append(u)
    return {v for v in range(G.n) if alive[v]}


def graph_decompose(G: FiniteGraph) -> GraphCoreResult:
    """Shell indices by min-degree peeling with a running maximum."""
    adj = G.adjacency()
    deg = [len(a) for a in adj]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * G.n
    shells = [0] * G.n
    running = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        running = max(running, d)
        shells[v] = running
        for u in adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return GraphCoreResult(tuple(shells), max(shells, default=0))


def brute_force_graph_degeneracy(G: FiniteGraph) -> int:
    """Max over nonempty node subsets of the minimum induced degree."""
    if G.n > BRUTE_FORCE_MAX_NODES:
        raise TooManyBlocks(f"{G.n} nodes; enumeration is capped at {BRUTE_FORCE_MAX_NODES}")
    if G.n == 0:
        return 0
    A = G.adjacency_matrix()
    codes = np.arange(1, 1 << G.n, dtype=np.int64)
    masks = (codes[:, None] >> np.arange(G.n)) & 1
    d = masks @ A
    return int(np.where(masks == 1, d, G.n).min(axis=1).max())


@dataclass(frozen=True)
class KWPRReport:
    lower: int
    edges: int
    upper: int
    degeneracy: int
    holds: bool

    def __str__(self):
        return f"{self.lower} ≤ {self.edges} ≤ {self.upper} {'OK' if self.holds else 'FAIL'}"


def check_kwpr(G: FiniteGraph) -> KWPRReport:
    """binom(d+1, 2) <= |E| <= binom(d+1, 2) + (n - d - 1) d for degeneracy d."""
    d = graph_decompose(G).degeneracy
    lo = comb(d + 1, 2)
    hi = lo + (G.n - d - 1) * d
    e = len(G.edges)
    return KWPRReport(lo, e, hi, d, lo <= e <= hi)


def sample_graph(g: StepGraphon | AnalyticGraphon, n: int, seed: int) -> FiniteGraph:
    """W-random graph on n nodes.

    Uses numpy's PCG64 generator seeded with ``seed``: first ``n`` uniforms
    give the node positions x_1..x_n, then one uniform per pair (i, j), i < j,
    in lexicographic order decides the edge (edge iff u < w(x_i, x_j)).
    """
    if n < 1:
        raise BadParameter(f"n={n} < 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.random(n)
    iu, ju = np.triu_indices(n, k=1)
    u = rng.random(iu.size)
    p = np.asarray(g.evaluate(x[iu], x[ju]), dtype=float)
    keep = u < p
    return FiniteGraph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def graph_to_graphon(G: FiniteGraph) -> StepGraphon:
    """n equal blocks with the adjacency matrix as values (zero diagonal)."""
    if G.n < 1:
        raise BadParameter("graph_to_graphon needs at least one node")
    return StepGraphon.uniform(G.adjacency_matrix().astype(float))


# Edge-list text format: "n m" then m lines "u v", 0-based.


def write_edges(G: FiniteGraph, fh: TextIO) -> None:
    fh.write(f"{G.n} {len(G.edges)}\n")
    for u, v in G.sorted_edges():
        fh.write(f"{u} {v}\n")


def read_edges(fh: TextIO) -> FiniteGraph:
    lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise BadParameter("edge list: first line must be 'n m'")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError:
        raise BadParameter("edge list: non-integer entry") from None
    if len(edges) != m:
        raise BadParameter(f"edge list: header says {m} edges, found {len(edges)}")
    return FiniteGraph(n, edges)
