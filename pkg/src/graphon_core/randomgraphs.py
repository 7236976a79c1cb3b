"""Seeded random instances for property sweeps."""

from __future__ import annotations

import numpy as np

from .finite import FiniteGraph
from .graphon import StepGraphon

MIN_GAP = 1e-3


def random_boundaries(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        cuts = np.sort(rng.random(m - 1))
        b = np.concatenate([[0.0], cuts, [1.0]])
        if np.all(np.diff(b) > MIN_GAP):
            return b


def random_values(rng: np.random.Generator, m: int) -> np.ndarray:
    """Symmetric values; a third of the draws are 0/1 so knife edges get exercised."""
    kind = rng.integers(3)
    if kind == 0:
        v = (rng.random((m, m)) < rng.random()).astype(float)
    elif kind == 1:
        v = rng.random((m, m)) ** 2
    else:
        v = rng.random((m, m))
    v = np.triu(v) + np.triu(v, 1).T
    return v


def random_step_graphon(rng: np.random.Generator, m_max: int = 8, m_min: int = 1,
                        uniform: bool = False) -> StepGraphon:
    m = int(rng.integers(m_min, m_max + 1))
    b = np.linspace(0.0, 1.0, m + 1) if uniform else random_boundaries(rng, m)
    return StepGraphon(b, random_values(rng, m))


def random_graph(rng: np.random.Generator, n_max: int, n_min: int = 1) -> FiniteGraph:
    """Erdos-Renyi graph with a random node count and edge probability."""
    n = int(rng.integers(n_min, n_max + 1))
    p = rng.random()
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return FiniteGraph(n, zip(iu[keep].tolist(), ju[keep].tolist()))
