"""kappa-cores, shell indices and degeneracy of step graphons.

For a step graphon every set in the core iteration is a union of whole
blocks, so the iteration terminates after at most ``m`` removals and the
peeling below is exact up to floating-point rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, TooManyBlocks
from .graphon import TOL, ActiveSet, StepGraphon, degrees, restricted_degrees

BRUTE_FORCE_MAX_BLOCKS = 20


@dataclass(frozen=True)
class CoreTrace:
    """The iteration K^0 = [0,1] ⊇ K^1 ⊇ K^2 ⊇ ... for a fixed kappa.

    ``stages[n]`` is K^n; the list stops at the first fixed point, so the last
    entry is the kappa-core and no set is repeated.
    """

    kappa: float
    stages: tuple[ActiveSet, ...]

    @property
    def terminal(self) -> ActiveSet:
        return self.stages[-1]

    def leave_stage(self, block: int) -> int | None:
        """First n with ``block`` not in K^n, or None if the block is in the core."""
        for n, K in enumerate(self.stages):
            if block not in K:
                return n
        return None


@dataclass(frozen=True)
class CoreDecomposition:
    shells: np.ndarray
    degeneracy: float
    #: (block, restricted degree at removal, running max) in removal order
    peel_order: tuple[tuple[int, float, float], ...]

    def core_blocks(self, kappa: float) -> np.ndarray:
        return self.shells >= kappa - TOL


def _check_kappa(kappa: float) -> None:
    if not 0.0 <= kappa <= 1.0:
        raise BadParameter(f"kappa={kappa} not in [0, 1]")


def core_stage(g: StepGraphon, kappa: float, K: ActiveSet) -> ActiveSet:
    """One filtering step: keep the blocks of K whose degree into K is at least kappa."""
    d = restricted_degrees(g, K.membership)
    return ActiveSet.of(g, K.membership & (d >= kappa - TOL))


def kappa_core(g: StepGraphon, kappa: float) -> CoreTrace:
    _check_kappa(kappa)
    K = ActiveSet.full(g)
    stages = [K]
    while True:
        nxt = core_stage(g, kappa, K)
        if nxt == K:
            break
        stages.append(nxt)
        K = nxt
    return CoreTrace(kappa, tuple(stages))


def decompose(g: StepGraphon) -> CoreDecomposition:
    """Shell index of every block and the degeneracy, by min-degree peeling.

    Repeatedly removes the active block of smallest restricted degree (ties go
    to the lowest index).  The shell of a removed block is the running maximum
    of the removal degrees.
    """
    active = np.ones(g.m, dtype=bool)
    shells = np.zeros(g.m)
    order = []
    running = 0.0
    for _ in range(g.m):
        d = np.where(active, restricted_degrees(g, active), np.inf)
        i = int(np.argmin(d))
        running = max(running, float(d[i]))
        shells[i] = running
        order.append((i, float(d[i]), running))
        active[i] = False
    shells.setflags(write=False)
    return CoreDecomposition(shells, running, tuple(order))


def degeneracy(g: StepGraphon) -> float:
    return decompose(g).degeneracy


def brute_force_degeneracy(g: StepGraphon) -> tuple[float, list[int]]:
    """Max over nonempty block subsets S of min_{i in S} d^S(i), by enumeration.

    Independent of the peeling; used as a test oracle.  Returns the value and
    the first maximizing subset in binary counting order.
    """
    m = g.m
    if m > BRUTE_FORCE_MAX_BLOCKS:
        raise TooManyBlocks(f"{m} blocks; subset enumeration is capped at {BRUTE_FORCE_MAX_BLOCKS}")
    mu, V = g.masses, g.values
    bits = 1 << np.arange(m)
    best, best_code = -1.0, 0
    chunk = 1 << 15
    for start in range(1, 1 << m, chunk):
        codes = np.arange(start, min(start + chunk, 1 << m))
        masks = (codes[:, None] & bits) != 0
        d = (masks * mu) @ V.T
        worst = np.where(masks, d, np.inf).min(axis=1)
        k = int(np.argmax(worst))
        if worst[k] > best:
            best, best_code = float(worst[k]), int(codes[k])
    return best, [i for i in range(m) if best_code >> i & 1]


def brute_force_shells(g: StepGraphon) -> np.ndarray:
    """Shell of block i as the max over subsets S containing i of min_{j in S} d^S(j)."""
    m = g.m
    if m > BRUTE_FORCE_MAX_BLOCKS:
        raise TooManyBlocks(f"{m} blocks; subset enumeration is capped at {BRUTE_FORCE_MAX_BLOCKS}")
    mu, V = g.masses, g.values
    bits = 1 << np.arange(m)
    shells = np.full(m, -np.inf)
    chunk = 1 << 15
    for start in range(1, 1 << m, chunk):
        codes = np.arange(start, min(start + chunk, 1 << m))
        masks = (codes[:, None] & bits) != 0
        worst = np.where(masks, (masks * mu) @ V.T, np.inf).min(axis=1)
        shells = np.maximum(shells, np.where(masks, worst[:, None], -np.inf).max(axis=0))
    return shells


def shell_of(g: StepGraphon, x: float, decomposition: CoreDecomposition | None = None) -> float:
    dec = decomposition if decomposition is not None else decompose(g)
    return float(dec.shells[g.block_of(x)])


def mass_of_core_curve(g: StepGraphon, grid) -> list[tuple[float, float]]:
    """(kappa, |K_kappa|) for each kappa in ``grid``."""
    return [(float(k), kappa_core(g, float(k)).terminal.mass) for k in grid]


def core_mass_from_shells(g: StepGraphon, dec: CoreDecomposition, kappa: float) -> float:
    return float(g.masses[dec.core_blocks(kappa)].sum())


def max_degree(g: StepGraphon) -> float:
    return float(degrees(g).max())


def min_degree(g: StepGraphon) -> float:
    return float(degrees(g).min())
