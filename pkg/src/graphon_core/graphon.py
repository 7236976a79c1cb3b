"""Step graphons, block sets and the basic integral operators.

A step graphon is a symmetric kernel on [0,1]^2 that is constant on the
cells of a product partition.  Every quantity in this package reduces to
finite sums over blocks, weighted by block masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadBoundaries,
    BadParameter,
    IndexOutOfRange,
    MismatchedBlockCount,
    NonSymmetric,
    OutOfRange,
    PointOutOfRange,
    SpecParseError,
    UnequalBlockMasses,
)

#: comparison tolerance for degree thresholds and set membership
TOL = 1e-12
#: tolerance for end-to-end assertions
ASSERT_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Piecewise-constant symmetric kernel.

    Parameters
    ----------
    boundaries : sequence of float
        Cut points ``0 = b_0 < b_1 < ... < b_m = 1``.
    values : (m, m) array_like
        Kernel value on block ``i`` x block ``j``.
    """

    boundaries: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "boundaries", _frozen(np.ravel(self.boundaries)))
        object.__setattr__(self, "values", _frozen(np.atleast_2d(self.values)))
        validate(self)

    @property
    def m(self) -> int:
        return len(self.boundaries) - 1

    @property
    def masses(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def block_of(self, x: float) -> int:
        """Index of the block covering x; blocks are [b_{j-1}, b_j), the last one closed."""
        if not (0.0 <= x <= 1.0) or math.isnan(x):
            raise PointOutOfRange(f"point {x} outside [0, 1]")
        j = int(np.searchsorted(self.boundaries, x, side="right")) - 1
        return min(j, self.m - 1)

    def evaluate(self, x, y):
        """Kernel value at (x, y); accepts scalars or arrays."""
        bx = np.minimum(np.searchsorted(self.boundaries, x, side="right") - 1, self.m - 1)
        by = np.minimum(np.searchsorted(self.boundaries, y, side="right") - 1, self.m - 1)
        return self.values[bx, by]

    def is_uniform(self, tol: float = TOL) -> bool:
        return bool(np.all(np.abs(self.masses - 1.0 / self.m) <= tol))

    def __eq__(self, other):
        if not isinstance(other, StepGraphon):
            return NotImplemented
        return (np.array_equal(self.boundaries, other.boundaries)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        return f"StepGraphon(m={self.m})"

    # JSON file format: {"boundaries": [...], "values": [[...], ...]}
    def to_dict(self) -> dict:
        return {"boundaries": self.boundaries.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "StepGraphon":
        for key in ("boundaries", "values"):
            if key not in d:
                raise BadBoundaries(f"missing field '{key}'")
        return cls(d["boundaries"], d["values"])

    @classmethod
    def uniform(cls, values) -> "StepGraphon":
        values = np.atleast_2d(np.asarray(values, dtype=float))
        return cls(np.linspace(0.0, 1.0, values.shape[0] + 1), values)

    @classmethod
    def constant(cls, a: float) -> "StepGraphon":
        return cls([0.0, 1.0], [[a]])


def validate(g: StepGraphon) -> None:
    """Raise if ``g`` violates a StepGraphon invariant; return None otherwise."""
    b, v = g.boundaries, g.values
    if b.ndim != 1 or len(b) < 2:
        raise BadBoundaries("boundaries: need at least [0, 1]")
    if b[0] != 0.0:
        raise BadBoundaries("boundaries[0] must be exactly 0")
    if b[-1] != 1.0:
        raise BadBoundaries(f"boundaries[{len(b) - 1}] must be exactly 1")
    steps = np.diff(b)
    bad = np.flatnonzero(~(steps > 0))
    if bad.size:
        raise BadBoundaries(f"boundaries[{bad[0] + 1}]: block {bad[0]} has non-positive mass")
    m = len(b) - 1
    if v.shape != (m, m):
        raise MismatchedBlockCount(f"values has shape {v.shape}, expected ({m}, {m})")
    bad = np.argwhere(~((v >= 0.0) & (v <= 1.0)))
    if bad.size:
        i, j = bad[0]
        raise OutOfRange(f"values[{i}][{j}] = {v[i, j]} not in [0, 1]")
    bad = np.argwhere(v != v.T)
    if bad.size:
        i, j = bad[0]
        raise NonSymmetric(f"values[{i}][{j}] != values[{j}][{i}]")


# ----------------------------------------------------------------------------
# Block sets


@dataclass(frozen=True, eq=False)
class ActiveSet:
    """A union of whole blocks of some step graphon."""

    membership: np.ndarray
    mass: float = field(default=0.0)

    @classmethod
    def of(cls, g: StepGraphon, members) -> "ActiveSet":
        """Build from a boolean mask or an iterable of block indices."""
        members = np.asarray(members)
        if members.dtype == bool:
            mask = members.copy()
            if mask.shape != (g.m,):
                raise MismatchedBlockCount(f"mask of length {mask.size} for {g.m} blocks")
        else:
            mask = np.zeros(g.m, dtype=bool)
            idx = members.astype(int).ravel()
            if idx.size and (idx.min() < 0 or idx.max() >= g.m):
                raise IndexOutOfRange(f"block index outside [0, {g.m})")
            mask[idx] = True
        mask.setflags(write=False)
        return cls(mask, float(g.masses[mask].sum()))

    @classmethod
    def full(cls, g: StepGraphon) -> "ActiveSet":
        return cls.of(g, np.ones(g.m, dtype=bool))

    @classmethod
    def empty(cls, g: StepGraphon) -> "ActiveSet":
        return cls.of(g, np.zeros(g.m, dtype=bool))

    @property
    def blocks(self) -> list[int]:
        return np.flatnonzero(self.membership).tolist()

    def is_empty(self) -> bool:
        return not self.membership.any()

    def __len__(self):
        return int(self.membership.sum())

    def __contains__(self, i):
        return bool(self.membership[i])

    def __le__(self, other: "ActiveSet") -> bool:
        return bool(np.all(~self.membership | other.membership))

    def __eq__(self, other):
        if not isinstance(other, ActiveSet):
            return NotImplemented
        return np.array_equal(self.membership, other.membership)

    __hash__ = None

    def __repr__(self):
        return f"ActiveSet({self.blocks}, mass={self.mass:.6g})"


# ----------------------------------------------------------------------------
# Integral operators


def _check_index(g: StepGraphon, i: int) -> None:
    if not 0 <= i < g.m:
        raise IndexOutOfRange(f"block index {i} outside [0, {g.m})")


def degrees(g: StepGraphon) -> np.ndarray:
    """All block degrees at once."""
    return g.values @ g.masses


def restricted_degrees(g: StepGraphon, mask: np.ndarray) -> np.ndarray:
    """Degrees of every block restricted to the blocks selected by ``mask``."""
    return g.values @ np.where(mask, g.masses, 0.0)


def degree(g: StepGraphon, i: int) -> float:
    """Integral of w(x, .) over [0, 1] for x in block ``i``."""
    _check_index(g, i)
    return float(g.values[i] @ g.masses)


def restricted_degree(g: StepGraphon, i: int, K: ActiveSet) -> float:
    """Integral of w(x, .) over K for x in block ``i``."""
    _check_index(g, i)
    if K.membership.shape != (g.m,):
        raise MismatchedBlockCount(f"active set over {K.membership.size} blocks, graphon has {g.m}")
    return float(g.values[i] @ np.where(K.membership, g.masses, 0.0))


def edge_density(g: StepGraphon) -> float:
    mu = g.masses
    return float(mu @ g.values @ mu)


# ----------------------------------------------------------------------------
# Partitions


def merge_boundaries(*lists: Iterable[float], tol: float = TOL) -> np.ndarray:
    pts = np.sort(np.concatenate([np.asarray(b, dtype=float) for b in lists]))
    out = [0.0]
    for p in pts:
        if p - out[-1] > tol:
            out.append(float(p))
    out[-1] = 1.0
    return np.array(out)


def _overlap(fine: np.ndarray, coarse: np.ndarray) -> np.ndarray:
    """P[I, i] = |fine block I  intersect  coarse block i|."""
    lo = np.maximum(fine[:-1, None], coarse[None, :-1])
    hi = np.minimum(fine[1:, None], coarse[None, 1:])
    return np.clip(hi - lo, 0.0, None)


def refine(g: StepGraphon, boundaries: Sequence[float]) -> StepGraphon:
    """Re-express ``g`` on a finer partition; values are inherited, not averaged."""
    boundaries = np.asarray(boundaries, dtype=float)
    mids = 0.5 * (boundaries[:-1] + boundaries[1:])
    idx = np.minimum(np.searchsorted(g.boundaries, mids, side="right") - 1, g.m - 1)
    return StepGraphon(boundaries, g.values[np.ix_(idx, idx)])


def common_refinement(g1: StepGraphon, g2: StepGraphon) -> tuple[StepGraphon, StepGraphon]:
    """Express both graphons on the union of their boundary sets."""
    b = merge_boundaries(g1.boundaries, g2.boundaries)
    return refine(g1, b), refine(g2, b)


def resample(g: StepGraphon, boundaries: Sequence[float]) -> StepGraphon:
    """Overlap-weighted block averages of ``g`` on an arbitrary partition."""
    boundaries = np.asarray(boundaries, dtype=float)
    P = _overlap(boundaries, g.boundaries)
    mu = np.diff(boundaries)
    v = (P @ g.values @ P.T) / np.outer(mu, mu)
    v = np.clip(0.5 * (v + v.T), 0.0, 1.0)
    return StepGraphon(boundaries, v)


def l1_distance(g1: StepGraphon, g2: StepGraphon) -> float:
    """||g1 - g2||_1 over the unit square."""
    r1, r2 = common_refinement(g1, g2)
    mu = r1.masses
    return float(mu @ np.abs(r1.values - r2.values) @ mu)


# ----------------------------------------------------------------------------
# Measure-preserving transforms


def pullback_sigma2(g: StepGraphon) -> StepGraphon:
    """The graphon (x, y) -> w(s(x), s(y)) with s(x) = 2x mod 1.

    Block ``i`` of ``g`` has two preimages: block ``i`` (left half) and block
    ``i + m`` (right half).
    """
    b = g.boundaries
    nb = np.concatenate([b / 2.0, 0.5 + b[1:] / 2.0])
    idx = np.concatenate([np.arange(g.m), np.arange(g.m)])
    return StepGraphon(nb, g.values[np.ix_(idx, idx)])


def sigma2_preimage(g: StepGraphon, K: ActiveSet, pulled: StepGraphon) -> ActiveSet:
    """Block set of ``pulled`` that is the preimage of ``K`` under x -> 2x mod 1."""
    return ActiveSet.of(pulled, np.concatenate([K.membership, K.membership]))


def apply_block_permutation(g: StepGraphon, perm: Sequence[int]) -> StepGraphon:
    """values'[i][j] = values[perm[i]][perm[j]] on an equal-mass partition."""
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(g.m)):
        raise BadParameter(f"not a permutation of 0..{g.m - 1}: {perm.tolist()}")
    if not g.is_uniform():
        raise UnequalBlockMasses("block permutation needs equal block masses")
    return StepGraphon(g.boundaries, g.values[np.ix_(perm, perm)])


# ----------------------------------------------------------------------------
# Analytic families


_FAMILIES = {"min": 0, "const": 1, "twoblock": 3, "lower": 1, "upper": 1, "appendix": 1}


@dataclass(frozen=True)
class AnalyticGraphon:
    """A named closed-form graphon.

    ``family`` is one of ``min``, ``const``, ``twoblock``, ``lower``, ``upper``,
    ``appendix``; ``params`` holds its parameters in that order
    (``twoblock`` takes ``(a, b, alpha)``, ``appendix`` takes ``(N,)``).
    """

    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise BadParameter(f"unknown family '{self.family}'")
        if len(self.params) != _FAMILIES[self.family]:
            raise BadParameter(f"{self.family} takes {_FAMILIES[self.family]} parameter(s)")
        p = self.params
        if self.family == "const" and not 0.0 <= p[0] <= 1.0:
            raise BadParameter(f"const: a={p[0]} not in [0, 1]")
        if self.family == "twoblock":
            a, b, alpha = p
            if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
                raise BadParameter("twoblock: a, b must lie in [0, 1]")
            if not 0.0 < alpha < 1.0:
                raise BadParameter(f"twoblock: alpha={alpha} not in (0, 1)")
        if self.family in ("lower", "upper") and not 0.0 < p[0] < 1.0:
            raise BadParameter(f"{self.family}: delta={p[0]} not in (0, 1)")
        if self.family == "appendix" and (int(p[0]) != p[0] or p[0] < 4):
            raise BadParameter(f"appendix: depth N={p[0]} must be an integer >= 4")

    @classmethod
    def parse(cls, text: str) -> "AnalyticGraphon":
        """Parse ``min``, ``const:a``, ``twoblock:a,b,alpha``, ``lower:d``, ``upper:d``, ``appendix:N``."""
        name, _, rest = text.strip().partition(":")
        name = name.strip().lower()
        if name not in _FAMILIES:
            raise SpecParseError(f"spec: unknown family '{name}'")
        try:
            if name == "appendix":
                params = (int(rest),)
            else:
                params = tuple(float(t) for t in rest.split(",")) if rest.strip() else ()
        except ValueError:
            raise SpecParseError(f"spec: cannot parse parameters '{rest}' for {name}") from None
        try:
            return cls(name, params)
        except BadParameter as e:
            raise SpecParseError(f"spec: {e}") from None

    def __str__(self):
        if not self.params:
            return self.family
        return f"{self.family}:" + ",".join(repr(p) for p in self.params)

    @property
    def is_step(self) -> bool:
        return self.family != "min"

    def to_step(self) -> StepGraphon:
        """Exact step representation (not available for ``min``)."""
        p = self.params
        if self.family == "const":
            return StepGraphon.constant(p[0])
        if self.family == "twoblock":
            a, b, alpha = p
            return StepGraphon([0.0, alpha, 1.0], [[b, a], [a, a]])
        if self.family == "lower":
            return StepGraphon([0.0, p[0], 1.0], [[1.0, 0.0], [0.0, 0.0]])
        if self.family == "upper":
            return StepGraphon([0.0, 1.0 - p[0], 1.0], [[0.0, 1.0], [1.0, 1.0]])
        if self.family == "appendix":
            from .examples import appendix_graphon, appendix_spec

            return appendix_graphon(appendix_spec(int(p[0])))
        raise BadParameter("min graphon has no exact step form; use discretize()")

    def evaluate(self, x, y):
        if self.family == "min":
            return np.minimum(x, y)
        return self.to_step().evaluate(x, y)


def discretize(a: AnalyticGraphon, m: int) -> StepGraphon:
    """Exact block averages of ``a`` on the uniform m-block partition."""
    if m < 1:
        raise BadParameter(f"block count {m} < 1")
    grid = np.linspace(0.0, 1.0, m + 1)
    if a.family != "min":
        return resample(a.to_step(), grid)
    # off-diagonal cells: min(x, y) = x on the lower block, so the average is its midpoint;
    # diagonal cells [l, l+h]^2 average to l + h/3
    lo, h = grid[:-1], 1.0 / m
    v = np.minimum.outer(lo + h / 2, lo + h / 2)
    np.fill_diagonal(v, lo + h / 3)
    return StepGraphon(grid, np.clip(v, 0.0, 1.0))
