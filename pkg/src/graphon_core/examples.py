"""Closed-form example families and their checks.

* the min graphon w(x, y) = min(x, y): its core recursion and cores [k, 1];
* the two-block graphon (b on [0, alpha]^2, a elsewhere);
* the extremal graphons for the edge-density bounds;
* the graphon built from two interleaved step sequences, truncated at a
  finite depth, whose core iteration removes two middle bands in an order
  that flips with the parity of the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import kappa_core
from .errors import BadDepth, BadParameter
from .graphon import TOL, AnalyticGraphon, StepGraphon

# ----------------------------------------------------------------------------
# min graphon


@dataclass(frozen=True)
class RecursionResult:
    kappa: float
    values: tuple[float, ...]
    #: "converged", "aborted" (radicand < 0, the next stage is empty) or "exhausted"
    status: str

    @property
    def last(self) -> float:
        return self.values[-1]


def min_graphon_recursion(kappa: float, n_max: int, tol: float = 1e-12) -> RecursionResult:
    """Left endpoints k^n of the stages [k^n, 1] of the min graphon."""
    if not 0.0 <= kappa <= 1.0:
        raise BadParameter(f"kappa={kappa} not in [0, 1]")
    if n_max < 1:
        raise BadParameter(f"n_max={n_max} < 1")
    k = 0.0
    values = [k]
    for _ in range(n_max):
        radicand = 1.0 - k * k - 2.0 * kappa
        if radicand < 0.0:
            return RecursionResult(kappa, tuple(values), "aborted")
        nxt = 1.0 - math.sqrt(radicand)
        values.append(nxt)
        if abs(nxt - k) < tol:
            return RecursionResult(kappa, tuple(values), "converged")
        k = nxt
    return RecursionResult(kappa, tuple(values), "exhausted")


def min_graphon_core_left(kappa: float) -> float:
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * kappa))


def min_graphon_core(kappa: float) -> tuple[float, float] | None:
    """The kappa-core [k, 1] of min(x, y), or None when kappa > 1/4."""
    if not 0.0 <= kappa <= 1.0:
        raise BadParameter(f"kappa={kappa} not in [0, 1]")
    if kappa > 0.25:
        return None
    return (min_graphon_core_left(kappa), 1.0)


# ----------------------------------------------------------------------------
# two-block and extremal graphons


def two_block_degeneracy(a: float, b: float, alpha: float) -> float:
    """Degeneracy of the graphon equal to b on [0, alpha]^2 and a elsewhere."""
    for name, v in (("a", a), ("b", b), ("alpha", alpha)):
        if not 0.0 < v < 1.0:
            raise BadParameter(f"{name}={v} not in (0, 1)")
    if b < a:
        return (1.0 - alpha) * a + alpha * b
    return max(a, alpha * b)


def extremal_pair(delta: float) -> tuple[StepGraphon, StepGraphon]:
    """Graphons with degeneracy ``delta`` attaining e = delta^2 and e = delta (2 - delta)."""
    if not 0.0 < delta < 1.0:
        raise BadParameter(f"delta={delta} not in (0, 1)")
    return (AnalyticGraphon("lower", (delta,)).to_step(),
            AnalyticGraphon("upper", (delta,)).to_step())


# ----------------------------------------------------------------------------
# interleaved-sequence graphon


def _f(n: int) -> float:
    return 1.0 - 1.0 / (n + 1)


@dataclass(frozen=True)
class AppendixSpec:
    """Sequences for the interleaved construction, truncated at depth N.

    All arrays are indexed from 0 with ``eps[0] = alpha[0] = 0``.
    """

    N: int
    alpha: np.ndarray
    alpha_p: np.ndarray
    eps: np.ndarray
    eps_p: np.ndarray
    beta: np.ndarray
    beta_p: np.ndarray

    @property
    def tail(self) -> float:
        """Mass of each truncated outer tail, (1 - alpha_N) / 5."""
        return (1.0 - self.alpha[self.N]) / 5.0

    @property
    def m(self) -> int:
        return 2 * self.N + 5

    # block indices in appendix_graphon
    def left(self, i: int) -> int:
        return 1 + self.N - i

    def right(self, i: int) -> int:
        return self.N + 3 + i

    @property
    def band_a(self) -> int:
        return self.N + 1

    @property
    def band_mid_left(self) -> int:
        return self.N + 2

    @property
    def band_mid_right(self) -> int:
        return self.N + 3

    def kappa(self, i: int) -> float:
        return float((1.0 + (self.eps[i] + self.eps_p[i]) / 2.0) / 5.0)

    def i_kappa(self, kappa: float) -> int:
        """Smallest positive j with (1 + eps_{j+1}) / 5 < kappa."""
        return _first_below(self.eps, kappa)

    def i_kappa_p(self, kappa: float) -> int:
        return _first_below(self.eps_p, kappa)


def _first_below(eps: np.ndarray, kappa: float) -> int:
    for j in range(1, len(eps) - 1):
        if (1.0 + eps[j + 1]) / 5.0 < kappa:
            return j
    raise BadDepth(f"no index below kappa={kappa} within the truncation depth")


def appendix_spec(N: int) -> AppendixSpec:
    """Sequences from f(n) = 1 - 1/(n+1): alpha takes f on even n and the
    neighbour average on odd n, alpha' the other way round."""
    if int(N) != N or N < 4:
        raise BadDepth(f"depth N={N} must be an integer >= 4")
    N = int(N)
    n = np.arange(N + 2)
    fn = np.array([_f(k) for k in range(N + 3)])
    avg = np.zeros(N + 2)
    avg[1:] = (fn[0:N + 1] + fn[2:N + 3]) / 2.0
    odd = n % 2 == 1
    alpha = np.where(odd, avg, fn[:N + 2])
    alpha_p = np.where(odd, fn[:N + 2], avg)
    alpha[0] = alpha_p[0] = 0.0
    eps = np.diff(alpha, prepend=0.0)
    eps_p = np.diff(alpha_p, prepend=0.0)
    beta = np.cumsum(np.concatenate([[0.0], eps[1:] * (1.0 - eps[:-1])]))
    beta_p = np.cumsum(np.concatenate([[0.0], eps_p[1:] * (1.0 - eps_p[:-1])]))
    spec = AppendixSpec(N, alpha, alpha_p, eps, eps_p, beta, beta_p)
    problems = check_appendix_spec(spec)
    if problems:
        raise BadDepth("; ".join(problems))
    return spec


def check_appendix_spec(spec: AppendixSpec) -> list[str]:
    """Violated invariants (empty when the sequences are consistent)."""
    N, out = spec.N, []
    e, ep = spec.eps[1:N + 1], spec.eps_p[1:N + 1]
    if not (np.all(e > 0) and np.all(ep > 0)):
        out.append("eps must be positive")
    if np.any(np.diff(e) > TOL) or np.any(np.diff(ep) > TOL):
        out.append("eps must be non-increasing")
    if not (spec.alpha[N] < 1 and spec.alpha_p[N] < 1):
        out.append("alpha_N must be < 1")
    if abs(np.sum(e) - spec.alpha[N]) > TOL or abs(np.sum(ep) - spec.alpha_p[N]) > TOL:
        out.append("alpha is not the partial sum of eps")
    # eps'_1 > eps_1 = eps_2 > eps'_2 = eps'_3 > eps_3 = eps_4 > ...
    chain = [spec.eps_p[1]]
    for k in range(1, N // 2 + 1):
        if 2 * k + 1 > N:
            break
        chain += [spec.eps[2 * k - 1], spec.eps[2 * k], spec.eps_p[2 * k], spec.eps_p[2 * k + 1]]
    for j in range(len(chain) - 1):
        strict = j % 2 == 0
        if strict and not chain[j] > chain[j + 1]:
            out.append(f"interleaving: strict step {j} fails")
        if not strict and abs(chain[j] - chain[j + 1]) > TOL:
            out.append(f"interleaving: equality step {j} fails")
    return out


def appendix_graphon(spec: AppendixSpec) -> StepGraphon:
    """Step graphon on the bands of the interleaved construction.

    Layout from left to right: zero tail, L_N, ..., L_1, [1/5, 2/5),
    [2/5, 3/5), [3/5, 4/5), R_1, ..., R_N, zero tail, where
    L_i = [(1 - alpha_i)/5, (1 - alpha_{i-1})/5) and
    R_i = [(4 + alpha'_{i-1})/5, (4 + alpha'_i)/5).
    """
    N = spec.N
    b = ([0.0, (1.0 - spec.alpha[N]) / 5.0]
         + [(1.0 - spec.alpha[i - 1]) / 5.0 for i in range(N, 0, -1)]
         + [2 / 5, 3 / 5, 4 / 5]
         + [(4.0 + spec.alpha_p[i]) / 5.0 for i in range(1, N + 1)]
         + [1.0])
    b[N + 1] = 1 / 5  # exactly, rather than (1 - 0)/5 rounded
    V = np.zeros((spec.m, spec.m))

    def put(i, j, v):
        V[i, j] = V[j, i] = v

    A, B, C = spec.band_a, spec.band_mid_left, spec.band_mid_right
    for i in range(1, N):
        put(spec.left(i + 1), spec.left(i), 1.0)
        put(spec.right(i), spec.right(i + 1), 1.0)
    for i in range(1, N + 1):
        put(spec.left(i), A, 1.0 - spec.eps[i - 1])
        put(C, spec.right(i), 1.0 - spec.eps_p[i - 1])
    put(A, B, 1.0)
    put(B, C, 1.0)
    return StepGraphon(b, V)


@dataclass(frozen=True)
class AlternationRow:
    i: int
    kappa_i: float
    i_kappa: int
    i_kappa_p: int
    stage_mid_left: int | None
    stage_mid_right: int | None
    order: str
    predicted_order: str
    #: largest endpoint error of K^k against the closed-form interval, k <= min(i_kappa, i_kappa')
    interval_error: float
    intervals_match: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class AlternationReport:
    N: int
    rows: tuple[AlternationRow, ...]
    slack: float

    @property
    def alternates(self) -> bool:
        """Leave order depends only on the parity of i and differs between parities."""
        by_parity = {}
        for r in self.rows:
            by_parity.setdefault(r.i % 2, set()).add(r.order)
        if any(len(s) != 1 for s in by_parity.values()):
            return False
        return len(by_parity) < 2 or by_parity[0] != by_parity[1]

    @property
    def intervals_match(self) -> bool:
        return all(r.intervals_match for r in self.rows)

    def to_dict(self) -> dict:
        return {"N": self.N, "slack": self.slack, "alternates": self.alternates,
                "intervals_match": self.intervals_match,
                "rows": [r.to_dict() for r in self.rows]}


def _order(left: int | None, right: int | None) -> str:
    inf = float("inf")
    lo, ro = inf if left is None else left, inf if right is None else right
    if lo < ro:
        return "mid-left-first"
    if ro < lo:
        return "mid-right-first"
    return "simultaneous"


def appendix_alternation(spec: AppendixSpec, i_max: int) -> AlternationReport:
    """Run the core iteration at kappa_i = (1 + (eps_i + eps'_i)/2) / 5 for i = 1..i_max.

    Records when the bands [2/5, 3/5) and [3/5, 4/5) leave, and compares the
    stages K^k with [(1 - alpha_{i_k - k})/5, (4 + alpha'_{i'_k - k})/5).
    """
    if i_max < 1 or i_max > spec.N - 10:
        raise BadDepth(f"i_max={i_max} must lie in [1, N - 10] = [1, {spec.N - 10}]")
    g = appendix_graphon(spec)
    slack = spec.tail + TOL
    rows = []
    for i in range(1, i_max + 1):
        kappa = spec.kappa(i)
        trace = kappa_core(g, kappa)
        ik, ikp = spec.i_kappa(kappa), spec.i_kappa_p(kappa)
        left = trace.leave_stage(spec.band_mid_left)
        right = trace.leave_stage(spec.band_mid_right)
        err = 0.0
        for k in range(1, min(ik, ikp) + 1):
            if k >= len(trace.stages):
                err = math.inf
                break
            members = np.flatnonzero(trace.stages[k].membership)
            if members.size == 0 or np.any(np.diff(members) != 1):
                err = math.inf
                break
            lo, hi = float(g.boundaries[members[0]]), float(g.boundaries[members[-1] + 1])
            want_lo = (1.0 - spec.alpha[ik - k]) / 5.0
            want_hi = (4.0 + spec.alpha_p[ikp - k]) / 5.0
            err = max(err, abs(lo - want_lo), abs(hi - want_hi))
        predicted = "mid-left-first" if ik < ikp else "mid-right-first"
        rows.append(AlternationRow(i, kappa, ik, ikp, left, right, _order(left, right),
                                   predicted, err, bool(err <= slack)))
    return AlternationReport(spec.N, tuple(rows), slack)
