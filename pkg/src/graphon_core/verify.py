"""Seeded property sweeps over the core, density, continuity and oracle lemmas.

Every suite draws trial ``t`` from ``default_rng([seed, suite_id, t])`` so a
failing trial can be replayed on its own.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import core, cutmetric, examples, finite
from .graphon import (
    ASSERT_TOL,
    TOL,
    StepGraphon,
    apply_block_permutation,
    degrees,
    edge_density,
    pullback_sigma2,
    sigma2_preimage,
)
from .randomgraphs import random_graph, random_step_graphon


def assert_tol() -> float:
    """End-to-end tolerance, overridable through GRAPHON_TOL."""
    raw = os.environ.get("GRAPHON_TOL")
    return float(raw) if raw else ASSERT_TOL


@dataclass
class VerifyReport:
    suite: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "seed": self.seed,
                "failures": self.failures, "wall_time": self.wall_time, **self.details}


def _rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, SUITE_IDS[suite], trial])


# --- individual checks: each returns a list of failure messages ---------------


def core_lemma_failures(g: StepGraphon, rng: np.random.Generator, tol: float) -> list[str]:
    out = []
    dec = core.decompose(g)
    d = degrees(g)
    shells = dec.shells

    if abs(dec.degeneracy - shells.max()) > TOL:
        out.append("degeneracy != max shell")
    running = [r for _, _, r in dec.peel_order]
    if any(b < a for a, b in zip(running, running[1:])) or running[-1] != dec.degeneracy:
        out.append("peel running max not monotone or final value != degeneracy")
    if np.any(shells > d + tol):
        out.append("shell exceeds degree")
    if not (d.min() - tol <= dec.degeneracy <= d.max() + tol):
        out.append("degree sandwich violated")
    if g.masses[d >= dec.degeneracy - tol].sum() < dec.degeneracy - tol:
        out.append("high-degree set lighter than degeneracy")

    kappas = np.concatenate([rng.random(4), shells, np.clip(shells + tol, 0, 1),
                             np.clip(shells - tol, 0, 1), [0.0]])
    traces = {}
    for k in kappas:
        tr = core.kappa_core(g, float(k))
        traces[float(k)] = tr
        K = tr.terminal
        if len(tr.stages) > g.m + 1:
            out.append(f"trace at kappa={k} longer than m+1")
        if any(not (b <= a) or a == b for a, b in zip(tr.stages, tr.stages[1:])):
            out.append(f"stages at kappa={k} not strictly nested")
        if not np.array_equal(K.membership, dec.core_blocks(k)):
            out.append(f"core/shell duality fails at kappa={k}")
        if not K.is_empty():
            if K.mass < k - tol:
                out.append(f"nonempty core at kappa={k} has mass {K.mass} < kappa")
            rd = g.values @ np.where(K.membership, g.masses, 0.0)
            if np.any(rd[K.membership] < k - TOL):
                out.append(f"core at kappa={k} is not self-supporting")
    ks = sorted(traces)
    for lo, hi in zip(ks, ks[1:]):
        if not traces[hi].terminal <= traces[lo].terminal:
            out.append(f"nesting fails for kappa {hi} >= {lo}")
        if traces[hi].terminal.mass > traces[lo].terminal.mass + TOL:
            out.append("core mass curve increases")
    if abs(traces[0.0].terminal.mass - 1.0) > TOL:
        out.append("mass at kappa=0 is not 1")
    for s in set(shells.tolist()):
        if s - 1e-9 < 0:
            continue
        at = core.kappa_core(g, s).terminal.mass
        below = core.kappa_core(g, s - 1e-9).terminal.mass
        if abs(at - below) > TOL:
            out.append(f"mass curve not left-continuous at shell {s}")
    return out


def density_failures(g: StepGraphon, tol: float) -> list[str]:
    e, d = edge_density(g), core.degeneracy(g)
    out = []
    if e < d * d - tol:
        out.append(f"e={e} < delta^2={d * d}")
    if e > d * (2 - d) + tol:
        out.append(f"e={e} > delta(2-delta)={d * (2 - d)}")
    return out


def mp_failures(g: StepGraphon, rng: np.random.Generator, perms: int, tol: float) -> list[str]:
    out = []
    e, d = edge_density(g), core.degeneracy(g)
    pulled = pullback_sigma2(g)
    if abs(edge_density(pulled) - e) > TOL:
        out.append("sigma2 changes edge density")
    if abs(core.degeneracy(pulled) - d) > tol:
        out.append("sigma2 changes degeneracy")
    for k in np.concatenate([rng.random(3), [d]]):
        tr, trp = core.kappa_core(g, float(k)), core.kappa_core(pulled, float(k))
        if len(tr.stages) != len(trp.stages) or any(
                sigma2_preimage(g, K, pulled) != Kp for K, Kp in zip(tr.stages, trp.stages)):
            out.append(f"sigma2 stages are not preimages at kappa={k}")
    for _ in range(perms):
        perm = rng.permutation(g.m)
        h = apply_block_permutation(g, perm)
        if abs(edge_density(h) - e) > TOL:
            out.append(f"permutation {perm.tolist()} changes edge density")
        if abs(core.degeneracy(h) - d) > tol:
            out.append(f"permutation {perm.tolist()} changes degeneracy")
    return out


# --- suites --------------------------------------------------------------------


def _suite_lemmas_core(rng, trial, tol, **_):
    g = random_step_graphon(rng, m_max=8)
    return core_lemma_failures(g, rng, tol), g


def _suite_continuity(rng, trial, tol, **_):
    g1, g2 = random_step_graphon(rng, m_max=8), random_step_graphon(rng, m_max=8)
    rep = cutmetric.check_continuity(g1, g2, tol)
    fails = [] if rep.holds else [f"|dDelta|={rep.delta_gap} > 2 sqrt(d_box)={rep.bound}"]
    return fails, (g1, g2)


def _suite_density(rng, trial, tol, **_):
    g = random_step_graphon(rng, m_max=8)
    return density_failures(g, tol), g


def _suite_mp(rng, trial, tol, perms=100, **_):
    g = random_step_graphon(rng, m_max=8, uniform=True)
    return mp_failures(g, rng, perms, tol), g


def _suite_oracle(rng, trial, tol, **_):
    out = []
    g = random_step_graphon(rng, m_max=12)
    peel = core.decompose(g)
    value, _ = core.brute_force_degeneracy(g)
    if abs(peel.degeneracy - value) > tol:
        out.append(f"peeling {peel.degeneracy} != brute force {value}")
    if np.any(np.abs(core.brute_force_shells(g) - peel.shells) > tol):
        out.append("shells differ from subset enumeration")
    G = random_graph(rng, n_max=12)
    dg, bf = finite.graph_decompose(G).degeneracy, finite.brute_force_graph_degeneracy(G)
    if dg != bf:
        out.append(f"graph degeneracy {dg} != brute force {bf} (n={G.n}, edges={sorted(G.edges)})")
    if abs(core.degeneracy(finite.graph_to_graphon(G)) - dg / G.n) > tol:
        out.append("normalized degeneracy of graph_to_graphon differs")
    h1, h2 = random_step_graphon(rng, m_max=6), random_step_graphon(rng, m_max=6)
    if abs(cutmetric.cut_norm(h1, h2).value - cutmetric.cut_norm_bruteforce(h1, h2)) > TOL:
        out.append("cut_norm differs from full (S, T) enumeration")
    return out, g


def _suite_kwpr(rng, trial, tol, **_):
    G = random_graph(rng, n_max=40)
    rep = finite.check_kwpr(G)
    return ([] if rep.holds else [f"KWPR fails: {rep}"]), G


SUITES = {
    "lemmas-core": _suite_lemmas_core,
    "continuity": _suite_continuity,
    "density-bounds": _suite_density,
    "mp-invariance": _suite_mp,
    "oracle": _suite_oracle,
    "kwpr": _suite_kwpr,
}
SUITE_IDS = {name: i for i, name in enumerate([*SUITES, "appendix"])}
SUITE_NAMES = [*SUITES, "appendix", "all"]


def _describe(obj):
    if isinstance(obj, StepGraphon):
        return obj.to_dict()
    if isinstance(obj, finite.FiniteGraph):
        return {"n": obj.n, "edges": [list(e) for e in obj.sorted_edges()]}
    if isinstance(obj, tuple):
        return [_describe(o) for o in obj]
    return repr(obj)


def run_appendix(N: int = 40, i_max: int = 6, seed: int = 0) -> VerifyReport:
    t0 = time.perf_counter()
    rep = examples.appendix_alternation(examples.appendix_spec(N), i_max)
    failures = []
    if not rep.alternates:
        orders = [(r.i, r.order) for r in rep.rows]
        failures.append({"trial": 0, "seed": seed, "detail": f"leave order does not alternate: {orders}"})
    for r in rep.rows:
        if not r.intervals_match:
            failures.append({"trial": r.i, "seed": seed,
                             "detail": f"stage interval error {r.interval_error} > slack {rep.slack}"})
    return VerifyReport("appendix", 1, seed, failures, time.perf_counter() - t0,
                        {"report": rep.to_dict()})


def run_suite(suite: str, trials: int, seed: int, tol: float | None = None, **kw) -> VerifyReport:
    """Run one named suite; ``appendix`` ignores ``trials``."""
    tol = assert_tol() if tol is None else tol
    if suite == "appendix":
        return run_appendix(seed=seed)
    if suite not in SUITES:
        raise KeyError(f"unknown suite '{suite}'")
    fn = SUITES[suite]
    t0 = time.perf_counter()
    failures = []
    for t in range(trials):
        msgs, obj = fn(_rng(seed, suite, t), t, tol, **kw)
        if msgs:
            failures.append({"trial": t, "seed": seed, "detail": msgs, "input": _describe(obj)})
    return VerifyReport(suite, trials, seed, failures, time.perf_counter() - t0)


def run_all(trials: int, seed: int, tol: float | None = None) -> list[VerifyReport]:
    return [run_suite(s, trials, seed, tol) for s in [*SUITES, "appendix"]]


def hoelder_ratios(a: float = 0.5, b: float = 0.2, alphas=(1 / 2, 1 / 4, 1 / 8, 1 / 16)) -> list[float]:
    """|delta difference| / cut norm for the two-block graphon against the constant a."""
    from .graphon import AnalyticGraphon

    const = StepGraphon.constant(a)
    out = []
    for alpha in alphas:
        w = AnalyticGraphon("twoblock", (a, b, alpha)).to_step()
        gap = abs(core.degeneracy(w) - core.degeneracy(const))
        out.append(gap / cutmetric.cut_norm(const, w).value)
    return out


def min_graphon_convergence(ms=(64, 128, 256, 512)) -> list[tuple[int, float]]:
    from .graphon import AnalyticGraphon, discretize

    return [(m, core.degeneracy(discretize(AnalyticGraphon("min"), m))) for m in ms]
