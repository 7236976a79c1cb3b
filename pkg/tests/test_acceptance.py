"""Acceptance criteria 1 to 10.

Each test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them at the end of the session.  ``python tests/test_acceptance.py`` runs
only this file.
"""

import json
import math
import time

import numpy as np
import pytest

from graphon_core import core, cutmetric, examples, finite, verify
from graphon_core.cli import main as cli_main
from graphon_core.graphon import (
    AnalyticGraphon,
    StepGraphon,
    edge_density,
)
from graphon_core.randomgraphs import random_graph, random_step_graphon

SEED = 20240611
TOL = 1e-9
RESULTS: dict[int, str] = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def test_criterion_01_min_graphon(capsys):
    t0 = time.perf_counter()
    code = cli_main(["degeneracy", "--spec", "min", "--blocks", "512"])
    out = capsys.readouterr().out
    cli_time = time.perf_counter() - t0
    value = json.loads(out)["degeneracy"]
    errs = [abs(d - 0.25) for _, d in verify.min_graphon_convergence()]
    monotone = all(b < a for a, b in zip(errs, errs[1:]))

    res = examples.min_graphon_recursion(0.125, 10_000)
    target = 0.5 * (1 - math.sqrt(1 - 0.5))
    runs = []
    for _ in range(20):
        s = time.perf_counter()
        examples.min_graphon_recursion(0.125, 10_000)
        runs.append(time.perf_counter() - s)
    fp_time = min(runs)

    ok = (code == 0 and abs(value - 0.25) <= 0.02 and monotone and cli_time < 5
          and res.status == "converged" and abs(res.last - target) <= 1e-9 and fp_time < 1e-3)
    record(1, ok, f"delta(m=512)={value:.6f} errors={[round(e, 6) for e in errs]} "
                  f"cli {cli_time:.2f}s; fixed point {res.last:.14f} in {fp_time * 1e3:.3f} ms")


def test_criterion_02_two_block():
    t0 = time.perf_counter()
    grid = np.linspace(0.05, 0.95, 10)
    worst_delta = worst_cut = 0.0
    for a in grid:
        const = StepGraphon.constant(a)
        for b in grid:
            for alpha in grid:
                w = AnalyticGraphon("twoblock", (a, b, alpha)).to_step()
                worst_delta = max(worst_delta, abs(core.degeneracy(w) - examples.two_block_degeneracy(a, b, alpha)))
                worst_cut = max(worst_cut, abs(cutmetric.cut_norm(const, w).value - alpha**2 * abs(a - b)))
    dt = time.perf_counter() - t0
    ok = worst_delta <= 1e-9 and worst_cut <= 1e-12 and dt < 10
    record(2, ok, f"max |delta err|={worst_delta:.2e} max |cut err|={worst_cut:.2e} in {dt:.2f}s")


def test_criterion_03_continuity():
    rep = verify.run_suite("continuity", 1000, SEED, tol=TOL)
    ratios = verify.hoelder_ratios()
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    ok = rep.ok and rep.wall_time < 60 and increasing
    record(3, ok, f"{len(rep.failures)} failures / 1000 in {rep.wall_time:.2f}s; "
                  f"Hoelder ratios {[round(r, 6) for r in ratios]}")


def test_criterion_04_density_bounds():
    rep = verify.run_suite("density-bounds", 1000, SEED, tol=TOL)
    t0 = time.perf_counter()
    worst = 0.0
    for delta in np.round(np.arange(1, 10) / 10, 10):
        low, high = examples.extremal_pair(float(delta))
        worst = max(worst, abs(edge_density(low) - delta**2),
                    abs(edge_density(high) - delta * (2 - delta)),
                    abs(core.degeneracy(low) - delta), abs(core.degeneracy(high) - delta))
    dt = rep.wall_time + time.perf_counter() - t0
    ok = rep.ok and worst <= 1e-12 and dt < 30
    record(4, ok, f"{len(rep.failures)} failures / 1000; extremal max err {worst:.1e}; {dt:.2f}s")


def test_criterion_05_oracles():
    t0 = time.perf_counter()
    bad_graphons = bad_graphs = 0
    for t in range(500):
        g = random_step_graphon(np.random.default_rng([SEED, 5, t]), m_max=12)
        value, _ = core.brute_force_degeneracy(g)
        bad_graphons += abs(core.degeneracy(g) - value) > TOL
    for t in range(200):
        G = random_graph(np.random.default_rng([SEED, 50, t]), n_max=12)
        bad_graphs += finite.graph_decompose(G).degeneracy != finite.brute_force_graph_degeneracy(G)
    dt = time.perf_counter() - t0
    ok = bad_graphons == 0 and bad_graphs == 0 and dt < 120
    record(5, ok, f"graphon mismatches {bad_graphons}/500, graph mismatches {bad_graphs}/200 in {dt:.2f}s")


def test_criterion_06_kwpr():
    t0 = time.perf_counter()
    rep = verify.run_suite("kwpr", 500, SEED)
    families = [finite.FiniteGraph.complete(n) for n in range(1, 41)]
    families += [finite.FiniteGraph.path(n) for n in range(1, 41)]
    bad_families = sum(not finite.check_kwpr(G).holds for G in families)
    dt = time.perf_counter() - t0
    ok = rep.ok and bad_families == 0 and dt < 10
    record(6, ok, f"{len(rep.failures)} failures / 500 random, {bad_families} / {len(families)} "
                  f"complete and path graphs, {dt:.2f}s")


def test_criterion_07_embedding():
    t0 = time.perf_counter()
    worst = 0.0
    for t in range(200):
        G = random_graph(np.random.default_rng([SEED, 7, t]), n_max=12)
        d = finite.graph_decompose(G).degeneracy
        worst = max(worst, abs(core.degeneracy(finite.graph_to_graphon(G)) - d / G.n))
    dt = time.perf_counter() - t0
    ok = worst <= TOL and dt < 30
    record(7, ok, f"max |delta(W_G) - degen(G)/n| = {worst:.1e} over 200 graphs in {dt:.2f}s")


def test_criterion_08_measure_preserving():
    rep = verify.run_suite("mp-invariance", 100, SEED, tol=TOL, perms=100)
    ok = rep.ok and rep.wall_time < 60
    record(8, ok, f"{len(rep.failures)} failures / 100 graphons x 100 permutations plus sigma2 "
                  f"in {rep.wall_time:.2f}s")


def test_criterion_09_appendix_alternation():
    rep = verify.run_appendix(N=40, i_max=6, seed=SEED)
    alt = rep.details["report"]
    orders = [r["order"] for r in alt["rows"]]
    ok = alt["alternates"] and alt["intervals_match"] and rep.wall_time < 10
    record(9, ok, f"alternates={alt['alternates']} intervals_match={alt['intervals_match']} "
                  f"orders={orders} in {rep.wall_time:.2f}s")


def test_criterion_10_core_lemmas():
    rep = verify.run_suite("lemmas-core", 500, SEED, tol=TOL)
    ok = rep.ok and rep.wall_time < 120
    record(10, ok, f"{len(rep.failures)} failures / 500 in {rep.wall_time:.2f}s")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
