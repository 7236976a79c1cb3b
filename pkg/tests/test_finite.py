import io

import networkx as nx
import numpy as np
import pytest

from graphon_core.core import degeneracy
from graphon_core.errors import BadParameter
from graphon_core.finite import (
    FiniteGraph,
    brute_force_graph_degeneracy,
    check_kwpr,
    graph_decompose,
    graph_to_graphon,
    k_core,
    read_edges,
    sample_graph,
    write_edges,
)
from graphon_core.graphon import AnalyticGraphon, StepGraphon
from graphon_core.randomgraphs import random_graph


def test_constructor_normalizes_and_dedups():
    G = FiniteGraph(3, [(1, 0), (0, 1), (2, 1)])
    assert G.sorted_edges() == [(0, 1), (1, 2)]


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 0)]])
def test_constructor_rejects(edges):
    with pytest.raises(BadParameter):
        FiniteGraph(3, edges)


def test_complete_graph_core():
    G = FiniteGraph.complete(5)
    assert graph_decompose(G).degeneracy == 4
    assert k_core(G, 4) == set(range(5))
    assert k_core(G, 5) == set()


def test_path_and_star():
    assert graph_decompose(FiniteGraph.path(6)).degeneracy == 1
    assert graph_decompose(FiniteGraph.star(7)).degeneracy == 1
    assert graph_decompose(FiniteGraph(4)).degeneracy == 0


def test_against_networkx_core_number():
    rng = np.random.default_rng(21)
    for _ in range(30):
        G = random_graph(rng, n_max=30)
        H = nx.Graph()
        H.add_nodes_from(range(G.n))
        H.add_edges_from(G.edges)
        core = nx.core_number(H)
        assert list(graph_decompose(G).shells) == [core[v] for v in range(G.n)]
        for k in range(4):
            assert k_core(G, k) == set(nx.k_core(H, k).nodes)


def test_brute_force_agrees():
    rng = np.random.default_rng(22)
    for _ in range(50):
        G = random_graph(rng, n_max=10)
        assert graph_decompose(G).degeneracy == brute_force_graph_degeneracy(G)


def test_kwpr_path():
    rep = check_kwpr(FiniteGraph.path(4))
    assert (rep.lower, rep.edges, rep.upper) == (1, 3, 3)
    assert str(rep) == "1 ≤ 3 ≤ 3 OK"


@pytest.mark.parametrize("n", range(1, 12))
def test_kwpr_tight_on_complete_graphs(n):
    rep = check_kwpr(FiniteGraph.complete(n))
    assert rep.holds and rep.lower == rep.edges == rep.upper


def test_graph_to_graphon_normalized_degeneracy():
    G = FiniteGraph.complete(4)
    assert degeneracy(graph_to_graphon(G)) == pytest.approx(3 / 4, abs=1e-15)


def test_sample_is_reproducible():
    a = sample_graph(AnalyticGraphon("min"), 30, seed=3)
    b = sample_graph(AnalyticGraphon("min"), 30, seed=3)
    assert a.sorted_edges() == b.sorted_edges()


def test_sample_extremes():
    assert len(sample_graph(StepGraphon.constant(1.0), 5, 0).edges) == 10
    assert len(sample_graph(StepGraphon.constant(0.0), 5, 0).edges) == 0


def test_sample_density():
    G = sample_graph(StepGraphon.constant(0.5), 2000, seed=1)
    assert abs(len(G.edges) / (2000 * 1999 / 2) - 0.5) < 0.02


def test_edge_list_round_trip():
    G = FiniteGraph(5, [(0, 1), (3, 4), (1, 3)])
    buf = io.StringIO()
    write_edges(G, buf)
    assert buf.getvalue().splitlines()[0] == "5 3"
    buf.seek(0)
    assert read_edges(buf).sorted_edges() == G.sorted_edges()


def test_read_edges_errors():
    with pytest.raises(BadParameter):
        read_edges(io.StringIO("nonsense\n"))
