import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphon_core.core import (
    brute_force_degeneracy,
    brute_force_shells,
    core_mass_from_shells,
    decompose,
    degeneracy,
    kappa_core,
    mass_of_core_curve,
    shell_of,
)
from graphon_core.errors import BadParameter, TooManyBlocks
from graphon_core.graphon import AnalyticGraphon, StepGraphon, degrees, discretize
from graphon_core.randomgraphs import random_step_graphon


def upper(delta):
    return AnalyticGraphon("upper", (delta,)).to_step()


def test_kappa_core_upper_extremal_empties():
    tr = kappa_core(upper(0.3), 0.31)
    assert len(tr.stages) == 3
    assert tr.stages[1].blocks == [1]
    assert tr.terminal.is_empty() and tr.terminal.mass == 0.0


def test_kappa_core_at_degeneracy_keeps_everything():
    tr = kappa_core(upper(0.3), 0.3)
    assert len(tr.stages) == 1 and tr.terminal.mass == 1.0


def test_kappa_zero_is_whole_interval():
    g = random_step_graphon(np.random.default_rng(3), m_max=6)
    assert kappa_core(g, 0.0).terminal.mass == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kappa", [-0.1, 1.5])
def test_kappa_core_rejects_out_of_range(kappa):
    with pytest.raises(BadParameter):
        kappa_core(StepGraphon.constant(0.5), kappa)


def test_trace_has_no_repeated_fixed_point():
    g = StepGraphon([0, 0.2, 0.5, 1], [[0.0, 0.1, 0.1], [0.1, 0.5, 0.6], [0.1, 0.6, 0.9]])
    for k in np.linspace(0, 1, 21):
        st_ = kappa_core(g, float(k)).stages
        assert all(a != b for a, b in zip(st_, st_[1:]))
        assert len(st_) <= g.m + 1


def test_decompose_constant():
    dec = decompose(StepGraphon.constant(0.4))
    assert dec.degeneracy == pytest.approx(0.4, abs=1e-15)
    assert dec.peel_order == ((0, 0.4, 0.4),)


@pytest.mark.parametrize("delta", [0.1, 0.5, 0.9])
def test_extremal_degeneracies(delta):
    assert degeneracy(upper(delta)) == pytest.approx(delta, abs=1e-12)
    assert degeneracy(AnalyticGraphon("lower", (delta,)).to_step()) == pytest.approx(delta, abs=1e-12)


def test_peel_ties_go_to_lowest_index():
    dec = decompose(StepGraphon.uniform(np.full((3, 3), 0.5)))
    assert [p[0] for p in dec.peel_order] == [0, 1, 2]


def test_shells_are_running_max():
    g = StepGraphon([0, 0.5, 1], [[1.0, 0.0], [0.0, 0.2]])
    dec = decompose(g)
    # block 1 has degree 0.1 and is peeled first, block 0 keeps 0.5
    np.testing.assert_allclose(dec.shells, [0.5, 0.1], atol=1e-15)
    assert shell_of(g, 0.75, dec) == pytest.approx(0.1)


def test_brute_force_witness():
    g = StepGraphon([0, 0.5, 1], [[1.0, 0.0], [0.0, 0.2]])
    value, witness = brute_force_degeneracy(g)
    assert value == pytest.approx(0.5) and witness == [0]


def test_brute_force_cap():
    with pytest.raises(TooManyBlocks):
        brute_force_degeneracy(StepGraphon.uniform(np.zeros((21, 21))))


def test_min_graphon_two_blocks():
    # values [[1/6, 1/4], [1/4, 2/3]]: block 0 has degree 5/24 and goes first,
    # block 1 keeps 1/3
    dec = decompose(discretize(AnalyticGraphon("min"), 2))
    np.testing.assert_allclose(dec.shells, [5 / 24, 1 / 3], atol=1e-15)


def test_min_graphon_core_left_endpoint():
    # the kappa = 1/8 core of min(x, y) is [(1 - sqrt(1/2))/2, 1]
    g = discretize(AnalyticGraphon("min"), 512)
    K = kappa_core(g, 0.125).terminal
    left = g.boundaries[K.blocks[0]]
    assert abs(left - 0.5 * (1 - np.sqrt(0.5))) < 0.01
    assert K.blocks == list(range(K.blocks[0], 512))


@pytest.mark.parametrize("m", [64, 128, 256, 512])
def test_min_graphon_discretization_error(m):
    assert abs(degeneracy(discretize(AnalyticGraphon("min"), m)) - 0.25) <= 0.5 / m


def test_mass_curve_and_shells_agree():
    g = random_step_graphon(np.random.default_rng(11), m_max=8)
    dec = decompose(g)
    for k, mass in mass_of_core_curve(g, np.linspace(0, 1, 41)):
        assert mass == pytest.approx(core_mass_from_shells(g, dec, k), abs=1e-12)


graphons = st.integers(0, 2**32 - 1).map(lambda s: random_step_graphon(np.random.default_rng(s), m_max=7))


@settings(max_examples=60, deadline=None)
@given(graphons)
def test_peeling_matches_subset_enumeration(g):
    dec = decompose(g)
    value, _ = brute_force_degeneracy(g)
    assert dec.degeneracy == pytest.approx(value, abs=1e-9)
    np.testing.assert_allclose(dec.shells, brute_force_shells(g), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(graphons, st.floats(0, 1))
def test_core_is_self_supporting_and_heavy(g, kappa):
    K = kappa_core(g, kappa).terminal
    if K.is_empty():
        return
    assert K.mass >= kappa - 1e-9
    rd = g.values @ np.where(K.membership, g.masses, 0.0)
    assert np.all(rd[K.membership] >= kappa - 1e-12)


@settings(max_examples=60, deadline=None)
@given(graphons)
def test_degeneracy_between_degree_extremes(g):
    d = degrees(g)
    assert d.min() - 1e-12 <= degeneracy(g) <= d.max() + 1e-12
