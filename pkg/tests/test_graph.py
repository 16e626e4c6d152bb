import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcascade import generate_er_graph, normalize_adjacency
from gridcascade.graph import GraphTopology, _column_normalize


def test_p_one_gives_complete_graph():
    g = generate_er_graph(4, 1.0, np.random.default_rng(0))
    assert g.edge_count() == 6
    assert not g.adjacency.diagonal().any()
    assert (g.adjacency == g.adjacency.T).all()


def test_p_zero_gives_empty_graph():
    g = generate_er_graph(4, 0.0, np.random.default_rng(0))
    assert g.edge_count() == 0


def test_edge_count_matches_binomial_moments():
    # C(1000,2) Bernoulli(0.5) trials: mean 249750, sd sqrt(499500*0.25)
    g = generate_er_graph(1000, 0.5, np.random.default_rng(12345))
    mean = 0.5 * math.comb(1000, 2)
    sd = math.sqrt(math.comb(1000, 2) * 0.25)
    assert abs(g.edge_count() - mean) < 4 * sd


@pytest.mark.parametrize("n,p", [(0, 0.5), (3, -0.1), (3, 1.5)])
def test_generation_rejects_bad_parameters(n, p):
    with pytest.raises(ValueError):
        generate_er_graph(n, p, np.random.default_rng(0))


def test_same_seed_reproduces_adjacency_exactly():
    g1 = generate_er_graph(200, 0.3, np.random.default_rng(99))
    g2 = generate_er_graph(200, 0.3, np.random.default_rng(99))
    assert (g1.adjacency == g2.adjacency).all()


def test_triangle_weights_are_half_everywhere():
    adj = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=bool)
    w = normalize_adjacency(GraphTopology(3, adj, 1.0)).weights
    off = w[~np.eye(3, dtype=bool)]
    assert np.allclose(off, 0.5)
    assert np.allclose(w.sum(axis=0), 1.0)


def test_path_weights_follow_degrees():
    # chain 0-1-2: node 0 sends everything to 1; node 1 splits in half
    adj = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)
    w = normalize_adjacency(GraphTopology(3, adj, 0.5)).weights
    assert w[1, 0] == 1.0
    assert w[0, 1] == 0.5
    assert w[2, 1] == 0.5


def test_isolated_node_column_is_zero():
    adj = np.zeros((3, 3), dtype=bool)
    adj[0, 1] = adj[1, 0] = True
    w = normalize_adjacency(GraphTopology(3, adj, 0.1)).weights
    assert (w[:, 2] == 0.0).all()
    assert np.allclose(w[:, :2].sum(axis=0), 1.0)


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=40),
    p=st.floats(min_value=0.0, max_value=1.0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_column_sums_are_zero_or_one(n, p, seed):
    g = generate_er_graph(n, p, np.random.default_rng(seed))
    sums = normalize_adjacency(g).weights.sum(axis=0)
    assert np.all((np.abs(sums) < 1e-12) | (np.abs(sums - 1.0) < 1e-12))


def test_renormalization_after_node_removal_keeps_invariant():
    g = generate_er_graph(30, 0.4, np.random.default_rng(3))
    adj = g.adjacency.copy()
    adj[5, :] = False
    adj[:, 5] = False
    sums = _column_normalize(adj).sum(axis=0)
    assert np.all((np.abs(sums) < 1e-12) | (np.abs(sums - 1.0) < 1e-12))
