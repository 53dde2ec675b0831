from itertools import combinations

import pytest

from mcsp_sos.circuits import truth_table
from mcsp_sos.errors import BadParameters, CertificationFailed
from mcsp_sos.graphs import (BipartiteGraph, build_desk_expander, certify_expansion,
                             greedy_graph, neighbor_circuit, neighbor_table, random_graph)


def brute_expands(G, r, c):
    for j in range(1, r + 1):
        for W in combinations(range(2 ** G.n), j):
            if len(set().union(*(G.adj[u] for u in W))) < c * j:
                return False
    return True


def test_random_graph_is_seeded():
    assert random_graph(3, 6, 3, seed=5) == random_graph(3, 6, 3, seed=5)
    assert random_graph(3, 6, 3, seed=5).adj != random_graph(3, 6, 3, seed=6).adj


def test_graph_validation():
    with pytest.raises(BadParameters):
        BipartiteGraph(1, 3, 2, ((1, 2),))
    with pytest.raises(BadParameters):
        BipartiteGraph(1, 3, 2, ((1, 2), (2, 1)))
    with pytest.raises(BadParameters):
        BipartiteGraph(1, 3, 2, ((1, 2), (1, 4)))
    with pytest.raises(BadParameters):
        random_graph(1, 2, 3, seed=0)


def test_json_round_trip():
    G = random_graph(3, 5, 2, seed=1)
    assert BipartiteGraph.from_json(G.to_json()) == G


@pytest.mark.parametrize("seed", range(8))
def test_certify_matches_brute_force(seed):
    G = random_graph(3, 8, 3, seed)
    for r in (1, 2, 3):
        cert = certify_expansion(G, r, 1.5)
        assert cert.verified == brute_expands(G, r, 1.5)
        if not cert.verified:
            W = cert.witness
            assert len(set().union(*(G.adj[u] for u in W))) < 1.5 * len(W)


def test_desk_parameters_cannot_expand():
    # any two left vertices with m = 3 share at most 3 right vertices < 4
    with pytest.raises(CertificationFailed):
        build_desk_expander(3, 3, 2, 2, seed=0, max_retries=20)


def test_greedy_expander():
    G = greedy_graph(3, 12, 3, 2, seed=0)
    assert G is not None
    assert brute_expands(G, 2, 2)
    G2, cert = build_desk_expander(3, 12, 3, 2, seed=0, method="greedy")
    assert cert.verified and brute_expands(G2, 2, 2)


def test_neighbor_circuit():
    G = random_graph(3, 4, 2, seed=2)
    for i in range(1, 5):
        tab = neighbor_table(G, i)
        assert tab == tuple(int(i in a) for a in G.adj)
        assert truth_table(neighbor_circuit(G, i)) == tab


def test_relabel():
    G = random_graph(2, 4, 2, seed=0)
    H = G.relabel([4, 3, 2, 1])
    assert [set(a) for a in H.adj] == [{5 - v for v in a} for a in G.adj]
