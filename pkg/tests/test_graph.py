from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from lcnindex.algnum import four_cos_sq, parse_value
from lcnindex.graph import (
    BipartiteGraph,
    CertifiedInterval,
    GraphError,
    Vertex,
    a_infinity,
    alpha_inequality_holds,
    biadjacency,
    corollary_filter,
    dynkin,
    graph_norm_sq,
    graph_verdict,
    haagerup_candidate,
    haagerup_corpus,
    parse_graph,
    pendant_criterion,
)


def _corpus():
    return (
        [("A", n) for n in range(2, 31)]
        + [("D", n) for n in range(4, 31, 2)]
        + [("E", 6), ("E", 7), ("E", 8)]
    )


def _spectral_norm_sq(G) -> float:
    _, _, K = biadjacency(G)
    return float(np.linalg.eigvalsh(K.T @ K).max())


def test_dynkin_shapes():
    a2 = dynkin("A", 2)
    assert len(a2.vertices) == 2 and len(a2.edges) == 1
    d6 = dynkin("D", 6)
    assert len(d6.vertices) == 6
    # the fork sits at distance 3: four vertices on the long arm, then two leaves
    assert corollary_filter(d6).triple_point_distance == 3
    e6 = dynkin("E", 6)
    assert len(e6.vertices) == 6
    assert corollary_filter(e6).triple_point_distance == 2
    with pytest.raises(GraphError):
        dynkin("E", 9)
    with pytest.raises(GraphError):
        dynkin("A", 1)


def test_pendant_screen_on_dynkin_corpus():
    passing = {f"{f}{n}" for f, n in _corpus() if pendant_criterion(dynkin(f, n)).ok}
    assert passing == {"A2", "A3", "A5", "D4", "D6"}


def test_pendant_witnesses_are_leaves():
    for f, n in _corpus():
        G = dynkin(f, n)
        res = pendant_criterion(G)
        if res.ok:
            adj = G.adjacency()
            for odd, even in res.witness.items():
                assert sum(adj[even].values()) == 1 and adj[even][odd] == 1


def test_pendant_examples():
    assert not pendant_criterion(dynkin("A", 4)).ok
    assert not pendant_criterion(dynkin("E", 6)).ok
    assert pendant_criterion(dynkin("D", 6)).ok


def test_a_infinity_windows_fail_from_interior():
    with pytest.raises(GraphError):
        a_infinity(4)
    assert len(a_infinity(5).vertices) == 6
    assert len(a_infinity(9).vertices) == 10 and a_infinity(9).truncation == 9
    for d in range(5, 51):
        G = a_infinity(d)
        v = graph_verdict(G)
        assert not v.pendant_ok
        assert v.triple_point_distance is None and not v.corollary_excluded


def test_short_window_cannot_be_judged():
    # depth 3 window of a path: the distance-3 vertex has an unseen neighbor
    G = BipartiteGraph(
        "w",
        (Vertex("a", "even"), Vertex("b", "odd"), Vertex("c", "even"), Vertex("d", "odd")),
        "a",
        (("a", "b"), ("b", "c"), ("c", "d")),
        truncation=3,
    )
    assert pendant_criterion(G).ok


def test_haagerup_corpus_excluded():
    corpus = haagerup_corpus()
    assert corpus
    for G in corpus.values():
        v = graph_verdict(G)
        assert v.corollary_excluded and v.triple_point_distance >= 4
        assert not v.pendant_ok  # the corollary never contradicts the pendant criterion
    assert corollary_filter(haagerup_candidate("H")).triple_point_distance == 4
    assert haagerup_candidate("A-infinity").name.startswith("A")
    with pytest.raises(KeyError):
        haagerup_candidate("nope")


def test_corollary_implies_pendant_failure_on_corpus():
    graphs = [dynkin(f, n) for f, n in _corpus()] + list(haagerup_corpus().values())
    for G in graphs:
        v = graph_verdict(G)
        if v.corollary_excluded:
            assert not v.pendant_ok


def test_graph_norms_exact():
    assert graph_norm_sq(dynkin("A", 2)) == 1
    assert graph_norm_sq(dynkin("D", 6)) == four_cos_sq(10)
    assert graph_norm_sq(dynkin("E", 6)) == parse_value("2+sqrt3")
    for n in range(2, 31):
        assert graph_norm_sq(dynkin("A", n)) == four_cos_sq(n + 1)


def test_graph_norms_match_eigenvalues():
    for f, n in _corpus():
        G = dynkin(f, n)
        assert abs(float(graph_norm_sq(G)) - _spectral_norm_sq(G)) < 1e-9


def test_non_ade_norm_is_certified_interval():
    G = parse_graph(
        "graph star\nvertex c even root\nvertex a odd\nvertex b odd\nvertex d odd\nvertex e odd\n"
        "edge c a\nedge c b\nedge c d\nedge c e\n"
    )
    iv = graph_norm_sq(G)
    assert isinstance(iv, CertifiedInterval)
    assert iv.lo <= 4 <= iv.hi and iv.hi - iv.lo <= Fraction(1, 10**9)
    with pytest.raises(GraphError):
        graph_norm_sq(a_infinity(6))


def test_text_round_trip():
    for G in [dynkin("E", 8), a_infinity(7), haagerup_candidate("H")]:
        text = G.to_text()
        assert parse_graph(text).to_text() == text


def test_malformed_graphs_rejected():
    with pytest.raises(GraphError):
        parse_graph("graph x\nvertex a even root\nvertex b even\nedge a b\n")
    with pytest.raises(GraphError):
        parse_graph("graph x\nvertex a even root\nvertex b odd\n")


def test_alpha_inequality():
    ok, slack, forced = alpha_inequality_holds([[1, 0], [0, 1]], [2, 3])
    assert ok and slack == 0 and all(forced.values())
    ok, _, forced = alpha_inequality_holds([[1, 0], [1, 1]], [1, 1])
    assert not ok and forced[0] is False


def test_alpha_inequality_on_d6_graph():
    # k[b, tau] = edges of D6 between odd b and even tau; alpha of the unit is
    # the root, and any even leaf tau can carry m without violating the bound
    G = dynkin("D", 6)
    odd, even, K = biadjacency(G)
    k = K.tolist()
    adj = G.adjacency()
    for t, tau in enumerate(even):
        m = [int(t == s) for s in range(len(even))]
        ok, slack, forced = alpha_inequality_holds(k, m)
        leaf = sum(adj[tau].values()) == 1
        assert ok == leaf
        assert forced[t] == leaf
        if leaf:
            assert slack == 0
