"""Smoke tests for the graphmeasures python module."""

import numpy as np
import pytest

import graphmeasures as gm


def two_cliques_bridge(c):
    edges = []
    for i in range(c):
        for j in range(i + 1, c):
            edges.append((i, j))
            edges.append((c + i, c + j))
    edges.append((0, c))
    return gm.Graph(n=2 * c, edges=edges, communities=[0] * c + [1] * c)


def test_graph_round_trip(tmp_path):
    g = two_cliques_bridge(3)
    assert g.n == 6
    assert g.k == 2
    assert len(g.edges) == 7
    path = str(tmp_path / "g.txt")
    gm.save_graph(g, path)
    h = gm.load_graph(path)
    assert h.n == g.n
    assert sorted(h.edges) == sorted(g.edges)
    assert h.communities == g.communities
    assert gm.is_connected(h)


def test_measure_catalog():
    names = gm.measure_names()
    assert len(names) == 25
    assert names[0] == "Katz"
    assert names[-1] == "SP-CT"
    assert "SCCT" in names
    assert "logHeat" in names


def test_build_measure_forest_rows():
    g = two_cliques_bridge(3)
    k = np.asarray(gm.build_measure(g, "For", 0.5))
    assert k.shape == (6, 6)
    assert np.allclose(k, k.T)
    assert np.allclose(k.sum(axis=1), 1.0, atol=1e-8)


def test_build_measure_rejects_bad_x():
    with pytest.raises(gm.GraphMeasureError):
        gm.build_measure(two_cliques_bridge(3), "Katz", 1.5)


def test_derived_matrices():
    g = two_cliques_bridge(3)
    dm = gm.derived_matrices(g)
    assert dm["volume"] == pytest.approx(14.0)
    hop = np.asarray(dm["hop_distance"])
    assert hop[1, 5] == pytest.approx(3.0)
    lap = np.asarray(dm["laplacian"])
    assert np.allclose(lap.sum(axis=1), 0.0)


def test_cluster_recovers_cliques():
    g = two_cliques_bridge(4)
    kernel = gm.build_measure(g, "Heat", 0.5)
    res = gm.cluster(kernel, 2, g)
    assert gm.ari(res["labels"], g.communities) == pytest.approx(1.0)
    assert res["inertia"] >= 0.0
    assert 0 <= res["trial_index"] < 18


def test_scoring():
    assert gm.ari([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)
    g = two_cliques_bridge(4)
    assert gm.modularity(g, g.communities) == pytest.approx(11.0 / 26.0)


def test_generate_lfr():
    out = gm.generate_lfr(n=60, tau1=2.5, tau2=1.6, mu=0.2, avg_degree=7.0, seed=7)
    g = out["graph"]
    assert g.n == 60
    assert gm.is_connected(g)
    assert g.k >= 2
    assert abs(out["realized_mixing"] - 0.2) <= 0.05


def test_sample_config_deterministic():
    a = gm.sample_lfr_config(11, 300, seed=5)
    b = gm.sample_lfr_config(11, 300, seed=5)
    assert a == b
    assert 11 <= a["n"] <= 300


def test_evaluate_measure():
    g = two_cliques_bridge(4)
    rec = gm.evaluate_measure(g, "cliques", "Heat")
    assert rec["measure"] == "Heat"
    assert rec["best_ari"] == pytest.approx(1.0)
    assert rec["failures"] == 0
    assert len(rec["per_x_ari"]) == 16


def test_error_on_missing_file():
    with pytest.raises(gm.GraphMeasureError):
        gm.load_graph("/nonexistent/path/graph.txt")
