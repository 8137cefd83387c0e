import math

import pytest

import fortify


def equality_game(n):
    graph = fortify.complete_bipartite(n, n)
    rel = [[[0, 0], [1, 1]] for _ in graph["edges"]]
    return {"n_left": n, "n_right": n, "sigma_x": 2, "sigma_y": 2, "edges": graph["edges"], "relations": rel}


def test_spectral_regression():
    assert fortify.spectral_lambda(fortify.complete_bipartite(4, 4))["lambda"] == pytest.approx(0.0, abs=1e-9)
    assert fortify.spectral_lambda(fortify.perfect_matching(5))["lambda"] == pytest.approx(1.0, abs=1e-9)
    cycle = fortify.bipartite_cycle(4)
    assert fortify.spectral_lambda(cycle)["lambda"] == pytest.approx(math.sqrt(0.5), abs=1e-6)
    assert fortify.spectral_lambda(cycle, method="power", tol=1e-12)["lambda"] == pytest.approx(
        math.sqrt(0.5), abs=1e-6
    )


def test_value_of_satisfiable_game():
    assert fortify.game_value(equality_game(2))["value"]["text"] == "1"


def test_concatenation_preserves_value():
    graph = fortify.random_biregular(3, 3, 2, seed=1)
    game = fortify.random_game(graph, 2, 2, seed=4)
    h1 = fortify.random_biregular(6, 3, 1, seed=2)
    h2 = fortify.random_biregular(3, 3, 1, seed=3)
    cg = fortify.concatenate(h1, game, h2)
    base = fortify.game_value(game)["value"]["text"]
    assert fortify.concatenated_value(cg, solver="brute-force")["value"]["text"] == base
    assert fortify.concatenated_value(cg, solver="reduction")["value"]["text"] == base


def test_expander_is_fortifier():
    graph = fortify.random_biregular(8, 8, 3, seed=5)
    lam = fortify.spectral_lambda(graph)["lambda"]
    delta = 0.25
    result = fortify.check_fortifier(graph, delta, math.sqrt(lam**2 / delta), lam**2 / delta)
    assert result["certified"]


def test_skewed_extractor_breaks_robustness():
    h = fortify.random_biregular(1000, 100, 10, seed=2024)
    skew = fortify.skew_extractor(h, range(100), 0.3)
    n = 100
    rel = [[[0, 0], [1, 1]]] + [[] for _ in range(n - 1)]
    base = {"n_left": n, "n_right": n, "sigma_x": 2, "sigma_y": 2, "edges": [[i, i] for i in range(n)],
            "relations": rel}
    cg = fortify.concatenate(skew, base, skew)
    report = fortify.audit(cg, 0.1, 0.9, trials=2, rectangles=[(range(100), range(100))], solver="reduction")
    assert report["verdict"] == "violated"
    assert report["worst_statistic"] >= 0.9


def test_low_degree_graph_has_bad_subset():
    h = fortify.random_biregular(200, 100, 40, seed=1)
    bad = fortify.find_bad_subset(h, 0.1, 0.05, 0.5)
    assert bad["achieved"] > 0.05


def test_repetition_sandwich():
    game = fortify.random_game(fortify.complete_bipartite(1, 2), 2, 2, seed=3)
    report = fortify.verify_recursion(game, 2, 0.25, 0.5)
    assert report["sandwich_ok"]


def test_biregularize_complete_supplier():
    game = {"n_left": 2, "n_right": 2, "sigma_x": 2, "sigma_y": 2,
            "edges": [[0, 0], [0, 1], [1, 1]], "relations": [[[0, 0]], [[1, 1]], [[0, 1], [1, 0]]]}
    out = fortify.biregularize(game, 0.2)
    before = fortify.game_value(game)["value"]["value"]
    after = fortify.game_value(out)["value"]["value"]
    assert after <= before + 0.2 + 1e-9


def test_errors_raise():
    with pytest.raises(fortify.FortifyError):
        fortify.random_biregular(3, 2, 1)
    with pytest.raises(ValueError):
        fortify.game_value("{")
