"""Two-prover games, fortifiers, spectral expanders and parallel repetition.

Graphs, games and reports are plain dicts in the JSON schema of the
``fortify`` command-line tool.
"""

import json

from . import _fortify
from ._fortify import FortifyError, __version__

__all__ = [
    "FortifyError",
    "__version__",
    "audit",
    "biregularize",
    "bipartite_cycle",
    "check_extractor",
    "check_fortifier",
    "complete_bipartite",
    "concatenate",
    "concatenated_value",
    "derived_game",
    "find_bad_subset",
    "fortifier_from_expander",
    "game_value",
    "mixing",
    "perfect_matching",
    "product_fortifier",
    "random_biregular",
    "random_expander",
    "random_game",
    "random_projection_game",
    "repeat_game",
    "scan_deviations",
    "skew_extractor",
    "spectral_lambda",
    "symmetrize",
    "verify_recursion",
]


def _in(doc):
    if isinstance(doc, str):
        return doc
    return json.dumps(doc)


def _unwrap(doc, key):
    if isinstance(doc, dict) and key in doc and "edges" not in doc:
        return doc[key]
    return doc


def _graph(doc):
    return _in(_unwrap(doc, "graph"))


def _game(doc):
    return _in(_unwrap(doc, "game"))


def random_biregular(n_left, n_right, degree, seed=0):
    return json.loads(_fortify.random_biregular(n_left, n_right, degree, seed))


def random_expander(n_left, n_right, degree, target_lambda, seed=0):
    return json.loads(_fortify.random_expander(n_left, n_right, degree, seed, target_lambda))


def complete_bipartite(n_left, n_right):
    return json.loads(_fortify.complete_bipartite(n_left, n_right))


def perfect_matching(n):
    return json.loads(_fortify.perfect_matching(n))


def bipartite_cycle(n):
    return json.loads(_fortify.bipartite_cycle(n))


def random_game(graph, sigma_x, sigma_y, density=0.5, seed=0):
    return json.loads(_fortify.random_game(_graph(graph), sigma_x, sigma_y, density, seed))


def random_projection_game(graph, sigma_x, sigma_y, seed=0):
    return json.loads(_fortify.random_projection_game(_graph(graph), sigma_x, sigma_y, seed))


def spectral_lambda(graph, method="svd", tol=1e-9):
    """Expansion parameter lambda of a bi-regular graph."""
    return json.loads(_fortify.spectral_lambda(_graph(graph), method, tol))


def mixing(graph, trials=0, seed=0):
    return json.loads(_fortify.mixing(_graph(graph), trials, seed))


def game_value(game, budget=0):
    """Exact value by exhaustive search; ``value["text"]`` is the reduced fraction."""
    return json.loads(_fortify.game_value(_game(game), budget))


def symmetrize(game):
    return json.loads(_fortify.symmetrize(_game(game)))


def concatenate(h1, game, h2):
    return json.loads(_fortify.concatenate(_graph(h1), _game(game), _graph(h2)))


def derived_game(concatenated):
    return json.loads(_fortify.derived_game(_in(concatenated)))


def concatenated_value(concatenated, solver="auto"):
    return json.loads(_fortify.concatenated_value(_in(concatenated), solver))


def audit(game, delta, epsilon, mode="exact", trials=0, seed=0, jobs=1, rectangles=(), solver="auto"):
    """Robustness audit over rectangles S x T with |S|, |T| >= delta times the side."""
    rects = [(list(left), list(right)) for left, right in rectangles]
    return json.loads(_fortify.audit(_in(game), delta, epsilon, mode, trials, seed, jobs, rects, solver))


def scan_deviations(graph, delta, trials=0, seed=0, jobs=1, candidates=()):
    return json.loads(
        _fortify.scan_deviations(_graph(graph), delta, trials, seed, jobs, [list(c) for c in candidates])
    )


def check_fortifier(graph, delta, eps1, eps2, trials=0, seed=0, jobs=1, candidates=()):
    """Certificate with ``certified`` True, or a counterexample with ``certified`` False."""
    return json.loads(
        _fortify.check_fortifier(
            _graph(graph), delta, eps1, eps2, trials, seed, jobs, [list(c) for c in candidates]
        )
    )


def check_extractor(graph, delta, eps, trials=0, seed=0, jobs=1, candidates=()):
    return json.loads(
        _fortify.check_extractor(_graph(graph), delta, eps, trials, seed, jobs, [list(c) for c in candidates])
    )


def fortifier_from_expander(graph, delta):
    return json.loads(_fortify.fortifier_from_expander(_graph(graph), delta))


def product_fortifier(h1, h2, delta):
    return json.loads(_fortify.product_fortifier(_graph(h1), _graph(h2), delta))


def skew_extractor(graph, subset, eps, x1=0, trials=0, seed=0):
    return json.loads(_fortify.skew_extractor(_graph(graph), list(subset), eps, x1, trials, seed))


def find_bad_subset(graph, delta, eps, c):
    return json.loads(_fortify.find_bad_subset(_graph(graph), delta, eps, c))


def repeat_game(game, k):
    return json.loads(_fortify.repeat_game(_game(game), k))


def verify_recursion(game, k, delta, epsilon):
    return json.loads(_fortify.verify_recursion(_game(game), k, delta, epsilon))


def biregularize(game, eps, supplier="complete", degree=0, seed=0):
    return json.loads(_fortify.biregularize(_game(game), eps, supplier, degree, seed))
