from itertools import combinations

import numpy as np
import pytest

from hgpqec.graphs import (
    BiregularBipartiteGraph,
    BudgetExceededError,
    ExpansionReport,
    GenerationError,
    expansion_audit,
    generate_configuration_model,
    guaranteed_correction_bound,
    read_graph_text,
    write_graph_text,
)


@pytest.mark.parametrize(
    "n,m,dv,dc,seed",
    [
        (6, 5, 5, 6, 0),
        (12, 10, 5, 6, 1),
        (24, 20, 5, 6, 2),
        (20, 10, 5, 10, 3),
        (40, 20, 5, 10, 4),
        (9, 3, 2, 6, 5),
        (8, 8, 3, 3, 6),
    ],
)
def test_generated_graph_invariants(n, m, dv, dc, seed):
    g = generate_configuration_model(n, m, dv, dc, seed)
    assert g.n_left * g.deg_left == g.n_right * g.deg_right
    assert g.edges.shape == (n * dv, 2)
    codes = g.edges[:, 0] * m + g.edges[:, 1]
    assert np.unique(codes).size == codes.size
    assert all(g.left_neighbors(i).shape[0] == dv for i in range(n))
    assert all(g.right_neighbors(j).shape[0] == dc for j in range(m))


def test_generation_determinism():
    a = generate_configuration_model(30, 25, 5, 6, seed=42)
    b = generate_configuration_model(30, 25, 5, 6, seed=42)
    assert a == b
    c = generate_configuration_model(30, 25, 5, 6, seed=43)
    assert not (a == c)


def test_tiny_56_graph_is_complete_bipartite():
    g = generate_configuration_model(6, 5, 5, 6, seed=0)
    assert g.edges.shape[0] == 30
    for i in range(6):
        assert g.left_neighbors(i).tolist() == [0, 1, 2, 3, 4]


def test_forced_graph():
    g = generate_configuration_model(2, 1, 1, 2, seed=0)
    assert g.edges.tolist() == [[0, 0], [1, 0]]


def test_handshake_violation():
    with pytest.raises(ValueError):
        generate_configuration_model(5, 4, 3, 2, seed=0)


def test_generation_failure_on_impossible_graph():
    # deg_left exceeds the number of right nodes: no simple graph exists.
    with pytest.raises(GenerationError):
        generate_configuration_model(2, 1, 2, 4, seed=0, max_attempts=50,
                                     repair_rounds=10)


def test_graph_constructor_rejects_multi_edge():
    with pytest.raises(ValueError):
        BiregularBipartiteGraph(2, 1, 2, 4, [(0, 0), (0, 0), (1, 0), (1, 0)])


def test_expansion_single_node_ratio_is_one():
    for seed in range(3):
        g = generate_configuration_model(12, 10, 5, 6, seed=seed)
        report = expansion_audit(g, "left", 1)
        assert report.ratios == (1.0,)
        report = expansion_audit(g, "right", 1)
        assert report.ratios == (1.0,)


def test_expansion_complete_bipartite_k22():
    g = BiregularBipartiteGraph(2, 2, 2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    report = expansion_audit(g, "left", 2)
    assert report.ratios[0] == 1.0
    assert report.ratios[1] == 0.5
    assert report.delta_hat == 0.5


def test_expansion_matches_independent_enumeration():
    g = generate_configuration_model(12, 10, 5, 6, seed=7)
    report = expansion_audit(g, "left", 3)
    assert all(0.0 < r <= 1.0 for r in report.ratios)
    adj = [set(g.left_neighbors(i).tolist()) for i in range(12)]
    for s in (1, 2, 3):
        worst = min(len(set().union(*(adj[i] for i in sub)))
                    for sub in combinations(range(12), s))
        assert report.min_neighbors[s - 1] == worst
        assert report.ratios[s - 1] == worst / (5 * s)
    assert report.gamma_hat == 3 / 12
    assert report.delta_hat == 1.0 - min(report.ratios)


def test_expansion_budget_refusal():
    g = generate_configuration_model(30, 25, 5, 6, seed=0)
    with pytest.raises(BudgetExceededError):
        expansion_audit(g, "left", 12, budget=10_000)


def _report(side, n_side, degree, s_max, min_neighbors):
    ratios = tuple(nb / (degree * s) for s, nb in enumerate(min_neighbors, start=1))
    return ExpansionReport(
        side=side, n_side=n_side, degree=degree, max_subset_size=s_max,
        min_neighbors=tuple(min_neighbors), ratios=ratios,
        delta_hat=1.0 - min(ratios), gamma_hat=s_max / n_side,
    )


def test_correction_bound_formula():
    g = generate_configuration_model(60, 50, 5, 6, seed=0)
    # Audited caps 60 and 50 with perfect ratios: floor(50 / 21) = 2.
    left = _report("left", 60, 5, 60, [5 * s for s in range(1, 61)])
    right = _report("right", 50, 6, 50, [6 * s for s in range(1, 51)])
    bound = guaranteed_correction_bound(g, left, right)
    assert bound.weight == 2
    assert bound.applicable


def test_correction_bound_inapplicable_when_delta_large():
    g = generate_configuration_model(60, 50, 5, 6, seed=0)
    left = _report("left", 60, 5, 2, [5, 8])   # ratio 0.8 -> delta 0.2 >= 1/6
    right = _report("right", 50, 6, 2, [6, 12])
    bound = guaranteed_correction_bound(g, left, right)
    assert not bound.applicable


def test_correction_bound_from_audited_instance():
    g = generate_configuration_model(12, 10, 5, 6, seed=7)
    left = expansion_audit(g, "left", 3)
    right = expansion_audit(g, "right", 3)
    bound = guaranteed_correction_bound(g, left, right)
    # Hand recomputation from the report values.
    assert bound.weight == min(3, 3) // (3 * (1 + 6))
    expected_applicable = all(r > 5 / 6 for r in left.ratios) and all(
        r > 5 / 6 for r in right.ratios
    )
    assert bound.applicable == expected_applicable


def test_graph_text_roundtrip():
    g = generate_configuration_model(12, 10, 5, 6, seed=1)
    text = write_graph_text(g)
    assert text.splitlines()[0] == "12 10 5 6"
    assert read_graph_text(text) == g
