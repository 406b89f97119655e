import math

import numpy as np
import pytest

from dwmwis.baseline import (
    BipProblem,
    build_constraints,
    solve_bip,
    solve_dwmwis_classical,
)
from dwmwis.graphs import (
    GraphFamily,
    WeightedGraph,
    generate_family,
    make_dwmwis_instance,
)

from helpers import mwis_enumeration, random_graph


def test_constraints_one_per_edge():
    k3 = generate_family(GraphFamily("complete", (3,)))
    assert build_constraints(k3) == ((0, 1), (0, 2), (1, 2))
    edgeless = WeightedGraph(3, (), (1.0, 1.0, 1.0))
    assert build_constraints(edgeless) == ()
    c4 = generate_family(GraphFamily("cycle", (4,)))
    assert len(build_constraints(c4)) == 4


def test_star_prefers_leaves():
    g = generate_family(GraphFamily("star", (4,)))
    weights = (2.5, 1.0, 1.0, 1.0, 1.0)
    chosen, value = solve_bip(build_constraints(g), weights)
    assert chosen == (1, 2, 3, 4)
    assert value == 4.0


def test_complete_graph_takes_heaviest():
    g = generate_family(GraphFamily("complete", (5,)))
    chosen, value = solve_bip(build_constraints(g), (0.1, 0.2, 0.3, 0.4, 0.5))
    assert chosen == (4,)
    assert value == 0.5


def test_c4_opposite_pair():
    g = generate_family(GraphFamily("cycle", (4,)))
    chosen, value = solve_bip(build_constraints(g), (1.0, 1.0, 1.0, 1.0))
    assert value == 2.0
    assert chosen == (0, 2)  # lexicographically smallest of the two optima


def test_result_satisfies_constraints():
    rng = np.random.default_rng(17)
    for _ in range(25):
        g = random_graph(rng, int(rng.integers(1, 14)))
        chosen, _ = solve_bip(build_constraints(g), g.weights)
        assert g.is_independent(set(chosen))


def test_exactness_against_enumeration():
    rng = np.random.default_rng(21)
    for _ in range(40):
        g = random_graph(rng, int(rng.integers(1, 13)))
        _, value = solve_bip(build_constraints(g), g.weights)
        assert value == mwis_enumeration(g)


def test_scaling_invariance_of_selection():
    rng = np.random.default_rng(31)
    for _ in range(15):
        g = random_graph(rng, 10)
        constraints = build_constraints(g)
        base, _ = solve_bip(constraints, g.weights)
        for factor in (2.0, 0.5, 8.0):  # powers of two scale floats exactly
            scaled, _ = solve_bip(constraints, tuple(w * factor for w in g.weights))
            assert scaled == base


def test_validation():
    with pytest.raises(ValueError):
        solve_bip(((0, 1),), (1.0,))
    with pytest.raises(ValueError):
        solve_bip((), (0.0,))
    with pytest.raises(ValueError):
        BipProblem(weights=(1.0, -1.0), constraints=())
    with pytest.raises(ValueError):
        BipProblem(weights=(1.0, 1.0), constraints=((1, 0),))


def test_classical_run_reuses_constraints(monkeypatch):
    import dwmwis.baseline as baseline_mod

    calls = {"n": 0}
    original = baseline_mod.build_constraints

    def counting(graph):
        calls["n"] += 1
        return original(graph)

    monkeypatch.setattr(baseline_mod, "build_constraints", counting)
    g = generate_family(GraphFamily("cycle", (6,)))
    instance = make_dwmwis_instance(g, m=8, seed=5)
    results, ledger = solve_dwmwis_classical(instance)
    assert calls["n"] == 1
    assert ledger.constraint_builds == 1
    assert len(results) == 8
    assert len(ledger.per_assignment_ms) == 8
    assert ledger.total_ms >= ledger.constraint_build_ms
    assert ledger.clock in ("thread_time", "process_time", "perf_counter")


def test_classical_m1_matches_single_solve():
    g = generate_family(GraphFamily("cycle", (7,)))
    instance = make_dwmwis_instance(g, m=1, seed=11)
    results, _ = solve_dwmwis_classical(instance)
    direct = solve_bip(build_constraints(g), instance.weight_sets[0])
    assert results[0] == direct


def test_classical_matches_enumeration():
    g = generate_family(GraphFamily("grid", (3, 3)))
    instance = make_dwmwis_instance(g, m=5, seed=2)
    results, _ = solve_dwmwis_classical(instance)
    from dwmwis.graphs import with_weights

    for (chosen, value), weights in zip(results, instance.weight_sets):
        weighted = with_weights(g, weights)
        assert g.is_independent(set(chosen))
        # two-decimal weights: compare in exact cents
        cents = sum(round(w * 100) for w in (weights[v] for v in chosen))
        best_cents = round(mwis_enumeration(weighted) * 100)
        assert cents == best_cents
