import math

import numpy as np
import pytest

from dwmwis.graphs import GraphFamily, WeightedGraph, generate_family, with_weights
from dwmwis.qubo import brute_force_qubo, evaluate, mwis_to_qubo
from dwmwis.sampler import (
    AnnealSchedule,
    TimingModel,
    sample,
    simulated_quantum_time,
    success_probability,
)

from helpers import dyadic_weights

EDGE_Q = mwis_to_qubo(WeightedGraph(2, ((0, 1),), (0.3, 0.7)), penalty=1.7)


def test_edgeless_reaches_all_ones():
    g = WeightedGraph(3, (), (0.5, 0.25, 1.0))
    q = mwis_to_qubo(g)
    result = sample(q, AnnealSchedule(), reads=20, seed=1)
    assert result.best[0] == (1, 1, 1)


def test_edge_graph_best_energy():
    result = sample(EDGE_Q, AnnealSchedule(), reads=100, seed=2)
    bits, energy = result.best
    _, optimum = brute_force_qubo(EDGE_Q)
    assert energy == optimum == -0.7
    s = success_probability(result, optimum, 1e-9)
    assert 0.0 < s <= 1.0


def test_determinism():
    a = sample(EDGE_Q, AnnealSchedule(), reads=50, seed=123)
    b = sample(EDGE_Q, AnnealSchedule(), reads=50, seed=123)
    assert a == b
    c = sample(EDGE_Q, AnnealSchedule(), reads=50, seed=124)
    assert a != c


def test_energies_match_independent_evaluation():
    result = sample(EDGE_Q, AnnealSchedule(sweeps=8), reads=200, seed=5)
    for bits, energy, count in result.records:
        assert energy == evaluate(EDGE_Q, bits)
        assert count >= 1
    assert result.num_reads == 200


def test_prefix_monotonicity_in_reads():
    # per-read seed streams: the first k reads of a longer run are the
    # k reads of the shorter run, so best energy cannot get worse
    g = generate_family(GraphFamily("cycle", (8,)))
    g = with_weights(g, dyadic_weights(np.random.default_rng(3), 8))
    q = mwis_to_qubo(g)
    best = []
    for reads in (10, 40, 100):
        result = sample(q, AnnealSchedule(sweeps=16), reads=reads, seed=77)
        best.append(result.best[1])
    assert best[1] <= best[0]
    assert best[2] <= best[1]


def test_batching_does_not_change_results(monkeypatch):
    import dwmwis.sampler as sampler_mod

    full = sample(EDGE_Q, AnnealSchedule(), reads=64, seed=9)
    monkeypatch.setattr(sampler_mod, "_MAX_RANDOM_BUFFER", 8 * EDGE_Q.n * 65 * 7)
    chunked = sampler_mod.sample(EDGE_Q, AnnealSchedule(), reads=64, seed=9)
    assert full == chunked


def test_success_probability_counting():
    result = sample(EDGE_Q, AnnealSchedule(), reads=100, seed=2)
    assert success_probability(result, -0.7, 1e-9) == sum(
        c for _, e, c in result.records if e <= -0.7 + 1e-9
    ) / 100
    assert success_probability(result, 1e9, 0.0) == 1.0
    assert success_probability(result, -1e9, 0.0) == 0.0
    with pytest.raises(ValueError):
        success_probability(result, 0.0, -1.0)


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(sweeps=0)
    with pytest.raises(ValueError):
        AnnealSchedule(t_hot=-1.0)
    with pytest.raises(ValueError):
        AnnealSchedule(t_hot=0.1, t_cold=1.0)
    with pytest.raises(ValueError):
        sample(EDGE_Q, AnnealSchedule(), reads=0, seed=1)


def test_timing_model_values():
    model = TimingModel()
    assert model.t_prog_ms == 20.0
    assert model.t_anneal_ms == 0.309
    assert model.t_post_ms == 20.0
    assert abs(simulated_quantum_time(model, 1) - 20.309) < 1e-12
    assert simulated_quantum_time(model, 0) == 20.0
    assert abs(simulated_quantum_time(model, 100) - 50.9) < 1e-9
    assert math.isinf(simulated_quantum_time(model, math.inf))
    with pytest.raises(ValueError):
        simulated_quantum_time(model, -1)
    with pytest.raises(ValueError):
        TimingModel(t_prog_ms=-1.0)


def test_sample_csv_dump():
    result = sample(EDGE_Q, AnnealSchedule(), reads=10, seed=3)
    text = result.to_csv()
    assert text.startswith("energy,count,bits\n")
    assert len(text.strip().splitlines()) == len(result.records) + 1


def test_calibration_gate_desk_graphs():
    # every logical QUBO of the desk families up to n=10 is solved at least
    # once in 1000 reads with the default schedule
    rng = np.random.default_rng(2025)
    for kind in ("cycle", "star", "complete"):
        for n in range(3, 11):
            g = generate_family(GraphFamily(kind, (n,)))
            g = with_weights(g, tuple(np.maximum(np.round(rng.random(g.n), 2), 0.01)))
            q = mwis_to_qubo(g)
            _, optimum = brute_force_qubo(q)
            result = sample(q, AnnealSchedule(), reads=1000, seed=n)
            assert success_probability(result, optimum, 1e-9) > 0.0
