"""Smoke tests for the python bindings: each main operation gets one quick
exercise against known-good values."""

import os

import pytest

import causalpq as cpq


def data_path(name: str) -> str:
    root = os.environ.get(
        "CAUSALPQ_DATA_DIR",
        os.path.join(os.path.dirname(__file__), "..", "..", "data", "networks"),
    )
    return os.path.join(root, name)


def test_graph_operations():
    g = cpq.Dag(3, [(0, 1), (0, 2), (1, 2)])
    reach = cpq.transitive_closure(g)
    assert reach.at(0, 2)
    assert not reach.at(2, 0)
    assert cpq.transitive_reduction(g).edges() == [(0, 1), (1, 2)]
    assert cpq.count_transitive_edges(g) == 1
    assert cpq.topological_order(g) == [0, 1, 2]

    tr = cpq.random_tr_dag(8, 0.3, 5)
    assert cpq.transitive_reduction(tr) == tr
    with pytest.raises(ValueError):
        cpq.exact_path_query(reach, 1, 1)


def test_planner_constants():
    plan = cpq.plan_samples(
        cpq.Regime.DISCRETE, 20, 0.01, cpq.PlanConstants(gamma=0.01, r=5)
    )
    assert plan.m_per_distribution == 16_511_002
    cont = cpq.plan_samples(
        cpq.Regime.CONTINUOUS, 20, 0.01, cpq.PlanConstants(sigma_ub=100.0)
    )
    assert cont.m_per_distribution == 9032


def test_discrete_pipeline():
    g = cpq.Dag(2, [(0, 1)])
    cbn = cpq.DiscreteCbn(g, [2, 2], [[[0.5, 0.5]], [[0.9, 0.1], [0.1, 0.9]]])
    assert cpq.compute_gamma(cbn).gamma == pytest.approx(0.8)

    sampler = cpq.CbnSampler(cbn)
    plan = cpq.plan_samples(
        cpq.Regime.DISCRETE, 2, 0.01, cpq.PlanConstants(gamma=0.8, r=2)
    )
    out = cpq.path_query_discrete(
        sampler, 0, 1, plan.m_per_distribution, plan.decision_threshold, 7
    )
    assert out.answer == 1
    assert out.samples_used == 2 * plan.m_per_distribution

    marginal = cpq.exact_interventional_marginal(
        cbn, 1, cpq.DiscreteInterventionSpec.single(0, 1)
    )
    assert marginal.p == pytest.approx([0.1, 0.9])


def test_asgn_pipeline():
    g = cpq.Dag(2, [(0, 1)])
    net = cpq.AsgnNetwork(g, [0.0, 0.0, 0.5, 0.0], [1.0, 1.0])
    constants = cpq.compute_wmin_wmax(net)
    assert constants.w_min == pytest.approx(0.5)
    assert constants.z == pytest.approx(2.0)
    moments = cpq.analytic_moments(
        net, 1, cpq.ContinuousInterventionSpec.single(0, 2.0)
    )
    assert moments.mean == pytest.approx(1.0)


def test_learning_with_python_callbacks():
    g = cpq.Dag(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    reach = cpq.transitive_closure(g)
    result = cpq.learn_tr(4, lambda i, j: cpq.oracle_path_query(reach, i, j))
    assert result.graph == cpq.transitive_reduction(g)
    assert result.report.path_queries_issued == 12

    full = cpq.learn_transitive_edges(
        result.graph, lambda i, j, s: cpq.oracle_transitive_query(g, reach, i, j)
    )
    assert full.graph == g


def test_bif_and_recovery():
    parsed = cpq.parse_bif(cpq.read_text_file(data_path("asia.bif")))
    net = parsed.network
    assert net.dag.n == 8
    assert net.dag.num_edges == 8

    options = cpq.RecoveryOptions()
    options.oracle = True
    run = cpq.run_benchmark_recovery(net, options)
    assert run.report.vs_truth.f1 == 1.0

    round_tripped = cpq.parse_network(cpq.serialize_network(net))
    assert round_tripped.discrete() == net.discrete()


def test_phase_transition_harness():
    config = cpq.ExperimentConfig()
    config.n_values = [5]
    config.c_grid = [0.0, 6.0]
    config.trials = 3
    config.r_max = 3
    config.edge_density = 0.3
    config.sampler = "exact"
    config.seed = 11
    rows = cpq.run_phase_transition(config)
    assert len(rows) == 2
    assert rows[1].successes >= rows[0].successes
    csv = cpq.write_curve_csv(rows)
    assert csv.startswith("n,C,m,trials,successes,frequency")
