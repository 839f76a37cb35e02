import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandit_net.env import Environment, RewardKind, RewardModel
from bandit_net.errors import InvariantError
from bandit_net.graph import from_edges, star
from bandit_net.policy import ObservationStrategy as OS
from bandit_net.sim import (
    Scenario,
    check_invariants,
    run_episode,
    run_episode_scalar,
    run_monte_carlo,
)

from oracles import replay

STRATS = [OS.explore_triggered(), OS.always(), OS.never(), OS.probabilistic(0.3)]


def star_scenario(strategy=OS.explore_triggered(), **kw):
    env = Environment.gaussian((40, 50, 50, 60, 70, 70, 80, 90, 92, 95), 5.0)
    base = dict(cost=1.0, horizon=200, runs=1, master_seed=11)
    base.update(kw)
    return Scenario(env, star(6), 1.01, strategy, **base)


def assert_same(a, b):
    assert np.array_equal(a.sampling_regret, b.sampling_regret)
    assert np.array_equal(a.observation_count, b.observation_count)
    assert np.array_equal(a.pull_counts, b.pull_counts)
    assert np.array_equal(a.observed_counts, b.observed_counts)
    assert np.array_equal(a.reward_sums, b.reward_sums)


@pytest.mark.parametrize("strategy", STRATS, ids=lambda s: s.label)
def test_batched_engine_matches_scalar_route(strategy):
    sc = star_scenario(strategy)
    a = run_episode(sc, 3, record=True)
    b = run_episode_scalar(sc, 3)
    assert_same(a, b)
    assert np.array_equal(a.log.choices, b.log.choices)
    assert np.array_equal(a.log.observed, b.log.observed)


@settings(max_examples=25, deadline=None)
@given(
    n_arms=st.integers(1, 4),
    k=st.integers(1, 4),
    seed=st.integers(0, 2**63),
    data=st.data(),
)
def test_engine_scalar_equivalence_random(n_arms, k, seed, data):
    arms = [
        RewardModel(
            data.draw(st.sampled_from([RewardKind.GAUSSIAN, RewardKind.BERNOULLI])),
            data.draw(st.sampled_from([0.2, 0.5, 0.9])),
            1.0,
        )
        for _ in range(n_arms)
    ]
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    strategies = [data.draw(st.sampled_from(STRATS)) for _ in range(k)]
    sc = Scenario(Environment(arms), from_edges(k, edges), 1.5, strategies, 0.5, n_arms + 20, master_seed=seed)
    assert_same(run_episode(sc, 1), run_episode_scalar(sc, 1))


def test_replay_is_bit_identical():
    sc = star_scenario(horizon=100)
    a, b = run_episode(sc, 0), run_episode(sc, 0)
    assert_same(a, b)


def test_single_agent_has_no_observation_regret():
    env = Environment.gaussian([1.0, 2.0, 3.0], 1.0)
    sc = Scenario(env, from_edges(1, []), 1.01, OS.never(), 1.0, 100)
    m = run_episode(sc)
    assert not m.observation_regret.any()
    check_invariants(sc, m)


def test_always_pays_degree_times_rounds(star6):
    sc = star_scenario(OS.always(), horizon=150)
    m = run_episode(sc)
    t = np.arange(1, 151)
    assert np.array_equal(m.observation_regret[0], 1.0 * 5 * t)
    for leaf in range(1, 6):
        assert np.array_equal(m.observation_regret[leaf], 1.0 * 1 * t)


def test_never_agent_matches_single_agent_run():
    sc = star_scenario([OS.never()] + [OS.always()] * 5, horizon=150)
    solo = Scenario(sc.environment, from_edges(1, []), sc.xi, OS.never(), sc.cost, sc.horizon, master_seed=sc.master_seed)
    a = run_episode(sc, 4, record=True)
    b = run_episode(solo, 4, record=True)
    assert np.array_equal(a.log.choices[:, 0], b.log.choices[:, 0])
    assert np.array_equal(a.sampling_regret[0], b.sampling_regret[0])


def test_huge_gap_is_identified():
    env = Environment.gaussian([0.0, 100.0], 1.0)
    sc = Scenario(env, star(3), 1.01, OS.explore_triggered(), 1.0, 100, runs=200, master_seed=5)
    mc = run_monte_carlo(sc, jobs=1)
    best_pulls = mc.final_pull_counts[:, :, 1]
    assert (best_pulls >= 90).all(axis=1).mean() >= 0.99


def test_explore_triggered_is_free_on_exploit_rounds():
    sc = star_scenario(horizon=300)
    m = run_episode(sc, 0, record=True)
    oracle = replay(sc, m.log)
    assert oracle["problems"] == []
    inc = np.diff(np.concatenate([np.zeros((6, 1), int), m.observation_count], axis=1), axis=1)
    assert (inc[:, :].T[~m.log.observed] == 0).all()


def test_ledger_replay_matches_engine():
    sc = star_scenario(OS.probabilistic(0.4), horizon=120)
    m = run_episode(sc, 2, record=True)
    o = replay(sc, m.log)
    assert o["pulls"] == m.pull_counts.tolist()
    assert o["observed"] == m.observed_counts.tolist()
    assert o["sums"] == m.reward_sums.tolist()
    assert o["sampling_regret"] == m.sampling_regret.tolist()
    assert o["observation_regret"] == m.observation_regret.tolist()


def test_regret_equals_gap_weighted_pulls():
    sc = star_scenario(horizon=200)
    m = run_episode(sc, 1, record=True)
    gaps = np.array([55, 45, 45, 35, 25, 25, 15, 5, 3, 0])
    onehot = np.eye(10, dtype=int)[m.log.choices]  # (T, K, N)
    counts = np.cumsum(onehot, axis=0)
    assert np.array_equal(m.sampling_regret.T, counts @ gaps)
    inc = np.diff(m.sampling_regret, axis=1)
    assert np.isin(inc, gaps).all()
    assert (np.diff(m.observation_count, axis=1) >= 0).all()


def test_monte_carlo_single_run_equals_episode():
    sc = star_scenario(runs=1, horizon=80)
    mc = run_monte_carlo(sc, jobs=1)
    ep = run_episode(sc, 0)
    assert np.array_equal(mc.mean_sampling_regret, ep.sampling_regret)
    assert np.array_equal(mc.mean_observation_regret, ep.observation_regret)
    assert not mc.se_sampling_regret.any()


def test_monte_carlo_always_is_exact_with_zero_spread():
    sc = star_scenario(OS.always(), runs=40, horizon=60, cost=0.5)
    mc = run_monte_carlo(sc, jobs=1)
    t = np.arange(1, 61)
    assert np.array_equal(mc.mean_observation_regret[0], 0.5 * (5 * t))
    assert not mc.se_observation_regret.any()


def test_monte_carlo_independent_of_jobs():
    sc = star_scenario(runs=520, horizon=60)
    a = run_monte_carlo(sc, jobs=1)
    b = run_monte_carlo(sc, jobs=2)
    for name in ("mean_sampling_regret", "se_sampling_regret", "mean_observation_regret", "mean_total_regret"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


def test_runs_use_disjoint_streams():
    sc = star_scenario(runs=2, horizon=50)
    assert not np.array_equal(run_episode(sc, 0).sampling_regret, run_episode(sc, 1).sampling_regret)


def test_scenario_validation():
    env = Environment.gaussian([1.0, 2.0, 3.0], 1.0)
    with pytest.raises(ValueError):
        Scenario(env, star(2), 1.01, OS.never(), 1.0, 2)
    with pytest.raises(ValueError):
        Scenario(env, star(2), 1.0, OS.never(), 1.0, 10)
    with pytest.raises(ValueError):
        Scenario(env, star(2), 1.01, OS.never(), -1.0, 10)
    with pytest.raises(ValueError):
        Scenario(env, star(2), 1.01, [OS.never()], 1.0, 10)


def test_check_invariants_flags_tampering():
    sc = star_scenario(OS.always(), horizon=50)
    m = run_episode(sc)
    m.observation_count[0, -1] -= 5
    with pytest.raises(InvariantError):
        check_invariants(sc, m)
