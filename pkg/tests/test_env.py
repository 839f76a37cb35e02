import numpy as np
import pytest

from bandit_net.env import Environment, RewardKind, RewardModel, gaps, sample_reward, sample_rewards
from bandit_net.sim import rng_stream


def test_sample_reward_replays_under_fixed_seed():
    env = Environment.gaussian([95.0], 5.0)
    a = [sample_reward(env, 0, rng_stream(7, 0, 0, "rewards")) for _ in range(3)]
    g1, g2 = rng_stream(7, 0, 0, "rewards"), rng_stream(7, 0, 0, "rewards")
    seq1 = [sample_reward(env, 0, g1) for _ in range(50)]
    seq2 = [sample_reward(env, 0, g2) for _ in range(50)]
    assert seq1 == seq2
    assert a[0] == a[1] == a[2] == seq1[0]


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_nonpositive_sigma_rejected(sigma):
    with pytest.raises(ValueError):
        RewardModel.gaussian(40.0, sigma)


def test_gaussian_moments_over_a_million_draws():
    env = Environment.gaussian([95.0], 5.0)
    x = sample_rewards(env, 0, np.random.default_rng(1), 10**6)
    assert abs(x.mean() - 95.0) < 0.05
    assert abs(x.var() / 25.0 - 1.0) < 0.01


def test_one_normal_consumed_per_draw_for_every_kind():
    env = Environment(
        [
            RewardModel.gaussian(1.0, 2.0),
            RewardModel(RewardKind.BERNOULLI, 0.3, 0.5),
            RewardModel(RewardKind.BOUNDED_UNIFORM, 0.0, 1.0),
        ]
    )
    for arm in range(3):
        g = np.random.default_rng(3)
        sample_reward(env, arm, g)
        ref = np.random.default_rng(3)
        ref.standard_normal()
        assert g.standard_normal() == ref.standard_normal()


def test_bernoulli_and_uniform_supports():
    bern = RewardModel(RewardKind.BERNOULLI, 0.3, 0.5)
    unif = RewardModel(RewardKind.BOUNDED_UNIFORM, 2.0, 1.5, half_width=1.0)
    z = np.random.default_rng(0).standard_normal(200_000)
    b = bern.transform(z)
    u = unif.transform(z)
    assert set(np.unique(b)) <= {0.0, 1.0}
    assert abs(b.mean() - 0.3) < 0.005
    assert u.min() >= 1.0 and u.max() <= 3.0
    assert abs(u.mean() - 2.0) < 0.01


def test_sub_gaussian_proxy_constraints():
    with pytest.raises(ValueError):
        RewardModel(RewardKind.BERNOULLI, 0.5, 0.4)
    with pytest.raises(ValueError):
        RewardModel(RewardKind.BERNOULLI, 1.5, 0.5)
    with pytest.raises(ValueError):
        RewardModel(RewardKind.BOUNDED_UNIFORM, 0.0, 1.0, half_width=2.0)


def test_invalid_arm_index():
    env = Environment.gaussian([1.0, 2.0], 1.0)
    with pytest.raises(IndexError):
        sample_reward(env, 2, np.random.default_rng(0))
    with pytest.raises(IndexError):
        sample_reward(env, -1, np.random.default_rng(0))


def test_gaps_of_star_means(star_env):
    assert gaps(star_env).tolist() == [55, 45, 45, 35, 25, 25, 15, 5, 3, 0]
    assert star_env.optimal_arm == 9


def test_gaps_single_arm_and_ties():
    assert gaps(Environment.gaussian([3.0], 1.0)).tolist() == [0.0]
    env = Environment.gaussian([2.0, 2.0], 1.0)
    assert env.optimal_arm == 0
    assert gaps(env).tolist() == [0.0, 0.0]


def test_environment_needs_an_arm():
    with pytest.raises(ValueError):
        Environment([])
