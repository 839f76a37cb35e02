"""Arms, rewards and who-can-see-whom.

An environment is a list of reward models. A graph says which agents can
observe each other's pulls. Nothing here involves a policy yet.
"""
import numpy as np

from bandit_net.env import Environment, RewardModel, gaps, sample_rewards
from bandit_net.graph import build_graph, cycle, star

env = Environment.gaussian([40, 50, 50, 60, 70, 70, 80, 90, 92, 95], sigma=5.0)
print("optimal arm (0-based):", env.optimal_arm)
print("gaps:", gaps(env))

rng = np.random.default_rng(0)
draws = sample_rewards(env, 9, rng, 100_000)
print(f"arm 10 empirical mean {draws.mean():.3f}, variance {draws.var():.3f}")

# other sub-Gaussian families share the same sampling path
mixed = Environment([
    RewardModel("bernoulli", 0.3, 0.5),
    RewardModel("bounded_uniform", 0.6, 1.0, half_width=0.4),
])
print("bernoulli/uniform means:", [round(float(sample_rewards(mixed, i, rng, 50_000).mean()), 3) for i in range(2)])

g = star(6)
print("star degrees:", g.degrees.tolist())
print("neighbors of the center:", g.neighbors(0))
print("cycle(5) neighbors of agent 0:", cycle(5).neighbors(0))
print("from a config table:", build_graph({"kind": "edges", "k": 3, "edges": [[1, 2], [2, 3]]}).degrees.tolist())
