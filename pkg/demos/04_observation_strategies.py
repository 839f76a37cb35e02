"""Four ways to spend on observation.

Always-observe pays c·d·t exactly, probabilistic pays about c·d·p·t, and
never-observe pays nothing but learns alone. Explore-triggered pays only on
explore rounds.
"""
from bandit_net.cli import compare_table
from bandit_net.env import Environment
from bandit_net.graph import star
from bandit_net.policy import ObservationStrategy as OS
from bandit_net.sim import Scenario, compare_strategies

env = Environment.gaussian([40, 50, 50, 60, 70, 70, 80, 90, 92, 95], 5.0)
base = Scenario(env, star(6), 1.01, OS.explore_triggered(), cost=0.5, horizon=1000, runs=200, master_seed=4)
results = compare_strategies(base, [OS.explore_triggered(), OS.always(), OS.never(), OS.probabilistic(0.2)])

print("center agent, total regret at T (cost 0.5)")
for row in compare_table(results):
    if row["agent"] == 1:
        print(f"  {row['rank']}. {row['strategy']:<20} {row['mean_total_regret']:8.1f} ± {row['se_total_regret']:.1f}")

always = results["always"]
print("always-observe center paid", always.mean_observation_regret[0, -1], "= 0.5 * 5 * 1000")
