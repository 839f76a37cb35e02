"""Six agents on a star, ten Gaussian arms.

The center sees five neighbors and ends with the least sampling regret. The
observation cost it pays grows like a logarithm, not a line.
"""
import numpy as np

from bandit_net.env import Environment
from bandit_net.graph import star
from bandit_net.policy import ObservationStrategy
from bandit_net.sim import Scenario, run_monte_carlo

env = Environment.gaussian([40, 50, 50, 60, 70, 70, 80, 90, 92, 95], 5.0)
sc = Scenario(env, star(6), xi=1.01, strategy=ObservationStrategy.explore_triggered(), cost=1.0, horizon=1000, runs=300, master_seed=2019)
res = run_monte_carlo(sc)
alone = run_monte_carlo(sc.with_(strategy=ObservationStrategy.never()))

for name, agents in (("center", [0]), ("leaves", range(1, 6))):
    m, se = res.group_final(agents, "sampling")
    print(f"{name:>7}: sampling regret {m:7.1f} ± {se:.1f}")
m, se = alone.group_final(range(6), "sampling")
print(f"  alone: sampling regret {m:7.1f} ± {se:.1f}")

ro = res.mean_observation_regret[0]
for t in (100, 250, 500, 1000):
    print(f"center observation regret at t={t:4d}: {ro[t - 1]:6.1f}")
print("R_o(1000)/R_o(500) =", round(ro[999] / ro[499], 3), "(a straight line would give 2)")
