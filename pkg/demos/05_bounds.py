"""Closed-form bounds next to a simulation.

Both bound modes are evaluated. The as-printed and corrected forms differ on
the logarithmic observation term.
"""
import math

from bandit_net import analysis as an
from bandit_net.env import Environment
from bandit_net.graph import star
from bandit_net.policy import ObservationStrategy
from bandit_net.sim import Scenario, run_monte_carlo

env = Environment.gaussian([40, 50, 50, 60, 70, 70, 80, 90, 92, 95], 5.0)
sc = Scenario(env, star(6), 1.01, ObservationStrategy.explore_triggered(), 1.0, 1000, runs=200, master_seed=5)
center = an.bound_params_for(sc, 0, zeta=math.e)

for T in (10, 100, 1000, 10_000):
    print(
        f"T={T:6d}  sampling {an.sampling_regret_bound(center, T):10.1f}"
        f"  observation printed {an.observation_regret_bound(center, T, 'as_printed'):9.1f}"
        f"  corrected {an.observation_regret_bound(center, T, 'corrected'):9.1f}"
    )

res = run_monte_carlo(sc)
for row in an.compare_empirical_to_bound(res, [an.bound_params_for(sc, k) for k in range(6)], times=[1000], mode="corrected")[:2]:
    print(f"agent {row.agent} at t={row.t}: satisfied {row.satisfied}")
