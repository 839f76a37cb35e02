"""One agent's decision, step by step.

The index is the empirical mean plus an exploration bonus. When the pick
disagrees with the greedy arm the round is an explore round, and only then
does an explore-triggered agent pay to look at its neighbors.
"""
import numpy as np

from bandit_net.policy import (
    AgentState,
    ObservationStrategy,
    PolicyParams,
    choose_option,
    decide_observation,
    ucb_index,
    update_observed,
    update_own,
)

params = PolicyParams(xi=1.01, sigma=np.ones(2), strategy=ObservationStrategy.explore_triggered())
state = AgentState.fresh(2)
state.observed_count[:] = [1, 50]
state.own_pull_count[:] = [1, 50]
state.reward_sum[:] = [5.0, 300.0]
state.clock = 100

print("means:", state.mean_estimates())
print("indices:", [round(ucb_index(state, params, i), 3) for i in range(2)])

rng = np.random.default_rng(0)
arm = choose_option(state, params, rng)
print("chosen arm:", arm, "exploit round:", state.last_was_exploit)
print("observe neighbors this round:", decide_observation(state, params, rng))

update_own(state, arm, 4.2)
update_observed(state, 1, 6.1)  # a neighbor's reward on arm 1
print("counts after the round:", state.observed_count.tolist(), "own pulls:", state.own_pull_count.tolist())
