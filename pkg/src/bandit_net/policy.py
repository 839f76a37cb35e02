"""Per-agent decision logic.

The sampling rule picks the arm with the largest upper confidence index

    Q_i = S_i / N_i + sigma_i * sqrt(2 (xi + 1) ln t / N_i)

where ``N_i`` counts every reward of arm ``i`` the agent has seen (its own
pulls plus observed neighbor pulls), ``S_i`` their sum and ``t`` the number
of rounds the agent has completed. The explore-triggered observation rule
watches all neighbors exactly on rounds where the chosen arm is not a
maximiser of the empirical means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractViolation

__all__ = [
    "StrategyKind",
    "ObservationStrategy",
    "PolicyParams",
    "AgentState",
    "ucb_values",
    "ucb_index",
    "forced_option",
    "choose_option",
    "classify_exploit",
    "decide_observation",
    "update_own",
    "update_observed",
]


class StrategyKind(str, Enum):
    EXPLORE_TRIGGERED = "explore_triggered"
    ALWAYS = "always"
    PROBABILISTIC = "probabilistic"
    NEVER = "never"


@dataclass(frozen=True)
class ObservationStrategy:
    kind: StrategyKind
    p: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.kind is StrategyKind.PROBABILISTIC:
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError(f"probabilistic observation needs p in [0, 1], got {self.p}")
        elif self.p is not None:
            raise ValueError(f"p only applies to the probabilistic strategy, not {self.kind.value}")

    @classmethod
    def explore_triggered(cls):
        return cls(StrategyKind.EXPLORE_TRIGGERED)

    @classmethod
    def always(cls):
        return cls(StrategyKind.ALWAYS)

    @classmethod
    def never(cls):
        return cls(StrategyKind.NEVER)

    @classmethod
    def probabilistic(cls, p: float):
        return cls(StrategyKind.PROBABILISTIC, float(p))

    @classmethod
    def parse(cls, name: str, p: float | None = None) -> "ObservationStrategy":
        kind = StrategyKind(name)
        return cls(kind, float(p) if kind is StrategyKind.PROBABILISTIC and p is not None else None)

    @property
    def label(self) -> str:
        if self.kind is StrategyKind.PROBABILISTIC:
            return f"probabilistic({self.p:g})"
        return self.kind.value


@dataclass(frozen=True)
class PolicyParams:
    xi: float
    sigma: np.ndarray
    strategy: ObservationStrategy = field(default_factory=ObservationStrategy.explore_triggered)

    def __post_init__(self):
        if not self.xi > 1:
            raise ValueError(f"xi must be > 1, got {self.xi}")
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim != 1 or not (sigma > 0).all():
            raise ValueError("sigma must be a 1-d array of positive values")
        object.__setattr__(self, "sigma", sigma)


@dataclass
class AgentState:
    """Counters of one agent. Mutated in place by the update functions."""

    observed_count: np.ndarray
    reward_sum: np.ndarray
    own_pull_count: np.ndarray
    clock: int = 0
    last_choice: int | None = None
    last_was_exploit: bool = False

    @classmethod
    def fresh(cls, n_arms: int) -> "AgentState":
        return cls(
            observed_count=np.zeros(n_arms, dtype=np.int64),
            reward_sum=np.zeros(n_arms, dtype=float),
            own_pull_count=np.zeros(n_arms, dtype=np.int64),
        )

    @property
    def n_arms(self) -> int:
        return len(self.observed_count)

    @property
    def initialized(self) -> bool:
        return bool((self.observed_count > 0).all())

    def mean_estimates(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.observed_count > 0, self.reward_sum / self.observed_count, np.nan)


def ucb_values(reward_sum, observed_count, sigma, xi: float, log_t: float):
    """Upper confidence index for scalars or arrays.

    Shared by the scalar policy and the batched engine so both produce
    bit-identical indices.
    """
    return reward_sum / observed_count + sigma * np.sqrt(2.0 * (xi + 1.0) * log_t / observed_count)


def ucb_index(state: AgentState, params: PolicyParams, arm: int) -> float:
    n = state.observed_count[arm]
    if n < 1:
        raise ContractViolation(f"arm {arm} has no observations yet")
    if state.clock < 1:
        raise ContractViolation("ucb_index needs at least one completed round")
    return float(ucb_values(state.reward_sum[arm], float(n), params.sigma[arm], params.xi, math.log(state.clock)))


def classify_exploit(state: AgentState, arm: int) -> bool:
    """True when ``arm`` attains the max empirical mean among seen arms.

    An arm that has never been seen cannot be an exploit choice.
    """
    seen = state.observed_count > 0
    if not seen[arm]:
        return False
    mu = state.reward_sum[seen] / state.observed_count[seen]
    return bool(state.reward_sum[arm] / state.observed_count[arm] == mu.max())


def forced_option(state: AgentState, agent: int) -> int:
    """Round-robin arm for the initialization rounds (0-based agent/arm).

    Agent ``k`` (1-based) pulls arm ``((t - 1 + k) mod N) + 1`` at round
    ``t <= N``; the agent offset keeps agents desynchronised.
    """
    if state.clock >= state.n_arms:
        raise ContractViolation("initialization is already complete")
    arm = (state.clock + agent + 1) % state.n_arms
    state.last_choice = arm
    state.last_was_exploit = classify_exploit(state, arm)
    return arm


def choose_option(state: AgentState, params: PolicyParams, rng: np.random.Generator) -> int:
    """Pick an argmax of the confidence index; draws one uniform for ties."""
    if not state.initialized:
        raise ContractViolation("every arm needs an observation before the UCB rule applies")
    q = ucb_values(state.reward_sum, state.observed_count.astype(float), params.sigma, params.xi, math.log(state.clock))
    tied = np.flatnonzero(q == q.max())
    arm = int(tied[int(rng.random() * len(tied))])
    state.last_choice = arm
    state.last_was_exploit = classify_exploit(state, arm)
    return arm


def decide_observation(state: AgentState, params: PolicyParams, rng: np.random.Generator) -> bool:
    """Whether the agent watches all of its neighbors this round."""
    kind = params.strategy.kind
    if kind is StrategyKind.EXPLORE_TRIGGERED:
        return not state.last_was_exploit
    if kind is StrategyKind.ALWAYS:
        return True
    if kind is StrategyKind.NEVER:
        return False
    return bool(rng.random() < params.strategy.p)


def update_own(state: AgentState, arm: int, reward: float) -> AgentState:
    if arm != state.last_choice:
        raise ContractViolation(f"update_own for arm {arm} but the agent chose {state.last_choice}")
    state.own_pull_count[arm] += 1
    state.observed_count[arm] += 1
    state.reward_sum[arm] += reward
    state.clock += 1
    return state


def update_observed(state: AgentState, neighbor_choice: int, neighbor_reward: float) -> AgentState:
    state.observed_count[neighbor_choice] += 1
    state.reward_sum[neighbor_choice] += neighbor_reward
    return state
