"""Synchronous-round episodes and Monte Carlo ensembles.

Every round all agents choose from their round-start state, all rewards
realise at once, and only then does each agent ingest its own reward (and,
if it observes, its neighbors' choices and rewards in ascending neighbor
order). An agent with degree ``d`` that observes pays ``cost * d``.

Random numbers come from one Philox stream per ``(run, agent, purpose)``,
keyed off the master seed, so a run's trajectory does not depend on which
other runs share its batch or worker process.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .env import Environment, gaps, sample_reward
from .errors import InvariantError
from .graph import ObservationGraph
from .policy import (
    AgentState,
    ObservationStrategy,
    PolicyParams,
    StrategyKind,
    choose_option,
    decide_observation,
    forced_option,
    ucb_values,
    update_observed,
    update_own,
)

__all__ = [
    "Scenario",
    "EventLog",
    "RunMetrics",
    "MonteCarloResult",
    "rng_stream",
    "run_episode",
    "run_episode_scalar",
    "run_monte_carlo",
    "compare_strategies",
    "check_invariants",
]

PURPOSES = {"rewards": 0, "tie_break": 1, "observation": 2}
_SEED_MASK = (1 << 64) - 1
_CHUNK = 250


def rng_stream(master_seed: int, run: int, agent: int, purpose: str) -> np.random.Generator:
    """Independent generator for one run/agent/purpose triple."""
    seq = np.random.SeedSequence(int(master_seed) & _SEED_MASK, spawn_key=(int(run), int(agent), PURPOSES[purpose]))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class Scenario:
    environment: Environment
    graph: ObservationGraph
    xi: float
    strategies: tuple[ObservationStrategy, ...]
    cost: float
    horizon: int
    runs: int = 1
    master_seed: int = 0

    def __init__(self, environment, graph, xi, strategy, cost, horizon, runs=1, master_seed=0):
        if isinstance(strategy, ObservationStrategy):
            strategies = (strategy,) * graph.agent_count
        else:
            strategies = tuple(strategy)
            if len(strategies) != graph.agent_count:
                raise ValueError(f"got {len(strategies)} strategies for {graph.agent_count} agents")
        vals = dict(
            environment=environment,
            graph=graph,
            xi=float(xi),
            strategies=strategies,
            cost=float(cost),
            horizon=int(horizon),
            runs=int(runs),
            master_seed=int(master_seed),
        )
        for k, v in vals.items():
            object.__setattr__(self, k, v)
        if not self.xi > 1:
            raise ValueError(f"xi must be > 1, got {self.xi}")
        if self.horizon < environment.n_arms:
            raise ValueError(f"horizon {self.horizon} leaves no room for {environment.n_arms} initialization rounds")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.cost >= 0:
            raise ValueError("cost must be >= 0")

    @property
    def n_agents(self) -> int:
        return self.graph.agent_count

    @property
    def n_arms(self) -> int:
        return self.environment.n_arms

    def policy(self, agent: int) -> PolicyParams:
        return PolicyParams(self.xi, self.environment.sigmas, self.strategies[agent])

    def with_(self, **changes) -> "Scenario":
        vals = dict(
            environment=self.environment,
            graph=self.graph,
            xi=self.xi,
            strategy=self.strategies,
            cost=self.cost,
            horizon=self.horizon,
            runs=self.runs,
            master_seed=self.master_seed,
        )
        if "strategies" in changes:
            changes["strategy"] = changes.pop("strategies")
        vals.update(changes)
        return Scenario(**vals)


@dataclass
class EventLog:
    """Per-round record of one run, indexed ``[t - 1, agent]``."""

    choices: np.ndarray
    rewards: np.ndarray
    observed: np.ndarray


@dataclass
class RunMetrics:
    sampling_regret: np.ndarray  # (K, T) cumulative
    observation_count: np.ndarray  # (K, T) cumulative neighbor observations
    cost: float
    pull_counts: np.ndarray  # (K, N) own pulls at T
    observed_counts: np.ndarray  # (K, N) all rewards seen at T
    reward_sums: np.ndarray  # (K, N)
    log: EventLog | None = None

    @property
    def observation_regret(self) -> np.ndarray:
        return self.cost * self.observation_count

    @property
    def total_regret(self) -> np.ndarray:
        return self.sampling_regret + self.observation_regret

    @property
    def observation_total(self) -> np.ndarray:
        return self.observation_count[:, -1]


@dataclass
class MonteCarloResult:
    scenario: Scenario
    mean_sampling_regret: np.ndarray  # (K, T)
    se_sampling_regret: np.ndarray
    mean_observation_regret: np.ndarray
    se_observation_regret: np.ndarray
    mean_total_regret: np.ndarray
    se_total_regret: np.ndarray
    mean_pull_counts: np.ndarray  # (K, N)
    final_sampling_regret: np.ndarray = field(repr=False)  # (M, K)
    final_observation_regret: np.ndarray = field(repr=False)
    final_pull_counts: np.ndarray = field(repr=False)  # (M, K, N)
    final_observed_counts: np.ndarray = field(repr=False)
    final_reward_sums: np.ndarray = field(repr=False)

    @property
    def runs(self) -> int:
        return self.final_sampling_regret.shape[0]

    def group_final(self, agents: Sequence[int], which: str = "sampling") -> tuple[float, float]:
        """Mean and standard error at ``T`` of the per-run average over ``agents``."""
        src = {
            "sampling": self.final_sampling_regret,
            "observation": self.final_observation_regret,
            "total": self.final_sampling_regret + self.final_observation_regret,
        }[which]
        per_run = src[:, list(agents)].mean(axis=1)
        return float(per_run.mean()), _se(per_run)


def _se(x: np.ndarray) -> float:
    if len(x) < 2:
        return 0.0
    return float(x.std(ddof=1) / math.sqrt(len(x)))


# --------------------------------------------------------------------------
# batched engine


def _simulate(scenario: Scenario, run_indices: Sequence[int], record: bool = False) -> dict:
    env, g = scenario.environment, scenario.graph
    R, K, N, T = len(run_indices), g.agent_count, env.n_arms, scenario.horizon
    xi, sigma = scenario.xi, env.sigmas
    delta = gaps(env)
    degrees = g.degrees
    table, valid = g.neighbor_table()
    kinds = [s.kind for s in scenario.strategies]
    prob_p = np.array([s.p if s.kind is StrategyKind.PROBABILISTIC else 0.0 for s in scenario.strategies])
    is_kind = {kind: np.array([k is kind for k in kinds]) for kind in StrategyKind}

    z = np.empty((T, R, K))
    u_tie = np.empty((T - N, R, K))
    u_obs = np.zeros((T, R, K))
    for r, run in enumerate(run_indices):
        for k in range(K):
            z[:, r, k] = rng_stream(scenario.master_seed, run, k, "rewards").standard_normal(T)
            u_tie[:, r, k] = rng_stream(scenario.master_seed, run, k, "tie_break").random(T - N)
            if kinds[k] is StrategyKind.PROBABILISTIC:
                u_obs[:, r, k] = rng_stream(scenario.master_seed, run, k, "observation").random(T)

    n_own = np.zeros((R, K, N), dtype=np.int64)
    n_seen = np.zeros((R, K, N), dtype=np.int64)
    s_sum = np.zeros((R, K, N))
    rs = np.zeros((R, K))
    oc = np.zeros((R, K), dtype=np.int64)
    rs_hist = np.empty((T, R, K))
    oc_hist = np.empty((T, R, K), dtype=np.int64)
    if record:
        log_c = np.empty((T, R, K), dtype=np.int64)
        log_r = np.empty((T, R, K))
        log_o = np.empty((T, R, K), dtype=bool)

    rr_all, kk_all = np.meshgrid(np.arange(R), np.arange(K), indexing="ij")
    agent_offset = np.arange(K) + 1
    for t in range(1, T + 1):
        seen = n_seen > 0
        if t <= N:
            choice = np.broadcast_to((t - 1 + agent_offset) % N, (R, K)).copy()
        else:
            q = ucb_values(s_sum, n_seen.astype(float), sigma, xi, math.log(t - 1))
            tied = q == q.max(axis=-1, keepdims=True)
            pick = (u_tie[t - N - 1] * tied.sum(axis=-1)).astype(np.int64)
            choice = (np.cumsum(tied, axis=-1) > pick[..., None]).argmax(axis=-1)
        mu = np.divide(s_sum, n_seen, out=np.full((R, K, N), -np.inf), where=seen)
        mu_choice = mu[rr_all, kk_all, choice]
        exploit = seen[rr_all, kk_all, choice] & (mu_choice == mu.max(axis=-1))

        observe = np.zeros((R, K), dtype=bool)
        observe |= is_kind[StrategyKind.ALWAYS][None, :]
        observe |= is_kind[StrategyKind.EXPLORE_TRIGGERED][None, :] & ~exploit
        observe |= is_kind[StrategyKind.PROBABILISTIC][None, :] & (u_obs[t - 1] < prob_p[None, :])

        reward = env.rewards_from_normals(choice, z[t - 1])

        n_own[rr_all, kk_all, choice] += 1
        n_seen[rr_all, kk_all, choice] += 1
        s_sum[rr_all, kk_all, choice] += reward
        for slot in range(table.shape[1]):
            active = observe & valid[None, :, slot]
            ri, ki = np.nonzero(active)
            ji = table[ki, slot]
            ci = choice[ri, ji]
            n_seen[ri, ki, ci] += 1
            s_sum[ri, ki, ci] += reward[ri, ji]

        rs += delta[choice]
        oc += observe * degrees[None, :]
        rs_hist[t - 1] = rs
        oc_hist[t - 1] = oc
        if record:
            log_c[t - 1] = choice
            log_r[t - 1] = reward
            log_o[t - 1] = observe

    out = dict(rs=rs_hist, oc=oc_hist, n_own=n_own, n_seen=n_seen, s_sum=s_sum)
    if record:
        out.update(log_c=log_c, log_r=log_r, log_o=log_o)
    return out


def run_episode(scenario: Scenario, run_index: int = 0, record: bool = False) -> RunMetrics:
    """Run one seeded episode; ``record`` keeps the full event log."""
    raw = _simulate(scenario, [run_index], record=record)
    log = None
    if record:
        log = EventLog(raw["log_c"][:, 0], raw["log_r"][:, 0], raw["log_o"][:, 0])
    return RunMetrics(
        sampling_regret=raw["rs"][:, 0].T.copy(),
        observation_count=raw["oc"][:, 0].T.copy(),
        cost=scenario.cost,
        pull_counts=raw["n_own"][0],
        observed_counts=raw["n_seen"][0],
        reward_sums=raw["s_sum"][0],
        log=log,
    )


def run_episode_scalar(scenario: Scenario, run_index: int = 0) -> RunMetrics:
    """Agent-by-agent reference execution through the ``policy`` operations.

    Much slower than :func:`run_episode`; kept as an independent route that
    must reproduce its output exactly.
    """
    env, g = scenario.environment, scenario.graph
    K, N, T = g.agent_count, env.n_arms, scenario.horizon
    delta = gaps(env)
    params = [scenario.policy(k) for k in range(K)]
    states = [AgentState.fresh(N) for _ in range(K)]
    streams = [{p: rng_stream(scenario.master_seed, run_index, k, p) for p in PURPOSES} for k in range(K)]

    rs = np.zeros((K, T))
    oc = np.zeros((K, T), dtype=np.int64)
    choices = np.empty((T, K), dtype=np.int64)
    rewards = np.empty((T, K))
    observed = np.empty((T, K), dtype=bool)
    for t in range(1, T + 1):
        for k in range(K):
            st = states[k]
            if st.clock < N:
                choices[t - 1, k] = forced_option(st, k)
            else:
                choices[t - 1, k] = choose_option(st, params[k], streams[k]["tie_break"])
            observed[t - 1, k] = decide_observation(st, params[k], streams[k]["observation"])
        for k in range(K):
            rewards[t - 1, k] = sample_reward(env, int(choices[t - 1, k]), streams[k]["rewards"])
        for k in range(K):
            update_own(states[k], int(choices[t - 1, k]), rewards[t - 1, k])
            if observed[t - 1, k]:
                for j in g.neighbors(k):
                    update_observed(states[k], int(choices[t - 1, j]), rewards[t - 1, j])
            prev_rs = rs[k, t - 2] if t > 1 else 0.0
            prev_oc = oc[k, t - 2] if t > 1 else 0
            rs[k, t - 1] = prev_rs + delta[choices[t - 1, k]]
            oc[k, t - 1] = prev_oc + (g.degree(k) if observed[t - 1, k] else 0)
    return RunMetrics(
        sampling_regret=rs,
        observation_count=oc,
        cost=scenario.cost,
        pull_counts=np.array([s.own_pull_count for s in states]),
        observed_counts=np.array([s.observed_count for s in states]),
        reward_sums=np.array([s.reward_sum for s in states]),
        log=EventLog(choices, rewards, observed),
    )


# --------------------------------------------------------------------------
# ensembles


def _chunk_worker(args):
    scenario, runs = args
    raw = _simulate(scenario, runs)
    return raw["rs"], raw["oc"], raw["n_own"], raw["n_seen"], raw["s_sum"]


def _reduce(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error over axis 1, summing runs in index order."""
    m = x.shape[1]
    acc = np.zeros(x[:, 0].shape)
    for r in range(m):
        acc += x[:, r]
    mean = acc / m
    if m < 2:
        return mean, np.zeros_like(mean)
    sq = np.zeros_like(mean)
    for r in range(m):
        d = x[:, r] - mean
        sq += d * d
    return mean, np.sqrt(sq / (m - 1)) / math.sqrt(m)


def run_monte_carlo(scenario: Scenario, jobs: int | None = None) -> MonteCarloResult:
    """Average ``scenario.runs`` independent episodes.

    ``jobs`` worker processes share the runs; output does not depend on it.
    """
    jobs = (os.cpu_count() or 1) if jobs is None else max(1, int(jobs))
    runs = list(range(scenario.runs))
    chunks = [runs[i : i + _CHUNK] for i in range(0, len(runs), _CHUNK)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_chunk_worker, [(scenario, c) for c in chunks]))
    else:
        parts = [_chunk_worker((scenario, c)) for c in chunks]
    rs = np.concatenate([p[0] for p in parts], axis=1)  # (T, M, K)
    oc = np.concatenate([p[1] for p in parts], axis=1)
    n_own = np.concatenate([p[2] for p in parts], axis=0)  # (M, K, N)
    n_seen = np.concatenate([p[3] for p in parts], axis=0)
    s_sum = np.concatenate([p[4] for p in parts], axis=0)

    ro = scenario.cost * oc
    m_rs, se_rs = _reduce(rs)
    # averaging integer counts keeps deterministic observation costs exact
    m_oc, se_oc = _reduce(oc.astype(float))
    m_ro, se_ro = scenario.cost * m_oc, scenario.cost * se_oc
    m_tot, se_tot = _reduce(rs + ro)
    m_pull, _ = _reduce(n_own.transpose(1, 0, 2).astype(float))
    return MonteCarloResult(
        scenario=scenario,
        mean_sampling_regret=m_rs.T,
        se_sampling_regret=se_rs.T,
        mean_observation_regret=m_ro.T,
        se_observation_regret=se_ro.T,
        mean_total_regret=m_tot.T,
        se_total_regret=se_tot.T,
        mean_pull_counts=m_pull,
        final_sampling_regret=rs[-1],
        final_observation_regret=ro[-1],
        final_pull_counts=n_own,
        final_observed_counts=n_seen,
        final_reward_sums=s_sum,
    )


def compare_strategies(
    scenario: Scenario, strategies: Sequence[ObservationStrategy], jobs: int | None = None
) -> dict[str, MonteCarloResult]:
    """Same arms, graph and seeds under each homogeneous strategy."""
    return {s.label: run_monte_carlo(scenario.with_(strategy=s), jobs=jobs) for s in strategies}


def check_invariants(scenario: Scenario, metrics: RunMetrics) -> None:
    """Raise :class:`InvariantError` if a run's accounting is inconsistent."""
    T = scenario.horizon
    if (np.diff(metrics.sampling_regret, axis=1) < 0).any() or (np.diff(metrics.observation_count, axis=1) < 0).any():
        raise InvariantError("cumulative regret decreased")
    if (metrics.pull_counts > metrics.observed_counts).any():
        raise InvariantError("own pulls exceed observed rewards")
    if (metrics.pull_counts.sum(axis=1) != T).any():
        raise InvariantError("pull counts do not sum to the horizon")
    expect = metrics.pull_counts @ gaps(scenario.environment)
    if not np.allclose(metrics.sampling_regret[:, -1], expect, rtol=1e-9, atol=1e-9):
        raise InvariantError("sampling regret disagrees with gap-weighted pull counts")
    deg = scenario.graph.degrees
    for k, s in enumerate(scenario.strategies):
        if s.kind is StrategyKind.ALWAYS and metrics.observation_count[k, -1] != deg[k] * T:
            raise InvariantError(f"agent {k + 1} always observes but paid for {metrics.observation_count[k, -1]}")
        if s.kind is StrategyKind.NEVER and metrics.observation_count[k, -1] != 0:
            raise InvariantError(f"agent {k + 1} never observes but paid for observations")
