"""Closed-form regret bounds and empirical-versus-bound comparison.

All logarithms are natural. ``zeta > 1`` is a free analysis constant (it
never enters the policy); ``nu = 1 / ln zeta``. Several bounds share the
three "zeta terms"

    nu * (1 + ln(d + 1))
    nu / 2**xi * (ln(d + 1) / xi + 2 / (xi - 1))
    nu / T**(xi - 1) * (ln(d + 1) / (T xi) + 1 / (xi - 1))

which this module keeps separate (:func:`zeta_terms`) so that decompositions
can be cross-checked.

Some evaluators come in two modes. ``"as_printed"`` uses the published
constants verbatim: the explore-after-optimal-pull threshold and the
observation-regret log term carry ``sigma`` rather than ``sigma**2``, and
the latter lacks the ``cost * degree`` factor. ``"corrected"`` uses
``sigma**2`` and scales the observation log term by ``cost * degree``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .env import gaps as env_gaps
from .policy import ObservationStrategy, StrategyKind

__all__ = [
    "MODES",
    "BoundParams",
    "bound_params_for",
    "concentration_constants",
    "zeta_terms",
    "tail_bound",
    "exploration_threshold",
    "beta_threshold",
    "suboptimal_pull_bound",
    "sampling_regret_bound",
    "observation_regret_bound",
    "total_regret_bound",
    "linear_baseline_observation_regret",
    "explore_trigger_bound_lemma2",
    "explore_trigger_bound_theorem2",
    "trivial_caps",
    "BoundComparison",
    "compare_empirical_to_bound",
    "deviation_frequency",
    "subgaussian_tail",
]

MODES = ("as_printed", "corrected")


@dataclass(frozen=True)
class BoundParams:
    xi: float
    zeta: float
    sigma: np.ndarray
    gaps: np.ndarray
    degree: int = 0
    cost: float = 0.0

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        gaps = np.asarray(self.gaps, dtype=float)
        if sigma.shape != gaps.shape or sigma.ndim != 1 or len(gaps) < 1:
            raise ValueError("sigma and gaps must be 1-d arrays of equal length")
        if not self.xi > 1:
            raise ValueError(f"xi must be > 1, got {self.xi}")
        if not self.zeta > 1:
            raise ValueError(f"zeta must be > 1, got {self.zeta}")
        if not (sigma > 0).all():
            raise ValueError("sigma must be positive")
        if (gaps < 0).any() or not (gaps == 0).any():
            raise ValueError("gaps must be nonnegative with at least one optimal arm")
        if self.degree < 0 or self.cost < 0:
            raise ValueError("degree and cost must be nonnegative")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "gaps", gaps)
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "cost", float(self.cost))

    @property
    def arms(self) -> int:
        return len(self.gaps)

    @property
    def nu(self) -> float:
        return 1.0 / math.log(self.zeta)

    @property
    def suboptimal(self) -> np.ndarray:
        return np.flatnonzero(self.gaps > 0)

    def replace(self, **changes) -> "BoundParams":
        vals = dict(xi=self.xi, zeta=self.zeta, sigma=self.sigma, gaps=self.gaps, degree=self.degree, cost=self.cost)
        vals.update(changes)
        return BoundParams(**vals)


def bound_params_for(scenario, agent: int, zeta: float = math.e) -> BoundParams:
    """Bound parameters for one (0-based) agent of a simulation scenario."""
    env = scenario.environment
    return BoundParams(
        xi=scenario.xi,
        zeta=zeta,
        sigma=env.sigmas,
        gaps=env_gaps(env),
        degree=scenario.graph.degree(agent),
        cost=scenario.cost,
    )


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def concentration_constants(zeta: float, sigma: float) -> tuple[float, float]:
    """``(nu, kappa)`` of the sub-Gaussian concentration inequality."""
    if not zeta > 1 or not sigma > 0:
        raise ValueError("need zeta > 1 and sigma > 0")
    nu = 1.0 / math.log(zeta)
    kappa = 1.0 / (sigma**2 * (zeta**0.25 + zeta**-0.25) ** 2)
    return nu, kappa


def zeta_terms(params: BoundParams, T: float) -> tuple[float, float, float]:
    xi, nu, ld = params.xi, params.nu, math.log(params.degree + 1)
    return (
        nu * (1.0 + ld),
        nu / 2.0**xi * (ld / xi + 2.0 / (xi - 1.0)),
        nu / T ** (xi - 1.0) * (ld / (T * xi) + 1.0 / (xi - 1.0)),
    )


def tail_bound(params: BoundParams, t: float) -> float:
    """Deviation probability bound ``nu ln((d + 1) t) / t**(xi + 1)``.

    Not clamped; values above 1 are vacuous.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    return params.nu * math.log((params.degree + 1) * t) / t ** (params.xi + 1.0)


def _suboptimal_gap(params: BoundParams, arm: int) -> float:
    gap = params.gaps[arm]
    if not gap > 0:
        raise ValueError(f"arm {arm} is optimal; the bound needs a positive gap")
    return float(gap)


def exploration_threshold(params: BoundParams, arm: int, t: float) -> float:
    """Observation count beyond which the index can no longer hide ``arm``."""
    gap = _suboptimal_gap(params, arm)
    return 8.0 * params.sigma[arm] ** 2 * (params.xi + 1.0) * math.log(t) / gap**2


def beta_threshold(params: BoundParams, arm: int, t: float, mode: str = "as_printed") -> float:
    _check_mode(mode)
    gap = _suboptimal_gap(params, arm)
    s = params.sigma[arm] if mode == "as_printed" else params.sigma[arm] ** 2
    return 8.0 * s * (params.xi + 1.0) * math.log(t) / gap**2


def suboptimal_pull_bound(params: BoundParams, arm: int, T: float) -> float:
    """Upper bound on the expected number of pulls of suboptimal ``arm`` by T."""
    a, b, c = zeta_terms(params, T)
    return a + exploration_threshold(params, arm, T) + b + c


def sampling_regret_bound(params: BoundParams, T: float) -> float:
    sub = params.suboptimal
    if len(sub) == 0:
        return 0.0
    a, b, c = zeta_terms(params, T)
    d = params.gaps[sub]
    log_term = np.sum(8.0 * params.sigma[sub] ** 2 * (params.xi + 1.0) / d) * math.log(T)
    return float(np.sum(d) * a + log_term + np.sum(d) * b + np.sum(d) * c)


def _log_sum(params: BoundParams, T: float, power: int) -> float:
    sub = params.suboptimal
    if len(sub) == 0:
        return 0.0
    return float(np.sum(8.0 * params.sigma[sub] ** power * (params.xi + 1.0) / params.gaps[sub] ** 2) * math.log(T))


def observation_regret_bound(params: BoundParams, T: float, mode: str = "as_printed") -> float:
    _check_mode(mode)
    a, b, c = zeta_terms(params, T)
    w = params.cost * params.degree * (2 * params.arms - 1)
    if mode == "as_printed":
        log_term = _log_sum(params, T, 1)
    else:
        log_term = params.cost * params.degree * _log_sum(params, T, 2)
    return log_term + w * a + w * b + w * c


def total_regret_bound(params: BoundParams, T: float, mode: str = "as_printed") -> float:
    """Bound on sampling plus observation regret.

    ``"as_printed"`` evaluates the published combined display, whose log
    term is the unweighted sum of exploration thresholds. ``"corrected"``
    adds the sampling bound to the corrected observation bound.
    """
    _check_mode(mode)
    if mode == "corrected":
        return sampling_regret_bound(params, T) + observation_regret_bound(params, T, "corrected")
    a, b, c = zeta_terms(params, T)
    w = float(np.sum(params.gaps)) + params.cost * params.degree * (2 * params.arms - 1)
    return _log_sum(params, T, 2) + w * a + w * b + w * c


def linear_baseline_observation_regret(strategy, c: float, d_k: int, p: float | None = None, T: float = 1) -> float:
    """Expected observation regret of always/probabilistic observing."""
    if isinstance(strategy, str):
        strategy = ObservationStrategy.parse(strategy, p)
    if strategy.kind is StrategyKind.ALWAYS:
        return c * d_k * T
    if strategy.kind is StrategyKind.PROBABILISTIC:
        return c * d_k * strategy.p * T
    raise ValueError(f"no linear baseline for strategy {strategy.label}")


def explore_trigger_bound_lemma2(params: BoundParams, T: float) -> float:
    """Expected explore rounds that follow a suboptimal pull."""
    a, b, c = zeta_terms(params, T)
    n1 = params.arms - 1
    return n1 * a + _log_sum(params, T, 2) + n1 * b + n1 * c


def explore_trigger_bound_theorem2(params: BoundParams, T: float, mode: str = "as_printed") -> float:
    """Expected explore rounds that follow a pull of the optimal arm."""
    _check_mode(mode)
    a, b, c = zeta_terms(params, T)
    n1 = params.arms - 1
    return _log_sum(params, T, 1 if mode == "as_printed" else 2) + n1 * b + n1 * a + n1 * c


def trivial_caps(params: BoundParams, T: float) -> dict[str, float]:
    """Worst-case values no regret can exceed by time T."""
    s = float(params.gaps.max()) * T
    o = params.cost * params.degree * T
    return {"sampling": s, "observation": o, "total": s + o}


@dataclass(frozen=True)
class BoundComparison:
    t: int
    agent: int  # 1-based
    empirical_sampling: float
    bound_sampling: float
    empirical_observation: float
    bound_observation: float
    empirical_total: float
    bound_total: float
    mode: str

    @property
    def satisfied(self) -> dict[str, bool]:
        return {
            "sampling": self.empirical_sampling <= self.bound_sampling,
            "observation": self.empirical_observation <= self.bound_observation,
            "total": self.empirical_total <= self.bound_total,
        }

    @property
    def slack(self) -> dict[str, float]:
        return {
            "sampling": self.bound_sampling - self.empirical_sampling,
            "observation": self.bound_observation - self.empirical_observation,
            "total": self.bound_total - self.empirical_total,
        }


def compare_empirical_to_bound(
    result, params: Sequence[BoundParams], times: Sequence[int] | None = None, mode: str = "as_printed"
) -> list[BoundComparison]:
    """Tabulate mean empirical regrets against the bounds per agent.

    ``result`` is a Monte Carlo aggregate, ``params`` one entry per agent and
    ``times`` 1-based rounds (all rounds when omitted).
    """
    _check_mode(mode)
    K, T = result.mean_sampling_regret.shape
    if len(params) != K:
        raise ValueError(f"got bound parameters for {len(params)} agents, result has {K}")
    times = list(range(1, T + 1)) if times is None else [int(t) for t in times]
    if any(not 1 <= t <= T for t in times):
        raise ValueError(f"times must lie in [1, {T}]")
    rows = []
    for t in times:
        for k, p in enumerate(params):
            rows.append(
                BoundComparison(
                    t=t,
                    agent=k + 1,
                    empirical_sampling=float(result.mean_sampling_regret[k, t - 1]),
                    bound_sampling=sampling_regret_bound(p, t),
                    empirical_observation=float(result.mean_observation_regret[k, t - 1]),
                    bound_observation=observation_regret_bound(p, t, mode),
                    empirical_total=float(result.mean_total_regret[k, t - 1]),
                    bound_total=total_regret_bound(p, t, mode),
                    mode=mode,
                )
            )
    return rows


def deviation_frequency(model, n_obs: int, t: float, xi: float, trials: int, rng: np.random.Generator, batch: int = 10_000) -> float:
    """Fraction of trials whose n_obs-sample mean leaves the confidence radius.

    The radius is the exploration bonus ``sigma sqrt(2 (xi + 1) ln t / n_obs)``.
    """
    radius = model.variance_proxy * math.sqrt(2.0 * (xi + 1.0) * math.log(t) / n_obs)
    hits, done = 0, 0
    while done < trials:
        m = min(batch, trials - done)
        draws = model.transform(rng.standard_normal((m, n_obs)))
        hits += int(np.count_nonzero(np.abs(draws.mean(axis=1) - model.mean) > radius))
        done += m
    return hits / trials


def subgaussian_tail(xi: float, t: float) -> float:
    """Two-sided sub-Gaussian tail at the confidence radius: ``2 t**-(xi+1)``."""
    return 2.0 * math.exp(-(xi + 1.0) * math.log(t))
