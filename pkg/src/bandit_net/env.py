"""Stochastic reward environment: sub-Gaussian arms and their ground truth."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.special import ndtr

__all__ = ["RewardKind", "RewardModel", "Environment", "sample_reward", "sample_rewards", "gaps"]


class RewardKind(str, Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"
    BOUNDED_UNIFORM = "bounded_uniform"


@dataclass(frozen=True)
class RewardModel:
    """One arm's reward distribution.

    ``variance_proxy`` is the sub-Gaussian proxy ``sigma`` handed to the
    policy. For Gaussian arms it is the standard deviation. A bounded uniform
    arm is supported on ``[mean - half_width, mean + half_width]``; the half
    width defaults to ``variance_proxy`` and may not exceed it.
    """

    kind: RewardKind
    mean: float
    variance_proxy: float
    half_width: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RewardKind(self.kind))
        if not np.isfinite(self.mean):
            raise ValueError(f"arm mean must be finite, got {self.mean}")
        if not self.variance_proxy > 0:
            raise ValueError(f"variance_proxy must be > 0, got {self.variance_proxy}")
        if self.kind is RewardKind.BERNOULLI:
            if not 0.0 <= self.mean <= 1.0:
                raise ValueError(f"Bernoulli mean must lie in [0, 1], got {self.mean}")
            if self.variance_proxy < 0.5:
                raise ValueError("Bernoulli variance_proxy must be >= 1/2")
        if self.kind is RewardKind.BOUNDED_UNIFORM:
            if self.half_width is None:
                object.__setattr__(self, "half_width", float(self.variance_proxy))
            if not 0 < self.half_width <= self.variance_proxy:
                raise ValueError("bounded uniform half_width must lie in (0, variance_proxy]")
        elif self.half_width is not None:
            raise ValueError("half_width only applies to bounded_uniform arms")

    @classmethod
    def gaussian(cls, mean: float, sigma: float) -> "RewardModel":
        return cls(RewardKind.GAUSSIAN, float(mean), float(sigma))

    def transform(self, z):
        """Map standard normal draw(s) ``z`` to rewards of this arm.

        Every kind consumes exactly one standard normal per reward, which
        keeps stream consumption independent of the arm pulled.
        """
        if self.kind is RewardKind.GAUSSIAN:
            return self.mean + self.variance_proxy * z
        u = ndtr(z)
        if self.kind is RewardKind.BERNOULLI:
            return (u < self.mean).astype(float) if np.ndim(u) else float(u < self.mean)
        return self.mean - self.half_width + 2.0 * self.half_width * u


@dataclass(frozen=True)
class Environment:
    arms: tuple[RewardModel, ...]
    means: np.ndarray = field(init=False, repr=False, compare=False)
    sigmas: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, arms: Sequence[RewardModel]):
        arms = tuple(arms)
        if len(arms) < 1:
            raise ValueError("an environment needs at least one arm")
        object.__setattr__(self, "arms", arms)
        means = np.array([a.mean for a in arms], dtype=float)
        sigmas = np.array([a.variance_proxy for a in arms], dtype=float)
        means.flags.writeable = False
        sigmas.flags.writeable = False
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "sigmas", sigmas)

    @classmethod
    def gaussian(cls, means: Sequence[float], sigma) -> "Environment":
        sig = np.broadcast_to(np.asarray(sigma, dtype=float), (len(means),))
        return cls([RewardModel.gaussian(m, s) for m, s in zip(means, sig)])

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def optimal_arm(self) -> int:
        """0-based index of the best arm; ties go to the lowest index."""
        return int(np.argmax(self.means))

    @property
    def gaussian_only(self) -> bool:
        return all(a.kind is RewardKind.GAUSSIAN for a in self.arms)

    def rewards_from_normals(self, arm_idx: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Vectorised reward transform for arrays of arm indices and normals."""
        if self.gaussian_only:
            return self.means[arm_idx] + self.sigmas[arm_idx] * z
        out = np.empty(np.shape(z), dtype=float)
        for i, arm in enumerate(self.arms):
            mask = arm_idx == i
            if mask.any():
                out[mask] = arm.transform(z[mask])
        return out

    def _check(self, option: int) -> None:
        if not (isinstance(option, (int, np.integer)) and 0 <= option < self.n_arms):
            raise IndexError(f"arm index {option!r} out of range for {self.n_arms} arms")


def sample_reward(env: Environment, option: int, rng: np.random.Generator) -> float:
    """Draw one reward from arm ``option`` (0-based), consuming one normal."""
    env._check(option)
    return float(env.arms[option].transform(rng.standard_normal()))


def sample_rewards(env: Environment, option: int, rng: np.random.Generator, size) -> np.ndarray:
    env._check(option)
    return np.asarray(env.arms[option].transform(rng.standard_normal(size)), dtype=float)


def gaps(env: Environment) -> np.ndarray:
    """Per-arm gap to the best mean; exactly zero at the optimal arm."""
    g = env.means[env.optimal_arm] - env.means
    g[env.optimal_arm] = 0.0
    return g
