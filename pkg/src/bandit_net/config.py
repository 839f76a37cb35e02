"""Scenario configuration files.

Configs are TOML documents::

    horizon = 1000
    runs = 1000
    cost = 1.0
    seed = 2019                      # optional; falls back to $BANDIT_NET_SEED, then 0
    arms = [{kind = "gaussian", mean = 40.0, sigma = 5.0}, ...]

    [graph]
    kind = "star"                    # star | complete | cycle | edges
    k = 6                            # agents; edges = [[1, 2], ...] for kind = "edges"

    [policy]
    xi = 1.01
    strategy = "explore_triggered"   # or a list with one entry per agent
    p = 0.2                          # only for "probabilistic"

    [bounds]
    zeta = 2.718281828459045
    mode = "as_printed"              # or "corrected"

    [output]
    csv_path = "star6.csv"
    svg_path = "star6.svg"           # optional
    log_every = 10

Unknown keys are rejected.
"""
from __future__ import annotations

import copy
import math
import os
from pathlib import Path

import tomli
import tomli_w

from .env import Environment, RewardModel
from .graph import build_graph
from .policy import ObservationStrategy, StrategyKind
from .sim import Scenario

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "loads_config", "SEED_ENV", "DEFAULT_CONFIG"]

SEED_ENV = "BANDIT_NET_SEED"
DEFAULT_CONFIG = Path(__file__).with_name("data") / "star6.config"

_TOP = {"arms", "graph", "policy", "cost", "horizon", "runs", "seed", "bounds", "output"}
_SECTIONS = {
    "graph": {"kind", "k", "edges"},
    "policy": {"xi", "strategy", "p"},
    "bounds": {"zeta", "mode"},
    "output": {"csv_path", "svg_path", "log_every"},
}
_ARM_KEYS = {"kind", "mean", "sigma", "half_width"}
_REQUIRED = ("arms", "graph", "horizon")
_DEFAULTS = {
    "cost": 1.0,
    "runs": 1,
    "policy": {"xi": 1.01, "strategy": StrategyKind.EXPLORE_TRIGGERED.value},
    "bounds": {"zeta": math.e, "mode": "as_printed"},
    "output": {"csv_path": "results.csv", "log_every": 10},
}


class ConfigError(ValueError):
    pass


def _reject_unknown(found, allowed, where):
    extra = sorted(set(found) - allowed)
    if extra:
        raise ConfigError(f"unknown key {where}{extra[0]!r}")


def _validate(doc: dict) -> None:
    _reject_unknown(doc, _TOP, "")
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}")
    for sec, allowed in _SECTIONS.items():
        if sec in doc:
            if not isinstance(doc[sec], dict):
                raise ConfigError(f"key {sec!r} must be a table")
            _reject_unknown(doc[sec], allowed, f"{sec}.")
    if not isinstance(doc["arms"], list) or not doc["arms"]:
        raise ConfigError("key 'arms' must be a non-empty list of tables")
    for i, arm in enumerate(doc["arms"]):
        if not isinstance(arm, dict):
            raise ConfigError(f"arms[{i}] must be a table")
        _reject_unknown(arm, _ARM_KEYS, f"arms[{i}].")
        for key in ("kind", "mean", "sigma"):
            if key not in arm:
                raise ConfigError(f"missing key arms[{i}].{key}")


class ScenarioConfig:
    """A validated config document with defaults filled in on access."""

    def __init__(self, doc: dict, source: str | None = None):
        _validate(doc)
        self.doc = doc
        self.source = source
        try:
            self.build()
        except ConfigError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def __eq__(self, other):
        return isinstance(other, ScenarioConfig) and self.doc == other.doc

    def section(self, name: str) -> dict:
        out = dict(_DEFAULTS.get(name, {}))
        out.update(self.doc.get(name, {}))
        return out

    def get(self, key: str):
        if key == "seed":
            if "seed" in self.doc:
                return int(self.doc["seed"])
            env = os.environ.get(SEED_ENV)
            return int(env) if env not in (None, "") else 0
        return self.doc.get(key, _DEFAULTS.get(key))

    def with_overrides(self, **overrides) -> "ScenarioConfig":
        """Copy with ``None``-filtered overrides applied; keys mirror the CLI flags."""
        doc = copy.deepcopy(self.doc)
        for key, value in overrides.items():
            if value is None:
                continue
            if key in ("runs", "seed", "horizon", "cost"):
                doc[key] = value
            elif key in ("strategy", "p", "xi"):
                doc.setdefault("policy", {})[key] = value
            elif key in ("zeta", "mode"):
                doc.setdefault("bounds", {})[key] = value
            elif key in ("csv_path", "svg_path", "log_every"):
                doc.setdefault("output", {})[key] = value
            else:
                raise ConfigError(f"unknown override {key!r}")
        return ScenarioConfig(doc, self.source)

    def strategies(self, n_agents: int) -> tuple[ObservationStrategy, ...]:
        pol = self.section("policy")
        names = pol["strategy"]
        if isinstance(names, str):
            names = [names] * n_agents
        if len(names) != n_agents:
            raise ConfigError(f"policy.strategy lists {len(names)} entries for {n_agents} agents")
        p = pol.get("p")
        out = []
        for name in names:
            try:
                kind = StrategyKind(name)
            except ValueError:
                raise ConfigError(f"policy.strategy: unknown strategy {name!r}") from None
            if kind is StrategyKind.PROBABILISTIC and p is None:
                raise ConfigError("policy.p is required for the probabilistic strategy")
            out.append(ObservationStrategy.parse(name, p))
        return tuple(out)

    def build(self) -> Scenario:
        arms = [
            RewardModel(a["kind"], float(a["mean"]), float(a["sigma"]), a.get("half_width"))
            for a in self.doc["arms"]
        ]
        graph = build_graph(self.doc["graph"])
        bounds = self.section("bounds")
        if bounds["mode"] not in ("as_printed", "corrected"):
            raise ConfigError(f"bounds.mode must be 'as_printed' or 'corrected', got {bounds['mode']!r}")
        if not float(bounds["zeta"]) > 1:
            raise ConfigError("bounds.zeta must be > 1")
        if int(self.section("output")["log_every"]) < 1:
            raise ConfigError("output.log_every must be >= 1")
        return Scenario(
            environment=Environment(arms),
            graph=graph,
            xi=float(self.section("policy")["xi"]),
            strategy=self.strategies(graph.agent_count),
            cost=float(self.get("cost")),
            horizon=int(self.get("horizon")),
            runs=int(self.get("runs")),
            master_seed=self.get("seed"),
        )

    def dumps(self) -> str:
        return tomli_w.dumps(self.doc)


def loads_config(text: str, source: str | None = None) -> ScenarioConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        where = f"{source}: " if source else ""
        raise ConfigError(f"{where}{exc}") from exc
    return ScenarioConfig(doc, source)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_config(text, str(path))
