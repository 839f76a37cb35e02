"""Command line entry point: ``bandit-net {run,bounds,compare}``.

Exit status is 0 on success, 2 for config or usage errors and 3 when a
simulation result breaks an accounting invariant.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import analysis as an
from .config import DEFAULT_CONFIG, ConfigError, load_config
from .errors import InvariantError
from .policy import ObservationStrategy, StrategyKind
from .report import RUN_COLUMNS, csv_text, fmt, run_rows, svg_chart
from .sim import check_invariants, compare_strategies, run_episode, run_monte_carlo

log = logging.getLogger("bandit_net")

SWEEP_PARAMS = ("T", "xi", "zeta", "c", "dk")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", nargs="?", default=str(DEFAULT_CONFIG), help="scenario config (default: bundled star6.config)")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--cost", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--p", type=float, help="observation probability for the probabilistic strategy")
    p.add_argument("--zeta", type=float)
    p.add_argument("--mode", choices=an.MODES)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandit-net", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo ensemble to CSV (and optional SVG)")
    _add_common(run)
    run.add_argument("--strategy", choices=[k.value for k in StrategyKind])
    run.add_argument("--csv", dest="csv_path")
    run.add_argument("--svg", dest="svg_path")
    run.add_argument("--log-every", type=int)

    bounds = sub.add_parser("bounds", help="tabulate the closed-form bounds over a parameter sweep")
    _add_common(bounds)
    bounds.add_argument("--sweep", required=True, help="param=lo:hi:steps with param in " + ",".join(SWEEP_PARAMS))
    bounds.add_argument("--agent", type=int, default=1, help="1-based agent whose degree is used")
    bounds.add_argument("--csv", dest="csv_path", help="write here instead of stdout")

    cmp_ = sub.add_parser("compare", help="rank the four observation strategies on one scenario")
    _add_common(cmp_)
    return parser


def _load(args, **extra):
    overrides = dict(
        runs=args.runs,
        seed=args.seed,
        horizon=args.horizon,
        cost=args.cost,
        xi=args.xi,
        p=args.p,
        zeta=args.zeta,
        mode=args.mode,
        **extra,
    )
    return load_config(args.config).with_overrides(**overrides)


def _verify(result, scenario) -> None:
    t = np.arange(1, scenario.horizon + 1)
    for name in ("mean_sampling_regret", "mean_observation_regret"):
        if (np.diff(getattr(result, name), axis=1) < 0).any():
            raise InvariantError(f"{name} is not nondecreasing")
    deg = scenario.graph.degrees
    for k, s in enumerate(scenario.strategies):
        ro = result.mean_observation_regret[k]
        if s.kind is StrategyKind.ALWAYS and not (ro == scenario.cost * (deg[k] * t)).all():
            raise InvariantError(f"agent {k + 1}: always-observe cost differs from c*d*t")
        if s.kind is StrategyKind.NEVER and ro.any():
            raise InvariantError(f"agent {k + 1}: never-observe agent paid observation cost")
    check_invariants(scenario, run_episode(scenario, 0))


def cmd_run(args) -> int:
    cfg = _load(args, strategy=args.strategy, csv_path=args.csv_path, svg_path=args.svg_path, log_every=args.log_every)
    scenario = cfg.build()
    out, bounds = cfg.section("output"), cfg.section("bounds")
    log.info("running %d episodes of %d rounds", scenario.runs, scenario.horizon)
    result = run_monte_carlo(scenario, jobs=args.jobs)
    _verify(result, scenario)
    rows = run_rows(result, int(out["log_every"]), float(bounds["zeta"]), bounds["mode"])
    Path(out["csv_path"]).write_text(csv_text(rows, RUN_COLUMNS), encoding="utf-8")
    if out.get("svg_path"):
        Path(out["svg_path"]).write_text(svg_chart(rows), encoding="utf-8")
    log.info("wrote %s", out["csv_path"])
    return 0


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    try:
        name, rng = text.split("=", 1)
        lo, hi, steps = rng.split(":")
        values = np.linspace(float(lo), float(hi), int(steps))
    except ValueError:
        raise ConfigError(f"malformed sweep {text!r}; expected param=lo:hi:steps") from None
    if name not in SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter {name!r}; choose from {', '.join(SWEEP_PARAMS)}")
    if name in ("T", "dk"):
        values = np.rint(values).astype(int)
    return name, values


def bound_table(base: an.BoundParams, horizon: int, name: str, values) -> tuple[list[str], list[dict]]:
    sub = [int(i) for i in base.suboptimal]
    columns = ["param", "value", "T", "xi", "zeta", "c", "dk", "nu", "kappa_min", "tail_bound"]
    columns += [f"pull_bound_arm{i + 1}" for i in sub]
    columns += ["sampling_regret_bound", "sampling_regret_bound_capped"]
    for m in an.MODES:
        columns += [f"observation_regret_bound_{m}", f"observation_regret_bound_{m}_capped"]
    for m in an.MODES:
        columns += [f"total_regret_bound_{m}", f"total_regret_bound_{m}_capped"]
    columns += ["lemma2_bound"] + [f"theorem2_bound_{m}" for m in an.MODES]
    columns += ["always_baseline_observation_regret"]

    rows = []
    for v in values:
        T = horizon
        p = base
        if name == "T":
            T = int(v)
        elif name == "xi":
            p = base.replace(xi=float(v))
        elif name == "zeta":
            p = base.replace(zeta=float(v))
        elif name == "c":
            p = base.replace(cost=float(v))
        else:
            p = base.replace(degree=int(v))
        caps = an.trivial_caps(p, T)
        nu, kappa = an.concentration_constants(p.zeta, float(p.sigma.max()))
        row = {
            "param": name,
            "value": v.item() if hasattr(v, "item") else v,
            "T": T,
            "xi": p.xi,
            "zeta": p.zeta,
            "c": p.cost,
            "dk": p.degree,
            "nu": nu,
            "kappa_min": kappa,
            "tail_bound": an.tail_bound(p, T),
            "sampling_regret_bound": an.sampling_regret_bound(p, T),
            "lemma2_bound": an.explore_trigger_bound_lemma2(p, T),
            "always_baseline_observation_regret": an.linear_baseline_observation_regret("always", p.cost, p.degree, None, T),
        }
        row["sampling_regret_bound_capped"] = min(row["sampling_regret_bound"], caps["sampling"])
        for i in sub:
            row[f"pull_bound_arm{i + 1}"] = an.suboptimal_pull_bound(p, i, T)
        for m in an.MODES:
            o = an.observation_regret_bound(p, T, m)
            tot = an.total_regret_bound(p, T, m)
            row[f"observation_regret_bound_{m}"] = o
            row[f"observation_regret_bound_{m}_capped"] = min(o, caps["observation"])
            row[f"total_regret_bound_{m}"] = tot
            row[f"total_regret_bound_{m}_capped"] = min(tot, caps["total"])
            row[f"theorem2_bound_{m}"] = an.explore_trigger_bound_theorem2(p, T, m)
        rows.append(row)
    return columns, rows


def cmd_bounds(args) -> int:
    name, values = parse_sweep(args.sweep)
    cfg = _load(args)
    scenario = cfg.build()
    if not 1 <= args.agent <= scenario.n_agents:
        raise ConfigError(f"--agent must lie in [1, {scenario.n_agents}]")
    base = an.bound_params_for(scenario, args.agent - 1, float(cfg.section("bounds")["zeta"]))
    columns, rows = bound_table(base, scenario.horizon, name, values)
    text = csv_text(rows, columns)
    if args.csv_path:
        Path(args.csv_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def compare_table(results: dict) -> list[dict]:
    """Per agent, strategies ranked by mean total regret at the horizon."""
    out = []
    any_result = next(iter(results.values()))
    for k in range(any_result.scenario.n_agents):
        stats = []
        for label, res in results.items():
            mean, se = res.group_final([k], "total")
            stats.append((mean, label, se))
        stats.sort(key=lambda s: (s[0], s[1]))
        for rank, (mean, label, se) in enumerate(stats, start=1):
            out.append({"agent": k + 1, "rank": rank, "strategy": label, "mean_total_regret": mean, "se_total_regret": se})
    return out


def cmd_compare(args) -> int:
    cfg = _load(args)
    scenario = cfg.build()
    p = cfg.section("policy").get("p")
    strategies = [
        ObservationStrategy.explore_triggered(),
        ObservationStrategy.always(),
        ObservationStrategy.never(),
        ObservationStrategy.probabilistic(0.5 if p is None else p),
    ]
    results = compare_strategies(scenario, strategies, jobs=args.jobs)
    for res in results.values():
        _verify(res, res.scenario)
    rows = compare_table(results)
    print(f"total regret at T = {scenario.horizon} over {scenario.runs} runs")
    print(f"{'agent':>5} {'rank':>4}  {'strategy':<22} {'mean':>14} {'se':>12}")
    for r in rows:
        print(f"{r['agent']:>5} {r['rank']:>4}  {r['strategy']:<22} {fmt(round(r['mean_total_regret'], 4)):>14} {fmt(round(r['se_total_regret'], 4)):>12}")
    return 0


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"run": cmd_run, "bounds": cmd_bounds, "compare": cmd_compare}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"bandit-net: config error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"bandit-net: invariant breach: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
