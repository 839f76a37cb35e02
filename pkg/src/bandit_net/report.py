"""CSV tables and static SVG charts of ensemble results."""
from __future__ import annotations

import io
from typing import Iterable, Sequence

from .analysis import (
    bound_params_for,
    observation_regret_bound,
    sampling_regret_bound,
    total_regret_bound,
)

CSV_VERSION_LINE = "# bandit-net csv v1"
RUN_COLUMNS = (
    "t",
    "agent",
    "strategy",
    "degree",
    "mean_sampling_regret",
    "se_sampling_regret",
    "mean_observation_regret",
    "se_observation_regret",
    "mean_total_regret",
    "bound_sampling",
    "bound_observation",
    "bound_total",
)


def logged_times(horizon: int, log_every: int) -> list[int]:
    times = list(range(log_every, horizon + 1, log_every))
    if not times or times[-1] != horizon:
        times.append(horizon)
    return times


def fmt(value) -> str:
    """Locale-independent shortest round-trip text for CSV cells."""
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def run_rows(result, log_every: int, zeta: float, mode: str) -> list[dict]:
    sc = result.scenario
    rows = []
    params = [bound_params_for(sc, k, zeta) for k in range(sc.n_agents)]
    for t in logged_times(sc.horizon, log_every):
        for k in range(sc.n_agents):
            p = params[k]
            rows.append(
                {
                    "t": t,
                    "agent": k + 1,
                    "strategy": sc.strategies[k].label,
                    "degree": p.degree,
                    "mean_sampling_regret": float(result.mean_sampling_regret[k, t - 1]),
                    "se_sampling_regret": float(result.se_sampling_regret[k, t - 1]),
                    "mean_observation_regret": float(result.mean_observation_regret[k, t - 1]),
                    "se_observation_regret": float(result.se_observation_regret[k, t - 1]),
                    "mean_total_regret": float(result.mean_total_regret[k, t - 1]),
                    "bound_sampling": sampling_regret_bound(p, t),
                    "bound_observation": observation_regret_bound(p, t, mode),
                    "bound_total": total_regret_bound(p, t, mode),
                }
            )
    return rows


def write_csv(rows: Iterable[dict], columns: Sequence[str], out) -> None:
    # hand-rolled so that float text is repr() regardless of locale
    out.write(CSV_VERSION_LINE + "\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(fmt(row[c]) for c in columns) + "\n")


def csv_text(rows, columns) -> str:
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _panel(series: dict, title: str, x0: float, y0: float, w: float, h: float) -> list[str]:
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = 0.0, max(max(ys), 1e-12)
    span_x = (xmax - xmin) or 1.0

    def px(x):
        return x0 + (x - xmin) / span_x * w

    def py(y):
        return y0 + h - (y - ymin) / (ymax - ymin) * h

    out = [
        f'<text x="{x0 + w / 2:.1f}" y="{y0 - 8:.1f}" text-anchor="middle" font-size="13">{title}</text>',
        f'<line x1="{x0:.1f}" y1="{y0 + h:.1f}" x2="{x0 + w:.1f}" y2="{y0 + h:.1f}" stroke="black"/>',
        f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" y2="{y0 + h:.1f}" stroke="black"/>',
        f'<text x="{x0:.1f}" y="{y0 + h + 16:.1f}" font-size="10">{xmin:g}</text>',
        f'<text x="{x0 + w:.1f}" y="{y0 + h + 16:.1f}" text-anchor="end" font-size="10">t = {xmax:g}</text>',
        f'<text x="{x0 - 4:.1f}" y="{y0 + 4:.1f}" text-anchor="end" font-size="10">{ymax:.4g}</text>',
        f'<text x="{x0 - 4:.1f}" y="{y0 + h:.1f}" text-anchor="end" font-size="10">0</text>',
    ]
    for i, (label, pts) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = y0 + 14 * i + 6
        out.append(f'<line x1="{x0 + w + 12:.1f}" y1="{ly:.1f}" x2="{x0 + w + 32:.1f}" y2="{ly:.1f}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x0 + w + 36:.1f}" y="{ly + 4:.1f}" font-size="10">{label}</text>')
    return out


def svg_chart(rows: Sequence[dict]) -> str:
    """Two panels (sampling and observation regret), one polyline per agent.

    Draws the values in ``rows`` as given, so it shows exactly the CSV series.
    """
    samp, obs = {}, {}
    for r in rows:
        label = f"agent {r['agent']} (d={r['degree']}, {r['strategy']})"
        samp.setdefault(label, []).append((r["t"], r["mean_sampling_regret"]))
        obs.setdefault(label, []).append((r["t"], r["mean_observation_regret"]))
    width, height = 820, 620
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    parts += _panel(samp, "mean cumulative sampling regret", 70, 40, 500, 220)
    parts += _panel(obs, "mean cumulative observation regret", 70, 350, 500, 220)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
