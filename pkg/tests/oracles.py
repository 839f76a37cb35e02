"""Naive re-accounting of a recorded episode, independent of the engine.

Works from the event log and the scenario's raw ingredients (means, sigmas,
edge set) with plain Python lists and floats.
"""
import math


def replay(scenario, log):
    env, g = scenario.environment, scenario.graph
    K, N, T = g.agent_count, env.n_arms, scenario.horizon
    means = [a.mean for a in env.arms]
    sig = [a.variance_proxy for a in env.arms]
    best = max(means)
    first_best = means.index(best)
    gap = [0.0 if i == first_best else best - means[i] for i in range(N)]
    adj = [sorted(j for e in g.edges if k in e for j in e if j != k) for k in range(K)]

    n = [[0] * N for _ in range(K)]
    cnt = [[0] * N for _ in range(K)]
    tot = [[0.0] * N for _ in range(K)]
    rs = [[] for _ in range(K)]
    obs = [[] for _ in range(K)]
    problems = []
    for t in range(1, T + 1):
        row_c = [int(c) for c in log.choices[t - 1]]
        row_r = [float(r) for r in log.rewards[t - 1]]
        row_o = [bool(o) for o in log.observed[t - 1]]
        for k in range(K):
            choice = row_c[k]
            seen = [i for i in range(N) if cnt[k][i] > 0]
            if t <= N:
                if choice != (t + k) % N:
                    problems.append((t, k, "initialization order"))
            else:
                lt = math.log(t - 1)
                q = [tot[k][i] / cnt[k][i] + sig[i] * math.sqrt(2 * (scenario.xi + 1) * lt / cnt[k][i]) for i in range(N)]
                if q[choice] < max(q) - 1e-9 * abs(max(q)):
                    problems.append((t, k, "not an index maximiser"))
            exploit = choice in seen and tot[k][choice] / cnt[k][choice] == max(tot[k][i] / cnt[k][i] for i in seen)
            kind = scenario.strategies[k].kind.value
            expect = {"explore_triggered": not exploit, "always": True, "never": False}.get(kind)
            if expect is not None and row_o[k] != expect:
                problems.append((t, k, "observation decision"))
        for k in range(K):
            c = row_c[k]
            n[k][c] += 1
            cnt[k][c] += 1
            tot[k][c] += row_r[k]
            prev = obs[k][-1] if obs[k] else 0
            if row_o[k]:
                for j in adj[k]:
                    cnt[k][row_c[j]] += 1
                    tot[k][row_c[j]] += row_r[j]
                prev += len(adj[k])
            obs[k].append(prev)
            rs[k].append((rs[k][-1] if rs[k] else 0.0) + gap[c])
    return dict(
        pulls=n,
        observed=cnt,
        sums=tot,
        sampling_regret=rs,
        observation_regret=[[scenario.cost * x for x in o] for o in obs],
        problems=problems,
    )
