"""How often does a sample mean leave its confidence radius?

With 50 draws and the radius used at t = 200, the frequency should sit under
the concentration bound and the plain sub-Gaussian tail.
"""
import math

import numpy as np

from bandit_net import analysis as an
from bandit_net.env import RewardModel

model = RewardModel.gaussian(0.0, 5.0)
freq = an.deviation_frequency(model, n_obs=50, t=200, xi=1.01, trials=100_000, rng=np.random.default_rng(6))
p = an.BoundParams(xi=1.01, zeta=math.e, sigma=[5.0], gaps=[0.0])
print(f"empirical frequency      {freq:.2e}")
print(f"concentration bound      {min(1.0, an.tail_bound(p, 200)):.2e}")
print(f"sub-Gaussian tail        {an.subgaussian_tail(1.01, 200):.2e}")

# with a much smaller t the radius shrinks and deviations become visible
freq_small = an.deviation_frequency(model, 50, 1.5, 1.01, 100_000, np.random.default_rng(7))
print(f"t = 1.5: frequency {freq_small:.3f} vs sub-Gaussian tail {an.subgaussian_tail(1.01, 1.5):.3f}")
