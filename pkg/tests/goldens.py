"""Bound values computed with an independent 50-digit mpmath transcription.

Parameters follow the star experiment: ten Gaussian arms with sigma 5 and
gaps (55, 45, 45, 35, 25, 25, 15, 5, 3, 0), xi = 1.01, zeta = e, c = 1,
T = 1000; ``d`` is the agent degree.
"""

KAPPA_E_SIGMA1 = 0.23500371220159449
TAIL_D0_T1000 = 6.4466923229631981e-6
ETA_S5_D5_T1000 = 111.07670488603276
PULL_S5_D5_DEG5_T1000 = 307.3856822048912
UCB_UNIT = 1.414213562373095
UCB_REF = 93.726202907888149

STAR = {
    0: dict(sampling=51131.126403569776, obs_as_printed=89.355719069994955, obs_corrected=0.0,
            total_as_printed=49436.352540070856, lemma2=2189.490711960599,
            thm2_as_printed=1832.0678356806192, thm2_corrected=2189.490711960599),
    1: dict(sampling=51392.86997499936, obs_as_printed=3788.0712637611366, obs_corrected=4145.4941400411164,
            total_as_printed=53396.811656191582, lemma2=2198.8017480984103,
            thm2_as_printed=1841.3788718184305, thm2_corrected=2198.8017480984103),
    5: dict(sampling=51807.723720520079, obs_as_printed=18738.708564361547, obs_corrected=20883.245822041425,
            total_as_printed=68762.302702312711, lemma2=2213.5593912197007,
            thm2_as_printed=1856.1365149397209, thm2_corrected=2213.5593912197007),
}
