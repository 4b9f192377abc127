"""Freezes reference two-proportion z-tests and chi-square tests.

statsmodels supplies the pooled z-test, scipy the Pearson chi-square test
(no continuity correction). Output: tests/data/stats_reference.json.
"""
import json
import pathlib

import numpy as np
from scipy.stats import chi2_contingency
from statsmodels.stats.proportion import proportions_ztest

rng = np.random.default_rng(20210301)
ztests = []
while len(ztests) < 100:
    n1, n2 = (int(v) for v in rng.integers(1, 2000, size=2))
    x1, x2 = int(rng.integers(0, n1 + 1)), int(rng.integers(0, n2 + 1))
    if x1 + x2 in (0, n1 + n2):
        continue
    z, p = proportions_ztest([x1, x2], [n1, n2], alternative="two-sided")
    ztests.append({"x1": x1, "n1": n1, "x2": x2, "n2": n2, "z": float(z), "p": float(p)})

chi = []
while len(chi) < 100:
    r, c = (int(v) for v in rng.integers(2, 6, size=2))
    scale = int(rng.choice([5, 30, 200]))
    table = rng.integers(0, scale, size=(r, c))
    if (table.sum(axis=0) == 0).any() or (table.sum(axis=1) == 0).any():
        continue
    stat, p, dof, _ = chi2_contingency(table, correction=False)
    chi.append({"table": table.tolist(), "stat": float(stat), "dof": int(dof), "p": float(p)})

out = pathlib.Path(__file__).resolve().parent.parent / "data" / "stats_reference.json"
out.write_text(json.dumps({"two_proportion": ztests, "chi_square": chi}, indent=1) + "\n")
