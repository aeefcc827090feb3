"""Watch the narrow-bump symbol blow up on M^{0,1/2}_{1/2,1}.

Prints ||f_l||, ||sigma(X,D) f_l|| and their ratio for each l, then the
fitted log-log slopes.  At p = 1 the same ratio stays flat.

    python3 demos/counterexample_growth.py
"""

from alphamod import CounterexampleParams
from alphamod.harness import exp_counterexample

params = CounterexampleParams(alpha=0.5, eps=0.25)
for p in (0.5, 1.0):
    rep = exp_counterexample(params, p=p, q=1.0, s=0.0, ells=range(2, 25))
    print(f"p = {p}")
    print(f"{'l':>4} {'||f_l||':>12} {'||sigma f_l||':>14} {'ratio':>10}")
    for r in rep.records:
        print(f"{r['index']:>4} {r['norm_f']:12.4e} {r['value']:14.4e} {r['ratio']:10.4f}")
    for key in ("norm_f", "norm_sigma_f", "ratio"):
        print(f"  slope[{key}] = {rep.fits[key]['slope']:+.3f}")
    print(f"  conclusion: {rep.fits['conclusion']}\n")
