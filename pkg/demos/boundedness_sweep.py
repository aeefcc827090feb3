"""Operator-to-seminorm ratios for a smooth exotic symbol across (p, q, s).

    python3 demos/boundedness_sweep.py
"""

from alphamod import QuasiNormParams
from alphamod.harness import BoundednessSetup, exp_boundedness

setup = BoundednessSetup(0.5)
print(f"grid {setup.grid.describe()}, seminorm {setup.seminorm:.3f}")
for p in (0.5, 1.0, 2.0):
    for q in (0.5, 1.0, 2.0):
        for s in (-2.0, 0.0, 2.0):
            rep = exp_boundedness(QuasiNormParams(p, q, s, 0.5), setup=setup)
            print(f"p={p:<4} q={q:<4} s={s:+.0f}  slope {rep.slope:+.3f}  {rep.verdict}")

control = exp_boundedness(QuasiNormParams(0.5, 1.0, 0.0, 0.5), symbol="counterexample")
print(f"narrow-bump control at p=0.5: slope {control.slope:+.3f}  {control.verdict}")
