"""Centres, radii and overlap of alpha-covers, and the partition they induce.

    python3 demos/cover_tour.py
"""

import numpy as np

from alphamod import CoverParams, make_cover, verify_cover

for alpha in (0.0, 0.3, 0.5, 0.7):
    cover = make_cover(CoverParams(alpha, 1, k_max=32))
    rep = verify_cover(cover)
    print(f"alpha={alpha}: overlap {cover.overlap}, defect {rep.partition_defect:.1e}, "
          f"C'_1..3 = {[round(d['C_prime'], 2) for d in rep.derivative_constants]}")
    for k in (0, 1, 4, 16):
        print(f"   k={k:>2}  centre {float(cover.center(k)):9.2f}  scale {cover.scale(k):7.2f}")

cover = make_cover(CoverParams(0.5, 1, k_max=32))
xi = np.linspace(0, 60, 13)
print("\neta_k(xi) at alpha=0.5 for k = 0..6")
for x in xi:
    vals = [float(np.squeeze(cover.eta((k,), np.array([[x]])))) for k in range(7)]
    print(f"xi={x:5.1f}  " + " ".join(f"{v:5.2f}" for v in vals))
