"""Trading exact rationals for certified floats on large n.

The exact check for n = 2000 builds 2001 rationals with denominators of
about 6600 digits.  The certified path keeps a float64 enclosure of each
q_m instead, decides nearly every comparison from the enclosures, and only
falls back to exact arithmetic when two enclosures overlap.

Run:  python3 demos/03_certified_versus_exact.py
"""

import time
from fractions import Fraction

import numpy as np

from chvatal_verify import certified_q_table, certified_theorem_check, q_table, theorem_check

# %% How tight are the enclosures?
n = 400
lo, hi = certified_q_table(n, 53)
exact = q_table(n).q
rel = np.array([float((Fraction(h) - Fraction(l)) / q) for l, h, q in zip(lo, hi, exact)])
print(f"n={n}: all exact values inside their enclosures:",
      all(Fraction(l) <= q <= Fraction(h) for l, h, q in zip(lo, hi, exact)))
print(f"relative width: median {np.median(rel):.1e}, max {rel.max():.1e}")

# Low precision widens the boxes; the verdict stays right, fallbacks rise
for p in (53, 16, 10):
    res = certified_theorem_check(n, p)
    print(f"precision {p:2d}: verdict matches exact? {res.verdict == theorem_check(n)}, "
          f"fallback fraction {float(res.fallback_fraction):.4f}, settled exactly {res.exact}")

# %% Wall time
for n in (500, 1000, 2000):
    t0 = time.perf_counter()
    exact_v = theorem_check(n)
    t1 = time.perf_counter()
    cert = certified_theorem_check(n, 53)
    t2 = time.perf_counter()
    print(f"n={n}: exact {t1 - t0:6.2f} s, certified {t2 - t1:5.3f} s, "
          f"agree={cert.verdict == exact_v}, fallbacks={cert.refined}")
