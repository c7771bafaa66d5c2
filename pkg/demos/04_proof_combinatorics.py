"""
Records, happy returns and periodic competitors
===============================================

Take a candidate sequence that keeps coming back near its own center.
Its returns are ranked by how close they come (records), classified by
which side carries the smaller potential value (happiness), and turned
into periodic competitors. Here the competitors beat the candidate, so
the candidate cannot be a minimizer.
"""

from fractions import Fraction

from dynspectra.potentials import GaussPotential
from dynspectra.prooflab import (ModelParams, deletion_surgery, periodic_competitor, power_factor_check,
                                 records, strange_positions)
from dynspectra.symbolic import BiSequence

theta = BiSequence((1,), (1, 2, 2, 1, 1, 2, 1, 1, 1, 1, 2, 1), (1,), 0)
params = ModelParams(1, -1, Fraction(9, 10), Fraction(19, 20), K=6, m=1)
f = GaussPotential(20)

analysis = records(theta, params, 15, f=f)
print(" k   d_k              weak  record  left/right happy")
for p in analysis.positions:
    fl = p.flags
    print(f"{p.k:2d}   {float(p.d.lo):.3e}   {str(p.weak_record):5} {str(p.record):6}  "
          f"{fl.left_happy}/{fl.right_happy}")
print("record chain:", analysis.records)

for mode in ("case-i", "case-ii"):
    rep = periodic_competitor(theta, mode, 1, f, params, 15)
    print(f"{mode}: period {rep.period}, value {float(rep.competitor_value.lo):.6f} "
          f"vs {float(rep.theta_value.lo):.6f}, smaller: {rep.smaller}")

# a centered gamma^(2m) factor would let us cut gamma out and lower the value
print("claim on theta (m=2):", power_factor_check(theta, 2, 8))
cut = deletion_surgery((1, 1, 1, 3, 1, 1), (3,), f)
print(f"delete the 3 from (1,1,1,3,1,1): {float(cut.original_value.lo):.6f} -> "
      f"{float(cut.surgered_value.lo):.6f}, reduced: {cut.reduced}")
# cutting is not monotone in general: an isolated 2 sits higher than a pair
cut = deletion_surgery((1, 1, 1, 2, 2, 1, 1), (2,), f)
print(f"delete one 2 from (1,1,1,2,2,1,1): reduced: {cut.reduced}")

# strange positions mark where theta leaves the orbit of a period
print("strange positions w.r.t. (1,):", strange_positions(theta, (1,)))
