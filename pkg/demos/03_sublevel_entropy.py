"""
Entropy of sublevel sets
========================

Lambda_t keeps the points whose whole orbit stays at or below t. It is
empty below the minimum sqrt(5), a single periodic orbit (entropy 0)
until the second cycle value 2 sqrt(2), and then it starts to grow.
The curve is written to CSV, and plotted when matplotlib is around.
"""

import sys
from fractions import Fraction
from pathlib import Path

from dynspectra.engine import entropy_curve
from dynspectra.io import plot_entropy_csv, write_entropy_csv
from dynspectra.potentials import GaussPotential
from dynspectra.symbolic import SubshiftOfFiniteType

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("sublevel_entropy.csv")

S = SubshiftOfFiniteType.full_shift(2)
grid = [Fraction(22, 10) + Fraction(i, 50) for i in range(51)]
points = entropy_curve(S, GaussPotential(20), grid)

for p in points[::5]:
    h = "empty" if p.empty else f"[{float(p.entropy.lo):.6f}, {float(p.entropy.hi):.6f}]"
    print(f"t = {float(p.t):.2f}   h(t) in {h}   ({p.node_count} windows)")

write_entropy_csv(points, out)
print("wrote", out)
try:
    plot_entropy_csv(out, out.with_suffix(".png"), title="Gauss potential on the full 2-shift")
    print("wrote", out.with_suffix(".png"))
except ImportError:
    pass
