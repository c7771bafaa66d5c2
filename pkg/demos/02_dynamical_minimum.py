"""
Minimum of a dynamical Markov spectrum
======================================

On the full 2-shift the Gauss potential reads a bi-infinite sequence as
a_0 + [0; a_1, a_2, ...] + [0; a_-1, a_-2, ...]. Its Markov spectrum
starts at sqrt(5), attained on the fixed point (..., 1, 1, 1, ...), and
the next cycle value is 2 sqrt(2), so the minimum is isolated.
"""

from fractions import Fraction

import numpy as np

from dynspectra.engine import min_markov, periodic_spectrum_sample
from dynspectra.potentials import GaussPotential, cylinder_perturbation, perturb
from dynspectra.symbolic import SubshiftOfFiniteType

S = SubshiftOfFiniteType.full_shift(2)
f = GaussPotential(20)

report = min_markov(S, f)
print("minimizing cycle:", report.minimizing_cycle.cycle)
print("min enclosure:   ", report.min_value)
print("exact value:     ", report.minimizing_cycle.exact_value())
print("second cycle:    ", report.second_cycle.cycle, report.second_value)
print("isolation gap:   ", report.gap)

# periodic orbits up to period 6, sorted by Markov value
for v in periodic_spectrum_sample(S, f, 6)[:8]:
    print(f"{v.exact.decimal(10):>14}  {', '.join(str(c) for c in v.cycles)}")

# a small random perturbation keyed on 5-cylinders keeps the minimum isolated
spec = cylinder_perturbation(S, 5, Fraction(1, 50), np.random.default_rng(0))
g = perturb(f, spec)
r2 = min_markov(S, g)
print("perturbed minimum:", r2.minimizing_cycle.cycle, r2.min_value, "gap", r2.gap)
