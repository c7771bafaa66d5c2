"""
The classical spectrum below 3
==============================

Markov triples x <= y <= z solving x^2 + y^2 + z^2 = 3xyz give the
Lagrange values sqrt(9 - 4/z^2). Each value is also the Lagrange number
of a periodic continued fraction, so the two routes can be compared
exactly.
"""

from dynspectra.classical import (classical_lagrange_below_3, lagrange_number, lagrange_routes,
                                  markov_triples)

triples = markov_triples(200)
print("Markov triples with z <= 200:")
for t in triples:
    print("   ", t.as_tuple())

# the head of the spectrum, as exact surds
for value in classical_lagrange_below_3(30):
    print(f"{str(value):>16}  ~ {value.decimal(12)}")

# the same numbers from periodic continued fractions
for period in [(1,), (2,), (2, 2, 1, 1)]:
    print(period, "->", lagrange_number(period).decimal(12))

# every Markov number gets a period; the two routes agree exactly
rows = lagrange_routes(200)
print(f"{sum(r['agree'] for r in rows)} of {len(rows)} Markov numbers agree across routes")
