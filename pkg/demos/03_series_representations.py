"""
Ideals from series in Banach spaces
===================================

Represent a sup of measures in l-infinity, normalize a c0 sequence, and
compare a signed sequence with the submeasures built from it.
"""
import random

from pideals import (bounded_columns_to_gdensity, c0_normal_form, ellinf_representation,
                     induced_submeasure, nonpathological_envelope, partial_sum,
                     sup_of_measures)
from pideals.core import FiniteSupportMeasure
from pideals.series import all_subsets, dense_tail_sequence, explicit_sequence, zinc0_sequence

# l-infinity representation: ||s_h(F)||_sup equals phi(F)
phi = sup_of_measures([{0: "1/2", 3: 1}, {1: 2, 3: "1/3"}])
h = ellinf_representation(phi)
for F in [(0,), (0, 3), (1, 3), (0, 1, 3)]:
    print(F, partial_sum(h, F).norm(), phi(F))

# summing a dyadic block of the zinc0 sequence lands on one unit vector
print("zinc0 over [2,4):", partial_sum(zinc0_sequence(), range(2, 4)))

# entries below 2^-n are dropped by the c0 normal form
g = c0_normal_form(dense_tail_sequence(8))
print("dense tail after normal form:", [g(n) for n in range(4)])

# a signed sequence: induced submeasure and its non-pathological envelope
rng = random.Random(0)
terms = [{k: rng.randint(-4, 4) for k in range(2)} for _ in range(5)]
s = explicit_sequence(terms, "ell1")
tilde = induced_submeasure(s)
universe = list(all_subsets(range(5)))
psi = nonpathological_envelope(s, universe)
worst = max(psi(F) / tilde(F) for F in universe if tilde(F))
print("largest psi / phi~ ratio on the universe:", worst, "(at most 2)")

# measures with bounded supports become a generalized density submeasure
cols = [FiniteSupportMeasure({0: 1, 1: 1}), FiniteSupportMeasure({1: 2, 3: 1}),
        FiniteSupportMeasure({5: "1/2"})]
gd, part = bounded_columns_to_gdensity(cols)
print("cuts:", part.cuts, "value on {1,3,5}:", gd([1, 3, 5]),
      "sup of columns:", sup_of_measures(cols)([1, 3, 5]))
