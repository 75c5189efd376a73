"""
Submeasures from families of sets
=================================

``phi^f_F(A) = sup over F in the family of the f-weight of A & F``.  Four
families recover four named submeasures.  Then a greedy heavy-branch search
on a tree mass.
"""
import random
from fractions import Fraction

from pideals import FamilySpec, heavy_branch_search, phi_family
from pideals.masses import DyadicBlockMass, DyadicLevel, Harmonic
from pideals.witness import LevelMass
from pideals.zoo import (density_submeasure, farah_submeasure, summable_submeasure,
                         trace_null_submeasure)

pairs = {
    "all-finite": (phi_family(Harmonic(), FamilySpec("all-finite")),
                   summable_submeasure(Harmonic())),
    "levels": (phi_family(DyadicBlockMass("pow2"), FamilySpec("levels")),
               density_submeasure()),
    "antichains": (phi_family(DyadicLevel(), FamilySpec("antichains", "tree")),
                   trace_null_submeasure()),
    "capped-levels": (phi_family(DyadicBlockMass("recip-square"),
                                 FamilySpec("capped-levels", "omega", "n")),
                      farah_submeasure()),
}
rng = random.Random(0)
sample = [tuple(sorted(rng.sample(range(1024), 30))) for _ in range(200)]
for name, (a, b) in pairs.items():
    print(f"{name:14s} agrees on 200 sets: {all(a(A) == b(A) for A in sample)}")

# mass 2^-L on level L: each piece needs more than one level of a cone
res = heavy_branch_search(LevelMass(lambda L: Fraction(1, 2 ** L)), depth=12)
print(res.to_dict())
