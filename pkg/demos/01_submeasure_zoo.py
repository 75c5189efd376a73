"""
The submeasure zoo
==================

Evaluate the named submeasures on finite sets, check the axioms and read
off tail verdicts for infinite rule-generated sets.
"""
from pideals import (exh_verdict, exhaustive_axiom_check, farah_submeasure, fin_verdict,
                     summable_submeasure, tail_matrix, trace_null_submeasure)
from pideals.catalog import NAMED_PRESETS, submeasure_from_dict
from pideals.masses import Harmonic
from pideals.sets import Arithmetic, Geometric, TreeRule
from pideals.tree import encode

# every value is an exact Fraction
harmonic = summable_submeasure(Harmonic())
print("harmonic on {0,1,2,3}:", harmonic([0, 1, 2, 3]))
print("Farah on [8,16):", farah_submeasure()(range(8, 16)))
print("Farah on {8,9}:", farah_submeasure()([8, 9]))

# tree sets are sets of length-lex codes
tr = trace_null_submeasure()
print("trace-null on {0, 00}:", tr([encode("0"), encode("00")]))

# axioms: all pairs of subsets of a 10-point window, for each preset
for name in NAMED_PRESETS:
    rep = exhaustive_axiom_check(submeasure_from_dict({"preset": name}), range(10))
    print(f"{name:20s} axioms ok={rep.ok} pairs={rep.checked}")

# tails of the even numbers under the harmonic submeasure
tm = tail_matrix(harmonic, Arithmetic(0, 2), cutoffs=(0, 16, 256), horizon=1 << 12)
for cutoff, value in tm.rows():
    print(f"  phi(A & [{cutoff}, 4096)) = {float(value):.4f}")

# the powers of two: certified small tail
v = exh_verdict(harmonic, Geometric(2), "1/100", horizon=1 << 12)
print("powers of two in Exh:", v.status, "certified" if v.certified else "")

# all of omega: partial sums beat the bar, so it is outside Fin
v = fin_verdict(harmonic, Arithmetic(0, 1), horizon=1 << 8, bar=5)
print("omega in Fin:", v.status, "partial sum", float(v.value))

# the spine of zeros has a certified vanishing trace-null tail
v = exh_verdict(tr, TreeRule("spine"), "1/1000", horizon=1 << 14)
print("spine in tr(N):", v.status, v.certified)
