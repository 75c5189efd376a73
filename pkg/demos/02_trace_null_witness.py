"""
An independent family for the trace of the null ideal
=====================================================

Members ``A_n`` are small (value ``2^-m``) and pairwise disjoint, yet the
union of any ``2^m`` of them has value above one half.  The union value is
computed three ways.
"""
from pideals import summable_like_check, trace_null_submeasure, trace_null_witness_family
from pideals.witness import union_table

phi = trace_null_submeasure()
fam = trace_null_witness_family(m=3, T=8)
for n in range(3):
    print(f"phi(A_{n}) = {phi(fam.member(n))}  ({len(fam.member(n))} nodes)")

# closed form, inclusion-exclusion and leaf-mask popcount side by side
for row in union_table(fam):
    print(row)

rep = summable_like_check(phi, fam, epsilon="1/2", delta="1/4", k=8)
print("summable-like with eps=1/2:", rep.passed, rep.values)

# larger m: the symbolic mode uses exchangeability instead of materializing sets
big = trace_null_witness_family(delta="1/16", T=40)
rep = summable_like_check(phi, big, epsilon="1/2")
print(f"m={big.m}, k={big.k}, mode={big.mode}:", rep.passed, rep.notes)
