import itertools
import random
from fractions import Fraction
from math import comb

import pytest

from pideals import errors
from pideals.masses import DyadicBlockMass, DyadicLevel, Harmonic, LevelPower, Residue
from pideals.sets import Geometric
from pideals.tree import decode, encode, level_of
from pideals.witness import (ExplicitTreeMass, FamilySpec, LevelMass, SpineMass,
                             WitnessFamily, antichain_max, bm_sets, cap_value,
                             covering_sample_check, density_like_search, heavy_branch_search,
                             phi_family, summable_like_check, trace_null_witness_family,
                             union_measure_formula, union_measure_inclusion_exclusion,
                             union_table)
from pideals.zoo import (density_submeasure, farah_submeasure, summable_submeasure,
                         trace_null_submeasure)

import oracles


# ---------------------------------------------------------------- trace-null family

@pytest.mark.parametrize("m", [1, 2, 3])
def test_members_have_value_two_to_minus_m(m):
    fam = trace_null_witness_family(m, T=3)
    phi = trace_null_submeasure()
    for n in range(3):
        assert phi(fam.member(n)) == Fraction(1, 2 ** m)
        assert sorted(fam.member(n)) == sorted(oracles.code_of(s)
                                               for s in oracles.witness_strings(m, n))


def test_union_three_ways_agree_with_leaf_oracle():
    m, T = 2, 4
    fam = trace_null_witness_family(m, T=T)
    phi = trace_null_submeasure()
    for r in range(1, T + 1):
        for Y in itertools.combinations(range(T), r):
            strs = [s for n in Y for s in oracles.witness_strings(m, n)]
            want = oracles.cylinder_union_measure(strs, m * T)
            assert fam.union_value(phi, Y) == want
            assert phi(fam.union(Y)) == want
            assert union_measure_formula(m, r) == want
            assert union_measure_inclusion_exclusion(m, r) == want


def test_m3_size8_value():
    fam = trace_null_witness_family(3, T=8)
    v = fam.union_value(trace_null_submeasure(), range(8))
    assert v == Fraction(11012415, 16777216) > Fraction(1, 2)
    rep = summable_like_check(trace_null_submeasure(), fam, "1/2", "1/4", 8)
    assert rep.passed


def test_union_table_columns():
    rows = union_table(trace_null_witness_family(2, T=5))
    for row in rows:
        assert row["formula"] == row["inclusion_exclusion"] == row["leaf_mask"]


def test_auto_m_from_delta():
    fam = trace_null_witness_family(delta="1/10")
    assert fam.m == 5 and Fraction(1, 2 ** fam.m) < Fraction(1, 10)
    assert fam.k == 32
    with pytest.raises(errors.SpecError):
        trace_null_witness_family()


def test_symbolic_mode_large_family():
    fam = trace_null_witness_family(5, T=40)
    assert fam.mode == "symbolic"
    rep = summable_like_check(trace_null_submeasure(), fam, "1/2", "1/16", 32)
    assert rep.passed
    assert Fraction(rep.values[0]["value"]) == 1 - Fraction(31, 32) ** 32
    with pytest.raises(errors.SpecError):
        fam.member(0)


def test_summable_like_budget_on_explicit_family():
    fam = WitnessFamily([(n,) for n in range(40)])
    with pytest.raises(errors.BudgetExceeded) as info:
        summable_like_check(summable_submeasure(Harmonic()), fam, "1/2", "1/2", 20)
    assert info.value.required == comb(40, 20)


def test_summable_ideal_fails_summable_like():
    # singletons far out: small pieces whose unions stay small
    fam = WitnessFamily([(n,) for n in range(100, 110)])
    rep = summable_like_check(summable_submeasure(Harmonic()), fam, "1/2", "1/50", 3)
    assert not rep.passed and rep.failure["condition"] == "union"


def test_family_disjointness_asserted():
    with pytest.raises(errors.SpecError):
        WitnessFamily([(1, 2), (2, 3)])


def test_density_like_search_on_density():
    fam = WitnessFamily([(2 ** n,) for n in range(1, 12)])
    rep = density_like_search(density_submeasure(), "1/2", fam)
    # each 2^n is alone in its block with weight 2^{-n}; n = 1 gives exactly 1/2
    assert rep.indices == tuple(range(1, 11))
    assert rep.value == Fraction(1, 4)


# ---------------------------------------------------------------- covering and B_m

def test_covering_farah_against_harmonic():
    rows = covering_sample_check(farah_submeasure(), Harmonic(), [Geometric(2)], 1 << 12,
                                 epsilon="1/2", bar=1)
    assert rows[0].phi_verdict.status == "tail-below"
    assert not rows[0].refutes


def test_bm_sets_example():
    res = bm_sets(Residue(0), Residue(1), 1, 40)
    assert res.set.items == tuple(n for n in range(40) if Residue(1)(n) >= 2 * Residue(0)(n))
    res = bm_sets(Harmonic(), Harmonic(2), 1, 20)
    assert res.set.items == tuple(range(20))


# ---------------------------------------------------------------- heavy branch

def test_heavy_branch_level_mass():
    h = LevelMass(lambda L: Fraction(1, 2 ** L))
    res = heavy_branch_search(h, 10, target=1)
    # pieces are disjoint, each sum exceeds the target
    seen = set()
    for F, s in zip(res.pieces, res.sums):
        assert not seen & set(F)
        seen |= set(F)
        assert s > 1 and s == sum(h(c) for c in F)
    # branch is a path from the root
    for a, b in zip(res.branch, res.branch[1:]):
        assert (b - 1) // 2 == a
    assert res.exhausted and res.reason == "depth"
    assert res.tails == [trace_null_submeasure()(
        tuple(sorted(set().union(*res.pieces[n:])))) for n in range(res.count)]


def test_heavy_branch_follows_heavy_side():
    weights = {encode("1"): 5, encode("10"): 3, encode("11"): 1, encode("0"): 1}
    res = heavy_branch_search(ExplicitTreeMass(weights), 2, target=0)
    assert [decode(c) for c in res.branch] == ["", "1", "10"]


def test_spine_mass():
    h = SpineMass(lambda L: Fraction(1), bit=0)
    assert h(encode("000")) == 1 and h(encode("010")) == 0
    res = heavy_branch_search(h, 8, target="1/2")
    assert all(decode(c) == "0" * level_of(c) for c in res.branch)


# ---------------------------------------------------------------- phi^f_F

def brute_antichain_f(f, codes):
    strs = {oracles.bits_of(c): c for c in codes}
    best = Fraction(0)
    for r in range(len(strs) + 1):
        for sub in itertools.combinations(strs, r):
            if oracles.is_antichain(sub):
                best = max(best, sum((f(strs[s]) for s in sub), Fraction(0)))
    return best


def test_antichain_dp_matches_brute_for_arbitrary_weights():
    rng = random.Random(4)
    for _ in range(150):
        w = {c: Fraction(rng.randint(0, 9), rng.randint(1, 4)) for c in range(31)}
        codes = rng.sample(range(31), rng.randint(0, 9))
        assert antichain_max(w.__getitem__, codes) == brute_antichain_f(w.__getitem__, codes)


def test_capped_levels_matches_brute():
    rng = random.Random(5)
    f = Harmonic()
    phi = phi_family(f, FamilySpec("capped-levels", "omega", 2))
    for _ in range(100):
        A = rng.sample(range(1, 32), rng.randint(0, 8))
        best = Fraction(0)
        for r in range(len(A) + 1):
            for F in itertools.combinations(A, r):
                counts = {}
                for n in F:
                    counts[n.bit_length()] = counts.get(n.bit_length(), 0) + 1
                if all(c <= 2 for c in counts.values()):
                    best = max(best, sum((f(n) for n in F), Fraction(0)))
        assert phi(A) == best


def test_family_equalities_small():
    rng = random.Random(6)
    pairs = [
        (phi_family(Harmonic(), FamilySpec("all-finite")), summable_submeasure(Harmonic())),
        (phi_family(DyadicBlockMass("pow2"), FamilySpec("levels")), density_submeasure()),
        (phi_family(DyadicLevel(), FamilySpec("antichains", "tree")), trace_null_submeasure()),
        (phi_family(DyadicBlockMass("recip-square"), FamilySpec("capped-levels", "omega", "n")),
         farah_submeasure()),
    ]
    for a, b in pairs:
        for _ in range(100):
            A = rng.sample(range(512), rng.randint(0, 30))
            assert a(A) == b(A)


def test_capped_levels_tree_formula():
    phi = phi_family(LevelPower(2), FamilySpec("capped-levels", "tree", "pow2/n"))
    for n in range(1, 8):
        level = range(2 ** n - 1, 2 ** (n + 1) - 1)
        assert phi(level) == Fraction((2 ** n) // n, n * n)


def test_family_spec_validation():
    with pytest.raises(errors.SpecError):
        FamilySpec("chains")
    with pytest.raises(errors.SpecError):
        FamilySpec("antichains", "omega")
    with pytest.raises(errors.SpecError):
        FamilySpec("capped-levels", cap="lots")
    assert cap_value("pow2/n", 0) == 0 and cap_value(3, 9) == 3
