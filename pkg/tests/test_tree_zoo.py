import itertools
import random
from fractions import Fraction

import pytest

from pideals import errors
from pideals.core import exh_verdict, fin_verdict
from pideals.masses import (DyadicBlockMass, DyadicLevel, GeometricMass, Harmonic, LevelPower,
                            Periodic, Prefix, PSeries, Residue, mass_from_dict, partial_mass)
from pideals.sets import Arithmetic, BlockSelector, DyadicPartition, Geometric, TreeRule
from pideals.tree import (TreeNode, cone_range, decode, encode, is_ancestor, leaf_mask,
                          level_of, minimal_antichain, minimal_codes, parent,
                          witness_leaf_mask)
from pideals.zoo import (capped_count_rule, density_columns, density_from_measures,
                         density_submeasure, empty_otimes_fin_submeasure, farah_submeasure,
                         generalized_density_from_blocks, generalized_density_submeasure,
                         intersection_profile, j0_masses, pair, properness,
                         summable_submeasure, trace_null_submeasure,
                         tree_density_submeasure, tree_summable_submeasure, unpair)

import oracles
from oracles import brute_antichain_value, cylinder_union_measure


# ---------------------------------------------------------------- tree codes

def test_codes_match_oracle():
    for c in range(2000):
        s = decode(c)
        assert s == oracles.bits_of(c)
        assert encode(s) == c == oracles.code_of(s)
        assert level_of(c) == len(s)


def test_children_and_parent():
    for c in range(500):
        assert decode(2 * c + 1) == decode(c) + "0"
        assert decode(2 * c + 2) == decode(c) + "1"
        assert parent(2 * c + 1) == parent(2 * c + 2) == c


def test_is_ancestor_is_proper_prefix():
    for a, b in itertools.product(range(63), repeat=2):
        sa, sb = decode(a), decode(b)
        assert is_ancestor(a, b) == (len(sa) < len(sb) and sb.startswith(sa))


def test_cone_range():
    assert [decode(c) for c in cone_range(encode("1"), 2)] == ["100", "101", "110", "111"]


def test_enumeration_weight_bound():
    # 2^{-|e(n)|} lies in [1/(2(n+1)), 2/(n+1)]
    for n in range(5000):
        w = DyadicLevel()(n)
        assert Fraction(1, 2 * (n + 1)) <= w <= Fraction(2, n + 1)


def test_tree_node_validation():
    assert TreeNode("0110").code == encode("0110")
    with pytest.raises(errors.SpecError):
        TreeNode("012")


def test_minimal_antichain_example():
    nodes = ["0", "01", "00", "1"]
    assert [str(t) for t in minimal_antichain(nodes)] == ["0", "1"]


def test_trace_null_equals_brute_antichain_max():
    rng = random.Random(11)
    phi = trace_null_submeasure()
    for _ in range(300):
        codes = tuple(sorted(rng.sample(range(31), rng.randint(0, 9))))
        assert phi(codes) == brute_antichain_value(codes)


def test_minimal_codes_form_antichain():
    rng = random.Random(2)
    for _ in range(200):
        codes = rng.sample(range(255), 12)
        mins = minimal_codes(codes)
        assert oracles.is_antichain([decode(c) for c in mins])
        # every code has an ancestor-or-self among the minimal ones
        for c in codes:
            assert any(c == m or is_ancestor(m, c) for m in mins)


def test_leaf_mask_measure_matches_cylinder_union():
    rng = random.Random(5)
    for _ in range(100):
        codes = rng.sample(range(63), rng.randint(0, 6))
        depth = 6
        strs = [decode(c) for c in codes]
        assert leaf_mask(codes, depth).measure == cylinder_union_measure(strs, depth)


def test_leaf_mask_identity_with_trace_null():
    # the union of cylinders has the measure of the minimal antichain
    rng = random.Random(6)
    phi = trace_null_submeasure()
    for _ in range(200):
        codes = tuple(sorted(rng.sample(range(127), rng.randint(1, 10))))
        assert leaf_mask(codes, 7).measure == phi(codes)


def test_witness_leaf_mask_from_coordinates_matches_nodes():
    for m, n, depth in [(1, 0, 3), (2, 1, 6), (3, 1, 9), (2, 2, 8)]:
        nodes = TreeRule("witness", m=m, n=n).elements()
        assert witness_leaf_mask(m, n, depth) == leaf_mask(nodes, depth)
        assert witness_leaf_mask(m, n, depth).measure == Fraction(1, 2 ** m)


def test_leaf_mask_depth_limits():
    with pytest.raises(errors.SpecError):
        leaf_mask([encode("0101")], 3)
    with pytest.raises(errors.SpecError):
        witness_leaf_mask(3, 9, 27)


# ---------------------------------------------------------------- masses

def test_mass_values():
    assert Harmonic()(3) == Fraction(1, 4)
    assert PSeries(2)(2) == Fraction(1, 9)
    assert GeometricMass("1/3", 2)(2) == Fraction(2, 9)
    assert DyadicBlockMass("pow2")(5) == Fraction(1, 4)
    assert DyadicBlockMass("recip", "n")(9) == Fraction(1, 3)
    assert DyadicBlockMass("recip", "n")(11) == 0
    assert LevelPower(2)(encode("011")) == Fraction(1, 9)
    assert Periodic(("1", "0"))(4) == 1 and Prefix(("1/2",))(3) == 0


def test_residue_classes_partition_omega():
    hs = j0_masses(12)
    for n in range(2000):
        hits = [k for k, h in enumerate(hs) if h(n)]
        assert len(hits) <= 1
        if n < 2 ** 11:
            assert hits == [((n + 1) & -(n + 1)).bit_length() - 1]


def test_mass_round_trip():
    for h in [Harmonic(2), PSeries(3), GeometricMass("1/4"), DyadicBlockMass("recip-square"),
              DyadicLevel(), LevelPower(3), Periodic(("1/2", "0", "1")), Prefix(("1", "2")),
              Residue(3)]:
        g = mass_from_dict(h.to_dict())
        assert all(g(n) == h(n) for n in range(64))


def test_mass_validation():
    with pytest.raises(errors.SpecError):
        GeometricMass(1)
    with pytest.raises(errors.SpecError):
        mass_from_dict({"rule": "zeta"})
    with pytest.raises(errors.SpecError):
        summable_submeasure(Prefix(("0",)))


@pytest.mark.parametrize("h,A", [(Harmonic(), Geometric(2)), (PSeries(2), Arithmetic(0, 1)),
                                 (GeometricMass("1/2"), Arithmetic(1, 3)),
                                 (DyadicBlockMass("pow2"), BlockSelector(DyadicPartition(), 1))])
def test_tail_certificates_bound_truncated_sums(h, A):
    # the certificate for phi(A minus H) must dominate the partial sum up to a far horizon
    H, far = 64, 1 << 14
    cert = h.tail_sum(A, H)
    assert cert is not None
    assert sum((h(n) for n in A.below(far) if n >= H), Fraction(0)) <= cert


# ---------------------------------------------------------------- presets

def test_summable_examples():
    phi = summable_submeasure(Harmonic())
    assert phi([0, 1, 2, 3]) == Fraction(25, 12)
    assert properness(Harmonic(), 4) == Fraction(25, 12)
    assert partial_mass(PSeries(2), 3) == 1 + Fraction(1, 4) + Fraction(1, 9)


def test_density_matches_block_counting():
    phi = density_submeasure("dyadic", "uniform")
    rng = random.Random(8)
    for _ in range(300):
        F = rng.sample(range(1, 256), rng.randint(1, 20))
        want = max(Fraction(sum(1 for k in F if 2 ** n <= k < 2 ** (n + 1)), 2 ** n)
                   for n in range(8))
        assert phi(F) == want
    assert phi([4, 5]) == Fraction(1, 2)


def test_density_columns_agree_with_preset():
    cols = density_columns("dyadic", "uniform", blocks=6)
    a, b = density_from_measures(cols), density_submeasure()
    rng = random.Random(9)
    for _ in range(200):
        F = rng.sample(range(64), 10)
        assert a(F) == b(F)
    with pytest.raises(errors.SpecError):
        density_from_measures([cols[0], cols[0]])


def test_generalized_density_capped_counts():
    phi = generalized_density_submeasure("dyadic", capped_count_rule("n", "recip"))
    # block 3 = [8,16): min(3, |F|)/3
    assert phi(range(8, 16)) == 1
    assert phi([8, 9]) == Fraction(2, 3)
    assert phi([1]) == 0
    alt = generalized_density_from_blocks([(8, 16)], [farah_submeasure()])
    assert alt([8, 9, 20]) == farah_submeasure()([8, 9])
    with pytest.raises(errors.SpecError):
        generalized_density_from_blocks([(0, 4), (3, 6)], [farah_submeasure()] * 2)


def test_pairing_round_trip():
    seen = set()
    for n in range(40):
        for m in range(40):
            c = pair(n, m)
            assert unpair(c) == (n, m)
            seen.add(c)
    assert len(seen) == 1600


def test_empty_otimes_fin():
    phi = empty_otimes_fin_submeasure()
    assert phi([pair(0, 5)]) == 1
    assert phi([pair(3, 0), pair(3, 9), pair(7, 1)]) == Fraction(1, 4)


def test_farah_matches_oracle():
    phi = farah_submeasure()
    assert phi(range(8, 16)) == Fraction(1, 3)
    assert phi([8, 9]) == Fraction(2, 9)
    rng = random.Random(10)
    for _ in range(300):
        F = rng.sample(range(2048), rng.randint(0, 60))
        assert phi(F) == oracles.farah(F)


def test_tree_sandwich():
    # level count <= antichain weight <= total weight
    rng = random.Random(12)
    dens, tr, summ = tree_density_submeasure(), trace_null_submeasure(), tree_summable_submeasure()
    for _ in range(500):
        A = rng.sample(range(1023), rng.randint(1, 30))
        assert dens(A) <= tr(A) <= summ(A)


def test_trace_null_examples():
    phi = trace_null_submeasure()
    assert phi([encode(""), encode("0")]) == 1
    assert phi([encode("0"), encode("00")]) == Fraction(1, 2)
    # a full level has weight one
    assert phi(TreeRule("level", level=5).elements()) == 1


def test_spine_tails_certified():
    v = exh_verdict(trace_null_submeasure(), TreeRule("spine"), "1/100", horizon=1 << 12)
    assert v.status == "tail-below" and v.certified
    v = fin_verdict(tree_summable_submeasure(), TreeRule("spine"), horizon=1 << 12)
    assert v.status == "bounded"


def test_intersection_profile_joint_status():
    hs = j0_masses(3)
    prof = intersection_profile(hs, Geometric(2), horizon=1 << 10, epsilon="1/2")
    assert prof["joint"] == "tail-below"
    prof = intersection_profile(hs, Arithmetic(0, 1), horizon=1 << 12, epsilon="1/100", bar="1/10")
    assert prof["joint"] == "lower-bound-witness"


def test_capped_rule_validation():
    with pytest.raises(errors.SpecError):
        capped_count_rule("many")
