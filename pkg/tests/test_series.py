import random
from fractions import Fraction

import pytest

from pideals import errors
from pideals.core import FiniteSupportMeasure, check_axioms, random_pairs, sup_of_measures
from pideals.series import (Vector, absolute_value_sequence, all_subsets, best_subset,
                            bounded_columns_to_gdensity, c0_normal_form, cauchy_modulus,
                            column_finiteness_check, dense_tail_sequence, dual_witness,
                            ellinf_representation, envelope_measure, explicit_sequence,
                            greedy_cuts, induced_submeasure, measures_from_sequence,
                            nonpathological_envelope, partial_sum, sequence_from_dict,
                            subset_norms, support_block, zinc0_sequence)
from pideals.sets import Arithmetic, CutPartition

import oracles


def rand_terms(rng, count, coords):
    return [{k: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for k in range(coords)}
            for _ in range(count)]


def test_vector_norms_and_arithmetic():
    v = Vector({0: "1/2", 2: "-3/4", 5: 0}, "ell1")
    assert v.norm() == Fraction(5, 4)
    assert Vector(v.entries, "sup").norm() == Fraction(3, 4)
    assert 5 not in v.entries
    w = Vector({0: "-1/2"}, "ell1")
    assert (v + w).entries == {2: Fraction(-3, 4)}
    assert v.abs().is_nonnegative() and (v - v).is_zero()
    assert v.scale(2)[2] == Fraction(-3, 2)
    with pytest.raises(errors.SpecError):
        v + Vector({}, "sup")


@pytest.mark.parametrize("tag,norm", [("sup", oracles.sup), ("ell1", oracles.ell1)])
def test_subset_norms_against_oracle(tag, norm):
    rng = random.Random(1)
    for _ in range(30):
        coords = rng.randint(1, 4)
        terms = rand_terms(rng, rng.randint(1, 7), coords)
        vecs = [Vector(t, tag) for t in terms]
        norms, den = subset_norms(vecs, tag)
        for mask in range(1 << len(terms)):
            sub = [terms[i] for i in range(len(terms)) if mask >> i & 1]
            assert Fraction(int(norms[mask]), den) == norm(oracles.vsum(sub, coords))


def test_subset_norms_cap():
    with pytest.raises(errors.BudgetExceeded):
        subset_norms([Vector({0: 1})] * 23, "sup")


def test_partial_sum_is_coordinatewise():
    h = explicit_sequence([{0: 1, 1: -1}, {1: 2}, {3: "1/2"}], "ell1")
    assert partial_sum(h, [0, 1, 2]).entries == {0: 1, 1: 1, 3: Fraction(1, 2)}
    assert partial_sum(h, [5, 9]).is_zero()


def test_zinc0_example():
    h = zinc0_sequence()
    # [2,4) collapses onto e_1 with weight 2 * 1/2
    assert partial_sum(h, range(2, 4)).entries == {1: 1}
    assert h(0).is_zero()


def test_c0_normal_form_of_dense_tail_vanishes():
    h = c0_normal_form(dense_tail_sequence(8))
    assert all(h(n).is_zero() for n in range(40))
    # normal form keeps entries at the threshold
    g = c0_normal_form(explicit_sequence([{0: 1}, {0: "1/2", 1: "1/4"}]))
    assert g(1).entries == {0: Fraction(1, 2)}


def test_cauchy_modulus_modes():
    rng = random.Random(4)
    for _ in range(40):
        terms = rand_terms(rng, 8, 3)
        h = explicit_sequence(terms, "ell1")
        want = oracles.max_subset_norm(terms[2:7], 3, oracles.ell1)
        assert cauchy_modulus(h, Arithmetic(0, 1), (2, 7)) == want
    pos = explicit_sequence([{0: 1}, {0: 2, 1: 1}, {1: 3}], "sup")
    assert cauchy_modulus(pos, [0, 1, 2], (0, 3), "closed-form") == 4
    assert cauchy_modulus(pos, [0, 1, 2], (0, 3), "brute") == 4
    with pytest.raises(errors.SpecError):
        cauchy_modulus(explicit_sequence([{0: -1}]), [0], (0, 1), "closed-form")


def test_best_subset_lex_tiebreak():
    h = explicit_sequence([{0: 1}, {0: 1}, {0: -1}], "sup")
    E, v = best_subset(h, [0, 1, 2])
    assert v == 2 and E == (0, 1)
    h = explicit_sequence([{0: 1}, {1: 1}], "sup")
    assert best_subset(h, [0, 1]) == ((0,), 1)


def test_induced_submeasure_is_submeasure():
    rng = random.Random(7)
    for tag in ("sup", "ell1"):
        h = explicit_sequence(rand_terms(rng, 12, 3), tag)
        rep = check_axioms(induced_submeasure(h), random_pairs(rng, 300, 12, 8))
        assert rep.ok, rep


def test_ellinf_identity_small():
    cols = [FiniteSupportMeasure({0: "1/2", 2: 1}), FiniteSupportMeasure({1: 3, 2: "1/3"})]
    phi = sup_of_measures(cols)
    h = ellinf_representation(phi)
    for F in all_subsets(range(4)):
        assert partial_sum(h, F).norm() == phi(F)
    # the columns come back out of a nonnegative sequence
    back = measures_from_sequence(h, 4)
    assert [m.atoms for m in back] == [m.atoms for m in cols]


def test_measures_need_nonnegative():
    with pytest.raises(errors.SpecError):
        measures_from_sequence(explicit_sequence([{0: -1}]), 2)


def test_column_finiteness():
    rep = column_finiteness_check([FiniteSupportMeasure({1: 1, 2: 1}),
                                   FiniteSupportMeasure({2: 1})], 4)
    assert rep.columns_of(2) == (0, 1) and rep.columns_of(0) == ()


def test_greedy_cuts_example():
    # supports (0,1), (1,3), (5,5)
    cuts = greedy_cuts([(0, 1), (1, 3), (5, 5)])
    assert cuts == (0, 1, 2, 4, 5, 6)
    part = CutPartition(cuts)
    for s in [(0, 1), (1, 2, 3), (5,)]:
        assert support_block(part, s) is not None


def test_bounded_columns_properties_small():
    rng = random.Random(13)
    for _ in range(40):
        cols = []
        for _ in range(rng.randint(1, 5)):
            lo = rng.randrange(30)
            pts = sorted({lo + rng.randrange(6) for _ in range(3)})
            cols.append(FiniteSupportMeasure({n: Fraction(rng.randint(1, 5), 2) for n in pts}))
        phi, part = bounded_columns_to_gdensity(cols)
        nu = sup_of_measures(cols)
        for mu in cols:
            assert support_block(part, mu.support) is not None
        for _ in range(100):
            A = rng.sample(range(40), rng.randint(0, 12))
            assert phi(A) <= nu(A)
            # restriction to one block never exceeds the full column
        # phi(A) = max over blocks of max_k nu_k(A & P_n), by direct slicing
        A = tuple(range(40))
        want = max(max(mu([n for n in A if part.block_of(n) == b]) for mu in cols)
                   for b in {part.block_of(n) for n in A})
        assert phi(A) == want


def test_dual_witness_norms():
    for tag in ("sup", "ell1"):
        v = Vector({0: "-2/3", 3: "2/3", 4: "1/5"}, tag)
        f = dual_witness(v)
        assert f(v) == v.norm()
        assert f.dual_norm() == 1
    # least coordinate among the maxima
    assert dual_witness(Vector({0: "-2/3", 3: "2/3"}, "sup")).coeffs == ((0, -1),)
    with pytest.raises(errors.SpecError):
        dual_witness(Vector({}, "sup"))


def test_envelope_sandwich_small():
    rng = random.Random(15)
    for tag in ("sup", "ell1"):
        for _ in range(20):
            terms = rand_terms(rng, 5, 2)
            h = explicit_sequence(terms, tag)
            universe = list(all_subsets(range(5)))
            psi = nonpathological_envelope(h, universe)
            norm = oracles.sup if tag == "sup" else oracles.ell1
            for F in universe:
                tilde = oracles.max_subset_norm([terms[i] for i in F], 2, norm)
                assert tilde <= psi(F) <= 2 * tilde
            assert psi.provenance["preset"] == "envelope"


def test_envelope_measure_dominated_by_best():
    h = explicit_sequence([{0: 1, 1: -1}, {0: -1, 1: 2}], "ell1")
    mu = envelope_measure(h, [0, 1])
    E, v = best_subset(h, [0, 1])
    assert mu.total() == v


def test_absolute_value_sequence():
    h = explicit_sequence([{0: -1, 1: "1/2"}], "ell1")
    assert absolute_value_sequence(h)(0).entries == {0: 1, 1: Fraction(1, 2)}


def test_sequence_round_trip():
    for d in [{"rule": "explicit", "norm": "ell1", "terms": [{"0": "1/2"}, {"1": "-1"}]},
              {"rule": "zinc0"}, {"rule": "dense-tail", "width": 3},
              {"rule": "from-measures", "measures": [{"atoms": {"0": "1", "2": "1/2"}}]}]:
        h = sequence_from_dict(d)
        assert all(h(n) == sequence_from_dict(d)(n) for n in range(6))
    with pytest.raises(errors.SpecError):
        sequence_from_dict({"rule": "spiral"})
