"""Property-based checks with hypothesis."""

from hypothesis import given, settings, strategies as st

from pideals.catalog import NAMED_PRESETS, submeasure_from_dict
from pideals.core import FiniteSupportMeasure, sup_of_measures
from pideals.rational import Q, fmt
from pideals.series import (ellinf_representation, explicit_sequence, greedy_cuts,
                            induced_submeasure, nonpathological_envelope, partial_sum,
                            support_block)
from pideals.sets import CutPartition
from pideals.tree import leaf_mask
from pideals.witness import union_measure_formula, union_measure_inclusion_exclusion
from pideals.zoo import trace_null_submeasure

import oracles

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=64)
small_sets = st.frozensets(st.integers(0, 200), max_size=20).map(lambda s: tuple(sorted(s)))
PHIS = {name: submeasure_from_dict({"preset": name}) for name in NAMED_PRESETS}


@given(fractions)
def test_wire_form_round_trip(x):
    assert Q(fmt(x)) == x


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(PHIS)), small_sets, small_sets)
def test_presets_monotone_subadditive(name, X, Y):
    phi = PHIS[name]
    U = tuple(sorted(set(X) | set(Y)))
    assert phi(()) == 0
    assert max(phi(X), phi(Y)) <= phi(U) <= phi(X) + phi(Y)


@settings(max_examples=80, deadline=None)
@given(st.frozensets(st.integers(0, 30), max_size=9))
def test_trace_null_is_antichain_max(codes):
    assert trace_null_submeasure()(codes) == oracles.brute_antichain_value(codes)


@given(st.frozensets(st.integers(0, 62), max_size=10), st.frozensets(st.integers(0, 62),
                                                                    max_size=10))
def test_leaf_masks_union_is_or(A, B):
    assert leaf_mask(A | B, 6) == leaf_mask(A, 6) | leaf_mask(B, 6)


@given(st.integers(1, 6), st.integers(1, 30))
def test_union_formula_equals_inclusion_exclusion(m, size):
    assert union_measure_formula(m, size) == union_measure_inclusion_exclusion(m, size)


supports = st.lists(st.tuples(st.integers(0, 80), st.integers(0, 12)), min_size=1,
                    max_size=10).map(lambda xs: [(lo, lo + w) for lo, w in xs])


@given(supports)
def test_greedy_cuts_place_every_support(sups):
    part = CutPartition(greedy_cuts(sups))
    for lo, hi in sups:
        assert support_block(part, (lo, hi)) is not None


vec = st.dictionaries(st.integers(0, 3), fractions, max_size=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec, min_size=1, max_size=6), st.sampled_from(["sup", "ell1"]))
def test_envelope_sandwich(terms, tag):
    h = explicit_sequence(terms, tag)
    universe = list(oracles.subsets(range(len(terms))))
    psi = nonpathological_envelope(h, universe)
    tilde = induced_submeasure(h, "brute")
    for F in universe:
        assert tilde(F) <= psi(F) <= 2 * tilde(F)


measure = st.dictionaries(st.integers(0, 30), st.fractions(0, 10, max_denominator=8).filter(
    lambda x: x > 0), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(st.lists(measure, min_size=1, max_size=5), small_sets)
def test_ellinf_representation_identity(cols, F):
    phi = sup_of_measures([FiniteSupportMeasure(c) for c in cols])
    assert partial_sum(ellinf_representation(phi), F).norm() == phi(F)
