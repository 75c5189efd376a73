"""Seeded property sweeps over random instances.

Every sweep draws from the ``random.Random`` it is handed and returns a plain
dict with a ``passed`` flag, the number of checks and the first failure.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from .core import (FiniteSupportMeasure, check_axioms, exhaustive_axiom_check, random_pairs,
                   random_subset, sup_of_measures)
from .masses import DyadicBlockMass, DyadicLevel, Harmonic, LevelPower
from .rademacher import (BlockLayout, inner_product, khintchine_check, rademacher_vector,
                         sign_sweep, sign_sweep_bound, x_vector)
from .rational import fmt, pow2
from .series import (absolute_value_sequence, bounded_columns_to_gdensity,
                     ellinf_representation, explicit_sequence, induced_submeasure,
                     nonpathological_envelope, partial_sum, subset_norms, support_block)
from .witness import FamilySpec, cap_value, phi_family
from .zoo import (density_submeasure, farah_submeasure, summable_submeasure,
                  trace_null_submeasure)


def _result(checked, failure=None, **extra):
    return {"passed": failure is None, "checked": checked, "failure": failure, **extra}


def random_rational(rng: random.Random, lo=1, hi=9, max_den=8) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_measures(rng: random.Random, max_columns=8, below=64, max_support=8):
    cols = []
    for _ in range(rng.randint(1, max_columns)):
        supp = rng.sample(range(below), rng.randint(1, max_support))
        cols.append(FiniteSupportMeasure({n: random_rational(rng) for n in supp}))
    return cols


def random_signed_sequence(rng: random.Random, terms: int, coords: int, tag: str):
    out = []
    for _ in range(terms):
        out.append({k: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for k in range(coords)})
    return explicit_sequence(out, tag)


# ---------------------------------------------------------------- axioms

def axiom_sweep(phi, rng: random.Random, window=range(12), pairs=1000, below=1 << 10,
                max_size=24) -> dict:
    """Exhaustive check on a window, then seeded random pairs below ``below``."""
    ex = exhaustive_axiom_check(phi, tuple(window))
    if not ex.ok:
        return _result(ex.checked, {"axiom": ex.axiom, "pair": [list(p) for p in ex.pair],
                                    "detail": ex.detail}, stage="exhaustive")
    rnd = check_axioms(phi, random_pairs(rng, pairs, below, max_size))
    if not rnd.ok:
        return _result(ex.checked + rnd.checked,
                       {"axiom": rnd.axiom, "pair": [list(p) for p in rnd.pair],
                        "detail": rnd.detail}, stage="random")
    return _result(ex.checked + rnd.checked, exhaustive=ex.checked, random=rnd.checked)


# ---------------------------------------------------------------- representations

def ellinf_identity_sweep(rng: random.Random, count=50, max_columns=8, below=64,
                          window=10, samples=1000) -> dict:
    """``||s_h(F)||_sup = phi(F)`` for the l-infinity representation of random
    sup-of-measures submeasures; exhaustive on a window plus random ``F``."""
    checked = 0
    for t in range(count):
        cols = random_measures(rng, max_columns, below)
        phi = sup_of_measures(cols)
        h = ellinf_representation(phi)
        # window: points of the supports first, padded from [0, below)
        pts = sorted({n for mu in cols for n in mu.support})
        rng.shuffle(pts)
        win = pts[:window]
        rest = [n for n in range(below) if n not in win]
        win = sorted(win + rng.sample(rest, window - len(win)))
        norms, den = subset_norms([h(n) for n in win], "sup")
        for mask in range(1 << window):
            F = tuple(win[i] for i in range(window) if mask >> i & 1)
            checked += 1
            if Fraction(int(norms[mask]), den) != phi(F):
                return _result(checked, {"instance": t, "F": list(F)})
        for _ in range(samples):
            F = random_subset(rng, range(below))
            checked += 1
            if partial_sum(h, F).norm() != phi(F):
                return _result(checked, {"instance": t, "F": list(F)})
    return _result(checked)


def absval_sweep(rng: random.Random, count=1000, max_coords=4, max_terms=12,
                 tag="sup") -> dict:
    """``4 max_E ||s_h(E)|| >= ||s_h'(F)||`` and ``||s_h(F)|| <= ||s_h'(F)||``
    for random signed sequences, ``F`` all of their indices."""
    worst = None
    for t in range(count):
        terms, coords = rng.randint(1, max_terms), rng.randint(1, max_coords)
        h = random_signed_sequence(rng, terms, coords, tag)
        hp = absolute_value_sequence(h)
        F = tuple(range(terms))
        norms, den = subset_norms([h(n) for n in F], tag)
        best = Fraction(int(norms.max()), den)
        full_abs = partial_sum(hp, F).norm()
        full = partial_sum(h, F).norm()
        if full > full_abs:
            return _result(t + 1, {"instance": t, "condition": "domination"})
        if 4 * best < full_abs:
            return _result(t + 1, {"instance": t, "condition": "quarter",
                                   "best": fmt(best), "abs_sum": fmt(full_abs)})
        if full_abs:
            ratio = best / full_abs
            worst = ratio if worst is None else min(worst, ratio)
    return _result(count, worst_ratio=fmt(worst) if worst is not None else None, norm=tag)


def envelope_sweep(rng: random.Random, count=200, universe_size=6, max_coords=3,
                   tag="sup") -> dict:
    """``phi~(F) <= psi(F) <= 2 phi~(F)`` for every ``F`` in the universe."""
    universe = [c for r in range(universe_size + 1)
                for c in itertools.combinations(range(universe_size), r)]
    checked = 0
    for t in range(count):
        h = random_signed_sequence(rng, universe_size, rng.randint(1, max_coords), tag)
        psi = nonpathological_envelope(h, universe)
        norms, den = subset_norms([h(n) for n in range(universe_size)], tag)
        for F in universe:
            mask = sum(1 << i for i in F)
            # phi~(F): max of subset norms over sub-masks of F
            sub = [s for s in range(1 << universe_size) if s & ~mask == 0]
            tilde = Fraction(int(norms[sub].max()), den)
            p = psi(F)
            checked += 1
            if not tilde <= p <= 2 * tilde:
                return _result(checked, {"instance": t, "F": list(F), "phi": fmt(tilde),
                                         "psi": fmt(p)})
    return _result(checked)


def bounded_columns_sweep(rng: random.Random, count=100, sets=1000, below=64,
                          max_columns=8) -> dict:
    """Supports within two consecutive intervals; ``sup_n phi_n <= sup_k nu_k``."""
    checked = 0
    for t in range(count):
        cols = []
        for _ in range(rng.randint(1, max_columns)):
            lo = rng.randrange(below)
            width = rng.randint(1, 10)
            pts = [n for n in range(lo, min(lo + width, below)) if rng.random() < 0.6] or [lo]
            cols.append(FiniteSupportMeasure({n: random_rational(rng) for n in pts}))
        phi, part = bounded_columns_to_gdensity(cols)
        for mu in cols:
            checked += 1
            if support_block(part, mu.support) is None:
                return _result(checked, {"instance": t, "support": list(mu.support),
                                         "cuts": list(part.cuts)})
        nu = sup_of_measures(cols)
        for _ in range(sets):
            A = random_subset(rng, range(below))
            checked += 1
            if phi(A) > nu(A):
                return _result(checked, {"instance": t, "A": list(A)})
    return _result(checked)


# ---------------------------------------------------------------- rademacher

R_TABLE = {
    0: (1,), 1: ("1/2", "1/2"), 2: ("1/2", "-1/2"),
    3: ("1/4",) * 4, 4: ("1/4", "1/4", "-1/4", "-1/4"), 5: ("1/4", "-1/4", "1/4", "-1/4"),
    6: ("1/8",) * 8, 7: ("1/8",) * 4 + ("-1/8",) * 4,
    8: ("1/8", "1/8", "-1/8", "-1/8") * 2, 9: ("1/8", "-1/8") * 4,
}


def rademacher_suite(rng: random.Random, table_upto=9, ortho_n=10, norm_n=12, sweep_n=8,
                     tuples=500, tuple_n=8) -> dict:
    out = {}
    bad = [i for i in range(table_upto + 1)
           if rademacher_vector(i) != tuple(Fraction(v) for v in R_TABLE[i])]
    out["table"] = _result(table_upto + 1, {"indices": bad} if bad else None)

    fail, cnt = None, 0
    for n in range(ortho_n + 1):
        P = BlockLayout(n).P
        R = np.array([[int(v * (1 << n)) for v in rademacher_vector(i)] for i in P],
                     dtype=np.int64)
        gram = R @ R.T
        cnt += len(P) ** 2
        # integer Gram of 2^n r_i is 2^n * I  <=>  <r_i, r_j> = 2^{-n} delta_ij
        if not np.array_equal(gram, (1 << n) * np.eye(len(P), dtype=np.int64)):
            fail = {"n": n}
            break
    if fail is None:
        # exact spot checks through Fractions on the smaller blocks
        for n in range(min(ortho_n, 5) + 1):
            for i in BlockLayout(n).P:
                for j in BlockLayout(n).P:
                    if inner_product(i, j) != (pow2(-n) if i == j else 0):
                        fail = {"i": i, "j": j}
    out["orthogonality"] = _result(cnt, fail)

    fail, cnt = None, 0
    for n in range(1, norm_n + 1):
        for i in BlockLayout(n).P:
            cnt += 1
            if x_vector(i).norm() != Fraction(1, n):
                fail = {"i": i}
                break
        if fail:
            break
    out["norms"] = _result(cnt, fail)

    fail, cnt = None, 0
    for n in range(1, sweep_n + 1):
        bound = sign_sweep_bound(n)
        for signs, sq in sign_sweep(n):
            cnt += 1
            if sq > bound:
                fail = {"n": n, "signs": list(signs), "value": fmt(sq)}
                break
        if fail:
            break
    out["sign_sweep"] = _result(cnt, fail)

    fail = None
    for t in range(tuples):
        n = rng.randint(0, tuple_n)
        cs = [Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(n + 1)]
        rep = khintchine_check(n, cs)
        if not rep.passed:
            fail = {"n": n, "coefficients": [fmt(c) for c in cs]}
            break
    out["khintchine"] = _result(tuples if fail is None else t + 1, fail)
    out["passed"] = all(v["passed"] for v in out.values())
    return out


# ---------------------------------------------------------------- phi^f_F

def _tree_window_sets(levels=4):
    nodes = range((1 << levels) - 1)
    for mask in range(1 << len(nodes)):
        yield tuple(c for c in nodes if mask >> c & 1)


def phi_family_sweep(rng: random.Random, samples=500, below=1 << 10, tree_levels=4,
                     farah_levels=10) -> dict:
    out = {}
    fail = None
    a, b = phi_family(Harmonic(), FamilySpec("all-finite")), summable_submeasure(Harmonic())
    for t in range(samples):
        F = random_subset(rng, range(below), 40)
        if a(F) != b(F):
            fail = {"F": list(F)}
            break
    out["all-finite=summable"] = _result(samples, fail)

    fail = None
    a = phi_family(DyadicBlockMass("pow2"), FamilySpec("levels"))
    b = density_submeasure("dyadic", "uniform")
    for t in range(samples):
        F = random_subset(rng, range(below), 40)
        if a(F) != b(F):
            fail = {"F": list(F)}
            break
    out["levels=density"] = _result(samples, fail)

    fail, cnt = None, 0
    a = phi_family(DyadicLevel(), FamilySpec("antichains", "tree"))
    b = trace_null_submeasure()
    for F in _tree_window_sets(tree_levels):
        cnt += 1
        if a(F) != b(F):
            fail = {"A": list(F)}
            break
    if fail is None:
        for _ in range(samples):
            F = random_subset(rng, range(1 << 10), 60)
            cnt += 1
            if a(F) != b(F):
                fail = {"A": list(F)}
                break
    out["antichains=trace-null"] = _result(cnt, fail)

    fail, cnt = None, 0
    a = phi_family(LevelPower(2), FamilySpec("capped-levels", "tree", "pow2/n"))
    for n in range(1, farah_levels + 1):
        level = tuple(range((1 << n) - 1, (1 << (n + 1)) - 1))
        cnt += 1
        if a(level) != Fraction(cap_value("pow2/n", n), n * n):
            fail = {"level": n}
            break
    a = phi_family(DyadicBlockMass("recip-square"), FamilySpec("capped-levels", "omega", "n"))
    b = farah_submeasure()
    if fail is None:
        for _ in range(samples):
            F = random_subset(rng, range(below), 60)
            cnt += 1
            if a(F) != b(F):
                fail = {"F": list(F)}
                break
    out["capped-levels=farah"] = _result(cnt, fail)
    out["passed"] = all(v["passed"] for v in out.values())
    return out


def induced_axiom_sweep(rng: random.Random, sequences, pairs=200, below=16) -> dict:
    """check_axioms on the induced submeasure of each sequence."""
    checked = 0
    for h in sequences:
        rep = check_axioms(induced_submeasure(h), random_pairs(rng, pairs, below, 10))
        checked += rep.checked
        if not rep.ok:
            return _result(checked, {"sequence": dict(h.provenance), "axiom": rep.axiom})
    return _result(checked)


__all__ = ["axiom_sweep", "ellinf_identity_sweep", "absval_sweep", "envelope_sweep",
           "bounded_columns_sweep", "rademacher_suite", "phi_family_sweep",
           "induced_axiom_sweep", "random_measures", "random_signed_sequence", "R_TABLE"]
