"""Submeasures on omega: exact evaluation, axiom checks, and tail semantics.

A submeasure is only ever evaluated on finite sets.  Lower semicontinuity
means ``phi(A) = lim phi(A & n)``, so every finite evaluation is a lower bound
for the value on an infinite set; upper bounds come only from analytic tail
certificates attached by the presets.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, SpecError
from .rational import Q, ZERO
from .sets import Explicit, SetSpec, as_finite

DEFAULT_BAR = Fraction(10**6)


class FiniteSupportMeasure:
    """A measure on omega with finitely many atoms."""

    __slots__ = ("_atoms",)

    def __init__(self, atoms: Mapping[int, object]):
        clean = {}
        for n, w in atoms.items():
            n, w = int(n), Q(w)
            if n < 0:
                raise SpecError(f"atom index must be natural, got {n}")
            if w <= 0:
                raise SpecError(f"atom weight must be positive, got {w} at {n}")
            clean[n] = w
        self._atoms = MappingProxyType(dict(sorted(clean.items())))

    @property
    def atoms(self) -> Mapping[int, Fraction]:
        return self._atoms

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._atoms)

    def total(self) -> Fraction:
        return sum(self._atoms.values(), ZERO)

    def __call__(self, F) -> Fraction:
        atoms = self._atoms
        return sum((atoms[n] for n in as_finite(F) if n in atoms), ZERO)

    def __eq__(self, other):
        return isinstance(other, FiniteSupportMeasure) and self._atoms == other._atoms

    def __hash__(self):
        return hash(tuple(self._atoms.items()))

    def __repr__(self):
        inner = ", ".join(f"{n}: {w}" for n, w in self._atoms.items())
        return f"FiniteSupportMeasure({{{inner}}})"

    def to_dict(self):
        return {"atoms": {str(n): f"{w.numerator}/{w.denominator}"
                          for n, w in self._atoms.items()}}


TailBound = Callable[[SetSpec, int], "Fraction | None"]


class Submeasure:
    """An exact evaluator on finite subsets of omega plus its provenance.

    ``evaluator`` receives a strictly increasing tuple of naturals.
    ``tail_bound(A, H)``, when present, returns a certified upper bound for
    ``phi(A minus H)`` or ``None`` if the preset has no certificate for ``A``.
    ``columns`` holds the measures of a sup-of-measures presentation.
    """

    def __init__(self, evaluator: Callable[[tuple[int, ...]], Fraction],
                 provenance: Mapping, tail_bound: TailBound | None = None,
                 columns: Sequence[FiniteSupportMeasure] | None = None):
        self._evaluator = evaluator
        self.provenance = MappingProxyType(dict(provenance))
        self._tail_bound = tail_bound
        self.columns = tuple(columns) if columns is not None else None

    @property
    def name(self) -> str:
        return self.provenance.get("preset", "custom")

    def __call__(self, F) -> Fraction:
        els = as_finite(F)
        if not els:
            return ZERO
        return self._evaluator(els)

    def tail_bound(self, A: SetSpec, horizon: int) -> Fraction | None:
        if isinstance(A, SetSpec) and A.finite and A.bound() <= horizon:
            return ZERO
        if self._tail_bound is None:
            return None
        return self._tail_bound(A, horizon)

    def __repr__(self):
        return f"Submeasure({dict(self.provenance)!r})"


def eval_on_finite(phi: Submeasure, F, horizon: int | None = None) -> Fraction:
    """``phi(F)`` exactly; infinite set specs need an explicit horizon."""
    return phi(as_finite(F, horizon))


def sup_of_measures(measures: Iterable[FiniteSupportMeasure | Mapping]) -> Submeasure:
    """The pointwise supremum ``F -> max_k mu_k(F)``."""
    cols = [m if isinstance(m, FiniteSupportMeasure) else FiniteSupportMeasure(m)
            for m in measures]
    if not cols:
        raise SpecError("sup_of_measures needs at least one measure")

    def evaluate(els):
        return max(mu(els) for mu in cols)

    return Submeasure(evaluate, {"preset": "sup-of-measures", "columns": len(cols)},
                      columns=cols)


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    checked: int
    axiom: str | None = None
    pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    detail: str = ""

    def raise_for_violation(self):
        if not self.ok:
            raise AxiomViolation(self)


class AxiomViolation(AssertionError):
    def __init__(self, report: AxiomReport):
        super().__init__(f"{report.axiom} fails on {report.pair}: {report.detail}")
        self.report = report


def _check_pair(phi, X, Y):
    fx, fy, fu = phi(X), phi(Y), phi(tuple(sorted(set(X) | set(Y))))
    if fx > fu:
        return "monotonicity", f"phi(X)={fx} > phi(X|Y)={fu}"
    if fy > fu:
        return "monotonicity", f"phi(Y)={fy} > phi(X|Y)={fu}"
    if fu > fx + fy:
        return "subadditivity", f"phi(X|Y)={fu} > phi(X)+phi(Y)={fx + fy}"
    return None


def check_axioms(phi: Submeasure, pairs: Iterable[tuple]) -> AxiomReport:
    """Check ``phi(0)=0``, monotonicity and subadditivity on every given pair."""
    empty = phi(())
    if empty != 0:
        return AxiomReport(False, 0, "null", ((), ()), f"phi(empty)={empty}")
    count = 0
    for X, Y in pairs:
        X, Y = as_finite(X), as_finite(Y)
        count += 1
        bad = _check_pair(phi, X, Y)
        if bad:
            return AxiomReport(False, count, bad[0], (X, Y), bad[1])
    return AxiomReport(True, count)


def _subset(window, mask):
    return tuple(window[i] for i in range(len(window)) if mask >> i & 1)


def exhaustive_axiom_check(phi: Submeasure, window: Sequence[int]) -> AxiomReport:
    """All pairs of subsets of ``window`` (at most 14 points).

    phi is evaluated once per subset; the pairwise comparisons run on
    integers scaled by the common denominator, so they stay exact.
    """
    window = tuple(sorted(set(window)))
    w = len(window)
    if w > 14:
        raise BudgetExceeded(f"window of {w} points exceeds 14", required=w)
    size = 1 << w
    vals = [phi(_subset(window, mask)) for mask in range(size)]
    if vals[0] != 0:
        return AxiomReport(False, 0, "null", ((), ()), f"phi(empty)={vals[0]}")
    den = math.lcm(*(v.denominator for v in vals))
    ints = [v.numerator * (den // v.denominator) for v in vals]
    dtype = np.int64 if max(ints) < 2**61 else object
    arr = np.array(ints, dtype=dtype)
    ys = np.arange(size)
    for x in range(size):
        fu = arr[ys | x]
        fx = arr[x]
        mono = (fu < fx) | (fu < arr)
        sub = fu > fx + arr
        if mono.any() or sub.any():
            y = int(np.flatnonzero(mono | sub)[0])
            X, Y = _subset(window, x), _subset(window, y)
            bad = _check_pair(phi, X, Y)
            return AxiomReport(False, x * size + y + 1, bad[0], (X, Y), bad[1])
    return AxiomReport(True, size * size)


def random_subset(rng: random.Random, universe: Sequence[int], max_size: int | None = None):
    if max_size is None:
        max_size = len(universe)
    k = rng.randint(0, min(max_size, len(universe)))
    return tuple(sorted(rng.sample(universe, k)))


def random_pairs(rng: random.Random, count: int, below: int, max_size: int = 24):
    """``count`` seeded pairs of random subsets of ``[0, below)``."""
    universe = range(below)
    return [(random_subset(rng, universe, max_size), random_subset(rng, universe, max_size))
            for _ in range(count)]


# ---------------------------------------------------------------- tails

@dataclass(frozen=True)
class TailMatrix:
    """``values[i] = phi(A & [cutoffs[i], horizon))``, each a lower bound of
    ``phi(A minus cutoffs[i])``.

    ``complete`` is False when enumeration stopped early on its budget; the
    values then cover only the enumerated prefix of ``A`` (still lower bounds).
    """

    cutoffs: tuple[int, ...]
    horizon: int
    values: tuple[Fraction, ...]
    complete: bool = True

    def value_at(self, cutoff: int) -> Fraction:
        return self.values[self.cutoffs.index(cutoff)]

    def rows(self):
        return list(zip(self.cutoffs, self.values))


def default_cutoffs(horizon: int) -> tuple[int, ...]:
    cuts = [0]
    c = 1
    while c < horizon:
        cuts.append(c)
        c *= 2
    return tuple(cuts)


def tail_matrix(phi: Submeasure, A, cutoffs: Sequence[int] | None = None,
                horizon: int = 1 << 14, budget: int | None = None) -> TailMatrix:
    if cutoffs is None:
        cutoffs = default_cutoffs(horizon)
    cutoffs = tuple(sorted(set(int(c) for c in cutoffs)))
    if cutoffs and (cutoffs[0] < 0 or cutoffs[-1] > horizon):
        raise SpecError("cutoffs must lie in [0, horizon]")
    complete = True
    try:
        els = as_finite(A, horizon) if isinstance(A, SetSpec) else as_finite(A)
        if budget is not None and len(els) > budget:
            raise BudgetExceeded("set exceeds budget", partial=els[:budget])
    except BudgetExceeded as exc:
        els, complete = tuple(exc.partial or ()), False
    els = tuple(n for n in els if n < horizon)
    values = tuple(phi(els[bisect.bisect_left(els, c):]) for c in cutoffs)
    return TailMatrix(cutoffs, horizon, values, complete)


@dataclass(frozen=True)
class MembershipVerdict:
    """Three-valued verdict on membership of ``A`` in ``Exh(phi)``/``Fin(phi)``.

    status ``tail-below``: ``phi(A & [cutoff, H)) < epsilon``; when
    ``certified`` the attached tail certificate proves ``phi(A minus cutoff)
    < epsilon``.  status ``lower-bound-witness``: every tested tail has value
    at least ``value`` (exact, by monotonicity).  ``bounded``: a certified
    finite upper bound on ``phi(A)`` (Fin only).
    """

    status: str
    value: Fraction | None = None
    epsilon: Fraction | None = None
    cutoff: int | None = None
    certified: bool = False
    tail_certificate: Fraction | None = None
    evidence: TailMatrix | None = field(default=None, compare=False)


def exh_verdict(phi: Submeasure, A, epsilon, horizon: int = 1 << 14,
                cutoffs: Sequence[int] | None = None, bar=DEFAULT_BAR,
                budget: int | None = None) -> MembershipVerdict:
    epsilon, bar = Q(epsilon), Q(bar)
    if epsilon <= 0:
        raise SpecError("epsilon must be positive")
    if not isinstance(A, SetSpec):
        A = Explicit(A)
    if A.finite:
        b = A.bound()
        horizon = max(horizon, b)
        cutoffs = tuple(sorted(set(cutoffs or default_cutoffs(horizon)) | {b}))
    tm = tail_matrix(phi, A, cutoffs, horizon, budget)
    tail = phi.tail_bound(A, horizon) if tm.complete else None
    first = None
    for c, v in tm.rows():
        if v < epsilon:
            if tail is not None and v + tail < epsilon:
                return MembershipVerdict("tail-below", v, epsilon, c, True, tail, tm)
            if first is None:
                first = (c, v)
    if first is not None and first[0] < horizon:
        return MembershipVerdict("tail-below", first[1], epsilon, first[0], False, tail, tm)
    nonzero_cuts = [v for c, v in tm.rows() if c < horizon]
    if nonzero_cuts and all(v > bar for v in nonzero_cuts):
        return MembershipVerdict("lower-bound-witness", min(nonzero_cuts), epsilon,
                                 None, False, tail, tm)
    return MembershipVerdict("inconclusive", None, epsilon, None, False, tail, tm)


def fin_verdict(phi: Submeasure, A, horizon: int = 1 << 14, bar=DEFAULT_BAR,
                budget: int | None = None) -> MembershipVerdict:
    """Membership in ``Fin(phi)``: certified bound, divergence witness, or neither."""
    bar = Q(bar)
    if not isinstance(A, SetSpec):
        A = Explicit(A)
    tm = tail_matrix(phi, A, (0,), horizon, budget)
    v = tm.values[0]
    tail = phi.tail_bound(A, horizon) if tm.complete else None
    if tail is not None:
        return MembershipVerdict("bounded", v + tail, None, 0, True, tail, tm)
    if v > bar:
        return MembershipVerdict("lower-bound-witness", v, None, 0, False, None, tm)
    return MembershipVerdict("inconclusive", v, None, 0, False, None, tm)


def symmetric_difference_metric(phi: Submeasure, A, B) -> Fraction:
    """``d_phi(A, B) = phi(A symmetric-difference B)`` for finite sets."""
    a, b = set(as_finite(A)), set(as_finite(B))
    return phi(tuple(sorted(a ^ b)))


@dataclass(frozen=True)
class TallnessReport:
    singletons: tuple[Fraction, ...]
    tail_max: tuple[Fraction, ...]
    epsilons: tuple[Fraction, ...]
    reached: tuple[int | None, ...]
    consistent_with_tall: bool


def tallness_diagnostic(phi: Submeasure, horizon: int = 1 << 10,
                        epsilons: Sequence | None = None) -> TallnessReport:
    """Singleton values ``phi({n})`` for ``n < horizon`` and their tail maxima.

    ``reached[i]`` is the first ``n <= horizon // 2`` whose tail maximum over
    ``[n, horizon)`` is below ``epsilons[i]``; the window always keeps at
    least half the horizon so a short final stretch cannot fake vanishing.
    """
    if epsilons is None:
        epsilons = (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100))
    epsilons = tuple(Q(e) for e in epsilons)
    single = tuple(phi((n,)) for n in range(horizon))
    tails = [ZERO] * horizon
    run = ZERO
    for n in range(horizon - 1, -1, -1):
        run = max(run, single[n])
        tails[n] = run
    reached = []
    for eps in epsilons:
        hit = next((n for n in range(horizon // 2 + 1) if tails[n] < eps), None)
        reached.append(hit)
    return TallnessReport(single, tuple(tails), epsilons, tuple(reached),
                          all(r is not None for r in reached))
