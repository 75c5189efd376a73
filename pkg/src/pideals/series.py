"""Vector sequences in l1 / sup-norm sequence spaces and the submeasures and
representations built from them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .core import FiniteSupportMeasure, Submeasure, sup_of_measures
from .errors import BudgetExceeded, SpecError
from .rational import Q, ZERO, fmt, pow2
from .sets import CutPartition, SetSpec, as_finite

NORMS = ("ell1", "sup")
BRUTE_CAP = 22


class Vector:
    """A finitely supported rational vector with a norm tag."""

    __slots__ = ("_entries", "tag")

    def __init__(self, entries: Mapping[int, object] | None = None, tag: str = "sup"):
        if tag not in NORMS:
            raise SpecError(f"unknown norm tag {tag!r}; expected one of {NORMS}")
        clean = {}
        for k, v in (entries or {}).items():
            k, v = int(k), Q(v)
            if k < 0:
                raise SpecError("coordinates are natural numbers")
            if v:
                clean[k] = v
        self._entries = MappingProxyType(dict(sorted(clean.items())))
        self.tag = tag

    @property
    def entries(self) -> Mapping[int, Fraction]:
        return self._entries

    def __getitem__(self, k: int) -> Fraction:
        return self._entries.get(k, ZERO)

    def norm(self) -> Fraction:
        vals = self._entries.values()
        if self.tag == "ell1":
            return sum((abs(v) for v in vals), ZERO)
        return max((abs(v) for v in vals), default=ZERO)

    def __add__(self, other: "Vector") -> "Vector":
        if other.tag != self.tag:
            raise SpecError(f"cannot add a {other.tag} vector to a {self.tag} vector")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, ZERO) + v
        return Vector(out, self.tag)

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def __neg__(self):
        return Vector({k: -v for k, v in self._entries.items()}, self.tag)

    def scale(self, c) -> "Vector":
        c = Q(c)
        return Vector({k: c * v for k, v in self._entries.items()}, self.tag)

    def abs(self) -> "Vector":
        return Vector({k: abs(v) for k, v in self._entries.items()}, self.tag)

    def is_zero(self) -> bool:
        return not self._entries

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self._entries.values())

    def __eq__(self, other):
        return (isinstance(other, Vector) and self.tag == other.tag
                and self._entries == other._entries)

    def __hash__(self):
        return hash((self.tag, tuple(self._entries.items())))

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self._entries.items())
        return f"Vector({{{inner}}}, {self.tag!r})"

    def to_dict(self):
        return {str(k): fmt(v) for k, v in self._entries.items()}


class VectorSequence:
    """``n -> h(n)``; every term finitely supported and sharing one norm tag."""

    def __init__(self, generator: Callable[[int], Vector], tag: str, provenance: Mapping):
        if tag not in NORMS:
            raise SpecError(f"unknown norm tag {tag!r}")
        self._generator = generator
        self.tag = tag
        self.provenance = MappingProxyType(dict(provenance))
        self._cache: dict[int, Vector] = {}

    def __call__(self, n: int) -> Vector:
        v = self._cache.get(n)
        if v is None:
            v = self._generator(n)
            if v.tag != self.tag:
                v = Vector(v.entries, self.tag)
            self._cache[n] = v
        return v

    def terms(self, F) -> list[Vector]:
        return [self(n) for n in as_finite(F)]

    def to_dict(self):
        return dict(self.provenance)


def explicit_sequence(terms: Sequence[Mapping | Vector], tag: str = "sup") -> VectorSequence:
    """Explicit prefix ``h(0), ..., h(len-1)``; zero afterwards."""
    vecs = [t if isinstance(t, Vector) else Vector(t, tag) for t in terms]
    vecs = [Vector(v.entries, tag) for v in vecs]
    zero = Vector({}, tag)

    def gen(n):
        return vecs[n] if n < len(vecs) else zero

    return VectorSequence(gen, tag, {"rule": "explicit", "norm": tag,
                                     "terms": [v.to_dict() for v in vecs]})


def zinc0_sequence() -> VectorSequence:
    """``h(0) = 0`` and ``h(n) = 2^{-k} e_k`` for ``n in [2^k, 2^{k+1})``."""

    def gen(n):
        if n == 0:
            return Vector({}, "sup")
        k = n.bit_length() - 1
        return Vector({k: pow2(-k)}, "sup")

    return VectorSequence(gen, "sup", {"rule": "zinc0"})


def dense_tail_sequence(width: int = 8) -> VectorSequence:
    """``h(n)_k = 2^{-n-k-2}`` for ``k < width``: every entry below ``2^{-n}``."""

    def gen(n):
        return Vector({k: pow2(-n - k - 2) for k in range(width)}, "sup")

    return VectorSequence(gen, "sup", {"rule": "dense-tail", "width": width})


def partial_sum(h: VectorSequence, F) -> Vector:
    """``s_h(F) = sum_{n in F} h(n)``, coordinatewise and exact."""
    out: dict[int, Fraction] = {}
    for n in as_finite(F):
        for k, v in h(n).entries.items():
            out[k] = out.get(k, ZERO) + v
    return Vector(out, h.tag)


def absolute_value_sequence(h: VectorSequence) -> VectorSequence:
    """``h'(n) = (|x^n_k|)_k``."""
    return VectorSequence(lambda n: h(n).abs(), h.tag,
                          {"rule": "abs", "of": dict(h.provenance)})


# ---------------------------------------------------------------- moduli

def _integer_matrix(vectors: Sequence[Vector]):
    coords = sorted({k for v in vectors for k in v.entries})
    den = math.lcm(*(x.denominator for v in vectors for x in v.entries.values())) \
        if coords else 1
    rows = [[int(v[k] * den) for k in coords] for v in vectors]
    return coords, den, rows


def subset_norms(vectors: Sequence[Vector], tag: str):
    """Norm ``||sum_{i in E} v_i||`` for every mask ``E`` (bit i = vector i).

    Exact: entries are scaled to integers by their common denominator.
    Returns ``(norms, den)`` where the true norm of mask ``E`` is
    ``norms[E] / den``.
    """
    m = len(vectors)
    if m > BRUTE_CAP:
        raise BudgetExceeded(f"brute-force sweep over {m} terms exceeds cap {BRUTE_CAP}",
                             required=m)
    coords, den, rows = _integer_matrix(vectors)
    size = 1 << m
    if not coords:
        return np.zeros(size, dtype=np.int64), den
    bound = sum(abs(x) for r in rows for x in r)
    dtype = np.int64 if bound < 2**62 else object
    mat = np.array(rows, dtype=dtype).reshape(m, len(coords))
    # sums[E] built by doubling: sums over masks < 2^i extended by vector i
    sums = np.zeros((size, len(coords)), dtype=dtype)
    for i in range(m):
        half = 1 << i
        sums[half:2 * half] = sums[:half] + mat[i]
    a = np.abs(sums)
    norms = a.sum(axis=1) if tag == "ell1" else a.max(axis=1)
    return norms, den


def _nonneg_on(h: VectorSequence, els) -> bool:
    return all(h(n).is_nonnegative() for n in els)


def cauchy_modulus(h: VectorSequence, A, window: tuple[int, int], mode: str = "auto") -> Fraction:
    """``sup { ||s_h(E)|| : E subset of A & [N, M) }``.

    ``closed-form`` needs nonnegative terms (then the sup is the full sum);
    ``brute`` enumerates every subset (at most ``BRUTE_CAP`` terms).
    """
    N, M = window
    if isinstance(A, SetSpec):
        els = tuple(n for n in A.below(M) if n >= N)
    else:
        els = tuple(n for n in as_finite(A) if N <= n < M)
    return _modulus(h, els, mode)


def _modulus(h, els, mode):
    if not els:
        return ZERO
    if mode == "auto":
        mode = "closed-form" if _nonneg_on(h, els) else "brute"
    if mode == "closed-form":
        if not _nonneg_on(h, els):
            raise SpecError("closed-form modulus needs an entrywise nonnegative sequence")
        return partial_sum(h, els).norm()
    if mode == "brute":
        norms, den = subset_norms([h(n) for n in els], h.tag)
        return Fraction(int(norms.max()), den)
    raise SpecError(f"unknown modulus mode {mode!r}")


def best_subset(h: VectorSequence, F) -> tuple[tuple[int, ...], Fraction]:
    """A nonempty ``E subset of F`` maximizing ``||s_h(E)||``.

    Ties go to the lexicographically least sorted tuple.
    """
    els = as_finite(F)
    if not els:
        return (), ZERO
    norms, den = subset_norms([h(n) for n in els], h.tag)
    norms[0] = -1
    top = norms.max()
    winners = np.flatnonzero(norms == top)
    best = min(tuple(els[i] for i in range(len(els)) if mask >> i & 1)
               for mask in (int(w) for w in winners))
    return best, Fraction(int(top), den)


def induced_submeasure(h: VectorSequence, mode: str = "auto") -> Submeasure:
    """``F -> sup { ||s_h(E)|| : nonempty E subset of F }``."""

    def evaluate(els):
        return _modulus(h, els, mode)

    return Submeasure(evaluate, {"preset": "induced", "sequence": dict(h.provenance),
                                 "mode": mode})


# ---------------------------------------------------------------- representations

def ellinf_representation(phi: Submeasure) -> VectorSequence:
    """``h(n) = (mu_0({n}), mu_1({n}), ...)`` for ``phi = sup_k mu_k``.

    Then ``||s_h(F)||_sup = max_k mu_k(F) = phi(F)`` for every finite ``F``.
    """
    if phi.columns is None:
        raise SpecError("ell-infinity representation needs a sup-of-measures submeasure")
    cols = phi.columns

    def gen(n):
        return Vector({k: mu.atoms[n] for k, mu in enumerate(cols) if n in mu.atoms}, "sup")

    return VectorSequence(gen, "sup", {"rule": "from-measures",
                                       "measures": [mu.to_dict() for mu in cols]})


def c0_normal_form(h: VectorSequence) -> VectorSequence:
    """Zero every coordinate of ``h(n)`` with absolute value below ``2^{-n}``."""
    if h.tag != "sup":
        raise SpecError("c0 normal form applies to sup-norm sequences")

    def gen(n):
        t = pow2(-n)
        return Vector({k: v for k, v in h(n).entries.items() if abs(v) >= t}, "sup")

    return VectorSequence(gen, "sup", {"rule": "c0-normal", "of": dict(h.provenance)})


def measures_from_sequence(h: VectorSequence, horizon: int) -> list[FiniteSupportMeasure]:
    """Columns ``mu_k(A) = sum_{n in A} h(n)_k`` of a nonnegative sequence, below ``horizon``."""
    cols: dict[int, dict[int, Fraction]] = {}
    for n in range(horizon):
        for k, v in h(n).entries.items():
            if v < 0:
                raise SpecError("columns need a nonnegative sequence; apply absolute values first")
            cols.setdefault(k, {})[n] = v
    return [FiniteSupportMeasure(cols[k]) for k in sorted(cols)]


@dataclass(frozen=True)
class ColumnReport:
    multiplicity: tuple[tuple[int, tuple[int, ...]], ...]
    passed: bool

    def columns_of(self, m: int) -> tuple[int, ...]:
        return dict(self.multiplicity).get(m, ())


def column_finiteness_check(measures: Sequence[FiniteSupportMeasure], horizon: int) -> ColumnReport:
    """For each ``m < horizon`` the columns ``{k : m in supp(mu_k)}``."""
    rows = []
    for m in range(horizon):
        ks = tuple(k for k, mu in enumerate(measures) if m in mu.atoms)
        rows.append((m, ks))
    return ColumnReport(tuple(rows), True)


def greedy_cuts(supports: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Interval cuts ``c_0 = 0``, ``c_{i+1} = max(c_i + 1, 1 + max{hi_k : lo_k < c_i})``.

    ``supports`` are ``(min, max)`` pairs.  Cutting stops once every support
    starts below the current cut, so the last interval runs to infinity.
    """
    cuts = [0]
    top = max(hi for _, hi in supports)
    while cuts[-1] <= top:
        c = cuts[-1]
        ends = [hi for lo, hi in supports if lo < c]
        cuts.append(max(c + 1, 1 + max(ends, default=-1)))
    return tuple(cuts)


def bounded_columns_to_gdensity(measures: Sequence[FiniteSupportMeasure]):
    """Generalized density submeasure ``phi(A) = max_n sup_k nu_k(A & P_n)``.

    Returns ``(phi, partition)``; every support lies in two consecutive
    intervals of the partition.
    """
    cols = [mu for mu in measures if mu.support]
    if not measures:
        raise SpecError("bounded_columns_to_gdensity needs at least one measure")
    if not cols:
        cols = list(measures)
        part = CutPartition((0,))
    else:
        part = CutPartition(greedy_cuts([(mu.support[0], mu.support[-1]) for mu in cols]))

    # restriction of each nu_k to each block it meets
    pieces: dict[int, list[dict[int, Fraction]]] = {}
    for mu in cols:
        for b in sorted({part.block_of(n) for n in mu.support}):
            pieces.setdefault(b, []).append(
                {n: w for n, w in mu.atoms.items() if part.block_of(n) == b})

    def evaluate(els):
        groups: dict[int, set[int]] = {}
        for k in els:
            groups.setdefault(part.block_of(k), set()).add(k)
        best = ZERO
        for b, g in groups.items():
            for atoms in pieces.get(b, ()):
                s = sum((w for n, w in atoms.items() if n in g), ZERO)
                if s > best:
                    best = s
        return best

    phi = Submeasure(evaluate, {"preset": "generalized-density",
                                "partition": part.to_dict(),
                                "structure": "generalized-density",
                                "from": "bounded-columns"})
    return phi, part


def support_block(part, support: Sequence[int]) -> int | None:
    """The ``n`` with ``support`` inside ``P_n`` union ``P_{n+1}``, if any."""
    a, b = part.block_of(support[0]), part.block_of(support[-1])
    if b - a <= 1:
        return a
    return None


# ---------------------------------------------------------------- envelope

@dataclass(frozen=True)
class Functional:
    """``w -> sum_k coeffs[k] * w_k``: a norm-one functional."""

    coeffs: tuple[tuple[int, int], ...]
    tag: str

    def __call__(self, w: Vector) -> Fraction:
        return sum((c * w[k] for k, c in self.coeffs), ZERO)

    def dual_norm(self) -> Fraction:
        vals = [abs(c) for _, c in self.coeffs]
        if self.tag == "ell1":
            return Fraction(max(vals, default=0))
        return Fraction(sum(vals))


def dual_witness(v: Vector) -> Functional:
    """A norming functional for ``v``: signs for l1, a signed coordinate for sup."""
    if v.is_zero():
        raise SpecError("the zero vector has no norming functional of norm one")
    if v.tag == "ell1":
        return Functional(tuple((k, 1 if x > 0 else -1) for k, x in v.entries.items()), "ell1")
    top = max(abs(x) for x in v.entries.values())
    k = min(k for k, x in v.entries.items() if abs(x) == top)
    return Functional(((k, 1 if v[k] > 0 else -1),), "sup")


def envelope_measure(h: VectorSequence, F) -> FiniteSupportMeasure:
    """``mu_F({n}) = |x*_F(h(n))|`` for ``n in F'``, where ``F'`` maximizes
    ``||s_h(F')||`` over subsets of ``F``."""
    best, value = best_subset(h, F)
    if value == 0:
        return FiniteSupportMeasure({})
    f = dual_witness(partial_sum(h, best))
    return FiniteSupportMeasure({n: abs(f(h(n))) for n in best if f(h(n)) != 0})


def nonpathological_envelope(h: VectorSequence, universe: Iterable) -> Submeasure:
    """``psi = sup_{F in universe} mu_F``; satisfies ``phi~ <= psi <= 2 phi~`` on the universe."""
    family = [as_finite(F) for F in universe]
    for F in family:
        if len(F) > BRUTE_CAP:
            raise BudgetExceeded(f"set of size {len(F)} exceeds brute cap {BRUTE_CAP}",
                                 required=len(F))
    if not family:
        raise SpecError("envelope needs a nonempty universe")
    measures = [envelope_measure(h, F) for F in family]
    psi = sup_of_measures(measures)
    psi.provenance = type(psi.provenance)({"preset": "envelope",
                                           "sequence": dict(h.provenance),
                                           "universe": len(family)})
    return psi


SEQUENCE_RULES = ("explicit", "zinc0", "dense-tail", "rademacher-x", "from-measures")


def sequence_from_dict(d: Mapping) -> VectorSequence:
    rule = d.get("rule")
    if rule == "explicit":
        return explicit_sequence([{int(k): Q(v) for k, v in t.items()} for t in d["terms"]],
                                 d.get("norm", "sup"))
    if rule == "zinc0":
        return zinc0_sequence()
    if rule == "dense-tail":
        return dense_tail_sequence(int(d.get("width", 8)))
    if rule == "rademacher-x":
        from .rademacher import x_sequence
        return x_sequence()
    if rule == "from-measures":
        return ellinf_representation(sup_of_measures(
            [FiniteSupportMeasure(m["atoms"]) for m in d["measures"]]))
    raise SpecError(f"unknown sequence rule {rule!r}; expected one of {SEQUENCE_RULES}")


def all_subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
