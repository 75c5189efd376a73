"""Witness families and search procedures for summable-like, density-like and
covering arguments, plus the ``phi^f_F`` family of submeasures."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .core import (DEFAULT_BAR, MembershipVerdict, Submeasure, TailMatrix, exh_verdict,
                   tail_matrix)
from .errors import BudgetExceeded, SpecError
from .masses import MassRule
from .rational import Q, ZERO, fmt, pow2
from .sets import Explicit, Partition, QPartition, TreeRule, as_finite, partition_from
from .tree import MAX_MASK_DEPTH, LeafMask, cone_range, level_of, parent, witness_leaf_mask
from .zoo import summable_submeasure, trace_null_value

DEFAULT_COMBINATION_BUDGET = 10**6


# ---------------------------------------------------------------- families

class WitnessFamily:
    """Pairwise disjoint finite sets ``A_0, ..., A_{T-1}`` with parameters ``(eps, delta, k)``."""

    exchangeable = False

    def __init__(self, sets: Sequence, epsilon=None, delta=None, k: int | None = None,
                 check_disjoint: bool = True):
        self.sets = tuple(as_finite(A) for A in sets)
        self.epsilon = None if epsilon is None else Q(epsilon)
        self.delta = None if delta is None else Q(delta)
        self.k = k
        if check_disjoint:
            self._assert_disjoint()

    def _assert_disjoint(self):
        seen: dict[int, int] = {}
        for n, A in enumerate(self.sets):
            for a in A:
                if a in seen:
                    raise SpecError(f"sets {seen[a]} and {n} share the element {a}")
                seen[a] = n

    def __len__(self):
        return len(self.sets)

    def member(self, n: int) -> tuple[int, ...]:
        return self.sets[n]

    def union(self, Y: Iterable[int]) -> tuple[int, ...]:
        return as_finite(itertools.chain.from_iterable(self.member(n) for n in Y))

    def member_value(self, phi: Submeasure, n: int) -> Fraction:
        return phi(self.member(n))

    def union_value(self, phi: Submeasure, Y: Sequence[int]) -> Fraction:
        return phi(self.union(Y))

    def to_dict(self):
        return {"kind": "explicit", "sets": [list(A) for A in self.sets],
                **_params(self)}


def _params(fam):
    out = {}
    if fam.epsilon is not None:
        out["epsilon"] = fmt(fam.epsilon)
    if fam.delta is not None:
        out["delta"] = fmt(fam.delta)
    if fam.k is not None:
        out["k"] = fam.k
    return out


def union_measure_formula(m: int, size: int) -> Fraction:
    """``1 - (1 - 2^{-m})^size``."""
    return 1 - (1 - pow2(-m)) ** size


def union_measure_inclusion_exclusion(m: int, size: int) -> Fraction:
    """Inclusion-exclusion over intersections, each of measure ``2^{-m j}`` by independence."""
    return sum((Fraction((-1) ** (j + 1) * comb(size, j)) * pow2(-m * j)
                for j in range(1, size + 1)), ZERO)


class TraceNullFamily(WitnessFamily):
    """``A_n = {s of length nm+m : s is 0 on [nm, nm+m)}`` for ``n < T``.

    ``explicit`` mode materializes node codes and leaf masks (needs
    ``mT <= MAX_MASK_DEPTH``); ``symbolic`` mode uses the closed-form union
    measure.  Unions of any ``Y`` depend only on ``|Y|``, so checks may test
    one ``Y`` per size (``exchangeable``).
    """

    exchangeable = True

    def __init__(self, m: int, T: int, mode: str = "auto", epsilon=None, delta=None,
                 k: int | None = None):
        if m < 1 or T < 1:
            raise SpecError("trace-null family needs m >= 1 and T >= 1")
        if mode == "auto":
            mode = "explicit" if m * T <= MAX_MASK_DEPTH else "symbolic"
        if mode == "explicit" and m * T > MAX_MASK_DEPTH:
            raise SpecError(f"explicit mode needs m*T <= {MAX_MASK_DEPTH}, got {m * T}")
        if mode not in ("explicit", "symbolic"):
            raise SpecError(f"unknown family mode {mode!r}")
        self.m, self.T, self.mode = m, T, mode
        self.epsilon = None if epsilon is None else Q(epsilon)
        self.delta = None if delta is None else Q(delta)
        self.k = k
        # members sit on distinct tree levels, hence are disjoint

    @property
    def sets(self):
        if self.mode != "explicit":
            raise SpecError("symbolic family has no materialized sets")
        return tuple(self.member(n) for n in range(self.T))

    def __len__(self):
        return self.T

    def member(self, n: int) -> tuple[int, ...]:
        if self.mode != "explicit":
            raise SpecError("symbolic family has no materialized sets")
        return TreeRule("witness", m=self.m, n=n).elements()

    def depth_for(self, Y) -> int:
        return self.m * (max(Y) + 1)

    def mask(self, Y: Sequence[int]) -> LeafMask:
        depth = self.depth_for(Y)
        out = LeafMask.empty(depth)
        for n in Y:
            out = out | witness_leaf_mask(self.m, n, depth)
        return out

    def member_value(self, phi, n):
        if self.mode == "symbolic":
            return pow2(-self.m)
        if len(self.member(n)) <= 1 << 14:
            return phi(self.member(n))
        return self.mask((n,)).measure

    def union_value(self, phi, Y):
        """Trace-null value of the union: leaf-mask measure when explicit."""
        if self.mode == "symbolic":
            return union_measure_formula(self.m, len(Y))
        return self.mask(tuple(Y)).measure

    def to_dict(self):
        return {"kind": "trace-null", "m": self.m, "T": self.T, "mode": self.mode,
                **_params(self)}


def trace_null_witness_family(m: int | None = None, T: int = 8, delta=None,
                              mode: str = "auto", epsilon="1/2", k=None) -> TraceNullFamily:
    """The independent family for the trace of the null ideal.

    With ``delta`` given and ``m`` omitted, picks ``m = ceil(log2(1/delta)) + 1``
    so that ``2^{-m} < delta`` strictly.  ``k`` defaults to ``2^m``.
    """
    if m is None:
        if delta is None:
            raise SpecError("give m or delta")
        d = Q(delta)
        if d <= 0:
            raise SpecError("delta must be positive")
        m = _ceil_log2(1 / d) + 1
    if delta is None:
        delta = pow2(1 - m)
    return TraceNullFamily(m, T, mode, epsilon, delta, k if k is not None else 1 << m)


def _ceil_log2(x: Fraction) -> int:
    e = 0
    while pow2(e) < x:
        e += 1
    return e


# ---------------------------------------------------------------- summable-like

@dataclass
class WitnessReport:
    passed: bool
    checked: int
    failure: dict | None = None
    values: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {"passed": self.passed, "checked": self.checked, "failure": self.failure,
                "values": self.values, "notes": self.notes}


def summable_like_check(phi: Submeasure, family: WitnessFamily, epsilon=None, delta=None,
                        k: int | None = None, budget: int = DEFAULT_COMBINATION_BUDGET,
                        sizes: int | None = None) -> WitnessReport:
    """Check (a) ``phi(A_n) < delta``, (b) disjointness, (c) ``phi(U_{n in Y} A_n) >= eps``
    for every ``Y`` of size ``k`` among the first ``sizes`` members."""
    eps = Q(epsilon) if epsilon is not None else family.epsilon
    dlt = Q(delta) if delta is not None else family.delta
    k = k if k is not None else family.k
    if eps is None or dlt is None or k is None:
        raise SpecError("summable-like check needs epsilon, delta and k")
    T = len(family) if sizes is None else min(sizes, len(family))
    if k > T:
        raise SpecError(f"k = {k} exceeds the family size {T}")
    exch = family.exchangeable
    total = 1 if exch else comb(T, k)
    if total > budget:
        raise BudgetExceeded(f"{total} combinations exceed the budget {budget}", required=total)
    report = WitnessReport(True, 0)
    if exch:
        report.notes.append("exchangeable family: one Y per size")
    for n in range(T):
        v = family.member_value(phi, n)
        report.checked += 1
        if not v < dlt:
            report.passed = False
            report.failure = {"condition": "small", "n": n, "value": fmt(v), "delta": fmt(dlt)}
            return report
    combos = [tuple(range(k))] if exch else itertools.combinations(range(T), k)
    for Y in combos:
        v = family.union_value(phi, Y)
        report.checked += 1
        if exch:
            report.values.append({"size": k, "value": fmt(v)})
        if v < eps:
            report.passed = False
            report.failure = {"condition": "union", "Y": list(Y), "value": fmt(v),
                              "epsilon": fmt(eps)}
            return report
    return report


def union_table(family: TraceNullFamily, phi: Submeasure | None = None,
                sizes: Iterable[int] | None = None) -> list[dict]:
    """Union measure per size by formula, inclusion-exclusion and (explicit) leaf masks."""
    rows = []
    for s in sizes if sizes is not None else range(1, family.T + 1):
        row = {"size": s, "formula": fmt(union_measure_formula(family.m, s)),
               "inclusion_exclusion": fmt(union_measure_inclusion_exclusion(family.m, s))}
        if family.mode == "explicit":
            row["leaf_mask"] = fmt(family.mask(tuple(range(s))).measure)
        rows.append(row)
    return rows


# ---------------------------------------------------------------- density-like

@dataclass
class DensitySearchReport:
    indices: tuple[int, ...]
    value: Fraction
    tested: int
    heuristic: bool = True

    def to_dict(self):
        return {"indices": list(self.indices), "size": len(self.indices),
                "value": fmt(self.value), "tested": self.tested, "heuristic": True}


def density_like_search(phi: Submeasure, epsilon, family: WitnessFamily,
                        budget: int = 10**4) -> DensitySearchReport:
    """Greedy search for a large ``X`` with ``phi(U_{n in X} A_n) < epsilon``.

    Heuristic: scans indices in order and keeps each one that leaves the
    union value below ``epsilon``.  Nothing is claimed about the ideal.
    """
    eps = Q(epsilon)
    chosen: list[int] = []
    value = ZERO
    tested = 0
    for n in range(len(family)):
        if tested >= budget:
            break
        tested += 1
        v = family.union_value(phi, chosen + [n])
        if v < eps:
            chosen.append(n)
            value = v
    return DensitySearchReport(tuple(chosen), value, tested)


# ---------------------------------------------------------------- covering

@dataclass
class CoveringRow:
    sample: int
    phi_tails: TailMatrix
    h_tails: TailMatrix
    phi_verdict: MembershipVerdict
    h_verdict: MembershipVerdict
    refutes: bool

    def to_dict(self):
        return {"sample": self.sample, "phi_status": self.phi_verdict.status,
                "h_status": self.h_verdict.status, "refutes": self.refutes,
                "phi_tails": [[c, fmt(v)] for c, v in self.phi_tails.rows()],
                "h_tails": [[c, fmt(v)] for c, v in self.h_tails.rows()]}


def covering_sample_check(phi: Submeasure, h: MassRule, samples: Sequence, horizon: int,
                          epsilon="1/100", bar=DEFAULT_BAR, cutoffs=None,
                          budget=None) -> list[CoveringRow]:
    """Compare ``Exh(phi)`` against ``I_h`` on sample sets.

    A sample refutes ``Exh(phi) in I_h`` when its ``phi`` tails drop below
    ``epsilon`` while every tested ``h`` tail exceeds ``bar``.
    """
    psi = summable_submeasure(h)
    rows = []
    for i, A in enumerate(samples):
        pt = tail_matrix(phi, A, cutoffs, horizon, budget)
        ht = tail_matrix(psi, A, cutoffs, horizon, budget)
        pv = exh_verdict(phi, A, epsilon, horizon, cutoffs, budget=budget)
        hv = exh_verdict(psi, A, epsilon, horizon, cutoffs, bar=bar, budget=budget)
        refutes = pv.status == "tail-below" and hv.status == "lower-bound-witness"
        rows.append(CoveringRow(i, pt, ht, pv, hv, refutes))
    return rows


# ---------------------------------------------------------------- heavy branch

class TreeMass:
    """A nonnegative mass on tree codes with cone sums to a finite depth."""

    def __call__(self, code: int) -> Fraction:
        raise NotImplementedError

    def cone_mass(self, code: int, depth: int) -> Fraction:
        raise NotImplementedError

    def iter_cone(self, code: int, depth: int):
        """Positive-mass codes of the cone below ``code``, level by level."""
        raise NotImplementedError


class LevelMass(TreeMass):
    """``h(t) = weight(|t|)`` from a mass rule on levels (e.g. ``2^{-|t|}``)."""

    def __init__(self, weight: Callable[[int], Fraction]):
        self.weight = weight

    def __call__(self, code):
        return self.weight(level_of(code))

    def cone_mass(self, code, depth):
        L = level_of(code)
        return sum((Fraction(1 << (j - L)) * self.weight(j) for j in range(L, depth + 1)), ZERO)

    def iter_cone(self, code, depth):
        L = level_of(code)
        for j in range(L, depth + 1):
            if self.weight(j) > 0:
                yield from cone_range(code, j - L)


class SpineMass(TreeMass):
    """``weight(|t|)`` on the constant branch ``bit^|t|``, zero elsewhere."""

    def __init__(self, weight: Callable[[int], Fraction], bit: int = 0):
        self.weight, self.bit = weight, bit

    def _on_spine(self, code):
        L = level_of(code)
        return code == ((1 << L) - 1) * (1 if self.bit == 0 else 2) if L else True

    def __call__(self, code):
        return self.weight(level_of(code)) if self._on_spine(code) else ZERO

    def cone_mass(self, code, depth):
        if not self._on_spine(code):
            return ZERO
        return sum((self.weight(j) for j in range(level_of(code), depth + 1)), ZERO)

    def iter_cone(self, code, depth):
        if not self._on_spine(code):
            return
        c = code
        while level_of(c) <= depth:
            if self.weight(level_of(c)) > 0:
                yield c
            c = 2 * c + 1 + self.bit


class ExplicitTreeMass(TreeMass):
    def __init__(self, weights: Mapping[int, object]):
        self.weights = {int(c): Q(v) for c, v in weights.items() if Q(v) != 0}
        if any(v < 0 for v in self.weights.values()):
            raise SpecError("tree mass must be nonnegative")

    def __call__(self, code):
        return self.weights.get(code, ZERO)

    def _in_cone(self, code, c, depth):
        L, Lc = level_of(code), level_of(c)
        return Lc <= depth and Lc >= L and ((c + 1) >> (Lc - L)) - 1 == code

    def cone_mass(self, code, depth):
        return sum((v for c, v in self.weights.items() if self._in_cone(code, c, depth)), ZERO)

    def iter_cone(self, code, depth):
        for c in sorted(self.weights):
            if self._in_cone(code, c, depth):
                yield c


@dataclass
class HeavyBranchResult:
    branch: tuple[int, ...]
    pieces: list[tuple[int, ...]]
    sums: list[Fraction]
    exhausted: bool
    tails: list[Fraction]
    reason: str | None = None

    @property
    def count(self) -> int:
        return len(self.pieces)

    def union(self) -> tuple[int, ...]:
        return as_finite(itertools.chain.from_iterable(self.pieces))

    def to_dict(self):
        return {"count": self.count, "exhausted": self.exhausted, "reason": self.reason,
                "branch": "".join(str((c + 1) % 2) for c in self.branch[1:]),
                "sums": [fmt(s) for s in self.sums],
                "sizes": [len(F) for F in self.pieces],
                "trace_null_tails": [fmt(t) for t in self.tails]}


def heavy_branch_search(h: TreeMass, depth: int, target=1, node_budget: int = 1 << 18,
                        max_pieces: int | None = None) -> HeavyBranchResult:
    """Greedy branch into the heavier child, then disjoint ``F_n`` below ``x|n``
    with ``sum_{t in F_n} h(t) > target``.

    ``F_n`` is filled level by level from the cone of ``x|n`` minus earlier
    pieces; the search stops at the first ``n`` whose cone (to ``depth``)
    cannot exceed ``target`` or when ``node_budget`` nodes have been scanned.
    Tails are ``trace_null(U_{j>=n} F_j)``, computed exactly.
    """
    target = Q(target)
    branch = [0]
    while level_of(branch[-1]) < depth:
        c = branch[-1]
        left, right = 2 * c + 1, 2 * c + 2
        branch.append(right if h.cone_mass(right, depth) > h.cone_mass(left, depth) else left)
    used: set[int] = set()
    pieces: list[tuple[int, ...]] = []
    sums: list[Fraction] = []
    scanned = 0
    exhausted = False
    reason = None
    for n, node in enumerate(branch):
        if max_pieces is not None and n >= max_pieces:
            break
        F, s = [], ZERO
        for c in h.iter_cone(node, depth):
            scanned += 1
            if scanned > node_budget:
                break
            if c in used:
                continue
            F.append(c)
            s += h(c)
            if s > target:
                break
        if s <= target:
            exhausted = True
            reason = "node-budget" if scanned > node_budget else "depth"
            break
        used.update(F)
        pieces.append(tuple(F))
        sums.append(s)
    tails = []
    for n in range(len(pieces)):
        tails.append(trace_null_value(as_finite(itertools.chain.from_iterable(pieces[n:]))))
    return HeavyBranchResult(tuple(branch), pieces, sums, exhausted, tails, reason)


# ---------------------------------------------------------------- B_m

@dataclass
class BmResult:
    m: int
    set: Explicit
    a_tails: TailMatrix
    b_tails: TailMatrix

    def to_dict(self):
        return {"m": self.m, "elements": list(self.set.items),
                "a_tails": [[c, fmt(v)] for c, v in self.a_tails.rows()],
                "b_tails": [[c, fmt(v)] for c, v in self.b_tails.rows()]}


def bm_sets(a: MassRule, b: MassRule, m: int, horizon: int, cutoffs=None) -> BmResult:
    """``B_m = {n < horizon : b(n) >= 2^m a(n)}`` with tail diagnostics."""
    if m < 0:
        raise SpecError("m must be natural")
    B = Explicit(n for n in range(horizon) if b(n) >= (1 << m) * a(n))
    return BmResult(m, B, tail_matrix(summable_submeasure(a), B, cutoffs, horizon),
                    tail_matrix(summable_submeasure(b), B, cutoffs, horizon))


# ---------------------------------------------------------------- phi^f_F

FAMILY_KINDS = ("all-finite", "levels", "antichains", "capped-levels")
CAP_RULES = ("n", "pow2/n")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    universe: str = "omega"
    cap: object = None
    partition: object = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise SpecError(f"unknown family kind {self.kind!r}; expected one of {FAMILY_KINDS}")
        if self.universe not in ("omega", "tree"):
            raise SpecError("family universe must be 'omega' or 'tree'")
        if self.kind == "antichains" and self.universe != "tree":
            raise SpecError("antichains live on the tree universe")
        if self.kind == "capped-levels":
            cap_value(self.cap, 1)

    def levels(self) -> Partition:
        if self.partition is not None:
            return partition_from(self.partition)
        return QPartition() if self.universe == "tree" else partition_from("dyadic")

    def to_dict(self):
        out = {"kind": self.kind, "universe": self.universe}
        if self.cap is not None:
            out["cap"] = self.cap
        if self.partition is not None:
            out["partition"] = self.partition
        return out


def cap_value(rule, n: int) -> int:
    """Per-level cap: an integer, ``"n"`` or ``"pow2/n"`` (``floor(2^n/n)``, 0 at level 0)."""
    if isinstance(rule, int) and not isinstance(rule, bool) and rule >= 0:
        return rule
    if rule == "n":
        return n
    if rule == "pow2/n":
        return (1 << n) // n if n else 0
    raise SpecError(f"unknown cap rule {rule!r}; expected a natural or one of {CAP_RULES}")


def antichain_max(f: Callable[[int], Fraction], codes: Sequence[int]) -> Fraction:
    """``max { sum_{s in B} f(s) : B an antichain inside codes }`` by tree DP.

    ``best(s) = max(f(s), sum of best over the nearest descendants in the set)``.
    """
    cs = set(codes)
    below: dict[int, Fraction] = {}
    total = ZERO
    for c in sorted(cs, reverse=True):
        best = max(f(c), below.pop(c, ZERO))
        a = c
        while a > 0:
            a = parent(a)
            if a in cs:
                below[a] = below.get(a, ZERO) + best
                break
        else:
            total += best
    return total


def phi_family(f: MassRule | Callable[[int], Fraction], family: FamilySpec) -> Submeasure:
    """``phi^f_F(A) = sup_{F in family} sum_{n in A & F} f(n)``, exactly.

    For ``capped-levels`` the sup takes the ``cap(n)`` largest values of
    ``f`` on ``A`` within each level; the constraint splits over levels, so
    this is exact for any nonnegative ``f``.
    """
    kind = family.kind
    prov = {"preset": "phi-family", "family": family.to_dict()}
    if isinstance(f, MassRule):
        prov["f"] = f.to_dict()

    if kind == "all-finite":
        def evaluate(els):
            return sum((f(n) for n in els), ZERO)
    elif kind == "antichains":
        def evaluate(els):
            return antichain_max(f, els)
    else:
        part = family.levels()

        def grouped(els):
            groups: dict[int, list[Fraction]] = {}
            for n in els:
                b = part.block_of(n)
                if b is not None:
                    groups.setdefault(b, []).append(f(n))
            return groups

        if kind == "levels":
            def evaluate(els):
                return max((sum(v, ZERO) for v in grouped(els).values()), default=ZERO)
        else:
            def evaluate(els):
                total = ZERO
                for b, vals in grouped(els).items():
                    c = cap_value(family.cap, b)
                    total += sum(sorted(vals, reverse=True)[:c], ZERO)
                return total
    return Submeasure(evaluate, prov)
