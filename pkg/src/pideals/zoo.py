"""Constructors for the named submeasures: summable, density, generalized
density, {0}xFin, Farah, and the tree family (trace of null, I_tree, Z_tree)."""
from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Sequence

from .core import FiniteSupportMeasure, Submeasure, TailMatrix, exh_verdict, tail_matrix
from .errors import SpecError
from .masses import MassRule, Residue, block_weight
from .rational import Q, ZERO, fmt, pow2
from .sets import (BlockSelector, DyadicPartition, Geometric, Partition, SetSpec,
                   TreeRule, partition_from)
from .tree import antichain_weight, level_of, minimal_codes


# ---------------------------------------------------------------- summable

def summable_submeasure(h: MassRule) -> Submeasure:
    """``F -> sum_{n in F} h(n)``; the submeasure of the summable ideal ``I_h``."""
    if h.is_zero():
        raise SpecError("the all-zero mass rule gives the trivial ideal P(omega)")

    def evaluate(els):
        return sum((h(n) for n in els), ZERO)

    return Submeasure(evaluate, {"preset": "summable", "mass": h.to_dict()},
                      tail_bound=h.tail_sum)


def properness(h: MassRule, horizon: int) -> Fraction:
    """Partial sum of ``h`` below ``horizon``; ``I_h`` is proper iff these diverge."""
    return sum((h(n) for n in range(horizon)), ZERO)


# ---------------------------------------------------------------- density

DENSITY_WEIGHTS = ("uniform", "recip")


def _block_measure_weight(weights: str, n: int, lo: int, hi: int) -> Fraction:
    if weights == "uniform":
        return Fraction(1, hi - lo)
    if weights == "recip":
        return Fraction(1, n) if n else ZERO
    raise SpecError(f"unknown density weights {weights!r}; expected one of {DENSITY_WEIGHTS}")


def density_columns(partition="dyadic", weights: str = "uniform",
                    blocks: int = 8) -> list[FiniteSupportMeasure]:
    """The first ``blocks`` block measures ``mu_n`` as explicit columns."""
    part = partition_from(partition)
    cols = []
    for n in range(blocks):
        lo, hi = part.block(n)
        w = _block_measure_weight(weights, n, lo, hi)
        if w > 0:
            cols.append(FiniteSupportMeasure({k: w for k in range(lo, hi)}))
    return cols


def _density_tail(part: Partition, weights: str):
    def bound(A: SetSpec, horizon: int):
        if not isinstance(part, DyadicPartition):
            return None
        n0 = max(horizon, 1).bit_length() - 1
        if weights == "uniform":
            if isinstance(A, Geometric) and A.offset == 0:
                # base >= 2: at most one point per dyadic block, mu_n <= 2^{-n}
                return pow2(-n0)
            if isinstance(A, BlockSelector) and isinstance(A.partition, DyadicPartition):
                if isinstance(A.count, int):
                    return min(Fraction(1), A.count * pow2(-n0))
                if A.count in ("sqrt", "log"):
                    # count(n) <= n and n 2^{-n} decreases for n >= 1
                    return Fraction(max(n0, 1)) * pow2(-max(n0, 1))
        if weights == "recip" and n0 >= 1:
            if isinstance(A, Geometric) and A.offset == 0:
                return Fraction(1, n0)
            if isinstance(A, BlockSelector) and isinstance(A.partition, DyadicPartition):
                if isinstance(A.count, int):
                    return min(Fraction(1), Fraction(A.count, n0))
                if A.count == "sqrt":
                    # isqrt(n)/n <= 1/sqrt(n) <= 1/isqrt(n0)
                    return Fraction(1, math.isqrt(n0))
        return None
    return bound


def density_submeasure(partition="dyadic", weights: str = "uniform") -> Submeasure:
    """``F -> max_n mu_n(F)`` for block measures with disjoint finite supports.

    ``weights="uniform"`` gives ``mu_n`` uniform probability on block ``n``
    (the density zero ideal for the dyadic partition); ``"recip"`` gives
    each point of block ``n`` mass ``1/n``.
    """
    part = partition_from(partition)
    _block_measure_weight(weights, 1, 0, 1)

    def evaluate(els):
        counts = defaultdict(int)
        for k in els:
            n = part.block_of(k)
            if n is not None:
                counts[n] += 1
        best = ZERO
        for n, c in counts.items():
            lo, hi = part.block(n)
            best = max(best, c * _block_measure_weight(weights, n, lo, hi))
        return best

    return Submeasure(evaluate, {"preset": "density", "partition": part.to_dict(),
                                 "weights": weights, "structure": "density"},
                      tail_bound=_density_tail(part, weights))


def density_from_measures(measures: Sequence[FiniteSupportMeasure]) -> Submeasure:
    """Density submeasure from explicit columns; supports must be pairwise disjoint."""
    seen: dict[int, int] = {}
    for k, mu in enumerate(measures):
        for n in mu.support:
            if n in seen:
                raise SpecError(f"supports of measures {seen[n]} and {k} overlap at {n}")
            seen[n] = k
    cols = list(measures)

    def evaluate(els):
        return max((mu(els) for mu in cols), default=ZERO)

    return Submeasure(evaluate, {"preset": "density", "columns": len(cols),
                                 "structure": "density"}, columns=cols)


# ---------------------------------------------------------------- generalized density

BlockRule = Callable[[int, int, int], Callable[[tuple[int, ...]], Fraction]]


def capped_count_rule(cap="n", scale="recip") -> BlockRule:
    """Per-block submeasure ``min(cap(n), |F & P_n|) * scale(n)``.

    ``cap``: an int, ``"n"``, ``"sqrt"`` or ``"all"``; ``scale``: a rational
    or one of ``"pow2"``, ``"recip"``, ``"recip-square"``.
    """
    def cap_of(n, size):
        if cap == "all":
            return size
        if cap == "n":
            return n
        if cap == "sqrt":
            return math.isqrt(n)
        if isinstance(cap, int) and not isinstance(cap, bool):
            return cap
        raise SpecError(f"unknown cap {cap!r}")

    def scale_of(n):
        if isinstance(scale, str) and scale in ("pow2", "recip", "recip-square"):
            return block_weight(scale, n)
        return Q(scale)

    cap_of(1, 1)
    scale_of(1)

    def rule(n, lo, hi):
        c, s = cap_of(n, hi - lo), scale_of(n)
        return lambda part: min(c, len(part)) * s

    rule.params = {"cap": cap, "scale": scale if isinstance(scale, str) else fmt(Q(scale))}
    return rule


def measure_block_rule(weights: str = "uniform") -> BlockRule:
    def rule(n, lo, hi):
        w = _block_measure_weight(weights, n, lo, hi)
        return lambda part: len(part) * w

    rule.params = {"measure": weights}
    return rule


def generalized_density_submeasure(partition="dyadic",
                                   block_rule: BlockRule | None = None) -> Submeasure:
    """``F -> max_n phi_n(F & P_n)`` for per-block submeasures ``phi_n``.

    Blocks come from an interval partition, so supports are disjoint by
    construction.
    """
    part = partition_from(partition)
    if block_rule is None:
        block_rule = capped_count_rule("n", "recip")
    cache: dict[int, Callable] = {}

    def phi_n(n):
        if n not in cache:
            lo, hi = part.block(n)
            cache[n] = block_rule(n, lo, hi)
        return cache[n]

    def evaluate(els):
        groups = defaultdict(list)
        for k in els:
            n = part.block_of(k)
            if n is not None:
                groups[n].append(k)
        return max((Q(phi_n(n)(tuple(g))) for n, g in groups.items()), default=ZERO)

    return Submeasure(evaluate, {"preset": "generalized-density",
                                 "partition": part.to_dict(),
                                 "block": dict(getattr(block_rule, "params", {})),
                                 "structure": "generalized-density"})


def generalized_density_from_blocks(blocks: Sequence[tuple[int, int]],
                                    phis: Sequence[Submeasure]) -> Submeasure:
    """Explicit finite list of ``(interval, submeasure)`` pairs; intervals disjoint."""
    ivs = sorted(zip(blocks, phis), key=lambda t: t[0])
    for (a, _), (b, _) in zip(ivs, ivs[1:]):
        if b[0] < a[1]:
            raise SpecError(f"blocks {a} and {b} overlap")

    def evaluate(els):
        best = ZERO
        for (lo, hi), phi in ivs:
            part = tuple(k for k in els if lo <= k < hi)
            if part:
                best = max(best, phi(part))
        return best

    return Submeasure(evaluate, {"preset": "generalized-density",
                                 "blocks": [list(b) for b, _ in ivs],
                                 "structure": "generalized-density"})


# ---------------------------------------------------------------- {0} x Fin

def pair(n: int, m: int) -> int:
    """Cantor pairing of ``(n, m)``."""
    d = n + m
    return d * (d + 1) // 2 + m


def unpair(c: int) -> tuple[int, int]:
    d = (math.isqrt(8 * c + 1) - 1) // 2
    m = c - d * (d + 1) // 2
    return d - m, m


def empty_otimes_fin_submeasure() -> Submeasure:
    """``F -> max_{(n,m) in F} 1/(n+1)`` on Cantor-paired codes of omega x omega."""

    def evaluate(els):
        return Fraction(1, 1 + min(unpair(c)[0] for c in els))

    return Submeasure(evaluate, {"preset": "empty-otimes-fin", "pairing": "cantor",
                                 "structure": "density"})


# ---------------------------------------------------------------- Farah

def farah_value(els) -> Fraction:
    counts = defaultdict(int)
    for k in els:
        if k >= 2:
            counts[k.bit_length() - 1] += 1
    return sum((Fraction(min(n, c), n * n) for n, c in counts.items()), ZERO)


def _farah_tail(A: SetSpec, horizon: int):
    n0 = max(horizon, 1).bit_length() - 1
    if n0 < 2:
        return None
    if isinstance(A, Geometric) and A.offset == 0:
        # one point per block n >= n0; sum_{n>=n0} 1/n^2 <= 1/(n0-1)
        return Fraction(1, n0 - 1)
    if isinstance(A, BlockSelector) and isinstance(A.partition, DyadicPartition):
        if isinstance(A.count, int):
            return Fraction(A.count, n0 - 1)
        if A.count == "sqrt":
            # sum_{n>=n0} n^{-3/2} <= 2/sqrt(n0-1)
            return Fraction(2, math.isqrt(n0 - 1))
    return None


def farah_submeasure() -> Submeasure:
    """``sum_{n>=1} min(n, |F & [2^n, 2^{n+1})|) / n^2``; 0 and 1 contribute nothing."""
    return Submeasure(farah_value, {"preset": "farah"}, tail_bound=_farah_tail)


# ---------------------------------------------------------------- trees

def trace_null_value(codes) -> Fraction:
    return antichain_weight(minimal_codes(codes))


def trace_null_submeasure() -> Submeasure:
    """Largest antichain weight ``sum 2^{-|s|}``, attained by the minimal elements."""

    def tail(A, horizon):
        if isinstance(A, TreeRule) and A.rule == "spine":
            # everything at or beyond level L sits in one cone of level L
            return pow2(-level_of(horizon))
        if isinstance(A, TreeRule) and A.rule == "cone":
            return pow2(-len(A.prefix))
        return None

    return Submeasure(trace_null_value, {"preset": "trace-null", "universe": "tree"},
                      tail_bound=tail)


def tree_summable_submeasure() -> Submeasure:
    def evaluate(els):
        return sum((pow2(-level_of(c)) for c in els), ZERO)

    def tail(A, horizon):
        if isinstance(A, TreeRule) and A.rule == "spine":
            return pow2(1 - level_of(horizon))
        return None

    return Submeasure(evaluate, {"preset": "tree-summable", "universe": "tree"},
                      tail_bound=tail)


def tree_density_submeasure() -> Submeasure:
    def evaluate(els):
        counts = defaultdict(int)
        for c in els:
            counts[level_of(c)] += 1
        return max(cnt * pow2(-L) for L, cnt in counts.items())

    def tail(A, horizon):
        if isinstance(A, TreeRule) and A.rule == "spine":
            return pow2(-level_of(horizon))
        return None

    return Submeasure(evaluate, {"preset": "tree-density", "universe": "tree",
                                 "structure": "density"}, tail_bound=tail)


# ---------------------------------------------------------------- intersections

def j0_masses(count: int) -> list[MassRule]:
    """``h_k(n) = chi_{X_k}(n)/(n+1)`` for ``k < count``."""
    return [Residue(k) for k in range(count)]


def intersection_profile(hs: Sequence[MassRule], A, cutoffs=None, horizon: int = 1 << 14,
                         epsilon="1/100", bar=None, budget=None):
    """One tail matrix and verdict per coordinate ``I_{h_k}``.

    ``A`` lies in the intersection iff every coordinate vanishes; the joint
    status is ``tail-below`` only if every coordinate is, ``certified`` only if
    every coordinate is certified, and ``lower-bound-witness`` if any is.
    """
    kwargs = {} if bar is None else {"bar": bar}
    mats: list[TailMatrix] = []
    verdicts = []
    for h in hs:
        phi = summable_submeasure(h)
        mats.append(tail_matrix(phi, A, cutoffs, horizon, budget))
        verdicts.append(exh_verdict(phi, A, epsilon, horizon, cutoffs, budget=budget, **kwargs))
    statuses = [v.status for v in verdicts]
    if "lower-bound-witness" in statuses:
        joint = "lower-bound-witness"
    elif all(s == "tail-below" for s in statuses):
        joint = "tail-below"
    else:
        joint = "inconclusive"
    certified = joint == "tail-below" and all(v.certified for v in verdicts)
    return {"matrices": mats, "verdicts": verdicts, "joint": joint, "certified": certified}
