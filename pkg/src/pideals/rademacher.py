"""Block Rademacher vectors in l1 and the submeasure of the ideal they represent.

Layout: ``P_n = [n(n+1)/2, (n+1)(n+2)/2)`` indexes the vectors of block ``n``
and ``Q_n = [2^n - 1, 2^{n+1} - 1)`` is their support.  For ``i in P_n`` with
offset ``j = i - min P_n``, ``r_i(k) = 2^{-n}`` when ``j = 0`` and
``2^{-n} (-1)^{bit_{n-j}(k)}`` otherwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Sequence

import numpy as np

from .core import Submeasure
from .errors import BudgetExceeded, SpecError
from .rational import Q, ZERO, fmt, pow2
from .series import Vector, VectorSequence, partial_sum
from .sets import Explicit, SetSpec, as_finite

BRUTE_BLOCK_CAP = 16


@dataclass(frozen=True)
class BlockLayout:
    n: int

    @property
    def P(self) -> range:
        lo = self.n * (self.n + 1) // 2
        return range(lo, lo + self.n + 1)

    @property
    def Q(self) -> range:
        return range((1 << self.n) - 1, (1 << (self.n + 1)) - 1)

    @property
    def divisor(self) -> int:
        return self.n or 1

    @classmethod
    def of_index(cls, i: int) -> "BlockLayout":
        if i < 0:
            raise SpecError("indices are natural numbers")
        n = (isqrt(8 * i + 1) - 1) // 2
        return cls(n)


def rademacher_vector(i: int) -> tuple[Fraction, ...]:
    """``r_i`` as a tuple of length ``2^n``."""
    lay = BlockLayout.of_index(i)
    n, j = lay.n, i - lay.P.start
    w = pow2(-n)
    if j == 0:
        return (w,) * (1 << n)
    shift = n - j
    return tuple(-w if (k >> shift) & 1 else w for k in range(1 << n))


def x_vector(i: int) -> Vector:
    """``x_i``: ``r_i / n`` shifted onto ``Q_n`` (divisor 1 for block 0)."""
    lay = BlockLayout.of_index(i)
    r = rademacher_vector(i)
    base, d = lay.Q.start, lay.divisor
    return Vector({base + k: v / d for k, v in enumerate(r)}, "ell1")


def x_sequence() -> VectorSequence:
    return VectorSequence(x_vector, "ell1", {"rule": "rademacher-x"})


@lru_cache(maxsize=None)
def _abs_moment(c: int, m: int) -> Fraction:
    # E|c + sum of m independent signs| = 2^{-m} sum_t C(m,t) |c + m - 2t|
    return Fraction(sum(comb(m, t) * abs(c + m - 2 * t) for t in range(m + 1)), 1 << m)


def block_sum_norm(n: int, first: bool, others: int) -> Fraction:
    """``||sum_{i in F} eps_i x_i||_1`` for ``F`` in ``P_n``; any signs ``eps``.

    Only the number of non-first indices and presence of the first index
    matter: the non-constant vectors use distinct coordinate bits.
    """
    return _abs_moment(int(first), others) / BlockLayout(n).divisor


def _block_groups(els):
    groups: dict[int, list[int]] = {}
    for i in els:
        groups.setdefault(BlockLayout.of_index(i).n, []).append(i)
    return groups


def _block_max_closed(n: int, F: Sequence[int]) -> Fraction:
    start = BlockLayout(n).P.start
    has_first = start in F
    others = len(F) - int(has_first)
    best = ZERO
    for c in ((0, 1) if has_first else (0,)):
        for m in range(others + 1):
            if c or m:
                best = max(best, block_sum_norm(n, bool(c), m))
    return best


def _block_max_brute(n: int, F: Sequence[int]) -> Fraction:
    h = x_sequence()
    best = ZERO
    for r in range(1, len(F) + 1):
        for E in itertools.combinations(F, r):
            best = max(best, partial_sum(h, E).norm())
    return best


def jr_submeasure(block_cap: int | None = None, mode: str = "closed-form") -> Submeasure:
    """``phi(A) = sum_n max{ ||sum_{i in F} x_i||_1 : nonempty F in P_n & A }``.

    ``brute`` enumerates subsets and sums the actual vectors (blocks below
    ``BRUTE_BLOCK_CAP``); ``closed-form`` uses the binomial moment formula.
    """
    if mode not in ("closed-form", "brute"):
        raise SpecError(f"unknown mode {mode!r}")
    cap = block_cap
    if mode == "brute":
        cap = min(cap if cap is not None else BRUTE_BLOCK_CAP, BRUTE_BLOCK_CAP)
    block_max = _block_max_closed if mode == "closed-form" else _block_max_brute

    def evaluate(els):
        groups = _block_groups(els)
        if cap is not None and max(groups) >= cap:
            raise BudgetExceeded(f"set reaches block {max(groups)}; cap is {cap}",
                                 required=max(groups) + 1)
        return sum((block_max(n, F) for n, F in groups.items()), ZERO)

    prov = {"preset": "rademacher", "mode": mode}
    if cap is not None:
        prov["block_cap"] = cap
    return Submeasure(evaluate, prov)


def a_x_projection(X, horizon: int | None = None) -> Explicit:
    """``A_X = {n : P_n meets X}``."""
    if isinstance(X, SetSpec) and not X.finite and horizon is None:
        raise SpecError("infinite X needs a horizon")
    els = X.below(horizon) if isinstance(X, SetSpec) and horizon is not None else as_finite(X)
    return Explicit({BlockLayout.of_index(i).n for i in els})


@dataclass(frozen=True)
class KhintchineReport:
    n: int
    lhs_squared: Fraction
    rhs: Fraction
    passed: bool

    def to_dict(self):
        return {"n": self.n, "lhs_squared": fmt(self.lhs_squared), "rhs": fmt(self.rhs),
                "passed": self.passed}


def khintchine_check(n: int, coefficients: Sequence) -> KhintchineReport:
    """``||sum c_i r_i||_1^2 <= sum c_i^2`` over ``i in P_n`` (constant 1)."""
    cs = [Q(c) for c in coefficients]
    if len(cs) != n + 1:
        raise SpecError(f"block {n} has {n + 1} vectors, got {len(cs)} coefficients")
    total = [ZERO] * (1 << n)
    for c, i in zip(cs, BlockLayout(n).P):
        for k, v in enumerate(rademacher_vector(i)):
            total[k] += c * v
    lhs = sum((abs(t) for t in total), ZERO) ** 2
    rhs = sum((c * c for c in cs), ZERO)
    return KhintchineReport(n, lhs, rhs, lhs <= rhs)


def inner_product(i: int, i2: int) -> Fraction:
    a, b = rademacher_vector(i), rademacher_vector(i2)
    if len(a) != len(b):
        return ZERO
    return sum((u * v for u, v in zip(a, b)), ZERO)


def sign_sweep(n: int):
    """Yield ``(signs, ||sum eps_i x_i||_1^2)`` over all ``2^{n+1}`` sign patterns.

    Computed from the vectors themselves (scaled to integers), not the
    closed form.
    """
    lay = BlockLayout(n)
    scale = (1 << n) * lay.divisor
    rows = np.array([[int(v * scale) for v in x_vector(i).entries.values()] for i in lay.P],
                    dtype=np.int64)
    patterns = np.array(list(itertools.product((1, -1), repeat=n + 1)), dtype=np.int64)
    norms = np.abs(patterns @ rows).sum(axis=1)
    for signs, s in zip(patterns, norms):
        yield tuple(int(e) for e in signs), Fraction(int(s), scale) ** 2


def sign_sweep_bound(n: int) -> Fraction:
    """``(n+1)/n^2``: the squared bound every sign pattern of block ``n >= 1`` obeys."""
    if n < 1:
        raise SpecError("the sign-sweep bound is stated for blocks n >= 1")
    return Fraction(n + 1, n * n)


def singleton_block_sum(X, horizon: int) -> tuple[Fraction, Fraction]:
    """``(||s_x(X below H)||_1, sum_{n in A_X, P_n below H} 1/n)`` for ``X`` meeting
    each block at most once."""
    els = as_finite(X, horizon) if isinstance(X, SetSpec) else tuple(i for i in as_finite(X) if i < horizon)
    # only blocks lying entirely below the horizon count on either side
    els = tuple(i for i in els if BlockLayout.of_index(i).P.stop <= horizon)
    groups = _block_groups(els)
    if any(len(F) > 1 for F in groups.values()):
        raise SpecError("X meets some block in more than one point")
    lhs = partial_sum(x_sequence(), els).norm()
    rhs = sum((Fraction(1, BlockLayout(n).divisor) for n in groups), ZERO)
    return lhs, rhs
