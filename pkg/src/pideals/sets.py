"""Finite and rule-generated subsets of omega.

Every set kind enumerates its elements in strictly increasing order, so any
set can be cut off below a horizon ``H`` and handed to a submeasure.  Subsets
of the binary tree are encoded as sets of naturals through the length-lex
enumeration of ``2^{<omega}`` (see :mod:`pideals.tree`).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BudgetExceeded, SpecError


class Partition:
    """An interval partition of (a cofinite part of) omega, indexed by n."""

    name = "abstract"

    def block(self, n: int) -> tuple[int, int]:
        raise NotImplementedError

    def block_of(self, k: int) -> int | None:
        raise NotImplementedError

    def blocks_below(self, horizon: int) -> Iterator[tuple[int, int, int]]:
        """Yield ``(n, lo, hi)`` for every block with ``lo < horizon``."""
        n = 0
        while True:
            lo, hi = self.block(n)
            if lo >= horizon:
                return
            yield n, lo, hi
            n += 1

    def to_dict(self):
        return self.name


class DyadicPartition(Partition):
    """Blocks ``[2^n, 2^{n+1})``; the point 0 lies in no block."""

    name = "dyadic"

    def block(self, n):
        return 1 << n, 1 << (n + 1)

    def block_of(self, k):
        if k <= 0:
            return None
        return k.bit_length() - 1


class QPartition(Partition):
    """Blocks ``[2^n - 1, 2^{n+1} - 1)``: the levels of the binary tree."""

    name = "q"

    def block(self, n):
        return (1 << n) - 1, (1 << (n + 1)) - 1

    def block_of(self, k):
        return (k + 1).bit_length() - 1


class TriangularPartition(Partition):
    """Blocks ``[n(n+1)/2, (n+1)(n+2)/2)`` of length ``n + 1``."""

    name = "triangular"

    def block(self, n):
        return n * (n + 1) // 2, (n + 1) * (n + 2) // 2

    def block_of(self, k):
        n = (math.isqrt(8 * k + 1) - 1) // 2
        return n


@dataclass(frozen=True)
class UniformPartition(Partition):
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise SpecError("uniform partition width must be positive")

    @property
    def name(self):
        return f"uniform:{self.width}"

    def block(self, n):
        return n * self.width, (n + 1) * self.width

    def block_of(self, k):
        return k // self.width


@dataclass(frozen=True)
class CutPartition(Partition):
    """Intervals ``[c_i, c_{i+1})`` from a finite cut list, then singletons."""

    cuts: tuple[int, ...]

    def __post_init__(self):
        if not self.cuts or self.cuts[0] != 0:
            raise SpecError("cut list must start at 0")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])):
            raise SpecError("cut list must be strictly increasing")

    @property
    def name(self):
        return "cuts"

    def block(self, n):
        c = self.cuts
        if n + 1 < len(c):
            return c[n], c[n + 1]
        last = c[-1] + (n + 1 - len(c))
        return last, last + 1

    def block_of(self, k):
        c = self.cuts
        if k >= c[-1]:
            return len(c) - 1 + (k - c[-1])
        lo, hi = 0, len(c) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if c[mid] <= k:
                lo = mid
            else:
                hi = mid
        return lo

    def to_dict(self):
        return {"cuts": list(self.cuts)}


PARTITIONS = {
    "dyadic": DyadicPartition(),
    "q": QPartition(),
    "triangular": TriangularPartition(),
}


def partition_from(spec) -> Partition:
    if isinstance(spec, Partition):
        return spec
    if isinstance(spec, dict) and "cuts" in spec:
        return CutPartition(tuple(spec["cuts"]))
    if isinstance(spec, str):
        if spec in PARTITIONS:
            return PARTITIONS[spec]
        if spec.startswith("uniform:"):
            return UniformPartition(int(spec.split(":", 1)[1]))
    raise SpecError(
        f"unknown partition {spec!r}; expected one of "
        f"{sorted(PARTITIONS)} or 'uniform:W'"
    )


class SetSpec:
    """Base class of the closed catalog of set kinds."""

    kind = "abstract"
    finite = False

    def iter_all(self) -> Iterator[int]:
        raise NotImplementedError

    def below(self, horizon: int, budget: int | None = None) -> tuple[int, ...]:
        """Elements ``< horizon`` in increasing order.

        Raises :class:`BudgetExceeded` (carrying the partial prefix) when
        more than ``budget`` enumeration steps are needed.
        """
        out = []
        for steps, n in enumerate(self.iter_all()):
            if n >= horizon:
                break
            if budget is not None and steps >= budget:
                raise BudgetExceeded(
                    f"enumeration of {self.kind} set exceeded {budget} steps",
                    partial=tuple(out),
                )
            out.append(n)
        return tuple(out)

    def elements(self) -> tuple[int, ...]:
        if not self.finite:
            raise SpecError(f"{self.kind} set is infinite; give a horizon")
        return tuple(self.iter_all())

    def bound(self) -> int:
        """For finite sets: one past the largest element."""
        els = self.elements()
        return els[-1] + 1 if els else 0

    def __contains__(self, n: int) -> bool:
        for m in self.iter_all():
            if m == n:
                return True
            if m > n:
                return False
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Explicit(SetSpec):
    items: tuple[int, ...]

    kind = "explicit"
    finite = True

    def __init__(self, items: Iterable[int] = ()):
        vals = sorted(set(int(n) for n in items))
        if vals and vals[0] < 0:
            raise SpecError("set elements must be natural numbers")
        object.__setattr__(self, "items", tuple(vals))

    def iter_all(self):
        return iter(self.items)

    def __contains__(self, n):
        return n in set(self.items)

    def to_dict(self):
        return {"kind": self.kind, "elements": list(self.items)}


@dataclass(frozen=True)
class IntervalBlocks(SetSpec):
    intervals: tuple[tuple[int, int], ...]

    kind = "interval-blocks"
    finite = True

    def __init__(self, intervals: Iterable[tuple[int, int]]):
        ivs = []
        for a, b in intervals:
            a, b = int(a), int(b)
            if a < 0 or b < a:
                raise SpecError(f"bad interval [{a}, {b})")
            if b > a:
                ivs.append((a, b))
        ivs.sort()
        merged: list[tuple[int, int]] = []
        for a, b in ivs:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    def iter_all(self):
        for a, b in self.intervals:
            yield from range(a, b)

    def below(self, horizon, budget=None):
        size = sum(max(0, min(b, horizon) - a) for a, b in self.intervals)
        if budget is not None and size > budget:
            return super().below(horizon, budget)
        return tuple(
            n for a, b in self.intervals for n in range(a, min(b, horizon))
        )

    def __contains__(self, n):
        return any(a <= n < b for a, b in self.intervals)

    def to_dict(self):
        return {"kind": self.kind, "intervals": [list(iv) for iv in self.intervals]}


@dataclass(frozen=True)
class Arithmetic(SetSpec):
    """``{start + step*j : j >= 0}``."""

    start: int
    step: int

    kind = "arithmetic"

    def __post_init__(self):
        if self.start < 0 or self.step < 1:
            raise SpecError("arithmetic set needs start >= 0 and step >= 1")

    def iter_all(self):
        return itertools.count(self.start, self.step)

    def below(self, horizon, budget=None):
        size = max(0, -(-(horizon - self.start) // self.step))
        if budget is not None and size > budget:
            return super().below(horizon, budget)
        return tuple(range(self.start, max(self.start, horizon), self.step))

    def __contains__(self, n):
        return n >= self.start and (n - self.start) % self.step == 0

    def to_dict(self):
        return {"kind": self.kind, "start": self.start, "step": self.step}


@dataclass(frozen=True)
class Geometric(SetSpec):
    """``{base^j + offset : j >= start}``."""

    base: int
    start: int = 0
    offset: int = 0

    kind = "geometric"

    def __post_init__(self):
        if self.base < 2 or self.start < 0:
            raise SpecError("geometric set needs base >= 2 and start >= 0")
        if self.base ** self.start + self.offset < 0:
            raise SpecError("geometric set would contain negative numbers")

    def iter_all(self):
        for j in itertools.count(self.start):
            yield self.base ** j + self.offset

    def to_dict(self):
        return {"kind": self.kind, "base": self.base, "start": self.start,
                "offset": self.offset}


def block_count(rule, n: int, size: int) -> int:
    """How many points a block selector takes from block ``n``."""
    if rule == "all":
        c = size
    elif rule == "sqrt":
        c = math.isqrt(n)
    elif rule == "log":
        c = max(n, 1).bit_length() - 1
    elif isinstance(rule, int) and not isinstance(rule, bool):
        c = rule
    else:
        raise SpecError(f"unknown per-block count {rule!r}")
    return max(0, min(c, size))


@dataclass(frozen=True)
class BlockSelector(SetSpec):
    """The first ``count(n)`` points of every block ``n`` of a partition."""

    partition: Partition
    count: object = 1

    kind = "block-selector"

    def __post_init__(self):
        object.__setattr__(self, "partition", partition_from(self.partition))
        block_count(self.count, 1, 1)

    def iter_all(self):
        n = 0
        while True:
            lo, hi = self.partition.block(n)
            yield from range(lo, lo + block_count(self.count, n, hi - lo))
            n += 1

    def below(self, horizon, budget=None):
        out = []
        for n, lo, hi in self.partition.blocks_below(horizon):
            c = block_count(self.count, n, hi - lo)
            out.extend(range(lo, min(lo + c, horizon)))
            if budget is not None and len(out) > budget:
                raise BudgetExceeded(
                    f"enumeration of block-selector exceeded {budget} steps",
                    partial=tuple(out[:budget]),
                )
        return tuple(out)

    def to_dict(self):
        return {"kind": self.kind, "partition": self.partition.to_dict(),
                "count": self.count}


TREE_RULES = ("level", "levels-from", "cone", "spine", "witness")


@dataclass(frozen=True)
class TreeRule(SetSpec):
    """Tree subsets by rule, as sets of length-lex codes.

    rules: ``level`` (all nodes of one level), ``levels-from`` (every node of
    level >= ``level``), ``cone`` (every extension of ``prefix``), ``spine``
    (the nodes ``b^n`` for a fixed bit ``b``), ``witness`` (the antichain
    ``A_n`` of strings of length ``nm+m`` vanishing on ``[nm, nm+m)``).
    """

    rule: str
    level: int = 0
    prefix: str = ""
    bit: int = 0
    m: int = 1
    n: int = 0

    kind = "tree-rule"

    def __post_init__(self):
        if self.rule not in TREE_RULES:
            raise SpecError(f"unknown tree rule {self.rule!r}; expected one of {TREE_RULES}")
        if self.level < 0 or self.m < 1 or self.n < 0 or self.bit not in (0, 1):
            raise SpecError("bad tree-rule parameters")
        if any(ch not in "01" for ch in self.prefix):
            raise SpecError("tree prefix must be a binary string")
        object.__setattr__(self, "finite", self.rule in ("level", "witness"))

    def iter_all(self):
        r = self.rule
        if r == "level":
            yield from range((1 << self.level) - 1, (1 << (self.level + 1)) - 1)
        elif r == "levels-from":
            yield from itertools.count((1 << self.level) - 1)
        elif r == "spine":
            for L in itertools.count():
                v = ((1 << L) - 1) if self.bit else 0
                yield (1 << L) - 1 + v
        elif r == "cone":
            c = _code(self.prefix)
            for j in itertools.count():
                lo = (c + 1) * (1 << j) - 1
                yield from range(lo, lo + (1 << j))
        else:
            m, n = self.m, self.n
            L = n * m + m
            base = (1 << L) - 1
            # strings s of length L with s[nm:nm+m] == 0: high nm bits free, low m bits 0
            for high in range(1 << (n * m)):
                yield base + (high << m)

    def below(self, horizon, budget=None):
        if self.rule in ("level", "levels-from"):
            lo = (1 << self.level) - 1
            hi = (1 << (self.level + 1)) - 1 if self.rule == "level" else horizon
            hi = min(hi, horizon)
            if budget is not None and hi - lo > budget:
                return super().below(horizon, budget)
            return tuple(range(lo, max(lo, hi)))
        if self.rule == "cone":
            c = _code(self.prefix)
            out = []
            j = 0
            while True:
                lo = (c + 1) * (1 << j) - 1
                if lo >= horizon:
                    break
                out.extend(range(lo, min(lo + (1 << j), horizon)))
                if budget is not None and len(out) > budget:
                    raise BudgetExceeded(
                        f"enumeration of cone exceeded {budget} steps",
                        partial=tuple(out[:budget]),
                    )
                j += 1
            return tuple(out)
        return super().below(horizon, budget)

    def to_dict(self):
        d = {"kind": self.kind, "rule": self.rule}
        if self.rule in ("level", "levels-from"):
            d["level"] = self.level
        elif self.rule == "cone":
            d["prefix"] = self.prefix
        elif self.rule == "spine":
            d["bit"] = self.bit
        else:
            d["m"], d["n"] = self.m, self.n
        return d


def _code(bits: str) -> int:
    return (1 << len(bits)) - 1 + (int(bits, 2) if bits else 0)


SET_KINDS = ("explicit", "interval-blocks", "arithmetic", "geometric",
             "block-selector", "tree-rule")


def set_from_dict(d: dict) -> SetSpec:
    """Build a :class:`SetSpec` from its JSON form (discriminated by ``kind``)."""
    kind = d.get("kind")
    if kind == "explicit":
        return Explicit(d.get("elements", ()))
    if kind == "interval-blocks":
        return IntervalBlocks(tuple(iv) for iv in d.get("intervals", ()))
    if kind == "arithmetic":
        return Arithmetic(int(d["start"]), int(d["step"]))
    if kind == "geometric":
        return Geometric(int(d["base"]), int(d.get("start", 0)), int(d.get("offset", 0)))
    if kind == "block-selector":
        return BlockSelector(partition_from(d["partition"]), d.get("count", 1))
    if kind == "tree-rule":
        return TreeRule(
            d["rule"], level=int(d.get("level", 0)), prefix=d.get("prefix", ""),
            bit=int(d.get("bit", 0)), m=int(d.get("m", 1)), n=int(d.get("n", 0)),
        )
    raise SpecError(f"unknown set kind {kind!r}; expected one of {SET_KINDS}")


def as_finite(F, horizon: int | None = None) -> tuple[int, ...]:
    """Normalize a finite set (SetSpec or iterable of naturals) to a sorted tuple."""
    if isinstance(F, SetSpec):
        if horizon is not None:
            return F.below(horizon)
        if not F.finite:
            raise SpecError(f"{F.kind} set is infinite and no horizon was given")
        return F.elements()
    if isinstance(F, tuple) and all(
        type(a) is int and a < b for a, b in zip(F, F[1:])
    ):
        if F and (type(F[-1]) is not int or F[0] < 0):
            raise SpecError("set elements must be natural numbers")
        return F
    return Explicit(F).items
