"""Catalog of nonnegative mass rules ``h: omega -> Q`` with tail certificates.

``tail_sum(A, H)`` returns a rational upper bound for the sum of ``h`` over
``A`` minus ``H``, or ``None`` when the catalog has no closed form for the
pair.  Only bounds with a short written proof are included.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SpecError
from .rational import Q, ZERO, fmt, pow2
from .sets import BlockSelector, DyadicPartition, Geometric, SetSpec


def _geometric_tail(A: Geometric, horizon: int, K: Fraction) -> Fraction | None:
    # h(n) <= K/(n+1) and n+1 >= base^j when offset >= -1
    if A.offset < -1:
        return None
    j = A.start
    while A.base ** j + A.offset < horizon:
        j += 1
    b = A.base
    return K * Fraction(b, (b - 1) * b ** j)


def _dyadic_count_tail(A: BlockSelector, horizon: int, per_block):
    """Sum over dyadic blocks n >= n0 of count(n) * weight(n) for pow2 weights."""
    if not isinstance(A.partition, DyadicPartition):
        return None
    n0 = max(horizon, 1).bit_length() - 1
    if A.count == "all":
        return None
    if isinstance(A.count, int):
        # sum_{n>=n0} c 2^{-n} = c 2^{1-n0}
        return per_block * A.count * pow2(1 - n0)
    # count(n) <= n; sum_{n>=N} n 2^{-n} = (N+1) 2^{1-N}
    return per_block * (n0 + 1) * pow2(1 - n0)


class MassRule:
    rule = "abstract"
    # K with h(n) <= K/(n+1) for all n, when such a constant exists
    harmonic_bound: Fraction | None = None

    def __post_init__(self):
        # accept "p/q" strings and ints wherever a rational field is expected
        for name in ("scale", "ratio"):
            if hasattr(self, name):
                object.__setattr__(self, name, Q(getattr(self, name)))
        if hasattr(self, "values"):
            object.__setattr__(self, "values", tuple(Q(v) for v in self.values))

    def __call__(self, n: int) -> Fraction:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def tail_sum(self, A: SetSpec, horizon: int) -> Fraction | None:
        if isinstance(A, Geometric) and self.harmonic_bound is not None:
            return _geometric_tail(A, horizon, self.harmonic_bound)
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Harmonic(MassRule):
    """``scale / (n + 1)``."""

    scale: Fraction = Fraction(1)
    rule = "harmonic"

    def __call__(self, n):
        return self.scale / (n + 1)

    @property
    def harmonic_bound(self):
        return self.scale

    def is_zero(self):
        return self.scale == 0

    def to_dict(self):
        return {"rule": self.rule, "scale": fmt(self.scale)}


@dataclass(frozen=True)
class PSeries(MassRule):
    """``scale / (n + 1)^p`` for an integer ``p >= 1``."""

    p: int = 2
    scale: Fraction = Fraction(1)
    rule = "p-series"

    def __post_init__(self):
        super().__post_init__()
        if self.p < 1:
            raise SpecError("p-series exponent must be >= 1")

    def __call__(self, n):
        return self.scale / (n + 1) ** self.p

    @property
    def harmonic_bound(self):
        return self.scale

    def is_zero(self):
        return self.scale == 0

    def tail_sum(self, A, horizon):
        if self.p >= 2 and horizon >= 1:
            # sum_{n>=H} 1/(n+1)^2 <= 1/H
            return self.scale / horizon
        return super().tail_sum(A, horizon)

    def to_dict(self):
        return {"rule": self.rule, "p": self.p, "scale": fmt(self.scale)}


@dataclass(frozen=True)
class GeometricMass(MassRule):
    """``scale * ratio^n`` with ``0 < ratio < 1``."""

    ratio: Fraction = Fraction(1, 2)
    scale: Fraction = Fraction(1)
    rule = "geometric"

    def __post_init__(self):
        super().__post_init__()
        if not 0 < self.ratio < 1:
            raise SpecError("geometric mass ratio must lie in (0, 1)")

    def __call__(self, n):
        return self.scale * self.ratio ** n

    def is_zero(self):
        return self.scale == 0

    def tail_sum(self, A, horizon):
        return self.scale * self.ratio ** horizon / (1 - self.ratio)

    def to_dict(self):
        return {"rule": self.rule, "ratio": fmt(self.ratio), "scale": fmt(self.scale)}


BLOCK_WEIGHTS = ("pow2", "recip", "recip-square")


def block_weight(name: str, n: int) -> Fraction:
    if name == "pow2":
        return pow2(-n)
    if name == "recip":
        return Fraction(1, n) if n else ZERO
    if name == "recip-square":
        return Fraction(1, n * n) if n else ZERO
    raise SpecError(f"unknown block weight {name!r}; expected one of {BLOCK_WEIGHTS}")


@dataclass(frozen=True)
class DyadicBlockMass(MassRule):
    """Constant ``weight(n)`` on ``[2^n, 2^{n+1})`` (or on ``[2^n, 2^n + n)``
    when ``width == "n"``); zero at 0."""

    weight: str = "pow2"
    width: str = "full"
    scale: Fraction = Fraction(1)
    rule = "dyadic-block"

    def __post_init__(self):
        super().__post_init__()
        block_weight(self.weight, 1)
        if self.width not in ("full", "n"):
            raise SpecError("dyadic-block width must be 'full' or 'n'")

    def __call__(self, k):
        if k <= 0:
            return ZERO
        n = k.bit_length() - 1
        if self.width == "n" and k >= (1 << n) + n:
            return ZERO
        return self.scale * block_weight(self.weight, n)

    @property
    def harmonic_bound(self):
        # 2^{-n} <= 2/(k+1) on [2^n, 2^{n+1})
        return 2 * self.scale if self.weight == "pow2" else None

    def is_zero(self):
        return self.scale == 0

    def tail_sum(self, A, horizon):
        if isinstance(A, BlockSelector) and self.weight == "pow2":
            return _dyadic_count_tail(A, horizon, self.scale)
        return super().tail_sum(A, horizon)

    def to_dict(self):
        return {"rule": self.rule, "weight": self.weight, "width": self.width,
                "scale": fmt(self.scale)}


@dataclass(frozen=True)
class DyadicLevel(MassRule):
    """``scale * 2^{-floor(log2(n+1))}``: the weight ``2^{-|s|}`` in tree codes."""

    scale: Fraction = Fraction(1)
    rule = "dyadic-level"

    def __call__(self, n):
        return self.scale * pow2(-((n + 1).bit_length() - 1))

    @property
    def harmonic_bound(self):
        return 2 * self.scale

    def is_zero(self):
        return self.scale == 0

    def to_dict(self):
        return {"rule": self.rule, "scale": fmt(self.scale)}


@dataclass(frozen=True)
class LevelPower(MassRule):
    """``|s|^{-p}`` in tree codes; the root gets weight 0."""

    p: int = 2
    rule = "level-power"

    def __call__(self, n):
        L = (n + 1).bit_length() - 1
        return Fraction(1, L ** self.p) if L else ZERO

    def to_dict(self):
        return {"rule": self.rule, "p": self.p}


@dataclass(frozen=True)
class Periodic(MassRule):
    values: tuple[Fraction, ...] = (Fraction(1), Fraction(0))
    rule = "periodic"

    def __post_init__(self):
        super().__post_init__()
        if not self.values or any(v < 0 for v in self.values):
            raise SpecError("periodic mass needs a nonempty list of nonnegative values")

    def __call__(self, n):
        return self.values[n % len(self.values)]

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def to_dict(self):
        return {"rule": self.rule, "values": [fmt(v) for v in self.values]}


@dataclass(frozen=True)
class Prefix(MassRule):
    """Explicit values for ``n < len(values)``, zero afterwards."""

    values: tuple[Fraction, ...] = ()
    rule = "prefix"

    def __post_init__(self):
        super().__post_init__()
        if any(v < 0 for v in self.values):
            raise SpecError("mass values must be nonnegative")

    def __call__(self, n):
        return self.values[n] if n < len(self.values) else ZERO

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def tail_sum(self, A, horizon):
        if horizon >= len(self.values):
            return ZERO
        return None

    def to_dict(self):
        return {"rule": self.rule, "values": [fmt(v) for v in self.values]}


@dataclass(frozen=True)
class Residue(MassRule):
    """``1/(n+1)`` on ``X_k = {n : n = 2^k - 1 mod 2^{k+1}}``, zero elsewhere.

    ``X_k`` is the set of ``n`` whose successor has 2-adic valuation ``k``;
    the ``X_k`` partition omega and each has divergent harmonic sum.
    """

    k: int = 0
    rule = "residue"

    def __post_init__(self):
        super().__post_init__()
        if self.k < 0:
            raise SpecError("residue class index must be natural")

    def __call__(self, n):
        return Fraction(1, n + 1) if (n + 1) % (1 << (self.k + 1)) == (1 << self.k) else ZERO

    harmonic_bound = Fraction(1)

    def to_dict(self):
        return {"rule": self.rule, "k": self.k}


MASS_RULES = ("harmonic", "p-series", "geometric", "dyadic-block", "dyadic-level",
              "level-power", "periodic", "prefix", "residue")


def mass_from_dict(d: dict) -> MassRule:
    rule = d.get("rule")
    scale = Q(d.get("scale", 1))
    if rule == "harmonic":
        return Harmonic(scale)
    if rule == "p-series":
        return PSeries(int(d.get("p", 2)), scale)
    if rule == "geometric":
        return GeometricMass(Q(d.get("ratio", "1/2")), scale)
    if rule == "dyadic-block":
        return DyadicBlockMass(d.get("weight", "pow2"), d.get("width", "full"), scale)
    if rule == "dyadic-level":
        return DyadicLevel(scale)
    if rule == "level-power":
        return LevelPower(int(d.get("p", 2)))
    if rule == "periodic":
        return Periodic(tuple(Q(v) for v in d["values"]))
    if rule == "prefix":
        return Prefix(tuple(Q(v) for v in d["values"]))
    if rule == "residue":
        return Residue(int(d.get("k", 0)))
    raise SpecError(f"unknown mass rule {rule!r}; expected one of {MASS_RULES}")


def partial_mass(h: MassRule, horizon: int) -> Fraction:
    return sum((h(n) for n in range(horizon)), ZERO)
