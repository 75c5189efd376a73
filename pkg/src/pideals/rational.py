"""Exact rationals: parsing and printing in the ``p/q`` wire form."""
from __future__ import annotations

from fractions import Fraction

from .errors import SpecError

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(value) -> Fraction:
    """Coerce ``value`` to a :class:`~fractions.Fraction` without floats.

    Accepts ints, Fractions, ``"p/q"`` / ``"p"`` strings and
    ``{"numerator": p, "denominator": q}`` mappings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SpecError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise SpecError(f"malformed rational {value!r}; expected 'p/q'") from None
        if q == 0:
            raise SpecError(f"zero denominator in {value!r}")
        return Fraction(p, q)
    if isinstance(value, dict) and set(value) == {"numerator", "denominator"}:
        p, q = value["numerator"], value["denominator"]
        if not isinstance(p, int) or not isinstance(q, int) or isinstance(p, bool):
            raise SpecError(f"malformed rational {value!r}")
        if q <= 0:
            raise SpecError(f"denominator must be positive, got {q}")
        return Fraction(p, q)
    raise SpecError(f"not a rational: {value!r} (floats are not accepted)")


def fmt(x: Fraction) -> str:
    """The canonical ``p/q`` string (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def pow2(e: int) -> Fraction:
    """``2**e`` as a Fraction, for any integer ``e``."""
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)
