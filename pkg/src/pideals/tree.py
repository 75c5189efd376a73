"""The binary tree ``2^{<omega}`` and its length-lex identification with omega.

Node ``s`` has code ``2^|s| - 1 + int(s, 2)``: the root is 0, and the
children of code ``c`` are ``2c+1`` (append 0) and ``2c+2`` (append 1).
Tree submeasures are evaluated on sets of codes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import SpecError
from .rational import pow2

MAX_MASK_DEPTH = 26


@dataclass(frozen=True, order=True)
class TreeNode:
    bits: str = ""

    def __post_init__(self):
        if any(ch not in "01" for ch in self.bits):
            raise SpecError(f"tree node must be a binary string, got {self.bits!r}")

    @property
    def level(self) -> int:
        return len(self.bits)

    @property
    def code(self) -> int:
        return encode(self.bits)

    @classmethod
    def from_code(cls, code: int) -> "TreeNode":
        return cls(decode(code))

    def is_prefix_of(self, other: "TreeNode") -> bool:
        return other.bits.startswith(self.bits)

    def __str__(self):
        return self.bits or "ε"


def encode(bits: str) -> int:
    return (1 << len(bits)) - 1 + (int(bits, 2) if bits else 0)


def level_of(code: int) -> int:
    return (code + 1).bit_length() - 1


def decode(code: int) -> str:
    if code < 0:
        raise SpecError("tree codes are natural numbers")
    L = level_of(code)
    v = code + 1 - (1 << L)
    return format(v, f"0{L}b") if L else ""


def parent(code: int) -> int:
    return (code - 1) // 2


def is_ancestor(a: int, b: int) -> bool:
    """True when node ``a`` is a proper initial segment of node ``b``."""
    la, lb = level_of(a), level_of(b)
    if la >= lb:
        return False
    return ((b + 1) >> (lb - la)) - 1 == a


def cone_range(code: int, depth_below: int) -> range:
    """Codes of the descendants of ``code`` exactly ``depth_below`` levels down."""
    lo = (code + 1) * (1 << depth_below) - 1
    return range(lo, lo + (1 << depth_below))


def to_codes(nodes: Iterable) -> tuple[int, ...]:
    out = set()
    for s in nodes:
        if isinstance(s, TreeNode):
            out.add(s.code)
        elif isinstance(s, str):
            out.add(encode(TreeNode(s).bits))
        else:
            out.add(int(s))
    return tuple(sorted(out))


def minimal_codes(codes: Iterable[int]) -> tuple[int, ...]:
    """The codes with no proper initial segment in the set."""
    cs = set(codes)
    out = []
    for c in sorted(cs):
        a = c
        while a > 0:
            a = parent(a)
            if a in cs:
                break
        else:
            out.append(c)
    return tuple(out)


def minimal_antichain(nodes: Iterable) -> tuple[TreeNode, ...]:
    """The subset-minimal elements of a finite set of tree nodes."""
    return tuple(TreeNode.from_code(c) for c in minimal_codes(to_codes(nodes)))


def antichain_weight(codes: Iterable[int]) -> Fraction:
    return sum((pow2(-level_of(c)) for c in codes), Fraction(0))


@dataclass(frozen=True, eq=False)
class LeafMask:
    """The depth-``D`` leaves covered by a union of cylinders ``[s]``."""

    depth: int
    bits: np.ndarray

    @property
    def measure(self) -> Fraction:
        return Fraction(int(np.count_nonzero(self.bits)), 1 << self.depth)

    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __and__(self, other: "LeafMask") -> "LeafMask":
        self._same_depth(other)
        return LeafMask(self.depth, self.bits & other.bits)

    def __or__(self, other: "LeafMask") -> "LeafMask":
        self._same_depth(other)
        return LeafMask(self.depth, self.bits | other.bits)

    def __eq__(self, other):
        return (isinstance(other, LeafMask) and self.depth == other.depth
                and np.array_equal(self.bits, other.bits))

    def _same_depth(self, other):
        if self.depth != other.depth:
            raise SpecError("leaf masks have different depths")

    @classmethod
    def empty(cls, depth: int) -> "LeafMask":
        _check_depth(depth)
        return cls(depth, np.zeros(1 << depth, dtype=bool))


def _check_depth(depth):
    if not 0 <= depth <= MAX_MASK_DEPTH:
        raise SpecError(f"leaf-mask depth {depth} outside [0, {MAX_MASK_DEPTH}]")


def leaf_mask(nodes: Iterable, depth: int) -> LeafMask:
    """Leaves of ``2^depth`` lying above some node of the set."""
    codes = to_codes(nodes)
    _check_depth(depth)
    if codes and level_of(codes[-1]) > depth:
        raise SpecError(
            f"depth {depth} is below the deepest node (level {level_of(codes[-1])})"
        )
    bits = np.zeros(1 << depth, dtype=bool)
    for c in minimal_codes(codes):
        L = level_of(c)
        v = c + 1 - (1 << L)
        w = 1 << (depth - L)
        bits[v * w:(v + 1) * w] = True
    return LeafMask(depth, bits)


def witness_leaf_mask(m: int, n: int, depth: int) -> LeafMask:
    """Leaf mask of ``A_n = {s in 2^{nm+m} : s restricted to [nm, nm+m) is 0}``.

    Built from the coordinate description of the clopen set, independently
    of the node list, by zeroing one block of ``m`` leaf bits.
    """
    _check_depth(depth)
    if (n + 1) * m > depth:
        raise SpecError(f"depth {depth} too small for A_{n} with m={m}")
    bits = np.zeros(1 << depth, dtype=bool)
    view = bits.reshape(1 << (n * m), 1 << m, 1 << (depth - (n + 1) * m))
    view[:, 0, :] = True
    return LeafMask(depth, bits)
