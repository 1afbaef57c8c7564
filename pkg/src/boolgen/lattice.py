"""The finite Boolean lattice B_n as fixed-width bit vectors.

An element of B_n is stored as a Python integer whose bit ``i`` is set
exactly when atom ``i + 1`` lies below the element. The width travels
with every element so that mixing widths fails loudly.

Two textual forms are used:

* hex (``to_hex``/``from_hex``): ``ceil(n/4)`` lowercase digits, most
  significant first, so atom 1 is the least significant bit;
* bit strings (``to_bitstring``/``from_bitstring``): one character per
  atom, atom 1 first. ``"100"`` is atom 1 of B_3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, List

from .errors import DimensionError, DomainError

__all__ = [
    "LatticeElement",
    "meet",
    "join",
    "leq",
    "atoms",
    "bottom",
    "top",
    "sp",
    "lasp",
]


@dataclass(frozen=True, slots=True)
class LatticeElement:
    width: int
    bits: int

    def __post_init__(self):
        if self.width < 1:
            raise DomainError(f"width must be positive, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise DomainError(f"bits {self.bits:#x} do not fit in width {self.width}")

    # construction

    @classmethod
    def from_atoms(cls, width: int, indices: Iterable[int]) -> "LatticeElement":
        """Element whose atoms are the given 1-based indices."""
        bits = 0
        for i in indices:
            if not 1 <= i <= width:
                raise DomainError(f"atom index {i} outside 1..{width}")
            bits |= 1 << (i - 1)
        return cls(width, bits)

    @classmethod
    def from_hex(cls, text: str, width: int) -> "LatticeElement":
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        try:
            bits = int(text, 16)
        except ValueError:
            raise DomainError(f"not a hex element: {text!r}") from None
        return cls(width, bits)

    @classmethod
    def from_bitstring(cls, text: str) -> "LatticeElement":
        if not text or set(text) - {"0", "1"}:
            raise DomainError(f"not a bit string: {text!r}")
        return cls(len(text), int(text[::-1], 2))

    # textual forms

    def to_hex(self) -> str:
        return format(self.bits, "x").zfill(math.ceil(self.width / 4))

    def to_bitstring(self) -> str:
        return format(self.bits, "b").zfill(self.width)[::-1]

    def __str__(self):
        return self.to_hex()

    # structure

    def atom_indices(self) -> List[int]:
        """1-based indices of the atoms below this element."""
        return [i + 1 for i in range(self.width) if self.bits >> i & 1]

    def __iter__(self) -> Iterator["LatticeElement"]:
        """Iterate over the atoms below this element."""
        for i in self.atom_indices():
            yield LatticeElement(self.width, 1 << (i - 1))

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    @property
    def is_bottom(self) -> bool:
        return self.bits == 0

    @property
    def is_top(self) -> bool:
        return self.bits == (1 << self.width) - 1

    @property
    def is_atom(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __le__(self, other):
        return leq(self, other)

    def __ge__(self, other):
        return leq(other, self)


def _check_widths(a: LatticeElement, b: LatticeElement) -> None:
    if a.width != b.width:
        raise DimensionError(f"width mismatch: {a.width} vs {b.width}")


def meet(a: LatticeElement, b: LatticeElement) -> LatticeElement:
    _check_widths(a, b)
    return LatticeElement(a.width, a.bits & b.bits)


def join(a: LatticeElement, b: LatticeElement) -> LatticeElement:
    _check_widths(a, b)
    return LatticeElement(a.width, a.bits | b.bits)


def leq(a: LatticeElement, b: LatticeElement) -> bool:
    _check_widths(a, b)
    return a.bits & b.bits == a.bits


def bottom(n: int) -> LatticeElement:
    return LatticeElement(n, 0)


def top(n: int) -> LatticeElement:
    return LatticeElement(n, (1 << n) - 1)


def atoms(n: int) -> List[LatticeElement]:
    """The n atoms of B_n, atom 1 first."""
    if n < 1:
        raise DomainError(f"B_n needs n >= 1, got {n}")
    return [LatticeElement(n, 1 << i) for i in range(n)]


def sp(k: int) -> int:
    """Central binomial coefficient C(k, floor(k/2)), exact.

    By Sperner's theorem this is the largest antichain in B_k.

    >>> sp(32)
    601080390
    """
    if k < 1:
        raise DomainError(f"sp needs k >= 1, got {k}")
    return math.comb(k, k // 2)


def lasp(n: int) -> int:
    """Least k with ``n <= sp(k)``.

    Walks the central binomials upward with the ratio
    C(k+1, floor((k+1)/2)) / C(k, floor(k/2)), which is 2 for odd k
    and (k+1)/(k/2+1) for even k; every step is an exact division.

    >>> lasp(1000)
    13
    """
    if n < 1:
        raise DomainError(f"lasp needs n >= 1, got {n}")
    k, value = 1, 1
    while value < n:
        if k % 2:
            value *= 2
        else:
            value = value * (k + 1) // (k // 2 + 1)
        k += 1
    return k
