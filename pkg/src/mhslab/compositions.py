"""Compositions (finite tuples of positive integer exponents) and integer
formal sums of compositions, with the quasi-shuffle product.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Composition",
    "parse_composition",
    "FormalSum",
    "stuffle",
]


class Composition(tuple):
    """An ordered tuple of positive integers, e.g. (2, 3, 1).

    Subclasses tuple, so indexing, slicing, iteration and comparison all
    behave as for plain tuples; comparison order is lexicographic.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Composition":
        parts = tuple(parts)
        for x in parts:
            if not isinstance(x, int) or isinstance(x, bool) or x < 1:
                raise ValueError(f"composition parts must be positive integers, got {x!r}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        """Sum of the parts."""
        return sum(self)

    @property
    def depth(self) -> int:
        """Number of parts."""
        return len(self)

    def reverse(self) -> "Composition":
        return Composition(self[::-1])

    def __repr__(self) -> str:
        return f"Composition({tuple(self)!r})"

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self) + ")"


def parse_composition(text: str) -> Composition:
    """Parse "2,3,1" or "(2,3,1)" into a Composition; "()" is the empty one."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        return Composition()
    parts = []
    for tok in s.split(","):
        tok = tok.strip()
        if not tok.isdigit() or int(tok) < 1:
            raise ValueError(f"bad composition {text!r}: part {tok!r} is not a positive integer")
        parts.append(int(tok))
    return Composition(parts)


class FormalSum:
    """An integer linear combination of compositions.

    Zero-coefficient terms are dropped on construction, so equality and
    hashing see only the support.  Terms are reported in lexicographic
    order of the underlying tuples.
    """

    __slots__ = ("_coeffs",)

    def __init__(
        self,
        terms: Mapping[Composition, int] | Iterable[tuple[Composition, int]] = (),
    ) -> None:
        coeffs: dict[Composition, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for comp, c in items:
            comp = Composition(comp)
            c = coeffs.get(comp, 0) + c
            if c:
                coeffs[comp] = c
            else:
                coeffs.pop(comp, None)
        self._coeffs = coeffs

    @classmethod
    def single(cls, comp: Iterable[int], coeff: int = 1) -> "FormalSum":
        return cls([(Composition(comp), coeff)])

    def terms(self) -> tuple[tuple[Composition, int], ...]:
        return tuple(sorted(self._coeffs.items()))

    def coefficient(self, comp: Iterable[int]) -> int:
        return self._coeffs.get(Composition(comp), 0)

    def __iter__(self) -> Iterator[tuple[Composition, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            return NotImplemented
        merged = dict(self._coeffs)
        for comp, c in other._coeffs.items():
            s = merged.get(comp, 0) + c
            if s:
                merged[comp] = s
            else:
                merged.pop(comp, None)
        out = FormalSum.__new__(FormalSum)
        out._coeffs = merged
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self + (-1) * other

    def __mul__(self, k: int) -> "FormalSum":
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return FormalSum()
        out = FormalSum.__new__(FormalSum)
        out._coeffs = {comp: k * c for comp, c in self._coeffs.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self.terms())

    def __repr__(self) -> str:
        return f"FormalSum({list(self.terms())!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for comp, c in self.terms():
            parts.append(str(comp) if c == 1 else f"{c}*{comp}")
        return " + ".join(parts)


@lru_cache(maxsize=None)
def _stuffle_tuples(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    x, y = a[-1], b[-1]
    acc: dict[tuple[int, ...], int] = {}
    for tail, extra in (((y,), _stuffle_tuples(a, b[:-1])),
                        ((x,), _stuffle_tuples(a[:-1], b)),
                        ((x + y,), _stuffle_tuples(a[:-1], b[:-1]))):
        for comp, c in extra:
            key = comp + tail
            acc[key] = acc.get(key, 0) + c
    return tuple(sorted(acc.items()))


def stuffle(a: Iterable[int], b: Iterable[int]) -> FormalSum:
    """Quasi-shuffle product of two compositions, as a FormalSum.

    The recursion splits off last parts: with a = a'x and b = b'y,

        a * b = (a * b')y + (a' * b)x + (a' * b')(x+y).

    The product is the multiplication rule for nested harmonic sums taken
    at a common upper limit.
    """
    raw = _stuffle_tuples(tuple(Composition(a)), tuple(Composition(b)))
    return FormalSum((Composition(comp), c) for comp, c in raw)
