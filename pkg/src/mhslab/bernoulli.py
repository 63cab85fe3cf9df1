"""Bernoulli numbers as exact rationals (B_1 = -1/2 convention) and as
residues mod p^e.

The cache holds even-index values only; B_n for odd n >= 3 is zero and
never stored.  Values come from the defining recurrence

    sum_{j=0}^{m} C(m+1, j) B_j = 0        (m >= 1),

solved for the top index, restricted to even j since the odd entries drop
out.  Modular values are exact values reduced; von Staudt-Clausen pins
down exactly when that reduction is impossible.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .exactnum import DenominatorDivisibleByP, Residue, is_prime, rational_to_residue

__all__ = [
    "IndexAboveCap",
    "PDividesDenominator",
    "BernoulliCache",
    "bernoulli_exact",
    "bernoulli_mod",
    "von_staudt_clausen_check",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 2000


class IndexAboveCap(ValueError):
    """A Bernoulli index beyond the configured cache cap was requested."""


class PDividesDenominator(DenominatorDivisibleByP):
    """B_n has no residue mod p^e because p divides its denominator,
    which happens exactly when (p-1) | n for even n > 0."""


class BernoulliCache:
    """Append-only cache of B_0, B_2, B_4, ... up to a fixed cap.

    One writer at a time (guarded internally); concurrent reads of
    already-published entries are safe.
    """

    def __init__(self, cap: int = DEFAULT_CAP) -> None:
        self.cap = cap
        self._even: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def warm(self, n: int) -> None:
        """Ensure every B_k for k <= n is computed."""
        if n > self.cap:
            raise IndexAboveCap(f"index {n} exceeds cache cap {self.cap}")
        top = n // 2
        if top < len(self._even):
            return
        with self._lock:
            for m in range(len(self._even), top + 1):
                # B_{2m} = -[1 - (2m+1)/2 + sum_{j=1}^{m-1} C(2m+1,2j) B_{2j}]
                #          / (2m+1)
                acc = 1 - Fraction(2 * m + 1, 2)
                for j in range(1, m):
                    acc += math.comb(2 * m + 1, 2 * j) * self._even[j]
                self._even.append(-acc / (2 * m + 1))

    def get(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError(f"Bernoulli index must be >= 0, got {n}")
        if n == 1:
            return Fraction(-1, 2)
        if n % 2:
            return Fraction(0)
        self.warm(n)
        return self._even[n // 2]


_CACHE = BernoulliCache()


def bernoulli_exact(n: int, cache: BernoulliCache | None = None) -> Fraction:
    """Exact B_n; raises IndexAboveCap beyond the cache cap (default 2000)."""
    return (cache or _CACHE).get(n)


def warm_cache(n: int) -> None:
    """Precompute the shared cache through index n (one-writer contract:
    call this before handing the cache to parallel readers)."""
    _CACHE.warm(n)


def bernoulli_mod(n: int, p: int, e: int) -> Residue:
    """B_n reduced into Z/p^e.

    Raises PDividesDenominator when (p-1) | n for even n > 0; by von
    Staudt-Clausen these are exactly the indices where p divides the
    denominator of B_n.
    """
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    Residue(0, p, e)  # validate the ring before anything else
    if n > 0 and n % 2 == 0 and n % (p - 1) == 0:
        raise PDividesDenominator(f"p = {p} divides the denominator of B_{n}")
    return rational_to_residue(bernoulli_exact(n), p, e)


def von_staudt_clausen_check(n: int, cache: BernoulliCache | None = None) -> bool:
    """True iff denominator(B_n) equals the product of primes q with (q-1) | n.

    Independent structural validation of the recurrence output; n must be
    even and >= 2.
    """
    if n < 2 or n % 2:
        raise ValueError(f"von Staudt-Clausen applies to even n >= 2, got {n}")
    denom = 1
    for d in range(1, n + 1):
        if n % d == 0 and is_prime(d + 1):
            denom *= d + 1
    return bernoulli_exact(n, cache).denominator == denom
