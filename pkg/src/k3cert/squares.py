"""Sums of squares with gcd certificates.

Every witness is canonical: parts in descending order, and among valid
candidates the lexicographically greatest is returned, so identical
inputs always produce identical certificates.  The three/four-square
variants certify gcd(parts) = 2^l for the exponent l dictated by the
2-adic valuation of n; the five-square variant certifies coprimality.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import ComputationError, LegendreExclusion, ValidationError

MAX_N = 10**9


@dataclass(frozen=True)
class SquaresWitness:
    n: int
    parts: tuple[int, ...]
    gcd: int
    exponent: int  # parts gcd is 2**exponent

    @property
    def k(self) -> int:
        return len(self.parts)

    def holds(self) -> bool:
        from functools import reduce

        g = reduce(gcd, self.parts)
        return (
            sum(p * p for p in self.parts) == self.n
            and g == self.gcd
            and self.gcd == 2**self.exponent
        )


def _check_n(n: int) -> None:
    if n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    if n > MAX_N:
        raise ComputationError(f"n = {n} exceeds the search ceiling {MAX_N}")


def is_three_square_excluded(n: int) -> tuple[bool, tuple[int, int] | None]:
    """n = 4^a (8b + 7)?  Returns the (a, b) witness when excluded."""
    if n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    a = 0
    m = n
    while m % 4 == 0:
        m //= 4
        a += 1
    if m % 8 == 7:
        return True, (a, (m - 7) // 8)
    return False, None


def _coprime_squares(n: int, k: int) -> tuple[int, ...] | None:
    """Lexicographically greatest descending k-tuple of non-negative
    integers with squares summing to n and gcd 1; None if none exists."""
    from functools import reduce

    def rec(rem: int, slots: int, cap: int, prefix: tuple[int, ...]):
        if slots == 1:
            m = isqrt(rem)
            if m * m == rem and m <= cap:
                cand = prefix + (m,)
                if reduce(gcd, cand) == 1:
                    return cand
            return None
        # a descending tail needs rem <= slots * m^2
        for m in range(min(cap, isqrt(rem)), -1, -1):
            if m * m * slots < rem:
                break
            found = rec(rem - m * m, slots - 1, m, prefix + (m,))
            if found is not None:
                return found
        return None

    return rec(n, k, isqrt(n), ())


def three_squares(n: int) -> SquaresWitness:
    """n = m1^2 + m2^2 + m3^2 with gcd(m_i) = 2^l, 4^l | n, 4^(l+1) !| n."""
    _check_n(n)
    excluded, witness = is_three_square_excluded(n)
    if excluded:
        raise LegendreExclusion(n, *witness)
    l = 0
    core = n
    while core % 4 == 0:
        core //= 4
        l += 1
    parts = _coprime_squares(core, 3)
    if parts is None:
        raise ComputationError(f"no coprime three-square decomposition found for {core}")
    scale = 2**l
    return SquaresWitness(n, tuple(scale * p for p in parts), scale, l)


def _four_square_exponent(n: int) -> int:
    """The l with 2^(2l+1) | n and 2^(2l+3) !| n; l = 0 for odd n, where
    the first divisibility is vacuous and coprime parts always exist."""
    e = 0
    m = n
    while m % 2 == 0:
        m //= 2
        e += 1
    if e == 0:
        return 0
    l = (e - 1) // 2
    if not (2 ** (2 * l + 1) <= n and n % 2 ** (2 * l + 1) == 0 and n % 2 ** (2 * l + 3) != 0):
        raise ComputationError(f"no exponent l certifies the four-square gcd for n = {n}")
    return l


def four_squares(n: int) -> SquaresWitness:
    """n = m1^2 + ... + m4^2 with gcd(m_i) = 2^l (l as dictated by n)."""
    _check_n(n)
    l = _four_square_exponent(n)
    core = n // 4**l
    parts = _coprime_squares(core, 4)
    if parts is None:
        raise ComputationError(f"no coprime four-square decomposition found for {core}")
    scale = 2**l
    return SquaresWitness(n, tuple(scale * p for p in parts), scale, l)


def five_coprime_squares(n: int) -> SquaresWitness:
    """n as a square sum of five coprime non-negative integers."""
    _check_n(n)
    parts = _coprime_squares(n, 5)
    if parts is None:
        raise ComputationError(f"no coprime five-square decomposition found for {n}")
    return SquaresWitness(n, parts, 1, 0)


def iter_five_coprime_squares(n: int):
    """All descending gcd-1 five-square decompositions of n, greatest
    first.  Used as a fallback pool when an embedding needs an
    alternative witness to achieve primitivity."""
    from functools import reduce

    def rec(rem: int, slots: int, cap: int, prefix: tuple[int, ...]):
        if slots == 0:
            if rem == 0 and reduce(gcd, prefix) == 1:
                yield prefix
            return
        hi = min(cap, isqrt(rem))
        for m in range(hi, -1, -1):
            if m * m * slots < rem:
                break
            yield from rec(rem - m * m, slots - 1, m, prefix + (m,))

    yield from rec(n, 5, isqrt(n), ())
