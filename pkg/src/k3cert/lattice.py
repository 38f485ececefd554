"""Rank-2 hyperbolic lattices and reduction of their bases."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ValidationError
from .linalg import congruent, mat_mul

FLIP2 = [[1, 0], [0, -1]]
SWAP = [[0, 1], [1, 0]]
SUB = [[1, -1], [0, 1]]  # F2 <- F2 - F1


@dataclass(frozen=True)
class Rank2Lattice:
    """Even lattice with Gram [[2d, a], [a, 2b]], signature (1,1), d > 0."""

    d: int
    a: int
    b: int

    @property
    def gram(self) -> list[list[int]]:
        return [[2 * self.d, self.a], [self.a, 2 * self.b]]

    @property
    def determinant(self) -> int:
        return 4 * self.b * self.d - self.a * self.a

    @property
    def det_is_even(self) -> bool:
        return self.a % 2 == 0


def validate_rank2(d: int, a: int, b: int) -> Rank2Lattice:
    if d <= 0:
        raise ValidationError("no positive class designated: d must be > 0")
    if 4 * b * d - a * a >= 0:
        raise ValidationError(
            f"not hyperbolic: 4bd - a^2 = {4 * b * d - a * a} >= 0"
        )
    return Rank2Lattice(d, a, b)


def _validate_even_binary(gram) -> tuple[int, int, int]:
    if len(gram) != 2 or any(len(row) != 2 for row in gram):
        raise ValidationError("expected a 2x2 Gram matrix")
    p, c, c2, q = gram[0][0], gram[0][1], gram[1][0], gram[1][1]
    if c != c2:
        raise ValidationError("Gram matrix must be symmetric")
    if p % 2 or q % 2:
        raise ValidationError("even lattice required: diagonal entries must be even")
    if p * q - c * c >= 0:
        raise ValidationError("form must be indefinite (negative determinant)")
    return p, c, q


def _positive_primitive_vector(p: int, c: int, q: int) -> tuple[int, int]:
    """Smallest primitive (x, y) with p x^2 + 2 c x y + q y^2 > 0."""
    k = 1
    while True:
        ring = [(x, y) for x in range(-k, k + 1) for y in range(-k, k + 1)
                if max(abs(x), abs(y)) == k]
        for x, y in sorted(ring):
            if gcd(x, y) == 1 and p * x * x + 2 * c * x * y + q * y * y > 0:
                return x, y
        k += 1


def _complete_basis(x: int, y: int) -> list[list[int]]:
    """Unimodular matrix with first column (x, y), gcd(x, y) = 1."""
    # extended gcd: find u, v with x*v - y*u = 1
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    # x*old_s + y*old_t = 1, so take second column (-old_t, old_s)
    return [[x, -old_t], [y, old_s]]


def reduce_rank2_basis(gram) -> tuple[list[list[int]], list[list[int]]]:
    """Reduce an even indefinite binary Gram [[p, c], [c, q]] so that
    p >= 0, c >= 0 and q < 0.

    Returns (reduced Gram, T) with T unimodular and T^T * gram * T equal
    to the reduced Gram.  Works for both the all-even normalisation
    [[2a, 2m], [2m, 2b]] and odd off-diagonal forms; sign flips are
    preferred to subtraction steps, and the subtraction direction is the
    trace-decreasing one, so the output is deterministic.
    """
    _validate_even_binary(gram)
    t = [[1, 0], [0, 1]]
    guard = 0
    while True:
        guard += 1
        if guard > 100000:
            raise ValidationError("binary form reduction failed to terminate")
        m = congruent(gram, t)
        p, c, q = m[0][0], m[0][1], m[1][1]
        if c < 0:
            t = mat_mul(t, FLIP2)
            continue
        if p >= 0 and q < 0:
            return m, t
        if p < 0 and q >= 0:
            t = mat_mul(t, SWAP)
            continue
        if p < 0 and q < 0:
            x, y = _positive_primitive_vector(p, c, q)
            t = mat_mul(t, _complete_basis(x, y))
            continue
        # p >= 0, q >= 0, c >= 0: trace-reducing subtraction phase
        if q < p:
            t = mat_mul(t, SWAP)
            continue
        t = mat_mul(t, SUB)
