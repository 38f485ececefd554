from functools import reduce
from math import gcd, isqrt

import pytest

from k3cert.errors import ComputationError, LegendreExclusion, ValidationError
from k3cert.squares import (
    five_coprime_squares,
    four_squares,
    is_three_square_excluded,
    three_squares,
)


def exhaustive_three(n):
    """Oracle: all descending triples with squares summing to n."""
    out = []
    for m1 in range(isqrt(n), -1, -1):
        for m2 in range(min(m1, isqrt(n - m1 * m1)), -1, -1):
            rem = n - m1 * m1 - m2 * m2
            m3 = isqrt(rem)
            if m3 * m3 == rem and m3 <= m2:
                out.append((m1, m2, m3))
    return out


def test_exclusion_examples():
    assert is_three_square_excluded(7) == (True, (0, 0))
    assert is_three_square_excluded(28) == (True, (1, 0))
    assert is_three_square_excluded(3) == (False, None)


def test_exclusion_witness_reconstructs():
    for n in range(1, 3000):
        excluded, witness = is_three_square_excluded(n)
        if excluded:
            a, b = witness
            assert n == 4**a * (8 * b + 7)


def test_three_squares_examples():
    assert three_squares(11).parts == (3, 1, 1)
    w = three_squares(4)
    assert w.parts == (2, 0, 0) and w.gcd == 2 and w.exponent == 1
    with pytest.raises(LegendreExclusion) as exc:
        three_squares(7)
    assert exc.value.witness == (0, 0)


def test_three_squares_canonical_is_greatest():
    for n in (11, 50, 99, 101):
        w = three_squares(n)
        candidates = [
            t for t in exhaustive_three(n) if reduce(gcd, t) == w.gcd
        ]
        assert w.parts == max(candidates)


def test_four_squares_examples():
    assert four_squares(7).parts == (2, 1, 1, 1)
    assert four_squares(1).parts == (1, 0, 0, 0)
    w = four_squares(8)
    assert w.parts == (2, 2, 0, 0) and w.gcd == 2 and w.exponent == 1


def test_five_squares_examples():
    assert five_coprime_squares(1).parts == (1, 0, 0, 0, 0)
    assert five_coprime_squares(4).parts == (1, 1, 1, 1, 0)
    assert five_coprime_squares(8).parts == (2, 1, 1, 1, 1)


def test_sweep_small():
    for n in range(1, 3000):
        excluded, _ = is_three_square_excluded(n)
        if excluded:
            with pytest.raises(LegendreExclusion):
                three_squares(n)
        else:
            w = three_squares(n)
            assert w.holds()
            assert n % 4**w.exponent == 0 and (n // 4**w.exponent) % 4 != 0
        w4 = four_squares(n)
        assert w4.holds()
        if n % 2:
            assert w4.gcd == 1
        w5 = five_coprime_squares(n)
        assert w5.holds() and w5.gcd == 1


def test_determinism():
    assert three_squares(12345).parts == three_squares(12345).parts
    assert four_squares(4096).parts == four_squares(4096).parts


def test_input_validation():
    with pytest.raises(ValidationError):
        three_squares(0)
    with pytest.raises(ComputationError):
        four_squares(10**9 + 1)
