from __future__ import annotations

from fractions import Fraction
from random import Random

import pytest

from pbox.core import Domain, Gamble, PBox, rationals


def frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, float) else Fraction(str(x))


def mkpbox(low, up) -> PBox:
    low = rationals(low)
    return PBox(Domain.of_size(len(low)), low, rationals(up))


def random_pbox(n: int, rng: Random, denom: int = 10) -> PBox:
    """Two monotone staircases ending at 1; min/max gives a valid p-box.

    Duplicate sampled values are common on purpose: ties exercise the
    borderline branches of the case analysis.
    """
    a = sorted(Fraction(rng.randint(0, denom), denom) for _ in range(n - 1))
    b = sorted(Fraction(rng.randint(0, denom), denom) for _ in range(n - 1))
    low = tuple(min(x, y) for x, y in zip(a, b)) + (Fraction(1),)
    up = tuple(max(x, y) for x, y in zip(a, b)) + (Fraction(1),)
    return PBox(Domain.of_size(n), low, up)


def random_gamble(n: int, rng: Random, span: int = 12) -> Gamble:
    values = tuple(Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(n))
    return Gamble(Domain.of_size(n), values)


@pytest.fixture
def adjacency_pbox() -> PBox:
    """n=5 instance whose extreme set includes (1/5,2/5,3/5,4/5,1) and (1/5,2/5,4/5,4/5,1)."""
    return mkpbox(["1/5", "1/5", "3/5", "4/5", 1], ["2/5", "2/5", 1, 1, 1])


@pytest.fixture
def staircase_pbox() -> PBox:
    """n=5 instance with lower staircase i/5 and vacuous upper bound."""
    return mkpbox(["1/5", "2/5", "3/5", "4/5", 1], [1, 1, 1, 1, 1])
