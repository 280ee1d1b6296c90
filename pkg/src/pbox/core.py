"""Domain model: finite ordered domains, p-boxes, step CDFs, mass functions, gambles.

All values are exact rationals (:class:`fractions.Fraction`); floats are
rejected at the door because the downstream case analysis compares values for
equality.  Every type here is an immutable value, every operation a pure
function.

>>> d = Domain.of_size(5)
>>> p = MassFunction(d, rationals(["2/5", "1/5", 0, 0, "2/5"]))
>>> expectation(p, Gamble(d, rationals([1, 2, 3, 3, 1])))
Fraction(6, 5)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce to an exact Fraction; strings may be 'a/b' or decimal literals.

    Floats are deliberately rejected: 0.2 the float is not 1/5, and silent
    binary rounding would poison every equality test downstream.
    """
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}: pass a string like '0.2' or a Fraction"
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rationals(values: Iterable[Union[int, str, Fraction]]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


class DomainMismatchError(ValueError):
    """Two objects that must share a domain do not."""


@dataclass(frozen=True)
class Violation:
    """One violated invariant: a rule name plus where it failed."""

    rule: str  # non_monotone | bound_order | terminal_not_one | out_of_range | ...
    side: str | None  # "low" | "up" | None
    index: int | None  # 1-based domain position, None for global rules
    detail: str = ""

    def __str__(self) -> str:
        where = f"({self.side}, {self.index})" if self.side else f"(index {self.index})"
        return f"{self.rule}{where}: {self.detail}" if self.detail else f"{self.rule}{where}"


class InvariantViolation(ValueError):
    """Raised when a value type's invariants fail; carries every violation found."""

    def __init__(self, kind: str, violations: Sequence[Violation]):
        self.kind = kind
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid {kind}: {lines}")


@dataclass(frozen=True)
class Domain:
    """Finite ordered domain x_1 < ... < x_n.  Labels are opaque ordered tokens."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise InvariantViolation("Domain", [Violation("empty_domain", None, None)])
        if len(set(self.labels)) != len(self.labels):
            raise InvariantViolation("Domain", [Violation("duplicate_label", None, None)])

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def of_size(cls, n: int) -> "Domain":
        return cls(tuple(f"x{i}" for i in range(1, n + 1)))

    def require_same(self, other: "Domain") -> None:
        if self != other:
            raise DomainMismatchError(f"domain {self.labels} != {other.labels}")


def _check_vector(domain: Domain, values: Sequence[Fraction], kind: str) -> tuple[Fraction, ...]:
    vals = tuple(values)
    if len(vals) != domain.n:
        raise InvariantViolation(
            kind, [Violation("length_mismatch", None, None, f"{len(vals)} values for n={domain.n}")]
        )
    if not all(isinstance(v, Fraction) for v in vals):
        raise InvariantViolation(kind, [Violation("not_rational", None, None)])
    return vals


@dataclass(frozen=True)
class Gamble:
    """A rational-valued function on the domain."""

    domain: Domain
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_vector(self.domain, self.values, "Gamble"))

    def at(self, i: int) -> Fraction:
        return self.values[i - 1]

    def __neg__(self) -> "Gamble":
        return Gamble(self.domain, tuple(-v for v in self.values))

    def __add__(self, other: "Gamble") -> "Gamble":
        self.domain.require_same(other.domain)
        return Gamble(self.domain, tuple(a + b for a, b in zip(self.values, other.values)))


@dataclass(frozen=True)
class StepCDF:
    """A distribution function F on the domain; F(x_0) := 0 by convention."""

    domain: Domain
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = _check_vector(self.domain, self.values, "StepCDF")
        object.__setattr__(self, "values", vals)
        problems = []
        for i, v in enumerate(vals, start=1):
            if not 0 <= v <= 1:
                problems.append(Violation("out_of_range", "F", i, f"F={v}"))
            if i > 1 and v < vals[i - 2]:
                problems.append(Violation("non_monotone", "F", i, f"{vals[i - 2]} > {v}"))
        if vals[-1] != 1:
            problems.append(Violation("terminal_not_one", "F", self.domain.n, f"F(x_n)={vals[-1]}"))
        if problems:
            raise InvariantViolation("StepCDF", problems)

    def at(self, i: int) -> Fraction:
        """F(x_i), with the virtual F(x_0) = 0."""
        return Fraction(0) if i == 0 else self.values[i - 1]

    def to_mass(self) -> "MassFunction":
        return MassFunction(
            self.domain, tuple(self.at(i) - self.at(i - 1) for i in range(1, self.domain.n + 1))
        )


@dataclass(frozen=True)
class MassFunction:
    """A probability mass function; prefix sums give back the StepCDF."""

    domain: Domain
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = _check_vector(self.domain, self.values, "MassFunction")
        object.__setattr__(self, "values", vals)
        problems = [
            Violation("out_of_range", "p", i, f"p={v}")
            for i, v in enumerate(vals, start=1)
            if v < 0
        ]
        if sum(vals) != 1:
            problems.append(Violation("not_normalized", "p", None, f"sum={sum(vals)}"))
        if problems:
            raise InvariantViolation("MassFunction", problems)

    def at(self, i: int) -> Fraction:
        return self.values[i - 1]

    def to_cdf(self) -> StepCDF:
        total = Fraction(0)
        out = []
        for v in self.values:
            total += v
            out.append(total)
        return StepCDF(self.domain, tuple(out))


@dataclass(frozen=True)
class PBox:
    """Pointwise bounds (low, up) on distribution functions over the domain."""

    domain: Domain
    low: tuple[Fraction, ...]
    up: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        low = _check_vector(self.domain, self.low, "PBox")
        up = _check_vector(self.domain, self.up, "PBox")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "up", up)
        problems = []
        for side, vals in (("low", low), ("up", up)):
            for i, v in enumerate(vals, start=1):
                if not 0 <= v <= 1:
                    problems.append(Violation("out_of_range", side, i, f"{side}={v}"))
                if i > 1 and v < vals[i - 2]:
                    problems.append(Violation("non_monotone", side, i, f"{vals[i - 2]} > {v}"))
            if vals[-1] != 1:
                problems.append(Violation("terminal_not_one", side, self.domain.n))
        for i, (lo, hi) in enumerate(zip(low, up), start=1):
            if lo > hi:
                problems.append(Violation("bound_order", None, i, f"low {lo} > up {hi}"))
        if problems:
            raise InvariantViolation("PBox", problems)

    @property
    def n(self) -> int:
        return self.domain.n

    def low_at(self, i: int) -> Fraction:
        return Fraction(0) if i == 0 else self.low[i - 1]

    def up_at(self, i: int) -> Fraction:
        return Fraction(0) if i == 0 else self.up[i - 1]

    def low_cdf(self) -> StepCDF:
        return StepCDF(self.domain, self.low)

    def up_cdf(self) -> StepCDF:
        return StepCDF(self.domain, self.up)

    @property
    def is_precise(self) -> bool:
        return self.low == self.up

    @classmethod
    def vacuous(cls, domain: Domain) -> "PBox":
        zeros = tuple(Fraction(0) for _ in range(domain.n - 1))
        ones = tuple(Fraction(1) for _ in range(domain.n))
        return cls(domain, zeros + (Fraction(1),), ones)

    @classmethod
    def precise(cls, cdf: StepCDF) -> "PBox":
        return cls(cdf.domain, cdf.values, cdf.values)


def validate_pbox(
    domain: Domain,
    low: Iterable[Union[int, str, Fraction]],
    up: Iterable[Union[int, str, Fraction]],
) -> PBox:
    """Build a PBox from raw values, raising with the full violation list if invalid."""
    return PBox(domain, rationals(low), rationals(up))


@dataclass(frozen=True)
class ChainCoefficients:
    """Coefficients alpha with h = sum_i alpha_i * 1_{A_i} (A_i the prefix sets)."""

    values: tuple[Fraction, ...]

    def at(self, i: int) -> Fraction:
        return self.values[i - 1]

    def reconstruct(self, domain: Domain) -> Gamble:
        n = len(self.values)
        vals = tuple(sum(self.values[j] for j in range(i, n)) for i in range(n))
        return Gamble(domain, vals)


def chain_decompose(h: Gamble) -> ChainCoefficients:
    """Unique expansion of a gamble over the prefix-set indicators.

    alpha_i = h_i - h_{i+1} for i < n and alpha_n = h_n, so that
    h_i = sum_{j >= i} alpha_j.

    >>> chain_decompose(Gamble(Domain.of_size(5), rationals([1, 2, 3, 3, 1]))).values
    (Fraction(-1, 1), Fraction(-1, 1), Fraction(0, 1), Fraction(2, 1), Fraction(1, 1))
    """
    n = h.domain.n
    vals = [h.at(i) - h.at(i + 1) for i in range(1, n)]
    vals.append(h.at(n))
    return ChainCoefficients(tuple(vals))


def expectation(dist: Union[StepCDF, MassFunction], h: Gamble) -> Fraction:
    """Exact expectation of a gamble under a distribution.

    For a CDF the equivalent form sum_i alpha_i F(x_i) with the chain
    coefficients of h is used; for a mass function the direct sum.
    """
    dist.domain.require_same(h.domain)
    if isinstance(dist, MassFunction):
        return sum((p * v for p, v in zip(dist.values, h.values)), Fraction(0))
    alpha = chain_decompose(h)
    return sum(
        (alpha.at(i) * dist.at(i) for i in range(1, dist.domain.n + 1)), Fraction(0)
    )
