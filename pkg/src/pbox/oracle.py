"""Brute-force ground truth: credal-set vertex enumeration from first principles.

Nothing here trusts the structural machinery.  Candidate staircases are built
value by value, and a staircase is kept exactly when its active constraint
indicators (lower bound met, upper bound met, zero mass, normalization) have
full rank, which is the defining property of a polytope vertex.  All
arithmetic is exact.

Two candidate regimes:

* ``pruned`` draws F(x_i) from {low(x_j): j >= i} and {up(x_k): k <= i};
* ``reference`` draws from every bound value on either side, assuming nothing
  about where vertex coordinates may come from beyond the rank argument.

Agreement of the two regimes is itself a checkable claim, exercised on small
domains by the test suite.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from random import Random

from .core import DomainMismatchError, Gamble, PBox, StepCDF, expectation
from .extremes import enumerate_extremes, lower_expectation
from .linalg import rank

DEFAULT_LIMIT = 12
_LIMIT_ENV = "PBOX_ORACLE_LIMIT"


class DomainTooLargeError(ValueError):
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(
            f"domain size {n} exceeds the oracle guard {limit} "
            f"(override with {_LIMIT_ENV} at your own risk)"
        )


def oracle_limit() -> int:
    raw = os.environ.get(_LIMIT_ENV)
    return int(raw) if raw else DEFAULT_LIMIT


def _guard(n: int) -> None:
    limit = oracle_limit()
    if n > limit:
        raise DomainTooLargeError(n, limit)


def _active_rows(values: tuple[Fraction, ...], pbox: PBox) -> list[list[Fraction]]:
    n = pbox.n
    rows = [[Fraction(1)] * n]  # normalization
    prev = Fraction(0)
    for i in range(1, n + 1):
        v = values[i - 1]
        if v == pbox.low_at(i):
            rows.append([Fraction(1) if k <= i else Fraction(0) for k in range(1, n + 1)])
        if v == pbox.up_at(i) and i < n:
            rows.append([Fraction(1) if k > i else Fraction(0) for k in range(1, n + 1)])
        if v == prev:
            rows.append([Fraction(1) if k == i else Fraction(0) for k in range(1, n + 1)])
        prev = v
    return rows


def _is_vertex(values: tuple[Fraction, ...], pbox: PBox) -> bool:
    return rank(_active_rows(values, pbox)) == pbox.n


def _candidate_values(pbox: PBox, mode: str) -> list[list[Fraction]]:
    n = pbox.n
    per_index: list[list[Fraction]] = []
    all_bounds = sorted(set(pbox.low) | set(pbox.up))
    for i in range(1, n + 1):
        if mode == "pruned":
            pool = {pbox.low_at(j) for j in range(i, n + 1)}
            pool |= {pbox.up_at(k) for k in range(1, i + 1)}
        elif mode == "reference":
            pool = set(all_bounds)
        else:
            raise ValueError(f"unknown oracle mode {mode!r}")
        per_index.append(sorted(v for v in pool if pbox.low_at(i) <= v <= pbox.up_at(i)))
    per_index[n - 1] = [Fraction(1)]
    return per_index


@lru_cache(maxsize=None)
def _oracle_cached(pbox: PBox, mode: str) -> tuple[StepCDF, ...]:
    _guard(pbox.n)
    per_index = _candidate_values(pbox, mode)
    found: list[StepCDF] = []
    stack: list[tuple[int, tuple[Fraction, ...]]] = [(0, ())]
    while stack:
        depth, prefix = stack.pop()
        if depth == pbox.n:
            if _is_vertex(prefix, pbox):
                found.append(StepCDF(pbox.domain, prefix))
            continue
        floor = prefix[-1] if prefix else Fraction(0)
        for v in per_index[depth]:
            if v >= floor:
                stack.append((depth + 1, prefix + (v,)))
    found.sort(key=lambda f: f.values)
    return tuple(found)


def oracle_extremes(pbox: PBox, mode: str = "pruned") -> tuple[StepCDF, ...]:
    """Every vertex of the credal polytope, by exhaustive staircase search."""
    return _oracle_cached(pbox, mode)


def oracle_lower_expectation(h: Gamble, pbox: PBox) -> Fraction:
    """Minimum expectation over the oracle's vertex list (attained at a vertex)."""
    h.domain.require_same(pbox.domain)
    return min(expectation(cdf, h) for cdf in oracle_extremes(pbox))


def _range_candidates(pbox: PBox, i: int) -> set[Fraction]:
    pool = {pbox.low_at(j) for j in range(i, pbox.n + 1)}
    pool |= {pbox.up_at(k) for k in range(1, i + 1)}
    return pool


def satisfies_range_theorem(cdf: StepCDF, pbox: PBox) -> bool:
    return all(cdf.at(i) in _range_candidates(pbox, i) for i in range(1, pbox.n + 1))


def satisfies_local_candidates(cdf: StepCDF, pbox: PBox) -> bool:
    n = pbox.n
    for i in range(1, n + 1):
        allowed = {pbox.low_at(i), pbox.up_at(i), cdf.at(i - 1)}
        if i < n:
            allowed.add(cdf.at(i + 1))
        if cdf.at(i) not in allowed:
            return False
    return True


def random_gamble(pbox: PBox, rng: Random) -> Gamble:
    values = tuple(
        Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(pbox.n)
    )
    return Gamble(pbox.domain, values)


@dataclass(frozen=True)
class CheckSuite:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class CheckReport:
    suites: tuple[CheckSuite, ...]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def render(self) -> str:
        lines = [
            f"[{'PASS' if s.ok else 'FAIL'}] {s.name}: {s.detail}" for s in self.suites
        ]
        lines.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def cross_check(pbox: PBox, trials: int, seed: int = 0) -> CheckReport:
    """Arbitrate the structural machinery against the brute-force oracle.

    Checks vertex-set equality for both enumeration methods, exact agreement
    of the lower expectation on ``trials`` seeded random gambles, and the two
    staircase range properties on every oracle vertex.
    """
    _guard(pbox.n)
    suites: list[CheckSuite] = []

    truth = {cdf.values for cdf in oracle_extremes(pbox)}
    structural = {e.cdf.values for e in enumerate_extremes(pbox, "structural")}
    bfs = {e.cdf.values for e in enumerate_extremes(pbox, "bfs")}
    if structural == truth:
        suites.append(
            CheckSuite("extremes_structural_vs_oracle", True, f"{len(truth)} extreme points agree")
        )
    else:
        diff = sorted(structural ^ truth)[0]
        suites.append(
            CheckSuite(
                "extremes_structural_vs_oracle",
                False,
                f"first mismatch {tuple(str(v) for v in diff)}",
            )
        )
    if bfs == structural:
        suites.append(CheckSuite("extremes_bfs_vs_structural", True, "methods agree"))
    else:
        diff = sorted(bfs ^ structural)[0]
        suites.append(
            CheckSuite(
                "extremes_bfs_vs_structural",
                False,
                f"first mismatch {tuple(str(v) for v in diff)}",
            )
        )

    rng = Random(seed)
    bad = None
    for k in range(trials):
        h = random_gamble(pbox, rng)
        ours = lower_expectation(h, pbox)[0]
        truth_value = oracle_lower_expectation(h, pbox)
        if ours != truth_value:
            bad = (k, h, ours, truth_value)
            break
    if bad is None:
        suites.append(
            CheckSuite("lower_expectation_agreement", True, f"{trials} gambles agree exactly")
        )
    else:
        k, h, ours, truth_value = bad
        suites.append(
            CheckSuite(
                "lower_expectation_agreement",
                False,
                f"gamble #{k} {tuple(str(v) for v in h.values)}: {ours} vs oracle {truth_value}",
            )
        )

    vertices = oracle_extremes(pbox)
    bad_range = [cdf for cdf in vertices if not satisfies_range_theorem(cdf, pbox)]
    suites.append(
        CheckSuite(
            "range_theorem",
            not bad_range,
            "all vertices in range candidates"
            if not bad_range
            else f"violated by {tuple(str(v) for v in bad_range[0].values)}",
        )
    )
    bad_local = [cdf for cdf in vertices if not satisfies_local_candidates(cdf, pbox)]
    suites.append(
        CheckSuite(
            "local_candidate_lemma",
            not bad_local,
            "all vertices locally supported"
            if not bad_local
            else f"violated by {tuple(str(v) for v in bad_local[0].values)}",
        )
    )
    return CheckReport(tuple(suites))
