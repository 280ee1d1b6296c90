"""Extreme points of p-box credal sets and the adjacency structure of their cones.

The bridge between combinatorics and values: a structurally valid generator
family pins down a unique candidate CDF through its active constraints
(positive chain entry at i: F(x_i) = low(x_i); negative entry: F(x_i) =
up(x_i); singleton s: zero mass at s).  The candidate is an extreme point of
the credal set exactly when it is monotone and within the bounds.

``adjacent_mesc`` realizes single-generator exchanges: candidate replacements
are drawn from the gap enclosing the removed generator, then filtered by
structural validity, the facet sign test, and feasibility for the concrete
p-box.  Ties in the governing value comparisons naturally return both
candidates (two cones triangulating one extreme point's normal cone).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .cones import (
    GapCase,
    GeneratorSet,
    InvalidGeneratorSetError,
    Member,
    NEG,
    POS,
    adjacency_sign_test,
    enumerate_mescs,
    member_label,
    mesc_validate,
)
from .core import (
    DomainMismatchError,
    Gamble,
    MassFunction,
    PBox,
    StepCDF,
    expectation,
)
from .linalg import solve_square


class GeneratorNotInSetError(ValueError):
    pass


class OmegaNotReplaceableError(ValueError):
    pass


class InfeasibleInputError(ValueError):
    pass


class InfeasibleStartError(ValueError):
    pass


@dataclass(frozen=True)
class Infeasible:
    """A generator family whose pinned CDF leaves the p-box; names the failed condition."""

    condition: str


@dataclass(frozen=True)
class ExtremePoint:
    """An extreme CDF together with every generator family that produces it."""

    cdf: StepCDF
    witnesses: tuple[GeneratorSet, ...]

    def mass(self) -> MassFunction:
        return self.cdf.to_mass()


def _gap_of(gaps: tuple[GapCase, ...], position: int) -> GapCase:
    for gap in gaps:
        if gap.left < position <= gap.right:
            return gap
    raise RuntimeError(f"position {position} not covered by gaps")


def _pinned_values(g: GeneratorSet, pbox: PBox) -> list[Fraction]:
    """CDF values forced by the active constraints, gap by gap."""
    gaps = mesc_validate(g).gaps
    assert gaps is not None
    values: list[Fraction] = [Fraction(0)] * (pbox.n + 1)  # index 0 is the virtual F(x_0)
    for gap in gaps:
        left_value = values[gap.left]
        bound = pbox.up_at(gap.right) if gap.right_is_upper else pbox.low_at(gap.right)
        for i in gap.members:
            values[i] = bound if i >= gap.split else left_value
    return values[1:]


def _solved_values(g: GeneratorSet, pbox: PBox) -> list[Fraction]:
    """The same values from the raw linear system, as an independent check."""
    n = pbox.n
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, sign in g.chain:
        row = [Fraction(0)] * n
        row[i - 1] = Fraction(1)
        rows.append(row)
        rhs.append(pbox.low_at(i) if sign == POS else pbox.up_at(i))
    for s in g.singletons:
        row = [Fraction(0)] * n
        row[s - 1] = Fraction(1)
        row[s - 2] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    solution = solve_square(rows, rhs)
    if solution is None:
        raise InvalidGeneratorSetError("active-constraint system is singular")
    return solution


def _infeasibility(gaps: tuple[GapCase, ...], values: list[Fraction], pbox: PBox) -> str | None:
    prev = Fraction(0)
    for i in range(1, pbox.n + 1):
        gap = _gap_of(gaps, i)
        name = f"(x{gap.left}, x{gap.right}]"
        side = "up" if gap.right_is_upper else "low"
        v = values[i - 1]
        if v < prev:
            return (
                f"{gap.case} gap {name}: monotonicity fails at x{i} "
                f"(F(x{i - 1}) = {prev} > {v} = F(x{i}))"
            )
        if v > pbox.up_at(i):
            return (
                f"{gap.case} gap {name}: requires up F(x{i}) >= {side} F(x{gap.right}) "
                f"({pbox.up_at(i)} < {v})"
            )
        if v < pbox.low_at(i):
            return (
                f"{gap.case} gap {name}: requires low F(x{i}) <= F value {v} "
                f"carried from x{gap.left}"
            )
        prev = v
    return None


@lru_cache(maxsize=None)
def _extreme_cached(g: GeneratorSet, pbox: PBox) -> Union[StepCDF, Infeasible]:
    report = mesc_validate(g)
    if not report.ok:
        raise InvalidGeneratorSetError(str(report))
    values = _pinned_values(g, pbox)
    if values != _solved_values(g, pbox):
        raise RuntimeError(
            f"internal: gap formulas disagree with the constraint solve for {g.describe()}"
        )
    assert report.gaps is not None
    reason = _infeasibility(report.gaps, values, pbox)
    if reason is not None:
        return Infeasible(reason)
    return StepCDF(pbox.domain, tuple(values))


def extreme_from_mesc(g: GeneratorSet, pbox: PBox) -> Union[StepCDF, Infeasible]:
    """Solve the family's active constraints against a p-box.

    Returns the pinned CDF when it realizes an extreme point, otherwise an
    :class:`Infeasible` naming the violated gap condition.
    """
    if g.n != pbox.n:
        raise DomainMismatchError(f"generator set on n={g.n}, p-box on n={pbox.n}")
    return _extreme_cached(g, pbox)


def _replacement_region(g: GeneratorSet, member: Member) -> tuple[int, int]:
    """Anchor indices (left, right) bracketing the removed generator."""
    kind, idx = member
    if kind == "singleton":
        gaps = mesc_validate(g).gaps
        assert gaps is not None
        gap = _gap_of(gaps, idx)
        return gap.left, gap.right
    anchors = [i for i, _ in g.chain]
    pos = anchors.index(idx)
    left = anchors[pos - 1] if pos > 0 else 0
    return left, anchors[pos + 1]


def _candidates(g: GeneratorSet, member: Member) -> list[GeneratorSet]:
    kind, idx = member
    left, right = _replacement_region(g, member)
    if kind == "singleton":
        base_chain = g.chain
        base_singles = tuple(s for s in g.singletons if s != idx)
    else:
        sign = dict(g.chain)[idx]
        base_chain = tuple(e for e in g.chain if e != (idx, sign))
        base_singles = g.singletons
    out: list[GeneratorSet] = []
    seen = {g}
    for t in range(left + 1, right + 1):
        if t in base_singles:
            continue
        cand = GeneratorSet(g.n, base_chain, base_singles + (t,))
        if cand not in seen:
            seen.add(cand)
            out.append(cand)
    occupied = dict(base_chain)
    for i in range(left + 1, right):
        for sign in (POS, NEG):
            if occupied.get(i) == sign:
                continue
            cand = GeneratorSet(g.n, base_chain + ((i, sign),), base_singles)
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
    return out


@lru_cache(maxsize=None)
def _adjacent_cached(
    g: GeneratorSet, member: Member, pbox: PBox
) -> tuple[tuple[GeneratorSet, StepCDF], ...]:
    results = []
    for cand in _candidates(g, member):
        if cand.size() != g.n or not mesc_validate(cand).ok:
            continue
        if len(g.family() & cand.family()) != g.n - 1:
            continue
        if not adjacency_sign_test(g, cand):
            continue
        solved = extreme_from_mesc(cand, pbox)
        if isinstance(solved, Infeasible):
            continue
        results.append((cand, solved))
    results.sort(key=lambda pair: (pair[1].values, pair[0].sort_key()))
    return tuple(results)


def adjacent_mesc(
    g: GeneratorSet, member: Member, pbox: PBox
) -> list[tuple[GeneratorSet, StepCDF]]:
    """Feasible single-generator exchanges of ``member``, with their CDFs.

    A strict inequality in the governing bound comparison leaves exactly one
    survivor; equality (the borderline) leaves both, and both then pin the
    same CDF.
    """
    if member not in g.members():
        raise GeneratorNotInSetError(f"{member_label(member, g.n)} is not in {g.describe()}")
    if member == ("prefix", g.n):
        raise OmegaNotReplaceableError("the whole-domain generator cannot be exchanged")
    if isinstance(extreme_from_mesc(g, pbox), Infeasible):
        raise InfeasibleInputError(f"{g.describe()} is not feasible for this p-box")
    return list(_adjacent_cached(g, member, pbox))


def _group(found: dict[GeneratorSet, StepCDF]) -> tuple[ExtremePoint, ...]:
    by_cdf: dict[StepCDF, list[GeneratorSet]] = {}
    for gen, cdf in found.items():
        by_cdf.setdefault(cdf, []).append(gen)
    points = [
        ExtremePoint(cdf, tuple(sorted(gens, key=GeneratorSet.sort_key)))
        for cdf, gens in by_cdf.items()
    ]
    points.sort(key=lambda e: e.cdf.values)
    return tuple(points)


@lru_cache(maxsize=None)
def _enumerate_cached(pbox: PBox, method: str) -> tuple[ExtremePoint, ...]:
    found: dict[GeneratorSet, StepCDF] = {}
    if method == "structural":
        for gen in enumerate_mescs(pbox.domain):
            solved = extreme_from_mesc(gen, pbox)
            if not isinstance(solved, Infeasible):
                found[gen] = solved
    elif method == "bfs":
        seed = GeneratorSet.full_chain(pbox.n)
        solved = extreme_from_mesc(seed, pbox)
        assert isinstance(solved, StepCDF)  # the lower bound is always a valid CDF
        found[seed] = solved
        frontier = [seed]
        while frontier:
            node = frontier.pop()
            for member in node.members()[:-1]:
                for neighbor, cdf in _adjacent_cached(node, member, pbox):
                    if neighbor not in found:
                        found[neighbor] = cdf
                        frontier.append(neighbor)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _group(found)


def enumerate_extremes(pbox: PBox, method: str = "structural") -> tuple[ExtremePoint, ...]:
    """All extreme points, sorted by CDF, each carrying its witness families.

    ``structural`` filters the full structural enumeration through
    :func:`extreme_from_mesc`; ``bfs`` grows the adjacency graph from the
    all-lower-bounds seed.  The two must agree on every valid p-box.
    """
    return _enumerate_cached(pbox, method)


@dataclass(frozen=True)
class FanEdge:
    a: int
    b: int
    removed: frozenset[int]
    added: frozenset[int]
    cross: bool


@dataclass(frozen=True)
class FanGraph:
    """Feasible generator families with swap edges, plus the quotient on CDFs."""

    pbox: PBox
    nodes: tuple[GeneratorSet, ...]
    cdfs: tuple[StepCDF, ...]
    edges: tuple[FanEdge, ...]
    extremes: tuple[ExtremePoint, ...]

    def extreme_index(self, node: int) -> int:
        cdf = self.cdfs[node]
        for k, point in enumerate(self.extremes):
            if point.cdf == cdf:
                return k
        raise ValueError("node CDF not among extremes")

    def quotient_edges(self) -> frozenset[tuple[int, int]]:
        """Pairs of extreme-point indices joined by at least one cross edge."""
        pairs = set()
        for edge in self.edges:
            if edge.cross:
                a, b = self.extreme_index(edge.a), self.extreme_index(edge.b)
                pairs.add((min(a, b), max(a, b)))
        return frozenset(pairs)


def build_fan(pbox: PBox) -> FanGraph:
    """Graph of all feasible families; an edge is a sign-test-validated swap."""
    extremes = enumerate_extremes(pbox, "structural")
    nodes: list[GeneratorSet] = []
    cdfs: list[StepCDF] = []
    for point in extremes:
        for gen in point.witnesses:
            nodes.append(gen)
            cdfs.append(point.cdf)
    order = sorted(range(len(nodes)), key=lambda i: nodes[i].sort_key())
    nodes = [nodes[i] for i in order]
    cdfs = [cdfs[i] for i in order]
    families = [g.family() for g in nodes]
    edges: list[FanEdge] = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            shared = families[i] & families[j]
            if len(shared) != pbox.n - 1:
                continue
            if not adjacency_sign_test(nodes[i], nodes[j]):
                continue
            removed = next(iter(families[i] - shared))
            added = next(iter(families[j] - shared))
            edges.append(FanEdge(i, j, removed, added, cross=cdfs[i] != cdfs[j]))
    return FanGraph(pbox, tuple(nodes), tuple(cdfs), tuple(edges), extremes)


def lower_expectation(h: Gamble, pbox: PBox) -> tuple[Fraction, ExtremePoint]:
    """Exact lower expectation with a minimizing extreme point."""
    h.domain.require_same(pbox.domain)
    extremes = enumerate_extremes(pbox, "structural")
    best = min(extremes, key=lambda e: (expectation(e.cdf, h), e.cdf.values))
    return expectation(best.cdf, h), best


def upper_expectation(h: Gamble, pbox: PBox) -> tuple[Fraction, ExtremePoint]:
    """Conjugate upper expectation: the negated lower expectation of -h."""
    value, point = lower_expectation(-h, pbox)
    return -value, point


def _same_cdf_closure(
    start: Iterable[GeneratorSet], cdf: StepCDF, pbox: PBox
) -> tuple[set[GeneratorSet], dict[StepCDF, list[GeneratorSet]]]:
    closure: set[GeneratorSet] = set()
    moves: dict[StepCDF, list[GeneratorSet]] = {}
    stack = list(start)
    while stack:
        node = stack.pop()
        if node in closure:
            continue
        closure.add(node)
        for member in node.members()[:-1]:
            for neighbor, ncdf in _adjacent_cached(node, member, pbox):
                if ncdf == cdf:
                    if neighbor not in closure:
                        stack.append(neighbor)
                else:
                    moves.setdefault(ncdf, []).append(neighbor)
    return closure, moves


def argmin_walk(h: Gamble, pbox: PBox, start: GeneratorSet) -> ExtremePoint:
    """Descend over cross-point adjacency edges to a minimizer of the gamble.

    Moves only on strict decrease of the expectation; among equal-value
    neighbors the lexicographically smallest CDF is preferred.  On a bounded
    polytope's vertex-edge graph a local minimum of a linear functional is
    global, so the walk ends at the lower expectation.
    """
    h.domain.require_same(pbox.domain)
    solved = extreme_from_mesc(start, pbox)
    if isinstance(solved, Infeasible):
        raise InfeasibleStartError(solved.condition)
    seeds: list[GeneratorSet] = [start]
    cdf = solved
    while True:
        closure, moves = _same_cdf_closure(seeds, cdf, pbox)
        current = expectation(cdf, h)
        if moves:
            best = min(moves, key=lambda c: (expectation(c, h), c.values))
            if expectation(best, h) < current:
                cdf, seeds = best, moves[best]
                continue
        return ExtremePoint(cdf, tuple(sorted(closure, key=GeneratorSet.sort_key)))
