"""Generator families of simplicial normal cones for p-box credal sets.

A candidate normal cone is generated by indicators of constraint sets: prefix
sets ``A_i = {x_1..x_i}`` (lower-bound constraints), co-prefixes ``A_i^c``
(upper bounds), singletons ``{x_s}`` (nonnegative mass), and the whole domain
(normalization, whose coefficient is unconstrained).  A :class:`GeneratorSet`
holds a basis-sized family of these, stored canonically:

* the singleton ``{x_1}`` is the same set as ``A_1`` and is stored as the
  chain entry ``(1, +)``;
* the singleton ``{x_n}`` is the same set as ``A_{n-1}^c`` and is stored as
  ``(n-1, -)``.

Equality and hashing therefore coincide with equality of subset families,
which is what prevents double counting during enumeration.

Validation (:func:`mesc_validate`) applies the structural rules: the whole
domain must be present, no index may carry both signs, a positive chain entry
at ``i`` forbids the singleton ``i+1``, a negative entry at ``i`` forbids the
singleton ``i``, and between consecutive chain anchors the singletons must
follow one of four gap patterns:

* ``case1`` (positive, positive): every gap element except the first;
* ``case2`` (positive, negative): the gap must be a single element;
* ``case3`` (negative, positive): any one gap element missing;
* ``case4`` (negative, negative): every gap element except the last.

The bottom gap (below the lowest anchor) follows the case1 pattern for a
positive anchor and the case4 pattern for a negative one.  A linear-rank
self-check runs last; the structural rules are expected to imply full rank,
so a rank failure is reported as an internal inconsistency.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .core import Domain, DomainMismatchError, Gamble
from .linalg import dot, kernel_vector, rank, solve_square

POS = 1
NEG = -1

ChainEntry = tuple[int, int]  # (index, POS | NEG)
Member = tuple[str, int]  # ("prefix" | "coprefix" | "singleton", index)

OMEGA_KIND = "prefix"  # the whole domain is the prefix A_n


class InvalidGeneratorSetError(ValueError):
    pass


class NotSwapPairError(ValueError):
    pass


class DegenerateKernelError(ValueError):
    pass


def member_set(n: int, member: Member) -> frozenset[int]:
    kind, i = member
    if kind == "prefix":
        return frozenset(range(1, i + 1))
    if kind == "coprefix":
        return frozenset(range(i + 1, n + 1))
    if kind == "singleton":
        return frozenset((i,))
    raise ValueError(f"unknown member kind {kind!r}")


def member_indicator(n: int, member: Member) -> tuple[Fraction, ...]:
    s = member_set(n, member)
    return tuple(Fraction(1) if i in s else Fraction(0) for i in range(1, n + 1))


def member_label(member: Member, n: int) -> str:
    kind, i = member
    if kind == "prefix":
        return "Omega" if i == n else f"A{i}"
    if kind == "coprefix":
        return f"A{i}^c"
    return f"{{x{i}}}"


@dataclass(frozen=True)
class GeneratorSet:
    """A family of generator sets in canonical chain-plus-singletons form."""

    n: int
    chain: tuple[ChainEntry, ...]
    singletons: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("domain size must be >= 1")
        chain: list[ChainEntry] = []
        for idx, sign in self.chain:
            if sign not in (POS, NEG):
                raise ValueError(f"bad sign {sign!r}")
            if sign == POS and not 1 <= idx <= self.n:
                raise ValueError(f"prefix index {idx} out of range for n={self.n}")
            if sign == NEG and not 1 <= idx <= self.n - 1:
                raise ValueError(f"coprefix index {idx} out of range for n={self.n}")
            chain.append((idx, sign))
        for s in self.singletons:
            if not 1 <= s <= self.n:
                raise ValueError(f"singleton index {s} out of range for n={self.n}")
            # alias: {x_1} = A_1 and {x_n} = A_{n-1}^c (= Omega when n = 1)
            if s == 1:
                chain.append((1, POS))
            elif s == self.n:
                chain.append((self.n - 1, NEG))
        singles = tuple(sorted({s for s in self.singletons if 1 < s < self.n}))
        entries = tuple(sorted(set(chain), key=lambda e: (e[0], 0 if e[1] == POS else 1)))
        object.__setattr__(self, "chain", entries)
        object.__setattr__(self, "singletons", singles)
        object.__setattr__(self, "_family", None)

    @classmethod
    def make(
        cls,
        n: int,
        chain: Iterable[ChainEntry] = (),
        singletons: Iterable[int] = (),
    ) -> "GeneratorSet":
        return cls(n, tuple(chain), tuple(singletons))

    @classmethod
    def full_chain(cls, n: int) -> "GeneratorSet":
        return cls(n, tuple((i, POS) for i in range(1, n + 1)), ())

    @classmethod
    def from_family(cls, n: int, sets: Iterable[frozenset[int] | set[int]]) -> "GeneratorSet":
        chain: list[ChainEntry] = []
        singles: list[int] = []
        for raw in sets:
            s = frozenset(raw)
            size = len(s)
            if s == frozenset(range(1, size + 1)):
                chain.append((size, POS))
            elif s == frozenset(range(n - size + 1, n + 1)):
                chain.append((n - size, NEG))
            elif size == 1:
                singles.append(next(iter(s)))
            else:
                raise ValueError(f"set {sorted(s)} is not a prefix, co-prefix, or singleton")
        return cls(n, tuple(chain), tuple(singles))

    def members(self) -> tuple[Member, ...]:
        """Deterministic member order: chain below Omega, singletons, Omega last."""
        out: list[Member] = []
        for idx, sign in self.chain:
            if (idx, sign) == (self.n, POS):
                continue
            out.append(("prefix" if sign == POS else "coprefix", idx))
        out.extend(("singleton", s) for s in self.singletons)
        if (self.n, POS) in self.chain:
            out.append(("prefix", self.n))
        return tuple(out)

    def family(self) -> frozenset[frozenset[int]]:
        cached = getattr(self, "_family")
        if cached is None:
            cached = frozenset(member_set(self.n, m) for m in self.members())
            object.__setattr__(self, "_family", cached)
        return cached

    def size(self) -> int:
        return len(self.chain) + len(self.singletons)

    def sort_key(self) -> tuple:
        return (
            tuple((i, 0 if s == POS else 1) for i, s in self.chain),
            self.singletons,
        )

    def describe(self) -> str:
        labels = [member_label(m, self.n) for m in self.members()]
        return "{" + ", ".join(labels) + "}"


@dataclass(frozen=True)
class GapCase:
    """One gap of the chain decomposition, with its matched singleton pattern.

    ``left`` is the anchor index below the gap (0 for the empty set), ``right``
    the chain index closing it.  ``split`` is the first gap position whose CDF
    value is pinned by the right anchor; positions before it inherit the value
    at ``left``.  ``missing_local`` is the 1-based position inside the gap of
    the absent singleton (case3 only).
    """

    left: int
    right: int
    case: str
    members: tuple[int, ...]
    singletons: tuple[int, ...]
    split: int
    missing_local: int | None = None

    @property
    def right_is_upper(self) -> bool:
        return self.case in ("case2", "case4")


@dataclass(frozen=True)
class MescReport:
    ok: bool
    gaps: tuple[GapCase, ...] | None = None
    code: str | None = None
    detail: str = ""

    def __str__(self) -> str:
        return "OK" if self.ok else f"{self.code}: {self.detail}"


def _gap_pattern(
    left: int, left_sign: int | None, right: int, right_sign: int, n: int
) -> tuple[str, tuple[int, ...] | None]:
    """Case tag and required singleton tuple for a gap; None = case3 (free choice)."""
    members = tuple(range(left + 1, right + 1))
    if left_sign is None:  # bottom gap, below the lowest anchor
        tag = "case1" if right_sign == POS else "case4"
    elif left_sign == POS:
        tag = "case1" if right_sign == POS else "case2"
    else:
        tag = "case3" if right_sign == POS else "case4"
    if tag == "case1":
        return tag, members[1:]
    if tag == "case2":
        return tag, () if len(members) == 1 else None  # None here means impossible
    if tag == "case4":
        return tag, members[:-1]
    return tag, None  # case3: any single member may be missing


@lru_cache(maxsize=None)
def mesc_validate(g: GeneratorSet) -> MescReport:
    """Structural validation; on success returns the per-gap case decomposition."""
    n = g.n
    if not g.chain or g.chain[-1] != (n, POS):
        return MescReport(False, code="omega_missing", detail="the whole-domain set must be a member")
    indices = [i for i, _ in g.chain]
    for i in sorted(set(indices)):
        if indices.count(i) > 1:
            return MescReport(False, code="both_signs", detail=f"index {i} appears with both signs")
    chain_sign = dict(g.chain)
    for i, s in g.chain:
        if s == POS and i + 1 in g.singletons:
            return MescReport(
                False,
                code="forbidden_singleton",
                detail=f"singleton {i + 1} forbidden by positive chain entry at {i} (rule iii)",
            )
        if s == NEG and i in g.singletons:
            return MescReport(
                False,
                code="forbidden_singleton",
                detail=f"singleton {i} forbidden by negative chain entry at {i} (rule iv)",
            )
    if g.size() != n:
        return MescReport(
            False, code="wrong_cardinality", detail=f"{g.size()} members, need {n}"
        )

    gaps: list[GapCase] = []
    prev = 0
    prev_sign: int | None = None
    for cur, cur_sign in g.chain:
        members = tuple(range(prev + 1, cur + 1))
        present = tuple(s for s in g.singletons if prev < s <= cur)
        tag, required = _gap_pattern(prev, prev_sign, cur, cur_sign, n)
        gap_name = f"({left_name(prev)}, {member_label(('prefix' if cur_sign == POS else 'coprefix', cur), n)}]"
        if tag == "case3":
            missing = set(members) - set(present)
            if len(present) != len(members) - 1 or len(missing) != 1:
                return MescReport(
                    False,
                    code="gap_pattern",
                    detail=f"case3 gap {gap_name} needs all but one of {members} as singletons, got {present}",
                )
            miss = missing.pop()
            gaps.append(
                GapCase(prev, cur, tag, members, present, split=miss, missing_local=miss - prev)
            )
        else:
            if required is None or present != required:
                want = "a single-element gap" if required is None else f"singletons {required}"
                return MescReport(
                    False,
                    code="gap_pattern",
                    detail=f"{tag} gap {gap_name} needs {want}, got {present}",
                )
            split = {"case1": members[0], "case2": members[0], "case4": members[-1]}[tag]
            gaps.append(GapCase(prev, cur, tag, members, present, split=split))
        prev, prev_sign = cur, cur_sign

    rows = [list(member_indicator(n, m)) for m in g.members()]
    if rank(rows) != n:
        return MescReport(
            False,
            code="rank_deficient",
            detail="structural rules passed but indicators are dependent (internal inconsistency)",
        )
    return MescReport(True, gaps=tuple(gaps))


def left_name(i: int) -> str:
    return "empty" if i == 0 else f"A{i}"


def _gap_options(
    left: int, left_sign: int | None, right: int, right_sign: int, n: int
) -> list[tuple[int, ...]]:
    """All canonical singleton choices for one gap during enumeration."""
    members = tuple(range(left + 1, right + 1))
    tag, required = _gap_pattern(left, left_sign, right, right_sign, n)
    if tag == "case3":
        if right == n:
            return [members[:-1]]  # only the top element may be missing
        return [tuple(x for x in members if x != miss) for miss in members]
    if required is None:
        return []
    if any(s in (1, n) for s in required):
        return []  # pattern demands an aliased singleton; family arises elsewhere
    return [required]


@lru_cache(maxsize=None)
def _enumerate_mescs_cached(n: int) -> tuple[GeneratorSet, ...]:
    out: list[GeneratorSet] = []
    below = list(range(1, n))
    for k in range(len(below) + 1):
        for idxs in combinations(below, k):
            anchors = list(idxs) + [n]
            for signs in product((POS, NEG), repeat=k):
                chain = tuple(zip(anchors, signs + (POS,)))
                per_gap: list[list[tuple[int, ...]]] = []
                prev, prev_sign = 0, None
                ok = True
                for cur, cur_sign in chain:
                    options = _gap_options(prev, prev_sign, cur, cur_sign, n)
                    if not options:
                        ok = False
                        break
                    per_gap.append(options)
                    prev, prev_sign = cur, cur_sign
                if not ok:
                    continue
                for choice in product(*per_gap):
                    singles = tuple(sorted(s for part in choice for s in part))
                    out.append(GeneratorSet(n, chain, singles))
    out.sort(key=GeneratorSet.sort_key)
    return tuple(out)


def enumerate_mescs(domain: Domain) -> Iterator[GeneratorSet]:
    """Yield every structurally valid generator family, each exactly once."""
    yield from _enumerate_mescs_cached(domain.n)


class Region(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class ConeMembership:
    region: Region
    members: tuple[Member, ...]
    coefficients: tuple[Fraction, ...]

    def coefficient(self, member: Member) -> Fraction:
        return self.coefficients[self.members.index(member)]


def cone_contains(h: Gamble, g: GeneratorSet) -> ConeMembership:
    """Locate a gamble relative to the cone spanned by the family.

    Solves the unique expansion of ``h`` over the basis; the normalization
    member's coefficient is unconstrained, all others must be nonnegative
    (strictly positive for the interior).
    """
    if h.domain.n != g.n:
        raise DomainMismatchError(f"gamble on n={h.domain.n}, generator set on n={g.n}")
    report = mesc_validate(g)
    if not report.ok:
        raise InvalidGeneratorSetError(str(report))
    members = g.members()
    columns = [member_indicator(g.n, m) for m in members]
    matrix = [[columns[j][i] for j in range(g.n)] for i in range(g.n)]
    coeffs = solve_square(matrix, list(h.values))
    if coeffs is None:  # unreachable for a validated family
        raise InvalidGeneratorSetError("generator indicators are singular")
    constrained = coeffs[:-1]  # the last member is the normalization set
    if any(c < 0 for c in constrained):
        region = Region.OUTSIDE
    elif all(c > 0 for c in constrained):
        region = Region.INTERIOR
    else:
        region = Region.BOUNDARY
    return ConeMembership(region, members, tuple(coeffs))


@lru_cache(maxsize=None)
def _sign_test_cached(a: GeneratorSet, b: GeneratorSet) -> bool:
    shared = a.family() & b.family()
    if len(shared) != a.n - 1:
        raise NotSwapPairError(
            f"families share {len(shared)} members, expected {a.n - 1}"
        )
    only_a = next(iter(a.family() - shared))
    only_b = next(iter(b.family() - shared))
    rows = [
        [Fraction(1) if i in s else Fraction(0) for i in range(1, a.n + 1)]
        for s in sorted(shared, key=lambda s: sorted(s))
    ]
    t = kernel_vector(rows, a.n)
    if t is None:
        raise DegenerateKernelError("shared generators are linearly dependent")
    fa = [Fraction(1) if i in only_a else Fraction(0) for i in range(1, a.n + 1)]
    fb = [Fraction(1) if i in only_b else Fraction(0) for i in range(1, a.n + 1)]
    return dot(fa, t) * dot(fb, t) < 0


def adjacency_sign_test(a: GeneratorSet, b: GeneratorSet) -> bool:
    """True iff the two cones meet in a common facet.

    The families must differ in exactly one member; the test computes a normal
    vector of the hyperplane spanned by the shared members and compares the
    signs of its products with the two exchanged indicators.
    """
    if a.n != b.n:
        raise DomainMismatchError(f"n={a.n} vs n={b.n}")
    key = (a, b) if a.sort_key() <= b.sort_key() else (b, a)
    return _sign_test_cached(*key)
