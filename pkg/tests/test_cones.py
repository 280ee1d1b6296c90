from fractions import Fraction
from itertools import combinations
from random import Random

import pytest

from pbox.cones import (
    NEG,
    POS,
    DegenerateKernelError,
    GeneratorSet,
    NotSwapPairError,
    Region,
    adjacency_sign_test,
    cone_contains,
    enumerate_mescs,
    member_indicator,
    mesc_validate,
)
from pbox.core import Domain, Gamble, rationals
from pbox.linalg import rank

F = Fraction


# ------------------------------------------------------------------ oracle
#
# Independent of the enumeration recursion: every size-n family of distinct
# subsets drawn from prefixes, co-prefixes, singletons, and the whole domain,
# filtered by the validator alone.

def ground_sets(n):
    seen, out = set(), []
    for i in range(1, n + 1):
        out.append(frozenset(range(1, i + 1)))
    for i in range(1, n):
        out.append(frozenset(range(i + 1, n + 1)))
    for s in range(1, n + 1):
        out.append(frozenset([s]))
    uniq = []
    for s in out:
        if s not in seen:
            seen.add(s)
            uniq.append(s)
    return uniq


def exhaustive_families(n):
    omega = frozenset(range(1, n + 1))
    rest = [s for s in ground_sets(n) if s != omega]
    valid = set()
    for combo in combinations(rest, n - 1):
        g = GeneratorSet.from_family(n, (omega,) + combo)
        if g.size() == n and mesc_validate(g).ok:
            valid.add(g)
    return valid


# ------------------------------------------------------------- construction

def test_canonical_aliases():
    g = GeneratorSet.make(5, [(5, POS)], singletons=[1, 5, 3])
    assert g.chain == ((1, POS), (4, NEG), (5, POS))
    assert g.singletons == (3,)


def test_family_equality_collapses_aliases():
    a = GeneratorSet.make(3, [(1, POS), (3, POS)], singletons=[3])
    b = GeneratorSet.make(3, [(1, POS), (2, NEG), (3, POS)])
    assert a == b
    assert a.family() == b.family()


def test_from_family_round_trip():
    fam = [frozenset([1]), frozenset([3, 4, 5]), frozenset([3]), frozenset(range(1, 6))]
    g = GeneratorSet.from_family(5, fam)
    assert g.family() == frozenset(fam)


def test_rejects_out_of_range_members():
    with pytest.raises(ValueError):
        GeneratorSet.make(3, [(3, NEG)])  # complement of the whole domain is empty
    with pytest.raises(ValueError):
        GeneratorSet.make(3, [(4, POS)])
    with pytest.raises(ValueError):
        GeneratorSet.from_family(4, [frozenset([2, 4])])


# --------------------------------------------------------------- validation

def test_full_positive_chain_is_valid():
    report = mesc_validate(GeneratorSet.full_chain(5))
    assert report.ok
    assert all(gap.case == "case1" for gap in report.gaps)


def test_case2_gap_of_size_two_rejected():
    # {A1, A3^c, A4, Omega, {x4}}: the (A1, A3^c) gap spans two elements
    g = GeneratorSet.make(5, [(1, POS), (3, NEG), (4, POS), (5, POS)], singletons=[4])
    report = mesc_validate(g)
    assert not report.ok
    assert report.code == "gap_pattern"
    assert "case2" in report.detail


def test_no_single_singleton_completes_case2_gap():
    base_chain = [(1, POS), (3, NEG), (4, POS), (5, POS)]
    for s in range(1, 6):
        g = GeneratorSet.make(5, base_chain, singletons=[s])
        report = mesc_validate(g)
        assert not report.ok, f"singleton {s} should not complete the family"


def test_rule_iii_forbids_singleton_above_positive_entry():
    g = GeneratorSet.make(5, [(1, POS), (2, POS), (3, POS), (5, POS)], singletons=[4])
    report = mesc_validate(g)
    assert report.code == "forbidden_singleton"
    assert "rule iii" in report.detail


def test_rule_iv_forbids_singleton_at_negative_entry():
    g = GeneratorSet.make(4, [(1, POS), (3, NEG), (4, POS)], singletons=[3])
    report = mesc_validate(g)
    assert report.code == "forbidden_singleton"
    assert "rule iv" in report.detail


def test_both_signs_rejected():
    g = GeneratorSet.make(4, [(2, POS), (2, NEG), (4, POS)], singletons=[3])
    assert mesc_validate(g).code == "both_signs"


def test_omega_missing_rejected():
    g = GeneratorSet.make(3, [(1, POS), (2, POS)])
    assert mesc_validate(g).code == "omega_missing"


def test_wrong_cardinality_rejected():
    g = GeneratorSet.make(4, [(1, POS), (4, POS)])
    assert mesc_validate(g).code == "wrong_cardinality"


def test_case3_gap_records_missing_singleton():
    g = GeneratorSet.make(5, [(1, NEG), (4, POS), (5, POS)], singletons=[2, 4])
    report = mesc_validate(g)
    assert report.ok
    case3 = [gap for gap in report.gaps if gap.case == "case3"]
    assert len(case3) == 1
    assert case3[0].missing_local == 2  # x3 is the absent one: local position 2 of {2,3,4}
    assert case3[0].split == 3


# -------------------------------------------------------------- enumeration

def test_enumeration_matches_exhaustive_oracle():
    for n in range(1, 6):
        assert set(enumerate_mescs(Domain.of_size(n))) == exhaustive_families(n)


def test_enumeration_counts_frozen():
    # counts computed by the exhaustive oracle above; no closed form assumed
    counts = {n: len(list(enumerate_mescs(Domain.of_size(n)))) for n in range(1, 6)}
    assert counts == {1: 1, 2: 2, 3: 6, 4: 18, 5: 54}


def test_enumeration_n2_families():
    fams = {g.describe() for g in enumerate_mescs(Domain.of_size(2))}
    assert fams == {"{A1, Omega}", "{A1^c, Omega}"}


def test_enumeration_is_duplicate_free():
    for n in range(1, 7):
        gens = list(enumerate_mescs(Domain.of_size(n)))
        assert len(gens) == len({g.family() for g in gens})


def test_enumerated_families_have_full_rank():
    for n in range(1, 7):
        for g in enumerate_mescs(Domain.of_size(n)):
            rows = [list(member_indicator(n, m)) for m in g.members()]
            assert rank(rows) == n


# ----------------------------------------------------------- cone membership

def test_cone_contains_interior_with_unit_like_coefficients():
    g = GeneratorSet.make(5, [(1, NEG), (4, POS), (5, POS)], singletons=[3, 4])
    h = Gamble(Domain.of_size(5), rationals([1, 2, 3, 3, 1]))
    loc = cone_contains(h, g)
    assert loc.region == Region.INTERIOR
    assert loc.coefficient(("coprefix", 1)) == 1
    assert loc.coefficient(("prefix", 4)) == 1
    assert loc.coefficient(("singleton", 3)) == 1
    assert loc.coefficient(("singleton", 4)) == 1


def test_cone_contains_outside_with_negative_coefficient():
    g = GeneratorSet.make(5, [(1, NEG), (4, POS), (5, POS)], singletons=[2, 4])
    h = Gamble(Domain.of_size(5), rationals([1, 2, 3, 3, 1]))
    loc = cone_contains(h, g)
    assert loc.region == Region.OUTSIDE
    # frozen expansion: h = 2*A1^c + 2*A4 - 1*{x2} + 0*{x4} - 1*Omega
    assert loc.coefficients == rationals([2, 2, -1, 0, -1])


def test_constant_gamble_is_boundary_everywhere():
    for n in (2, 3, 4):
        h = Gamble(Domain.of_size(n), tuple(F(1) for _ in range(n)))
        for g in enumerate_mescs(Domain.of_size(n)):
            loc = cone_contains(h, g)
            assert loc.region == Region.BOUNDARY
            assert all(c == 0 for c in loc.coefficients[:-1])
            assert loc.coefficients[-1] == 1


def test_constant_gamble_on_singleton_domain_is_interior():
    # n=1: the only family is {Omega}; with no constrained coefficients the
    # cone is the whole line, whose relative interior is everything
    h = Gamble(Domain.of_size(1), (F(1),))
    loc = cone_contains(h, GeneratorSet.full_chain(1))
    assert loc.region == Region.INTERIOR


def test_each_generator_sits_on_its_own_cone_boundary():
    for n in (2, 3, 4):
        d = Domain.of_size(n)
        for g in enumerate_mescs(d):
            for k, member in enumerate(g.members()):
                h = Gamble(d, member_indicator(n, member))
                loc = cone_contains(h, g)
                assert loc.region != Region.OUTSIDE
                expected = tuple(F(1) if j == k else F(0) for j in range(n))
                assert loc.coefficients == expected


def _interior_sample(g, rng):
    n = g.n
    values = [F(0)] * n
    for k, member in enumerate(g.members()):
        ind = member_indicator(n, member)
        coeff = (
            F(rng.randint(-5, 5))
            if k == len(g.members()) - 1
            else F(rng.randint(1, 5), rng.randint(1, 2))
        )
        values = [v + coeff * x for v, x in zip(values, ind)]
    return Gamble(Domain.of_size(n), tuple(values))


def test_interior_samples_classified_interior():
    rng = Random(13)
    for n in (2, 3, 4, 5):
        for g in enumerate_mescs(Domain.of_size(n)):
            h = _interior_sample(g, rng)
            assert cone_contains(h, g).region == Region.INTERIOR


def test_interior_iff_chain_measurable_with_signed_steps():
    # Characterization of the chain component: subtract singleton and
    # normalization parts; the rest must be constant on the chain cells with
    # the step across the cell boundary at B_j carrying sign -s(B_j).
    rng = Random(29)
    for n in (3, 4, 5):
        d = Domain.of_size(n)
        for g in enumerate_mescs(d):
            h = _interior_sample(g, rng)
            loc = cone_contains(h, g)
            assert loc.region == Region.INTERIOR
            members = g.members()
            rest = list(h.values)
            for k, member in enumerate(members):
                kind, _ = member
                if kind == "singleton" or k == len(members) - 1:
                    ind = member_indicator(n, member)
                    rest = [r - loc.coefficients[k] * x for r, x in zip(rest, ind)]
            anchors = [i for i, _ in g.chain]
            signs = [s for _, s in g.chain]
            prev = 0
            cell_values = []
            for a in anchors:
                block = rest[prev:a]
                assert len(set(block)) == 1  # constant on each chain cell
                cell_values.append(block[0])
                prev = a
            for j in range(len(anchors) - 1):
                step = cell_values[j + 1] - cell_values[j]
                assert step != 0
                assert (step > 0) == (signs[j] == NEG)


# ----------------------------------------------------------------- sign test

def test_sign_test_on_case1_exchange():
    # removing the singleton {x2} from {A2, {x2}, Omega}: the prefix A1 is an
    # adjacent exchange, the co-prefix A1^c is not
    g = GeneratorSet.make(3, [(2, POS), (3, POS)], singletons=[2])
    good = GeneratorSet.full_chain(3)
    bad = GeneratorSet.make(3, [(1, NEG), (2, POS), (3, POS)])
    assert adjacency_sign_test(g, good) is True
    assert adjacency_sign_test(g, bad) is False


def test_sign_test_symmetric():
    rng = Random(31)
    for n in (3, 4, 5):
        gens = list(enumerate_mescs(Domain.of_size(n)))
        pairs = [
            (a, b)
            for i, a in enumerate(gens)
            for b in gens[i + 1 :]
            if len(a.family() & b.family()) == n - 1
        ]
        rng.shuffle(pairs)
        for a, b in pairs[:40]:
            assert adjacency_sign_test(a, b) == adjacency_sign_test(b, a)


def test_sign_test_rejects_non_swap_pairs():
    g = GeneratorSet.full_chain(3)
    with pytest.raises(NotSwapPairError):
        adjacency_sign_test(g, g)
    far = GeneratorSet.make(3, [(1, NEG), (2, NEG), (3, POS)])
    with pytest.raises(NotSwapPairError):
        adjacency_sign_test(g, far)
