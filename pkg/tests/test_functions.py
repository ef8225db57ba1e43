"""Truth-table core: constructions, structural predicates, boundary sets."""

import random

import numpy as np
import pytest

from boolsp import (
    BooleanFunction,
    CapacityError,
    InvalidArgument,
    LtfSpec,
    PreconditionError,
    PtfSpec,
    TieError,
    construct_ltf,
    construct_named,
    construct_ptf,
    dominating_boundary_points,
    friendly_neighborhood,
    index_of_point,
    point_of_index,
    properties,
)

# the running 4-variable polynomial threshold example (coefficients x4)
PTF_EX = PtfSpec(
    4,
    (
        (0b0001, 2),  # x1
        (0b0100, 1),  # x3
        (0b0011, -2),  # x1 x2
        (0b0101, 1),  # x1 x3
        (0b0110, 1),  # x2 x3
        (0b1100, -1),  # x3 x4
        (0b0111, 1),  # x1 x2 x3
        (0b1101, 1),  # x1 x3 x4
        (0b1110, -1),  # x2 x3 x4
        (0b1111, 1),  # x1 x2 x3 x4
    ),
)


def test_point_index_round_trip():
    for n in (1, 2, 5):
        for u in range(1 << n):
            assert index_of_point(point_of_index(u, n)) == u
    assert point_of_index(0, 3) == (1, 1, 1)
    assert point_of_index(5, 3) == (-1, 1, -1)


def test_table_round_trip_and_identity():
    rng = random.Random(42)
    for _ in range(50):
        n = rng.randint(1, 6)
        vals = [rng.choice((-1, 1)) for _ in range(1 << n)]
        f = BooleanFunction.from_values(vals)
        assert f.values.tolist() == vals
        assert BooleanFunction(f.n, f.bits) == f
        assert hash(BooleanFunction(f.n, f.bits)) == hash(f)


def test_immutability():
    f = construct_named("majority", 3)
    with pytest.raises(AttributeError):
        f.n = 5
    with pytest.raises(ValueError):
        f.values[0] = -1


def test_capacity():
    with pytest.raises(CapacityError):
        BooleanFunction(25, 0)
    with pytest.raises(InvalidArgument):
        BooleanFunction.from_values([1, -1, 1])  # not a power of two


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("BOOLSP_CAP_N", "3")
    with pytest.raises(CapacityError):
        construct_named("majority", 5)
    construct_named("majority", 3)
    # explicit argument wins over the environment
    construct_named("majority", 5, cap=5)


def test_majority_table():
    maj3 = construct_named("majority", 3)
    assert maj3.values.tolist() == [1, 1, 1, -1, 1, -1, -1, -1]
    with pytest.raises(InvalidArgument):
        construct_named("majority", 4)


def test_or_table():
    orf = construct_named("or", 3)
    vals = orf.values.tolist()
    assert vals[0] == 1 and all(v == -1 for v in vals[1:])


def test_edic_3_is_majority():
    assert construct_named("edic", 3) == construct_named("majority", 3)


def test_edic_never_ties():
    # total LTF weight 2n-3 is odd, so the form cannot vanish
    for n in (3, 4, 7):
        f = construct_named("edic", n)
        assert f.n == n


def test_character_matches_parity():
    f = construct_named("character", 4, coords=[1, 3])
    for u in range(16):
        x = point_of_index(u, 4)
        assert f.value_at(u) == x[0] * x[2]


def test_ltf_matches_brute_force():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 7)
        # all-odd slopes with an opposite-parity offset: the form never vanishes
        a = tuple(rng.choice((-1, 1)) * (2 * rng.randint(0, 4) + 1) for _ in range(n))
        a0 = 2 * rng.randint(-3, 3) + (0 if n % 2 else 1)
        f = construct_ltf(LtfSpec(a0, a))
        for u in range(1 << n):
            s = a0 + sum(ai * xi for ai, xi in zip(a, point_of_index(u, n)))
            assert f.value_at(u) == (1 if s > 0 else -1)


def test_ltf_tie_reports_least_witness():
    with pytest.raises(TieError) as exc:
        construct_ltf(LtfSpec(0, (1, 1, 1, 1)))
    assert exc.value.witness_index == 3  # (-1,-1,+1,+1) is the first zero
    assert exc.value.witness_point == (-1, -1, 1, 1)


def test_ptf_matches_brute_force():
    f = construct_ptf(PTF_EX)
    for u in range(16):
        x = point_of_index(u, 4)
        s = 0
        for mask, coeff in PTF_EX.terms:
            prod = coeff
            for j in range(4):
                if (mask >> j) & 1:
                    prod *= x[j]
            s += prod
        assert s != 0
        assert f.value_at(u) == (1 if s > 0 else -1)


def test_ptf_example_is_balanced():
    f = construct_ptf(PTF_EX)
    assert int(f.values.sum()) == 0


def test_ptf_validation():
    with pytest.raises(InvalidArgument):
        PtfSpec(2, ((0, 1), (0, 2)))  # duplicate mask
    with pytest.raises(InvalidArgument):
        PtfSpec(2, ((4, 1),))  # mask out of range


def test_properties_majority():
    rec = properties(construct_named("majority", 3))
    assert rec.balanced and rec.monotone and rec.odd and rec.symmetric
    assert not rec.even


def test_properties_or_and_character():
    rec = properties(construct_named("or", 3))
    assert rec.monotone and rec.symmetric
    assert not rec.balanced and not rec.odd and not rec.even
    chi12 = construct_named("character", 3, coords=[1, 2])
    rec = properties(chi12)
    assert rec.balanced and rec.even
    assert not rec.odd and not rec.monotone and not rec.symmetric


def test_monotone_against_definition():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 4)
        vals = [rng.choice((-1, 1)) for _ in range(1 << n)]
        f = BooleanFunction.from_values(vals)
        # v below u in the order <=> v's set bits contain u's
        brute = all(
            vals[u | (1 << j)] <= vals[u]
            for u in range(1 << n)
            for j in range(n)
            if not (u >> j) & 1
        )
        assert properties(f).monotone == brute


def test_dominating_boundary_majority():
    assert dominating_boundary_points(construct_named("majority", 3)) == [1, 2, 3, 4, 5, 6]


def test_dominating_boundary_or():
    # minimal +1 point is the top input; maximal -1 points are its neighbors
    assert dominating_boundary_points(construct_named("or", 3)) == [0, 1, 2, 4]


def test_dominating_boundary_requires_monotone():
    chi = construct_named("character", 3, coords=[1, 2])
    with pytest.raises(PreconditionError):
        dominating_boundary_points(chi)


def test_dominating_boundary_definition_random():
    rng = random.Random(3)
    seen = 0
    while seen < 25:
        n = rng.randint(2, 4)
        # monotone sample: majority vote over random positive-weight forms
        a = tuple(2 * rng.randint(0, 3) + 1 for _ in range(n))
        f = construct_ltf(LtfSpec((n % 2 + 1) % 2, a))
        if not properties(f).monotone:
            continue
        seen += 1
        vals = f.values.tolist()
        expect = []
        for u in range(1 << n):
            ups = [u & ~(1 << j) for j in range(n) if (u >> j) & 1]
            downs = [u | (1 << j) for j in range(n) if not (u >> j) & 1]
            if vals[u] == 1 and all(vals[d] == -1 for d in downs):
                expect.append(u)
            elif vals[u] == -1 and all(vals[w] == 1 for w in ups):
                expect.append(u)
        assert dominating_boundary_points(f) == sorted(expect)


def test_friendly_neighborhood():
    maj3 = construct_named("majority", 3)
    assert friendly_neighborhood(maj3, 1).all()
    chi = construct_named("character", 3, coords=[1, 2, 3])
    assert not friendly_neighborhood(chi, 1).any()  # parity flips at distance 1
    assert friendly_neighborhood(chi, 2).all()
