"""Modular arithmetic and generator sieve."""

import pytest
from pydantic import ValidationError

from src.schemas import IrsCandidate, IrsType
from src.tools.zring import (
    ModulusError,
    NotAUnitError,
    cyclic_subgroup,
    find_generators,
    find_type1_generators,
    find_type2_generators,
    multiplicative_order,
    pow_mod,
    type2_roots,
)


def test_pow_mod():
    assert pow_mod(5, 0, 215) == 1
    assert pow_mod(8, 3, 73) == 1
    assert pow_mod(27, 3, 37) == 36


def test_pow_mod_rejects_bad_modulus():
    with pytest.raises(ModulusError):
        pow_mod(3, 2, 1)
    with pytest.raises(ModulusError):
        pow_mod(3, 2, 2**31)


def test_multiplicative_order():
    assert multiplicative_order(1, 37) == 1
    assert multiplicative_order(8, 73) == 3
    assert multiplicative_order(27, 37) == 6


def test_order_of_non_unit_raises():
    with pytest.raises(NotAUnitError):
        multiplicative_order(6, 8)


def test_cyclic_subgroup_in_generation_order():
    assert cyclic_subgroup(27, 37) == [1, 27, 26, 36, 10, 11]
    assert cyclic_subgroup(8, 73) == [1, 8, 64]


def test_type1_generators():
    """Each subgroup of order m-1 appears once, under its smallest generator."""
    found = find_type1_generators(73, 4)
    subgroups = [set(cyclic_subgroup(c.a, 73)) for c in found]
    assert {1, 8, 64} in subgroups, f"missing <8> in {subgroups}"
    assert all(multiplicative_order(c.a, 73) == 3 for c in found)
    assert len({frozenset(s) for s in subgroups}) == len(subgroups), "duplicate subgroup"

    assert [c.a for c in find_type1_generators(7, 4)] == [2]
    assert find_type1_generators(8, 4) == []


def test_type1_needs_three_rows():
    with pytest.raises(ValueError):
        find_type1_generators(73, 2)


def test_type2_generators():
    assert type2_roots(37) == [11, 27]
    found = find_type2_generators(37)
    assert [c.a for c in found] == [11]
    assert set(cyclic_subgroup(11, 37)) >= {11, 27}

    found = find_type2_generators(301)
    assert len(found) == 2
    subgroups = [set(cyclic_subgroup(c.a, 301)) for c in found]
    assert any(80 in s for s in subgroups)
    assert any(136 in s for s in subgroups)

    assert find_type2_generators(4) == []


def test_type2_small_modulus_raises():
    with pytest.raises(ModulusError):
        find_type2_generators(3)


def test_type2_roots_satisfy_relation():
    for N in (7, 13, 91, 301):
        for a in type2_roots(N):
            assert (a * (1 - a)) % N == 1, f"a={a} mod {N}"


def test_find_generators_default_type():
    assert all(c.irs_type == IrsType.TYPE_II for c in find_generators(37, 3))
    assert all(c.irs_type == IrsType.TYPE_I for c in find_generators(73, 4))
    assert find_generators(3, 3) == []
    with pytest.raises(ValueError):
        find_generators(37, 4, IrsType.TYPE_II)


def test_candidate_checks_generator_order():
    assert IrsCandidate(N=73, a=8, irs_type=IrsType.TYPE_I, m=4).base_column() == [0, 1, 8, 64]
    assert IrsCandidate(N=31, a=2, irs_type=IrsType.TYPE_I, m=6).m == 6
    # order 3, not 2
    with pytest.raises(ValidationError):
        IrsCandidate(N=73, a=8, irs_type=IrsType.TYPE_I, m=3)
    # 72 = -1 has order 2
    with pytest.raises(ValidationError):
        IrsCandidate(N=73, a=72, irs_type=IrsType.TYPE_I, m=4)
    # 7^3 != 1 modulo the Mersenne prime
    with pytest.raises(ValidationError):
        IrsCandidate(N=2**31 - 1, a=7, irs_type=IrsType.TYPE_I, m=4)
    with pytest.raises(ValidationError):
        IrsCandidate(N=74, a=8, irs_type=IrsType.TYPE_I, m=4)
