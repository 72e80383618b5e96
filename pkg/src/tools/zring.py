"""Modular arithmetic over Z_N and the integer ring sieve for IRS generators."""

import logging
from math import gcd
from typing import List, Optional

import numpy as np

from src.schemas import MAX_MODULUS, IrsCandidate, IrsType

logger = logging.getLogger(__name__)


class ModulusError(ValueError):
    """Lifting degree outside [2, MAX_MODULUS]."""


class NotAUnitError(ValueError):
    """Element shares a factor with the modulus."""


def check_modulus(N: int) -> int:
    if not 2 <= N <= MAX_MODULUS:
        raise ModulusError(f"N must lie in [2, {MAX_MODULUS}], got {N}")
    return N


def pow_mod(base: int, exp: int, N: int) -> int:
    """base^exp reduced mod N."""
    check_modulus(N)
    if exp < 0:
        raise ValueError(f"exponent must be nonnegative, got {exp}")
    return pow(base % N, exp, N)


def multiplicative_order(a: int, N: int) -> int:
    """Smallest t > 0 with a^t = 1 mod N.

    Raises:
        NotAUnitError: when gcd(a, N) != 1
    """
    check_modulus(N)
    a %= N
    if gcd(a, N) != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {N}")
    power, order = a, 1
    while power != 1:
        power = (power * a) % N
        order += 1
    return order


def cyclic_subgroup(a: int, N: int) -> List[int]:
    """<a> in generation order: 1, a, a^2, ..."""
    check_modulus(N)
    a %= N
    if gcd(a, N) != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {N}")
    elements, power = [1], a
    while power != 1:
        elements.append(power)
        power = (power * a) % N
    return elements


def _orders_up_to(N: int, bound: int) -> np.ndarray:
    """Order of every residue 0..N-1, or 0 when it exceeds bound or the residue is no unit."""
    residues = np.arange(N, dtype=np.int64)
    orders = np.zeros(N, dtype=np.int64)
    power = residues.copy()
    for t in range(1, bound + 1):
        hit = (power == 1) & (orders == 0)
        orders[hit] = t
        power = (power * residues) % N
    return orders


def find_type1_generators(N: int, m: int) -> List[IrsCandidate]:
    """One candidate per cyclic subgroup of order m-1, represented by its smallest generator.

    Mirrors the sieve's pool handling: scan a = 2, 3, ... and, on a hit, drop the
    remaining powers of a from the pool.
    """
    check_modulus(N)
    if m < 3:
        raise ValueError(f"type-I structures need m >= 3, got {m}")
    orders = _orders_up_to(N, m - 1)
    removed = set()
    candidates = []
    for a in np.flatnonzero(orders == m - 1).tolist():
        if a in removed:
            continue
        removed.update(cyclic_subgroup(a, N))
        candidates.append(IrsCandidate(N=N, a=a, irs_type=IrsType.TYPE_I, m=m))
    logger.debug(f"N={N}: {len(candidates)} type-I subgroup(s) of order {m - 1}")
    return candidates


def type2_roots(N: int) -> List[int]:
    """All roots of a^2 - a + 1 = 0 mod N in [2, N-1], ascending."""
    check_modulus(N)
    residues = np.arange(2, N, dtype=np.int64)
    values = (residues * residues - residues + 1) % N
    return residues[values == 0].tolist()


def find_type2_generators(N: int) -> List[IrsCandidate]:
    """Roots of a(1-a) = 1 mod N grouped by <a>, one representative (smallest root) each."""
    check_modulus(N)
    if N <= 3:
        raise ModulusError(f"type-II structures need N > 3, got {N}")
    removed = set()
    candidates = []
    for a in type2_roots(N):
        if a in removed:
            continue
        removed.update(cyclic_subgroup(a, N))
        candidates.append(IrsCandidate(N=N, a=a, irs_type=IrsType.TYPE_II, m=3))
    logger.debug(f"N={N}: {len(candidates)} type-II subgroup(s)")
    return candidates


def find_generators(N: int, m: int, irs_type: Optional[IrsType] = None) -> List[IrsCandidate]:
    """Sieve entry point: type-II for m=3, type-I otherwise, unless a type is forced."""
    if irs_type is None:
        irs_type = IrsType.TYPE_II if m == 3 else IrsType.TYPE_I
    if irs_type == IrsType.TYPE_II:
        if m != 3:
            raise ValueError(f"type-II structures serve m=3 only, got m={m}")
        return find_type2_generators(N) if N > 3 else []
    return find_type1_generators(N, m)
