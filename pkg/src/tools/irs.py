"""IRS exponent matrices, row permutations, orbit reduction and the two-column sieve."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image

from src.config import settings
from src.schemas import IrsCandidate, IrsMatrixSpec, IrsType, SieveClass, SieveStat
from src.tools.cycles import CoefficientForm, RowGroup, constraint_set, reduce_under_row_group
from src.tools.expmat import ExponentMatrix, first_vanishing_length
from src.tools.zring import NotAUnitError, find_generators, multiplicative_order

logger = logging.getLogger(__name__)

SIEVE_GIRTH = 12

# RGB per sieve class; PGM uses the gray levels
SIEVE_COLORS = {
    SieveClass.NO_SUBGROUP: (0, 0, 0),
    SieveClass.SUBGROUP_NO_GIRTH: (255, 0, 0),
    SieveClass.QUALIFIED: (255, 255, 255),
}
SIEVE_GRAYS = {
    SieveClass.NO_SUBGROUP: 0,
    SieveClass.SUBGROUP_NO_GIRTH: 128,
    SieveClass.QUALIFIED: 255,
}

# Configurations of the default sieve statistics run
DEFAULT_SIEVE_CONFIGS: Tuple[Tuple[str, IrsType, int], ...] = (
    ("type-I m=4", IrsType.TYPE_I, 4),
    ("type-I m=5", IrsType.TYPE_I, 5),
    ("type-I m=6", IrsType.TYPE_I, 6),
    ("type-II m=3", IrsType.TYPE_II, 3),
)


class PermutationRangeError(ValueError):
    """Shift index outside the range of the permutation family."""


class CandidateMismatchError(ValueError):
    """Candidate does not serve the requested number of rows."""


@dataclass(frozen=True)
class RowPermutation:
    """Bijection on rows 0..m-1; row r is sent to image[r]."""

    image: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"{self.image} is not a permutation")

    @classmethod
    def identity(cls, m: int) -> "RowPermutation":
        return cls(tuple(range(m)))

    @property
    def m(self) -> int:
        return len(self.image)

    def compose(self, other: "RowPermutation") -> "RowPermutation":
        """self after other."""
        return RowPermutation(tuple(self.image[other.image[r]] for r in range(self.m)))

    def inverse(self) -> "RowPermutation":
        inverse = [0] * self.m
        for r, target in enumerate(self.image):
            inverse[target] = r
        return RowPermutation(tuple(inverse))

    def power(self, k: int) -> "RowPermutation":
        result = RowPermutation.identity(self.m)
        for _ in range(k):
            result = self.compose(result)
        return result

    def apply(self, form: CoefficientForm) -> CoefficientForm:
        """Move every coefficient of the form from row r to row image[r]."""
        return form.permute_rows(self.image)

    def apply_matrix(self, P: ExponentMatrix) -> ExponentMatrix:
        return P.permute_rows(self.image)


def build_matrix(spec: IrsMatrixSpec, m: int) -> ExponentMatrix:
    """Entry (i, j) = u(i) a^(i-1) gamma_j mod N, with u(0) = 0."""
    candidate = spec.candidate
    if candidate.m != m:
        raise CandidateMismatchError(
            f"candidate N={candidate.N}, a={candidate.a} serves m={candidate.m}, not m={m}"
        )
    column = np.array(candidate.base_column(), dtype=np.int64)
    gammas = np.array(spec.gammas, dtype=np.int64)
    return ExponentMatrix(candidate.N, np.outer(column, gammas) % candidate.N)


def two_column_matrix(candidate: IrsCandidate) -> ExponentMatrix:
    """[0 | P1] for the candidate."""
    return build_matrix(IrsMatrixSpec(candidate=candidate, gammas=[0, 1]), candidate.m)


def pi_type1(l: int, m: int) -> RowPermutation:
    """Fix row 0 and rotate rows 1..m-1 forward by l."""
    if m < 3:
        raise PermutationRangeError(f"type-I permutations need m >= 3, got m={m}")
    if not 1 <= l <= m - 1:
        raise PermutationRangeError(f"type-I shift must lie in [1, {m - 1}], got {l}")
    image = [0] + [((i + l) % m) + ((i + l) // m) for i in range(1, m)]
    return RowPermutation(tuple(image))


def pi_type2(l: int) -> RowPermutation:
    if l == 1:
        return RowPermutation((1, 2, 0))
    if l == 2:
        return RowPermutation((2, 0, 1))
    raise PermutationRangeError(f"type-II shift must be 1 or 2, got {l}")


def row_group(irs_type: IrsType, m: int) -> RowGroup:
    """Non-identity permutation images of the IR-equivalence group, as cycles.py consumes them."""
    if irs_type == IrsType.TYPE_II:
        if m != 3:
            raise CandidateMismatchError(f"type-II structures serve m=3 only, got m={m}")
        return tuple(pi_type2(l).image for l in (1, 2))
    return tuple(pi_type1(l, m).image for l in range(1, m - 1))


def orbit_reduce(
    forms: Sequence[CoefficientForm], m: int, irs_type: IrsType, n: Optional[int] = None
) -> List[CoefficientForm]:
    """First form of every orbit under the row group, in input order."""
    if not forms:
        return []
    if n is None:
        n = 1 + max(c for form in forms for c in form.cols)
    dense = np.stack([form.to_dense(m, n) for form in forms]).astype(np.int8)
    keep = reduce_under_row_group(dense, row_group(irs_type, m))
    reduced = [form for form, kept in zip(forms, keep) if kept]
    logger.debug(f"orbit reduction {irs_type.value}, m={m}: {len(forms)} -> {len(reduced)}")
    return reduced


def detect_irs_type(column: Sequence[int], N: int) -> Optional[IrsType]:
    """IRS type of a second column (0, 1, a, ..., a^(m-2)), or None when it has neither form.

    Type-II is tested first for m=3.
    """
    m = len(column)
    if m < 3 or column[0] != 0 or column[1] != 1:
        return None
    a = column[2] % N
    if m == 3 and N > 3 and (a * (1 - a)) % N == 1:
        return IrsType.TYPE_II
    powers = [0] + [pow(a, i, N) for i in range(m - 1)]
    if [v % N for v in column] != powers:
        return None
    try:
        order = multiplicative_order(a, N)
    except NotAUnitError:
        return None
    return IrsType.TYPE_I if order == m - 1 else None


def two_column_qualifies(candidate: IrsCandidate, m: int, g: int) -> bool:
    """Whether [0 | P1] reaches girth g, checked on orbit representatives only."""
    if candidate.m != m:
        raise CandidateMismatchError(f"candidate serves m={candidate.m}, not m={m}")
    P = two_column_matrix(candidate)
    group = row_group(candidate.irs_type, m)
    return first_vanishing_length(P.entries, P.N, constraint_set(m, 2, g, group)) is None


def qualified_candidates(
    N: int, m: int, irs_type: Optional[IrsType] = None, g: int = SIEVE_GIRTH
) -> List[IrsCandidate]:
    """Sieve candidates whose two-column matrix reaches girth g."""
    if N < 2:
        return []
    return [c for c in find_generators(N, m, irs_type) if two_column_qualifies(c, m, g)]


def equivalent_type2_generator(candidate: IrsCandidate) -> IrsCandidate:
    """The other generator b = a^5 of the same type-II subgroup.

    a^5 P^{a,II}_{3x2} with rows 1 and 2 swapped equals P^{b,II}_{3x2}; the identity is
    checked before returning.
    """
    if candidate.irs_type != IrsType.TYPE_II:
        raise CandidateMismatchError(f"a={candidate.a} is not a type-II generator")
    N = candidate.N
    b = pow(candidate.a, 5, N)
    partner = IrsCandidate(N=N, a=b, irs_type=IrsType.TYPE_II, m=3)
    swapped = two_column_matrix(candidate).scaled(b).permute_rows((0, 2, 1))
    if swapped != two_column_matrix(partner):
        raise ArithmeticError(f"scaling by a^5 does not map a={candidate.a} onto b={b} mod {N}")
    return partner


def classify(N: int, m: int, irs_type: IrsType, g: int = SIEVE_GIRTH) -> SieveClass:
    if N < 2 or (irs_type == IrsType.TYPE_II and N <= 3):
        return SieveClass.NO_SUBGROUP
    candidates = find_generators(N, m, irs_type)
    if not candidates:
        return SieveClass.NO_SUBGROUP
    if any(two_column_qualifies(c, m, g) for c in candidates):
        return SieveClass.QUALIFIED
    return SieveClass.SUBGROUP_NO_GIRTH


def _classify_task(args: Tuple[int, int, IrsType, int]) -> SieveClass:
    return classify(*args)


def sieve_map(
    n_from: int,
    n_to: int,
    m: int,
    irs_type: IrsType,
    g: int = SIEVE_GIRTH,
    workers: Optional[int] = None,
) -> List[SieveClass]:
    """Classification of every N in [n_from, n_to], in order."""
    if not 1 <= n_from <= n_to <= 10**6:
        raise ValueError(f"range must satisfy 1 <= from <= to <= 10^6, got [{n_from}, {n_to}]")
    workers = settings.workers if workers is None else workers
    tasks = [(N, m, irs_type, g) for N in range(n_from, n_to + 1)]
    logger.info(f"Sieving N in [{n_from}, {n_to}] for {irs_type.value}, m={m}, g={g}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            classes = list(executor.map(_classify_task, tasks, chunksize=256))
    else:
        classes = [_classify_task(task) for task in tasks]
    qualified = sum(c == SieveClass.QUALIFIED for c in classes)
    logger.info(f"✓ {qualified}/{len(classes)} qualified")
    return classes


def sieve_stats(
    n_from: int,
    n_to: int,
    configs: Iterable[Tuple[str, IrsType, int]] = DEFAULT_SIEVE_CONFIGS,
    g: int = SIEVE_GIRTH,
    workers: Optional[int] = None,
) -> List[SieveStat]:
    """Qualified fraction of [n_from, n_to] for each (label, type, m) configuration."""
    stats = []
    for label, irs_type, m in configs:
        classes = sieve_map(n_from, n_to, m, irs_type, g, workers)
        stats.append(
            SieveStat(
                label=label,
                irs_type=irs_type,
                m=m,
                g=g,
                n_from=n_from,
                n_to=n_to,
                qualified=sum(c == SieveClass.QUALIFIED for c in classes),
                total=len(classes),
            )
        )
    return stats


def _pixel_rows(classes: Sequence[SieveClass], width: int) -> List[List[SieveClass]]:
    """Row-major layout; the last row is padded with NoSubgroup."""
    padded = list(classes) + [SieveClass.NO_SUBGROUP] * (-len(classes) % width)
    return [padded[i : i + width] for i in range(0, len(padded), width)]


def render_pgm(classes: Sequence[SieveClass], width: Optional[int] = None) -> str:
    width = width or settings.sieve_width
    rows = _pixel_rows(classes, width)
    body = "\n".join(" ".join(str(SIEVE_GRAYS[c]) for c in row) for row in rows)
    return f"P2\n{width} {len(rows)}\n255\n{body}\n"


def render_ppm(classes: Sequence[SieveClass], width: Optional[int] = None) -> str:
    width = width or settings.sieve_width
    rows = _pixel_rows(classes, width)
    body = "\n".join(
        " ".join("{} {} {}".format(*SIEVE_COLORS[c]) for c in row) for row in rows
    )
    return f"P3\n{width} {len(rows)}\n255\n{body}\n"


def save_png(classes: Sequence[SieveClass], path: Path, width: Optional[int] = None) -> Path:
    width = width or settings.sieve_width
    rows = _pixel_rows(classes, width)
    pixels = np.array([[SIEVE_COLORS[c] for c in row] for row in rows], dtype=np.uint8)
    Image.fromarray(pixels).save(path)
    logger.info(f"✓ Sieve map written to {path}")
    return path
