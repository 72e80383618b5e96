"""Cycle enumeration, strict-equivalence classes, tracking matrices and constraint sets.

A cycle of length 2k in an m x n exponent matrix is described by two cyclic
sequences: the rows r_0..r_{k-1} it visits and the columns c_0..c_{k-1} it
enters each row through. Consecutive entries differ (cyclically). The walk is

    (r_0, c_0) -> (r_0, c_1) -> (r_1, c_1) -> (r_1, c_2) -> ... -> (r_{k-1}, c_0)

and its alternating sum is sum_t p[r_t][c_t] - p[r_t][c_{t+1}]. Two cycles are
strictly equivalent when their coefficient forms agree up to a global sign.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Dict, Iterator, List, Mapping, Sequence, Set, Tuple

import numpy as np

from src.config import settings
from src.schemas import GirthBounds

logger = logging.getLogger(__name__)

Position = Tuple[int, int]
RowGroup = Tuple[Tuple[int, ...], ...]

# Per-footprint class counts T(i, j), 1-based (i, j); row/column 1 is always empty
KNOWN_TRACKING_MATRICES: Dict[int, Tuple[Tuple[int, ...], ...]] = {
    2: ((0, 0), (0, 1)),
    3: ((0, 0, 0), (0, 0, 0), (0, 0, 6)),
    4: ((0, 0, 0, 0), (0, 1, 3, 3), (0, 3, 18, 36), (0, 3, 36, 72)),
    5: (
        (0, 0, 0, 0, 0),
        (0, 0, 0, 0, 0),
        (0, 0, 60, 180, 180),
        (0, 0, 180, 900, 1440),
        (0, 0, 180, 1440, 1440),
    ),
}


@dataclass(frozen=True)
class CyclePath:
    """Ordered positions of a cycle: even steps stay in a row, odd steps stay in a column."""

    positions: Tuple[Position, ...]

    def __post_init__(self):
        size = len(self.positions)
        if size < 4 or size % 2:
            raise ValueError(f"a cycle has an even number (>= 4) of positions, got {size}")
        for s in range(size):
            (r0, c0), (r1, c1) = self.positions[s], self.positions[(s + 1) % size]
            if s % 2 == 0 and not (r0 == r1 and c0 != c1):
                raise ValueError(f"step {s} must move within row {r0}")
            if s % 2 == 1 and not (c0 == c1 and r0 != r1):
                raise ValueError(f"step {s} must move within column {c0}")

    @classmethod
    def from_sequences(cls, rows: Sequence[int], cols: Sequence[int]) -> "CyclePath":
        k = len(rows)
        positions: List[Position] = []
        for t in range(k):
            positions.append((rows[t], cols[t]))
            positions.append((rows[t], cols[(t + 1) % k]))
        return cls(tuple(positions))

    @property
    def half_length(self) -> int:
        return len(self.positions) // 2

    def sequences(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        rows = tuple(r for r, _ in self.positions[::2])
        cols = tuple(c for _, c in self.positions[::2])
        return rows, cols


@dataclass(frozen=True)
class CoefficientForm:
    """Alternating sum of a cycle as a formal integer combination of matrix positions.

    Only nonzero coefficients are stored, sorted by position (row-major).
    """

    coeffs: Tuple[Tuple[Position, int], ...] = field(default=())

    @classmethod
    def from_mapping(cls, mapping: Mapping[Position, int]) -> "CoefficientForm":
        return cls(tuple(sorted((pos, c) for pos, c in mapping.items() if c != 0)))

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "CoefficientForm":
        rows, cols = np.nonzero(dense)
        return cls(
            tuple(((r, c), int(dense[r, c])) for r, c in zip(rows.tolist(), cols.tolist()))
        )

    def as_dict(self) -> Dict[Position, int]:
        return dict(self.coeffs)

    def __add__(self, other: "CoefficientForm") -> "CoefficientForm":
        merged = self.as_dict()
        for pos, c in other.coeffs:
            merged[pos] = merged.get(pos, 0) + c
        return CoefficientForm.from_mapping(merged)

    def __neg__(self) -> "CoefficientForm":
        return CoefficientForm(tuple((pos, -c) for pos, c in self.coeffs))

    @property
    def is_degenerate(self) -> bool:
        return not self.coeffs

    @property
    def rows(self) -> Set[int]:
        return {r for (r, _), _ in self.coeffs}

    @property
    def cols(self) -> Set[int]:
        return {c for (_, c), _ in self.coeffs}

    def canonical(self) -> "CoefficientForm":
        """Representative of {form, -form}: leading coefficient positive."""
        if self.coeffs and self.coeffs[0][1] < 0:
            return -self
        return self

    def permute_rows(self, image: Sequence[int]) -> "CoefficientForm":
        """Move the coefficient at row r to row image[r]."""
        return CoefficientForm.from_mapping({(image[r], c): v for (r, c), v in self.coeffs})

    def to_dense(self, m: int, n: int) -> np.ndarray:
        dense = np.zeros((m, n), dtype=np.int64)
        for (r, c), v in self.coeffs:
            dense[r, c] = v
        return dense


def coefficient_form(cycle: CyclePath) -> CoefficientForm:
    """Signed coefficient per position; repeated visits accumulate."""
    mapping: Dict[Position, int] = {}
    for s, pos in enumerate(cycle.positions):
        mapping[pos] = mapping.get(pos, 0) + (1 if s % 2 == 0 else -1)
    return CoefficientForm.from_mapping(mapping)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _proper_sequences(symbols: int, k: int) -> np.ndarray:
    """Cyclic sequences of length k using every symbol of range(symbols), no two neighbours equal."""
    if symbols < 2:
        return np.zeros((0, k), dtype=np.int64)
    seqs = np.array(list(product(range(symbols), repeat=k)), dtype=np.int64)
    seqs = seqs[np.all(seqs != np.roll(seqs, -1, axis=1), axis=1)]
    used = np.zeros((len(seqs), symbols), dtype=bool)
    for t in range(k):
        used[np.arange(len(seqs)), seqs[:, t]] = True
    return seqs[used.all(axis=1)]


def _canonical_sign(forms: np.ndarray) -> np.ndarray:
    """Flip every row whose first nonzero entry is negative."""
    if not len(forms):
        return forms
    first = (forms != 0).argmax(axis=1)
    lead = forms[np.arange(len(forms)), first]
    return forms * np.where(lead < 0, -1, 1).astype(forms.dtype)[:, None]


def _cycle_forms(
    row_seqs: np.ndarray, col_seqs: np.ndarray, height: int, width: int
) -> np.ndarray:
    """Distinct canonical non-degenerate dense forms of every (row, column) sequence pair."""
    size = height * width
    if not len(row_seqs) or not len(col_seqs):
        return np.zeros((0, size), dtype=np.int8)
    k = row_seqs.shape[1]
    next_cols = np.roll(col_seqs, -1, axis=1)
    step = max(1, settings.chunk_elements // (len(col_seqs) * size))
    found = []
    for start in range(0, len(row_seqs), step):
        base = row_seqs[start : start + step, None, :] * width
        plus = (base + col_seqs[None, :, :]).reshape(-1, k)
        minus = (base + next_cols[None, :, :]).reshape(-1, k)
        forms = np.zeros((len(plus), size), dtype=np.int8)
        idx = np.arange(len(plus))
        for t in range(k):
            forms[idx, plus[:, t]] += 1
            forms[idx, minus[:, t]] -= 1
        forms = _canonical_sign(forms)
        forms = forms[forms.any(axis=1)]
        found.append(np.unique(forms, axis=0))
    return np.unique(np.concatenate(found), axis=0)


@lru_cache(maxsize=None)
def strict_class_array(height: int, width: int, k: int) -> np.ndarray:
    """Dense canonical forms of the strict classes on a full height x width footprint.

    Forms that cancel to zero are dropped; a form shared with shorter cycles still
    counts as a class of its own length.
    """
    forms = _cycle_forms(
        _proper_sequences(height, k), _proper_sequences(width, k), height, width
    )
    logger.debug(f"strict classes ({height}x{width}, k={k}): {len(forms)}")
    return forms


def enumerate_cycles(i: int, j: int, k: int) -> List[CyclePath]:
    """Length-2k cycles touching every row and column of an i x j grid.

    One cycle is kept per rotation/reversal orbit: the lexicographically smallest
    (rows, cols) description among the 2k re-startings of the same closed walk.
    """
    if not (2 <= i and 2 <= j and 2 <= k <= 6):
        raise ValueError(f"need 2 <= i, j and 2 <= k <= 6, got ({i}, {j}, {k})")
    rows_all = [tuple(r) for r in _proper_sequences(i, k).tolist()]
    cols_all = [tuple(c) for c in _proper_sequences(j, k).tolist()]
    seen = set()
    cycles = []
    for rows, cols in product(rows_all, cols_all):
        variants = []
        for s in range(k):
            variants.append((rows[s:] + rows[:s], cols[s:] + cols[:s]))
            rev_rows = tuple(rows[(s - 1 - t) % k] for t in range(k))
            rev_cols = tuple(cols[(s - t) % k] for t in range(k))
            variants.append((rev_rows, rev_cols))
        key = min(variants)
        if key in seen:
            continue
        seen.add(key)
        cycles.append(CyclePath.from_sequences(*key))
    return cycles


def strict_classes(i: int, j: int, k: int) -> Set[CoefficientForm]:
    """One canonical form per strict-equivalence class on a full i x j footprint."""
    if not (2 <= i and 2 <= j and 2 <= k <= 6):
        raise ValueError(f"need 2 <= i, j and 2 <= k <= 6, got ({i}, {j}, {k})")
    return {CoefficientForm.from_dense(row.reshape(i, j)) for row in strict_class_array(i, j, k)}


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrackingMatrix:
    """Class counts per (i, j) footprint for cycles of length 2k, indexed 1-based."""

    k: int
    entries: Tuple[Tuple[int, ...], ...]

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        if 1 <= i <= self.k and 1 <= j <= self.k:
            return self.entries[i - 1][j - 1]
        return 0

    def is_symmetric(self) -> bool:
        span = range(1, self.k + 1)
        return all(self[i, j] == self[j, i] for i in span for j in span)


@lru_cache(maxsize=None)
def tracking_matrix(k: int) -> TrackingMatrix:
    """Tracking matrix computed by enumeration."""
    if not 2 <= k <= 5:
        raise ValueError(f"tracking matrices are defined for 2 <= k <= 5, got {k}")
    entries = tuple(
        tuple(len(strict_class_array(i, j, k)) if i >= 2 and j >= 2 else 0 for j in range(1, k + 1))
        for i in range(1, k + 1)
    )
    return TrackingMatrix(k=k, entries=entries)


def known_tracking_matrix(k: int) -> TrackingMatrix:
    return TrackingMatrix(k=k, entries=KNOWN_TRACKING_MATRICES[k])


def class_count(m: int, n: int, k: int) -> int:
    """Number of strict classes of length-2k cycles on an m x n grid (double binomial sum)."""
    if m < 2 or n < 2 or not 2 <= k <= 5:
        raise ValueError(f"need m, n >= 2 and 2 <= k <= 5, got ({m}, {n}, {k})")
    table = tracking_matrix(k)
    return sum(
        table[i, j] * comb(m, i) * comb(n, j)
        for i in range(2, min(k, m) + 1)
        for j in range(2, min(k, n) + 1)
    )


def _check_girth(g: int) -> None:
    if g not in (6, 8, 10, 12):
        raise ValueError(f"target girth must be 6, 8, 10 or 12, got {g}")


def total_constraints(m: int, n: int, g: int) -> int:
    """Constraints a fully connected m x n matrix must meet to reach girth g."""
    _check_girth(g)
    return sum(class_count(m, n, k) for k in range(2, g // 2))


def lower_bound_girth10(m: int, n: int) -> GirthBounds:
    """Classic bound 2 C(m,2) C(n,2) + 1 and the corrected L - 2E + 1."""
    if m < 2 or n < 2:
        raise ValueError(f"need m, n >= 2, got ({m}, {n})")
    base = 2 * comb(m, 2) * comb(n, 2)
    shared = comb(m - 2, 2) * comb(n - 2, 2)
    return GirthBounds(m=m, n=n, classic=base + 1, corrected=base - 2 * shared + 1)


# ---------------------------------------------------------------------------
# Constraint sets
# ---------------------------------------------------------------------------


def reduce_under_row_group(dense: np.ndarray, group: RowGroup) -> np.ndarray:
    """Mask keeping the first form of each orbit under the row permutations in group.

    dense has shape (F, m, w); group lists permutation images and should be closed
    under composition (the identity may be omitted).
    """
    keys = [_canonical_sign(dense.reshape(len(dense), -1))]
    for image in group:
        moved = np.empty_like(dense)
        moved[:, list(image), :] = dense
        keys.append(_canonical_sign(moved.reshape(len(dense), -1)))
    seen: Set[bytes] = set()
    keep = np.zeros(len(dense), dtype=bool)
    for f in range(len(dense)):
        own = keys[0][f].tobytes()
        if own in seen:
            continue
        keep[f] = True
        seen.update(key[f].tobytes() for key in keys)
    return keep


def _to_sparse(dense: np.ndarray, width: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Padded (rows, cols, coefs) arrays; padding entries carry coefficient 0."""
    support = int((dense != 0).sum(axis=1).max()) if len(dense) else 1
    order = np.argsort(dense == 0, axis=1, kind="stable")[:, :support]
    coefs = np.take_along_axis(dense, order, axis=1).astype(np.int64)
    return order // width, order % width, coefs


@lru_cache(maxsize=None)
def column_local_forms(
    m: int, width: int, k: int, group: RowGroup = ()
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sparse forms of length-2k classes on an m x width grid that touch every column.

    Each strict (i x width) class is placed on every i-subset of the m rows; when a
    row group is given, only one form per orbit is kept.
    """
    pieces = []
    for i in range(2, min(k, m) + 1):
        classes = strict_class_array(i, width, k)
        if not len(classes):
            continue
        classes = classes.reshape(len(classes), i, width)
        for rows in combinations(range(m), i):
            placed = np.zeros((len(classes), m, width), dtype=np.int8)
            placed[:, list(rows), :] = classes
            pieces.append(placed)
    if not pieces:
        empty = np.zeros((0, 1), dtype=np.int64)
        return empty, empty, empty
    dense = np.concatenate(pieces)
    if group:
        dense = dense[reduce_under_row_group(dense, group)]
    return _to_sparse(dense.reshape(len(dense), -1), width)


@dataclass(frozen=True)
class ConstraintBlock:
    """Column-local forms of one length, replicated over a list of column placements."""

    half_length: int
    rows: np.ndarray
    local_cols: np.ndarray
    coefs: np.ndarray
    placements: np.ndarray

    def __len__(self) -> int:
        return len(self.rows) * len(self.placements)

    def chunks(self) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """(rows, cols, coefs) on the global grid, a bounded number of placements at a time."""
        forms, support = self.rows.shape
        if not forms or not len(self.placements):
            return
        step = max(1, settings.chunk_elements // (forms * support))
        for start in range(0, len(self.placements), step):
            chosen = self.placements[start : start + step]
            cols = chosen[:, self.local_cols].reshape(-1, support)
            count = len(chosen)
            yield (
                np.tile(self.rows, (count, 1)),
                cols,
                np.tile(self.coefs, (count, 1)),
            )


@dataclass(frozen=True)
class ConstraintSet:
    """Every form a girth-g fully connected m x n matrix must keep nonzero, by ascending length."""

    m: int
    n: int
    g: int
    blocks: Tuple[ConstraintBlock, ...]

    def __len__(self) -> int:
        return sum(len(block) for block in self.blocks)

    def forms(self) -> List[CoefficientForm]:
        out = []
        for block in self.blocks:
            for rows, cols, coefs in block.chunks():
                for r, c, v in zip(rows.tolist(), cols.tolist(), coefs.tolist()):
                    out.append(
                        CoefficientForm.from_mapping({(ri, ci): vi for ri, ci, vi in zip(r, c, v)})
                    )
        return out


def _placements(columns: int, width: int, last: int = -1) -> np.ndarray:
    """Ascending column tuples of size width; with last >= 0, tuples ending exactly at last."""
    if last < 0:
        combos = list(combinations(range(columns), width))
    else:
        combos = [c + (last,) for c in combinations(range(last), width - 1)]
    return np.array(combos, dtype=np.int64).reshape(-1, width)


@lru_cache(maxsize=32)
def constraint_set(m: int, n: int, g: int, group: RowGroup = ()) -> ConstraintSet:
    """Constraint set on the full m x n grid (orbit-reduced when a row group is given)."""
    _check_girth(g)
    blocks = []
    for k in range(2, g // 2):
        for width in range(2, min(k, n) + 1):
            rows, cols, coefs = column_local_forms(m, width, k, group)
            if len(rows):
                blocks.append(ConstraintBlock(k, rows, cols, coefs, _placements(n, width)))
    return ConstraintSet(m=m, n=n, g=g, blocks=tuple(blocks))


@lru_cache(maxsize=256)
def new_column_constraints(m: int, column: int, g: int, group: RowGroup = ()) -> ConstraintSet:
    """Constraints on columns 0..column that involve column `column`."""
    _check_girth(g)
    blocks = []
    for k in range(2, g // 2):
        for width in range(2, min(k, column + 1) + 1):
            rows, cols, coefs = column_local_forms(m, width, k, group)
            if len(rows):
                placements = _placements(column + 1, width, last=column)
                blocks.append(ConstraintBlock(k, rows, cols, coefs, placements))
    return ConstraintSet(m=m, n=column + 1, g=g, blocks=tuple(blocks))


def class_representatives(m: int, n: int, g: int) -> List[CoefficientForm]:
    """Materialized constraint set: every class placed on every row/column subset."""
    return constraint_set(m, n, g).forms()
