"""Exponent matrices, the Fossorier girth check, Tanner-graph expansion and alist export."""

import logging
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.tools.cycles import CoefficientForm, ConstraintSet, constraint_set
from src.tools.zring import NotAUnitError

logger = logging.getLogger(__name__)

MASKED = -1
FOSSORIER_CAP = 12


class MaskedPositionError(ValueError):
    """A computation needed the shift of a masked (all-zero) block."""


@dataclass(frozen=True)
class Girth:
    """Girth value; bounded=True means no cycle shorter than `length` exists."""

    length: int
    bounded: bool = False

    def meets(self, g: int) -> bool:
        return self.length >= g

    def __str__(self) -> str:
        return f"≥{self.length}" if self.bounded else str(self.length)


@dataclass(frozen=True, eq=False)
class ExponentMatrix:
    """m x n shifts over Z_N; MASKED marks a zero block."""

    N: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise ValueError(f"exponent matrix must be 2-D, got shape {entries.shape}")
        if self.N < 1:
            raise ValueError(f"lifting degree must be positive, got {self.N}")
        if ((entries < MASKED) | (entries >= self.N)).any():
            raise ValueError(f"entries must lie in [0, {self.N - 1}] or be masked")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Optional[int]]], N: int) -> "ExponentMatrix":
        """Build from nested lists; None marks a masked block, other values are reduced mod N."""
        return cls(N, np.array([[MASKED if v is None else v % N for v in row] for row in rows]))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def mask(self) -> np.ndarray:
        return self.entries == MASKED

    @property
    def fully_connected(self) -> bool:
        return not self.mask.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExponentMatrix):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.entries, other.entries)

    __hash__ = None  # type: ignore[assignment]

    def to_rows(self) -> List[List[Optional[int]]]:
        return [[None if v == MASKED else v for v in row] for row in self.entries.tolist()]

    def scaled(self, c: int) -> "ExponentMatrix":
        """Multiply every unmasked shift by the unit c."""
        if gcd(c, self.N) != 1:
            raise NotAUnitError(f"{c} is not a unit modulo {self.N}")
        scaled = np.where(self.mask, MASKED, (self.entries * (c % self.N)) % self.N)
        return ExponentMatrix(self.N, scaled)

    def permute_rows(self, image: Sequence[int]) -> "ExponentMatrix":
        """Row r moves to position image[r]."""
        moved = np.empty_like(self.entries)
        moved[list(image), :] = self.entries
        return ExponentMatrix(self.N, moved)

    def permute_columns(self, image: Sequence[int]) -> "ExponentMatrix":
        """Column c moves to position image[c]."""
        moved = np.empty_like(self.entries)
        moved[:, list(image)] = self.entries
        return ExponentMatrix(self.N, moved)

    def __str__(self) -> str:
        rows = (" ".join("-" if v is None else str(v) for v in row) for row in self.to_rows())
        return f"N={self.N}\n" + "\n".join(rows)


def toy_counterexample(a: int, b: int, N: int) -> ExponentMatrix:
    """Block-diagonal 4x4 matrix of two 2x2 squares used against the double-difference bound."""
    return ExponentMatrix.from_rows(
        [[0, 0, None, None], [0, a, None, None], [None, None, 0, 0], [None, None, 0, b]], N
    )


def theta(P: ExponentMatrix, form: CoefficientForm) -> int:
    """Alternating sum of the form's positions over P, mod N."""
    total = 0
    for (r, c), coef in form.coeffs:
        value = int(P.entries[r, c])
        if value == MASKED:
            raise MaskedPositionError(f"position ({r}, {c}) is masked")
        total += coef * value
    return total % P.N


def first_vanishing_length(
    entries: np.ndarray, N: int, constraints: ConstraintSet
) -> Optional[int]:
    """Half length of the shortest constraint with theta = 0 mod N, or None."""
    for block in constraints.blocks:
        for rows, cols, coefs in block.chunks():
            values = (coefs * entries[rows, cols]).sum(axis=1) % N
            if not values.all():
                return block.half_length
    return None


def fossorier_girth(P: ExponentMatrix, cap: int = FOSSORIER_CAP) -> Girth:
    """Girth from the Fossorier condition, searched up to cap - 2."""
    if cap % 2 or not 4 <= cap <= FOSSORIER_CAP:
        raise ValueError(f"cap must be even and in [4, {FOSSORIER_CAP}], got {cap}")
    if not P.fully_connected:
        raise MaskedPositionError("the Fossorier check needs a fully connected matrix")
    if cap < 6:
        return Girth(cap, bounded=True)
    half = first_vanishing_length(P.entries, P.N, constraint_set(P.m, P.n, cap))
    if half is None:
        return Girth(cap, bounded=True)
    return Girth(2 * half)


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite graph: variable v is adjacent to the checks in var_neighbors[v]."""

    num_vars: int
    num_checks: int
    var_neighbors: Tuple[Tuple[int, ...], ...]
    check_neighbors: Tuple[Tuple[int, ...], ...]
    circulant: Optional[int] = None

    @classmethod
    def from_edges(
        cls,
        num_vars: int,
        num_checks: int,
        edges: Iterable[Tuple[int, int]],
        circulant: Optional[int] = None,
    ) -> "TannerGraph":
        """Build from (check, variable) pairs."""
        var_adj: List[List[int]] = [[] for _ in range(num_vars)]
        check_adj: List[List[int]] = [[] for _ in range(num_checks)]
        for check, var in edges:
            var_adj[var].append(check)
            check_adj[check].append(var)
        return cls(
            num_vars,
            num_checks,
            tuple(tuple(sorted(v)) for v in var_adj),
            tuple(tuple(sorted(c)) for c in check_adj),
            circulant,
        )

    @property
    def num_edges(self) -> int:
        return sum(len(v) for v in self.var_neighbors)

    def to_dense(self) -> np.ndarray:
        """Parity-check matrix H (checks x variables)."""
        H = np.zeros((self.num_checks, self.num_vars), dtype=np.uint8)
        for var, checks in enumerate(self.var_neighbors):
            H[list(checks), var] = 1
        return H


def expand(P: ExponentMatrix) -> TannerGraph:
    """Lift every unmasked shift to an N x N circulant permutation block."""
    N = P.N
    shifts = np.arange(N, dtype=np.int64)
    checks, variables = [], []
    for i, j in zip(*np.nonzero(~P.mask)):
        p = int(P.entries[i, j])
        checks.append(i * N + shifts)
        variables.append(j * N + (shifts + p) % N)
    edges: Iterable[Tuple[int, int]] = ()
    if checks:
        edges = zip(np.concatenate(checks).tolist(), np.concatenate(variables).tolist())
    return TannerGraph.from_edges(P.n * N, P.m * N, edges, circulant=N)


def tanner_girth(H: TannerGraph, cap: int) -> Girth:
    """Shortest cycle by breadth-first search from each root, truncated at cap.

    For lifted graphs the cyclic shift is an automorphism, so one variable per
    block column is a sufficient set of roots.
    """
    offset = H.num_vars
    adjacency = [[offset + c for c in checks] for checks in H.var_neighbors]
    adjacency += [list(vars_) for vars_ in H.check_neighbors]
    if H.circulant:
        roots: Iterable[int] = range(0, H.num_vars, H.circulant)
    else:
        roots = range(H.num_vars)

    best = cap
    for root in roots:
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du >= best:
                break
            for w in adjacency[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, du + dist[w] + 1)
    if best < cap:
        return Girth(best)
    return Girth(cap, bounded=True)


def _index_line(values: Iterable[int]) -> str:
    return "".join(f"{v} " for v in values)


def export_alist(H: TannerGraph) -> bytes:
    """Standard alist text with 1-based indices."""
    var_degrees = [len(v) for v in H.var_neighbors]
    check_degrees = [len(c) for c in H.check_neighbors]
    lines = [
        f"{H.num_vars} {H.num_checks}",
        f"{max(var_degrees, default=0)} {max(check_degrees, default=0)}",
        _index_line(var_degrees),
        _index_line(check_degrees),
    ]
    lines += [_index_line(c + 1 for c in checks) for checks in H.var_neighbors]
    lines += [_index_line(v + 1 for v in vars_) for vars_ in H.check_neighbors]
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_alist(data: bytes) -> TannerGraph:
    """Inverse of export_alist; zero padding entries are ignored."""
    lines = data.decode("ascii").splitlines()
    num_vars, num_checks = (int(x) for x in lines[0].split())
    edges = []
    for var, line in enumerate(lines[4 : 4 + num_vars]):
        edges.extend((int(x) - 1, var) for x in line.split() if int(x) > 0)
    return TannerGraph.from_edges(num_vars, num_checks, edges)
