"""Cycle enumeration, strict classes, tracking matrices and constraint counts."""

from itertools import product

import numpy as np
import pytest

from src.config import settings
from src.tools.cycles import (
    CoefficientForm,
    CyclePath,
    class_count,
    class_representatives,
    coefficient_form,
    constraint_set,
    enumerate_cycles,
    known_tracking_matrix,
    lower_bound_girth10,
    new_column_constraints,
    strict_classes,
    total_constraints,
    tracking_matrix,
)
from src.tools.expmat import ExponentMatrix, theta

# (n, m) -> counts for 2k = 4, 6, 8, 10
CENSUS = {
    (2, 2): (1, 0, 1, 0),
    (2, 3): (3, 0, 6, 0),
    (2, 4): (6, 0, 21, 0),
    (2, 5): (10, 0, 55, 0),
    (3, 2): (3, 0, 6, 0),
    (3, 3): (9, 6, 45, 60),
    (3, 4): (18, 24, 189, 420),
    (3, 5): (30, 60, 555, 1680),
    (4, 2): (6, 0, 21, 0),
    (4, 3): (18, 24, 189, 420),
    (4, 4): (36, 96, 864, 3300),
    (4, 5): (60, 240, 2640, 14460),
    (10, 2): (45, 0, 1035, 0),
    (10, 3): (135, 720, 12960, 90360),
    (10, 4): (270, 2880, 65205, 934920),
    (10, 5): (450, 7200, 206775, 4457880),
}


def test_cycle_path_validates_steps():
    with pytest.raises(ValueError):
        CyclePath(((0, 0), (0, 1), (0, 1), (1, 0)))
    with pytest.raises(ValueError):
        CyclePath(((0, 0), (0, 1), (1, 1)))


def test_square_form():
    cycle = CyclePath.from_sequences((0, 1), (0, 1))
    assert cycle.half_length == 2
    assert cycle.sequences() == ((0, 1), (0, 1))
    form = coefficient_form(cycle)
    assert form.as_dict() == {(0, 0): 1, (0, 1): -1, (1, 1): 1, (1, 0): -1}


def test_retraced_square_doubles():
    """Walking a square twice gives twice its form."""
    single = coefficient_form(CyclePath.from_sequences((0, 1), (0, 1)))
    double = coefficient_form(CyclePath.from_sequences((0, 1, 0, 1), (0, 1, 0, 1)))
    assert double == single + single


def test_form_arithmetic():
    form = coefficient_form(CyclePath.from_sequences((0, 1), (0, 1)))
    assert (form + -form).is_degenerate
    assert form.canonical() == (-form).canonical()
    assert form.rows == {0, 1} and form.cols == {0, 1}
    dense = form.to_dense(2, 3)
    assert dense.shape == (2, 3)
    assert CoefficientForm.from_dense(dense) == form


def test_enumerate_smallest():
    assert len(enumerate_cycles(2, 2, 2)) == 1
    with pytest.raises(ValueError):
        enumerate_cycles(2, 2, 7)


def test_enumerated_cycles_cover_footprint():
    for cycle in enumerate_cycles(3, 3, 3):
        rows, cols = cycle.sequences()
        assert set(rows) == {0, 1, 2} and set(cols) == {0, 1, 2}


def test_strict_class_counts():
    assert len(strict_classes(4, 4, 4)) == 72
    assert len(strict_classes(3, 5, 5)) == 180
    assert len(strict_classes(2, 2, 2)) == 1


def test_strict_classes_are_canonical():
    for form in strict_classes(3, 3, 4):
        assert form.coeffs[0][1] > 0
        assert not form.is_degenerate


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_tracking_matrix_matches_known(k):
    computed = tracking_matrix(k)
    assert computed == known_tracking_matrix(k), f"T(C{2 * k}) differs"
    assert computed.is_symmetric()


def test_tracking_matrix_indexing():
    t8 = known_tracking_matrix(4)
    assert t8[2, 2] == 1
    assert t8[3, 4] == 36
    assert t8[0, 3] == 0 and t8[5, 5] == 0
    assert known_tracking_matrix(3)[3, 3] == 6


@pytest.mark.parametrize("nm,expected", sorted(CENSUS.items()))
def test_census(nm, expected):
    n, m = nm
    assert tuple(class_count(m, n, k) for k in range(2, 6)) == expected


def test_class_count_symmetric_in_dimensions():
    assert class_count(3, 10, 5) == class_count(10, 3, 5) == 90360
    assert class_count(5, 10, 5) == 4457880
    assert class_count(2, 5, 3) == 0


def test_total_constraints():
    assert total_constraints(3, 10, 12) == 104175
    assert total_constraints(2, 2, 6) == 1
    assert total_constraints(3, 10, 10) == 13815
    with pytest.raises(ValueError):
        total_constraints(3, 10, 14)


def test_constraint_set_size_matches_count():
    for m, n, g in [(3, 4, 10), (4, 4, 8), (3, 10, 12)]:
        assert len(constraint_set(m, n, g)) == total_constraints(m, n, g), (m, n, g)


def test_class_representatives():
    """Constraints are the cycles shorter than g: 9 squares and 6 hexagons on 3x3 for g=8."""
    forms = class_representatives(3, 3, 8)
    assert len(forms) == 15
    assert len({f.canonical() for f in forms}) == 15
    assert len(class_representatives(3, 3, 10)) == 9 + 6 + 45
    assert len(class_representatives(2, 2, 6)) == 1


def test_new_column_constraints_partition():
    """Constraints ending at each column add up to the full set."""
    m, n, g = 3, 5, 10
    pieces = sum(len(new_column_constraints(m, c, g)) for c in range(1, n))
    assert pieces == len(constraint_set(m, n, g))


def test_inevitable_twelve_cycle():
    """a - b + c - a + b - c over a 2x3 block is identically zero."""
    rows = (0, 1, 0, 1, 0, 1)
    cols = (0, 1, 2, 0, 1, 2)
    form = coefficient_form(CyclePath.from_sequences(rows, cols))
    assert form.is_degenerate


def test_girth10_bounds():
    bounds = lower_bound_girth10(4, 7)
    assert bounds.classic == 253
    assert bounds.corrected == 233
    assert lower_bound_girth10(3, 4).classic == 2 * 3 * 6 + 1


def test_chunking_keeps_all_forms(monkeypatch):
    full = constraint_set(3, 6, 10)
    monkeypatch.setattr(settings, "chunk_elements", 64)
    chunked = sum(len(rows) for block in full.blocks for rows, _, _ in block.chunks())
    assert chunked == len(full)


def _full_grid_class_count(m, n, k):
    """Distinct (rows, columns, form) triples over every length-2k closed walk on an m x n grid."""

    def proper(symbols):
        return [
            s
            for s in product(range(symbols), repeat=k)
            if all(s[t] != s[(t + 1) % k] for t in range(k))
        ]

    seen = set()
    for rows in proper(m):
        for cols in proper(n):
            form = coefficient_form(CyclePath.from_sequences(rows, cols))
            if not form.is_degenerate:
                seen.add((frozenset(rows), frozenset(cols), form.canonical()))
    return len(seen)


def _walk_pairs(m, n, k):
    return ((m - 1) ** k + (-1) ** k * (m - 1)) * ((n - 1) ** k + (-1) ** k * (n - 1))


@pytest.mark.parametrize(
    "m,n,k",
    [
        pytest.param(m, n, k, marks=[pytest.mark.slow] if _walk_pairs(m, n, k) > 100_000 else [])
        for m in range(2, 6)
        for n in range(m, 6)
        for k in range(2, 6)
    ],
)
def test_class_count_matches_full_grid_enumeration(m, n, k):
    assert class_count(m, n, k) == _full_grid_class_count(m, n, k)


def test_class_count_follows_enumerated_tracking_matrix():
    t10 = tracking_matrix(5)
    assert t10[3, 3] == 60 and t10[3, 4] == 180
    assert class_count(3, 3, 5) == 60
    assert class_count(3, 4, 5) == 4 * 60 + 180


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_class_representative_vanishes_with_every_member(k):
    """theta of a walk is zero mod N exactly when theta of its class form is."""
    classes = strict_classes(3, 3, k)
    rng = np.random.default_rng(11 + k)
    for N in (5, 7, 12):
        entries = rng.integers(0, N, size=(3, 3))
        P = ExponentMatrix(N, entries)
        for cycle in enumerate_cycles(3, 3, k):
            form = coefficient_form(cycle)
            if form.is_degenerate:
                continue
            assert form.canonical() in classes
            walk = sum(
                int(entries[r, c]) * (1 if s % 2 == 0 else -1)
                for s, (r, c) in enumerate(cycle.positions)
            )
            assert (walk % N == 0) == (theta(P, form.canonical()) == 0), (N, cycle)


def test_strict_classes_drop_cancelling_twelve_step_walks():
    cancelling = [c for c in enumerate_cycles(2, 3, 6) if coefficient_form(c).is_degenerate]
    assert cancelling
    classes = strict_classes(2, 3, 6)
    assert classes
    assert all(not form.is_degenerate for form in classes)
    assert CoefficientForm() not in classes
