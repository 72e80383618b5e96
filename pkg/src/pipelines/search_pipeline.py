"""Controlled greedy search for IRS column multipliers."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, log10
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.schemas import (
    CodeRecord,
    ExpectationEstimate,
    IrsCandidate,
    IrsType,
    SearchConfig,
    SearchOutcome,
)
from src.pipelines.verification_pipeline import VerificationPipeline
from src.tools.cycles import RowGroup, constraint_set, new_column_constraints, total_constraints
from src.tools.expmat import first_vanishing_length
from src.tools.irs import detect_irs_type, row_group
from src.tools.zring import find_generators

logger = logging.getLogger(__name__)

# Largest N for which a full table of modular inverses is kept
INVERSE_TABLE_LIMIT = 10**7

G_PROFILES = ("exhaustive", "paper")


class SearchBudgetExceeded(Exception):
    """Wall-clock budget for one (N, candidate) pair ran out."""


@lru_cache(maxsize=8)
def _inverse_table(N: int) -> np.ndarray:
    """inv[x] = x^-1 mod N for units, 0 otherwise."""
    table = np.zeros(N, dtype=np.int64)
    for x in range(1, N):
        if gcd(x, N) == 1:
            table[x] = pow(x, -1, N)
    return table


def _linear_roots(A: np.ndarray, B: np.ndarray, N: int) -> np.ndarray:
    """Every beta in Z_N with A + B*beta = 0 mod N for at least one (A, B) pair."""
    constant = B == 0
    if (A[constant] == 0).any():
        return np.arange(N, dtype=np.int64)
    A, B = A[~constant], B[~constant]
    d = np.gcd(B, N)
    roots = []
    unit = d == 1
    if N <= INVERSE_TABLE_LIMIT:
        roots.append((-A[unit] * _inverse_table(N)[B[unit]]) % N)
        rest = np.flatnonzero(~unit)
    else:
        rest = np.arange(len(B))
    for idx in rest.tolist():
        a, b, div = int(A[idx]), int(B[idx]), int(d[idx])
        if a % div:
            continue
        step = N // div
        base = (-(a // div) * pow(b // div, -1, step)) % step
        roots.append(np.arange(base, N, step, dtype=np.int64))
    if not roots:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(roots))


class CompatibilityChecker:
    """rho and Phi for one base column P1 over Z_N at girth g.

    Multiplier matrices are P(i, j) = P1[i] * gamma_j mod N. When P1 is a genuine IRS
    column only one constraint per IR-equivalence orbit is checked.
    """

    def __init__(self, p1: Sequence[int], N: int, g: int):
        self.p1 = np.array([v % N for v in p1], dtype=np.int64)
        self.N = N
        self.g = g
        self.m = len(self.p1)
        irs_type = detect_irs_type(list(p1), N)
        self.group: RowGroup = row_group(irs_type, self.m) if irs_type else ()
        self._columns: Dict[int, List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]] = {}

    def _column_terms(self, column: int):
        """Constraints ending at `column`, with their (cacheable) coefficient on that column."""
        if column not in self._columns:
            terms = []
            for block in new_column_constraints(self.m, column, self.g, self.group).blocks:
                for rows, cols, coefs in block.chunks():
                    on_new = (cols == column) * coefs * self.p1[rows]
                    terms.append((rows, cols, coefs, on_new.sum(axis=1) % self.N))
            self._columns[column] = terms
        return self._columns[column]

    def matrix_entries(self, gamma: Sequence[int]) -> np.ndarray:
        return np.outer(self.p1, np.array(gamma, dtype=np.int64) % self.N) % self.N

    def rho(self, gamma: Sequence[int]) -> bool:
        """Girth of the multiplier matrix is at least g (full check)."""
        if 0 not in gamma:
            raise ValueError("gamma must contain 0")
        if len(gamma) < 2:
            return True
        entries = self.matrix_entries(gamma)
        constraints = constraint_set(self.m, len(gamma), self.g, self.group)
        return first_vanishing_length(entries, self.N, constraints) is None

    def bad_multipliers(self, gamma: Sequence[int]) -> np.ndarray:
        """beta values for which some constraint touching the next column vanishes."""
        column = len(gamma)
        entries = self.matrix_entries(list(gamma) + [0])
        found = [np.array(sorted(set(gamma)), dtype=np.int64)]
        for rows, cols, coefs, on_new in self._column_terms(column):
            fixed = (coefs * entries[rows, cols]).sum(axis=1) % self.N
            found.append(_linear_roots(fixed, on_new, self.N))
        return np.unique(np.concatenate(found))

    def phi(self, gamma: Sequence[int], within: Optional[Sequence[int]] = None) -> List[int]:
        """Admissible extensions of gamma, ascending; restricted to `within` when given."""
        if within is None:
            pool = np.arange(self.N, dtype=np.int64)
        else:
            pool = np.array(within, dtype=np.int64)
        bad = self.bad_multipliers(gamma)
        return np.sort(pool[~np.isin(pool, bad)]).tolist()


@lru_cache(maxsize=64)
def _checker(p1: Tuple[int, ...], N: int, g: int) -> CompatibilityChecker:
    return CompatibilityChecker(p1, N, g)


def rho(gamma: Sequence[int], p1: Sequence[int], N: int, g: int) -> bool:
    """Whether the multiplier matrix of gamma over P1 reaches girth g."""
    return _checker(tuple(p1), N, g).rho(gamma)


def phi(
    gamma: Sequence[int], p1: Sequence[int], N: int, g: int, incremental: bool = True
) -> List[int]:
    """Every beta outside gamma with rho(gamma + [beta]) true, ascending."""
    checker = _checker(tuple(p1), N, g)
    if incremental:
        return checker.phi(gamma)
    members = set(gamma)
    return [b for b in range(N) if b not in members and checker.rho(list(gamma) + [b])]


@dataclass(frozen=True)
class SearchState:
    gamma: Tuple[int, ...]
    compatible: Tuple[int, ...]
    candidate: IrsCandidate


def greedy_score(state: SearchState, checker: CompatibilityChecker) -> List[int]:
    """s(i) = |S cap Phi(gamma + [S(i)])| for every S(i)."""
    return [
        len(checker.phi(state.gamma + (beta,), within=state.compatible))
        for beta in state.compatible
    ]


class _Search:
    """One branch-limited recursion over a fixed candidate."""

    def __init__(self, config: SearchConfig, checker: CompatibilityChecker, deadline: float):
        self.config = config
        self.checker = checker
        self.deadline = deadline
        self.nodes = 0

    def run(self, state: SearchState) -> Optional[Tuple[int, ...]]:
        self.nodes += 1
        if self.deadline and time.monotonic() > self.deadline:
            raise SearchBudgetExceeded(f"budget exhausted after {self.nodes} nodes")
        n = self.config.n
        gamma = state.gamma
        if len(gamma) >= n:
            return gamma

        remaining = list(state.compatible)
        if len(gamma) == n - 1:
            # every compatible beta completes the matrix
            return gamma + (remaining[0],) if remaining else None
        scores = greedy_score(state, self.checker)
        order = [b for _, b in sorted(zip(scores, remaining), key=lambda sb: (-sb[0], sb[1]))]
        limit = min(len(order), self.config.G[len(gamma) - 1])

        pool = set(remaining)
        for beta in order[:limit]:
            pool.discard(beta)
            extended = gamma + (beta,)
            compatible = self.checker.phi(extended, within=sorted(pool))
            if len(extended) + len(compatible) >= n:
                result = self.run(SearchState(extended, tuple(compatible), state.candidate))
                if result:
                    return result
            elif len(gamma) + len(pool) < n:
                return None
        return None


def search_recursive(
    state: SearchState, config: SearchConfig, deadline: float = 0.0
) -> Optional[Tuple[int, ...]]:
    """Branch-limited greedy completion of state.gamma to n multipliers, or None."""
    candidate = state.candidate
    checker = _checker(tuple(candidate.base_column()), candidate.N, config.g)
    return _Search(config, checker, deadline).run(state)


def _search_candidate(
    candidate: IrsCandidate, config: SearchConfig, budget_seconds: float
) -> Tuple[Optional[Tuple[int, ...]], int, bool]:
    """(gamma or None, nodes expanded, budget hit) for one candidate."""
    checker = _checker(tuple(candidate.base_column()), candidate.N, config.g)
    start = (0, 1)
    if not checker.rho(start):
        logger.debug(f"N={candidate.N}, a={candidate.a}: two-column matrix misses girth {config.g}")
        return None, 0, False
    deadline = time.monotonic() + budget_seconds if budget_seconds > 0 else 0.0
    search = _Search(config, checker, deadline)
    state = SearchState(start, tuple(checker.phi(start)), candidate)
    try:
        gamma = search.run(state)
    except SearchBudgetExceeded:
        logger.warning(f"⚠ N={candidate.N}, a={candidate.a}: search budget exhausted")
        return None, search.nodes, True
    return gamma, search.nodes, False


def effort_vector(profile: str, n: int, N: int) -> List[int]:
    """G for a named profile ('exhaustive', 'paper') or a CSV of n integers, clipped to [1, N]."""
    if profile == "exhaustive":
        values = [N] * n
    elif profile == "paper":
        values = ([N, N, 2, 2] + [1] * n)[:n]
    else:
        try:
            values = [int(v) for v in profile.split(",")]
        except ValueError:
            raise ValueError(
                f"G must be one of {G_PROFILES} or a CSV of integers, got {profile!r}"
            ) from None
        if len(values) != n:
            raise ValueError(f"G must have {n} entries, got {len(values)}")
    return [max(1, min(v, N)) for v in values]


def candidates_for(
    N: int, m: int, irs_type: Optional[IrsType] = None, a: Optional[int] = None
) -> List[IrsCandidate]:
    """Sieve candidates in ascending representative order, or the single forced generator."""
    if irs_type is None:
        irs_type = IrsType.TYPE_II if m == 3 else IrsType.TYPE_I
    if a is not None:
        return [IrsCandidate(N=N, a=a % N, irs_type=irs_type, m=m)]
    if N < 2 or (irs_type == IrsType.TYPE_II and N <= 3):
        return []
    return find_generators(N, m, irs_type)


def find_code(
    config: SearchConfig,
    irs_type: Optional[IrsType] = None,
    a: Optional[int] = None,
    workers: Optional[int] = None,
    budget_seconds: Optional[float] = None,
) -> SearchOutcome:
    """Run the greedy search over every sieve candidate of config.N; first success wins."""
    started = time.monotonic()
    workers = settings.workers if workers is None else workers
    budget = settings.budget_seconds if budget_seconds is None else budget_seconds
    candidates = candidates_for(config.N, config.m, irs_type, a)

    if workers > 1 and len(candidates) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_search_candidate, c, config, budget) for c in candidates
            ]
            results = [f.result() for f in futures]
    else:
        results = []
        for candidate in candidates:
            results.append(_search_candidate(candidate, config, budget))
            if results[-1][0]:
                break

    nodes = sum(r[1] for r in results)
    tried = [c.a for c in candidates[: len(results)]]
    status = "infeasible" if config.exhaustive else "not_found"
    if any(r[2] for r in results):
        status = "budget"
    record = None
    for candidate, (gamma, _, _) in zip(candidates, results):
        if gamma:
            record = CodeRecord(
                N=config.N,
                a=candidate.a,
                type=candidate.irs_type,
                m=config.m,
                n=config.n,
                g=config.g,
                gamma=sorted(gamma),
            )
            status = "found"
            tried = [c.a for c in candidates[: candidates.index(candidate) + 1]]
            break
    return SearchOutcome(
        config=config,
        status=status,
        record=record,
        candidates=tried,
        nodes=nodes,
        elapsed_seconds=time.monotonic() - started,
    )


def scan_nmin(
    m: int,
    n: int,
    g: int,
    profile: str,
    n_from: int,
    n_to: int,
    irs_type: Optional[IrsType] = None,
    workers: Optional[int] = None,
    budget_seconds: Optional[float] = None,
) -> Tuple[Optional[SearchOutcome], List[SearchOutcome]]:
    """First N in [n_from, n_to] where the search succeeds, plus every outcome visited."""
    if n_from > n_to:
        raise ValueError(f"empty range [{n_from}, {n_to}]")
    visited = []
    for N in range(max(n_from, 2), n_to + 1):
        if not candidates_for(N, m, irs_type):
            continue
        config = SearchConfig(m=m, n=n, N=N, g=g, G=effort_vector(profile, n, N))
        outcome = find_code(config, irs_type, workers=workers, budget_seconds=budget_seconds)
        visited.append(outcome)
        logger.debug(f"N={N}: {outcome.status} after {outcome.nodes} nodes")
        if outcome.status == "found":
            return outcome, visited
    return None, visited


def expectation_estimates(m: int, n: int, g: int, N: int) -> ExpectationEstimate:
    """log10 of the expected girth-g matrix counts, unconstrained (E0) and IRS-structured (E1)."""
    constraints = total_constraints(m, n, g)
    miss = log10(1 - 1 / N)
    return ExpectationEstimate(
        m=m,
        n=n,
        g=g,
        N=N,
        constraints=constraints,
        log10_e0=m * n * log10(N) + constraints * miss,
        log10_e1=(n - 2) * log10(N) + constraints / max(3, m - 1) * miss,
    )


class SearchPipeline:
    """
    Sieve → two-column prequalification → greedy search → double verification

    Every record returned has been re-checked with the Fossorier condition and,
    for small N, with the Tanner-graph oracle.
    """

    def __init__(self, workers: Optional[int] = None, budget_seconds: Optional[float] = None):
        self.workers = settings.workers if workers is None else workers
        self.budget_seconds = settings.budget_seconds if budget_seconds is None else budget_seconds
        self.verifier = VerificationPipeline()
        logger.info("SearchPipeline initialized")

    def search(
        self,
        config: SearchConfig,
        irs_type: Optional[IrsType] = None,
        a: Optional[int] = None,
    ) -> SearchOutcome:
        """
        Search one lifting degree.

        Args:
            config: dimensions, N, target girth and effort vector
            irs_type: force type-I or type-II (default: type-II for m=3, type-I otherwise)
            a: restrict the search to this generator

        Returns:
            SearchOutcome with a verified record when status is "found"
        """
        logger.info(f"Search Step 1: sieve N={config.N} for m={config.m}")
        candidates = candidates_for(config.N, config.m, irs_type, a)
        logger.info(f"Search Step 1: {len(candidates)} candidate(s) {[c.a for c in candidates]}")

        logger.info(f"Search Step 2: greedy search n={config.n}, g={config.g}, G={config.G}")
        outcome = find_code(config, irs_type, a, self.workers, self.budget_seconds)

        if outcome.record is None:
            logger.info(f"⚠ N={config.N}: {outcome.status} ({outcome.nodes} nodes)")
            return outcome

        logger.info("Search Step 3: verify record")
        result = self.verifier.verify_record(outcome.record, oracle=None)
        if not result.passed:
            logger.error(f"Search produced a record that fails verification: {outcome.record}")
            raise RuntimeError(f"unverified search result {outcome.record.label()}")
        logger.info(f"✓ {outcome.record.label()} gamma={outcome.record.gamma}")
        return outcome

    def scan(
        self,
        m: int,
        n: int,
        g: int,
        profile: str,
        n_from: int,
        n_to: int,
        irs_type: Optional[IrsType] = None,
    ) -> Tuple[Optional[SearchOutcome], List[SearchOutcome]]:
        """Smallest N in range with a verified code."""
        logger.info(f"Scan Step 1: N in [{n_from}, {n_to}] for {m}x{n}, g={g}, G={profile}")
        best, visited = scan_nmin(
            m, n, g, profile, n_from, n_to, irs_type, self.workers, self.budget_seconds
        )
        if best is None or best.record is None:
            logger.info(f"⚠ no code found in [{n_from}, {n_to}] ({len(visited)} N searched)")
            return best, visited

        logger.info("Scan Step 2: verify record")
        if not self.verifier.verify_record(best.record, oracle=None).passed:
            raise RuntimeError(f"unverified search result {best.record.label()}")
        logger.info(f"✓ N_min={best.config.N}: {best.record.label()}")
        return best, visited
