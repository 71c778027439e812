"""Searching for, and refuting, orthogonal matrices with a prescribed pattern."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from quadtourn.pattern import PatternError, PatternMatrix, block_pattern
from quadtourn.tournament import compose, rotational_from, three_cycle

Status = Literal["SUCCESS", "FAILURE"]


@dataclass(frozen=True)
class OrthoConfig:
    eps_orth: float = 1e-10
    eps_zero: float = 1e-10
    tau: float = 1e-6
    max_iter: int = 10_000
    restarts: int = 100
    seed: int = 0
    # residual trend is sampled every `window` iterations to detect stalls
    window: int = 200
    threads: int = 1


@dataclass
class OrthoSearchResult:
    """Outcome of the alternating projection search.

    FAILURE only means no realization was found within the budget.
    """

    status: Status
    matrix: Optional[np.ndarray]
    orthogonality_residual: float
    pattern_residual: float
    min_support_entry: float
    restarts_used: int
    iterations_used: int

    @property
    def success(self) -> bool:
        return self.status == "SUCCESS"


def orthogonality_residual(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.T @ u - np.eye(u.shape[0]))))


def pattern_residuals(u: np.ndarray, mask: np.ndarray) -> tuple[float, float]:
    """(max |entry| on required zeros, min |entry| on required nonzeros)."""
    a = np.abs(u)
    off = a[~mask]
    on = a[mask]
    return (float(off.max()) if off.size else 0.0, float(on.min()) if on.size else np.inf)


def polar_factor(x: np.ndarray) -> np.ndarray:
    """Nearest orthogonal matrix to ``x`` in Frobenius norm."""
    u, _, vt = np.linalg.svd(x)
    return u @ vt


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_restart(mask: np.ndarray, cfg: OrthoConfig, x: np.ndarray):
    """Iterate from ``x``; returns (matrix or None, best pattern residual, iterations)."""
    best = np.inf
    checkpoint = None
    w = x
    for it in range(1, cfg.max_iter + 1):
        w = polar_factor(np.where(mask, x, 0.0))
        zero_res, support = pattern_residuals(w, mask)
        best = min(best, zero_res)
        if zero_res <= cfg.eps_zero:
            if support >= cfg.tau and orthogonality_residual(w) <= cfg.eps_orth:
                return w, zero_res, it
            return None, zero_res, it
        x = w
        if it % cfg.window == 0:
            if checkpoint is not None:
                rate = (zero_res / checkpoint) ** (1.0 / cfg.window) if checkpoint > 0 else 0.0
                if rate >= 1.0 or zero_res * rate ** (cfg.max_iter - it) > cfg.eps_zero:
                    return None, best, it
            checkpoint = zero_res
    return None, best, cfg.max_iter


def alternating_projection(p: PatternMatrix, config: OrthoConfig = OrthoConfig(),
                           initial: Optional[np.ndarray] = None) -> OrthoSearchResult:
    """Alternate the polar projection with zeroing the required-zero entries.

    Restart ``i`` starts from a random orthogonal matrix seeded by
    ``(config.seed, i)``.  A restart stops early once its residual trend
    cannot reach ``eps_zero`` within ``max_iter``.  ``initial`` replaces the
    starting point of restart 0.
    """
    if not isinstance(p, PatternMatrix):
        raise PatternError("alternating_projection needs a PatternMatrix")
    zr, zc = p.zero_lines()
    if zr or zc:
        raise PatternError(f"pattern has zero rows {zr} / columns {zc}; no orthogonal matrix fits")
    mask = p.to_array().astype(bool)
    n = p.n

    def attempt(i):
        x = initial.astype(float) if (i == 0 and initial is not None) else random_orthogonal(n, _restart_rng(config.seed, i))
        return _run_restart(mask, config, x)

    total_iter = 0
    best_res = np.inf
    step = max(1, config.threads)
    with ThreadPoolExecutor(max_workers=step) as pool:
        for start in range(0, config.restarts, step):
            batch = list(range(start, min(start + step, config.restarts)))
            outcomes = list(pool.map(attempt, batch))
            for i, (w, res, its) in zip(batch, outcomes):
                total_iter += its
                best_res = min(best_res, res)
                if w is not None:
                    zero_res, support = pattern_residuals(w, mask)
                    return OrthoSearchResult("SUCCESS", w, orthogonality_residual(w), zero_res,
                                             support, i + 1, total_iter)
    return OrthoSearchResult("FAILURE", None, float("nan"), float(best_res), float("nan"),
                             config.restarts, total_iter)


# refutation certificates -----------------------------------------------------


@dataclass(frozen=True)
class Fact:
    """Lines ``pair`` of the matrix are nonzero multiples of each other on ``cols``.

    ``source`` is ``("pivot", c)`` or ``("chain", i, j)`` naming earlier facts.
    """

    pair: tuple[int, int]
    cols: tuple[int, ...]
    source: tuple


@dataclass(frozen=True)
class DependencyCertificate:
    """Proof that a pattern supports no orthogonal matrix.

    ``side == "ROWS"`` means facts concern rows of the pattern (derived from
    column orthogonality); ``"COLUMNS"`` is the same argument on the
    transpose.  ``contradiction`` names two lines that are proportional on
    ``facts[fact_index].cols`` and share support nowhere else.
    """

    side: Literal["ROWS", "COLUMNS"]
    facts: tuple[Fact, ...]
    contradiction: tuple[int, int]
    fact_index: int

    def used_facts(self) -> list[int]:
        """Indices of the facts the contradiction depends on, in derivation order."""
        need, stack = set(), [self.fact_index]
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            src = self.facts[i].source
            if src[0] == "chain":
                stack.extend(src[1:])
        return sorted(need)


def _mask(idx) -> int:
    return sum(1 << i for i in idx)


def _idx(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def base_facts(p: PatternMatrix) -> list[Fact]:
    """Row proportionalities forced by orthogonality of a pivot column to others.

    For pivot column c and rows r, s in its support, J is every other column
    whose support meets supp(C_c) in exactly {r, s}.
    """
    cols = p.cols
    facts = []
    for c in range(p.n):
        sc = cols[c]
        for r, s in itertools.combinations(_idx(sc), 2):
            pair = 1 << r | 1 << s
            j = [k for k in range(p.n) if k != c and cols[k] & sc == pair]
            if j:
                facts.append(Fact((r, s), tuple(j), ("pivot", c)))
    return facts


def verify_fact(p: PatternMatrix, fact: Fact) -> bool:
    """Re-check a pivot fact against the pattern by direct support computation."""
    if fact.source[0] != "pivot":
        return False
    c = fact.source[1]
    pair = _mask(fact.pair)
    sc = p.cols[c]
    return bool(fact.cols) and c not in fact.cols and sc & pair == pair and all(
        p.cols[j] & sc == pair for j in fact.cols
    )


def _contradicts(rows: tuple[int, ...], fact: Fact) -> bool:
    common = rows[fact.pair[0]] & rows[fact.pair[1]]
    return common != 0 and common & ~_mask(fact.cols) == 0


def _search(p: PatternMatrix, depth_cap: int, max_facts: int) -> Optional[tuple[list[Fact], int]]:
    facts = base_facts(p)
    seen = {(f.pair, f.cols) for f in facts}
    for i, f in enumerate(facts):
        if _contradicts(p.rows, f):
            return facts, i
    level_start, level_end = 0, len(facts)
    for _ in range(depth_cap):
        new: list[Fact] = []
        for i in range(level_start, level_end):
            fi = facts[i]
            for j in range(len(facts)):
                if j >= level_start and j <= i:
                    continue
                fj = facts[j]
                shared = set(fi.pair) & set(fj.pair)
                if len(shared) != 1:
                    continue
                a = (set(fi.pair) - shared).pop()
                b = (set(fj.pair) - shared).pop()
                cols = _idx(_mask(fi.cols) & _mask(fj.cols))
                if not cols:
                    continue
                pair = (min(a, b), max(a, b))
                if (pair, cols) in seen:
                    continue
                seen.add((pair, cols))
                fact = Fact(pair, cols, ("chain", min(i, j), max(i, j)))
                new.append(fact)
                facts.append(fact)
                if _contradicts(p.rows, fact):
                    return facts, len(facts) - 1
                if len(facts) > max_facts:
                    return None
        if not new:
            return None
        level_start, level_end = level_end, len(facts)
    return None


def ratio_propagation_certificate(p: PatternMatrix, depth_cap: int = 4,
                                  max_facts: int = 50_000) -> Optional[DependencyCertificate]:
    """First certificate found within ``depth_cap`` chaining rounds, or None.

    Rows are tried before the transpose.  A returned certificate proves that
    no real orthogonal matrix has pattern ``p``.
    """
    if not isinstance(p, PatternMatrix):
        p = PatternMatrix.from_array(p)
    for side, q in (("ROWS", p), ("COLUMNS", p.transpose())):
        found = _search(q, depth_cap, max_facts)
        if found is not None:
            facts, idx = found
            return DependencyCertificate(side, tuple(facts), facts[idx].pair, idx)
    return None


def check_certificate(p: PatternMatrix, cert: DependencyCertificate) -> bool:
    """Independent re-verification of every fact the contradiction uses."""
    q = p if cert.side == "ROWS" else p.transpose()
    for i in cert.used_facts():
        f = cert.facts[i]
        if f.source[0] == "pivot":
            if not verify_fact(q, f):
                return False
        else:
            a, b = cert.facts[f.source[1]], cert.facts[f.source[2]]
            if not (a.pair[0] in b.pair or a.pair[1] in b.pair):
                return False
            if set(f.pair) != set(a.pair) ^ set(b.pair):
                return False
            if not set(f.cols) <= set(a.cols) & set(b.cols):
                return False
    return _contradicts(q.rows, cert.facts[cert.fact_index]) and cert.facts[cert.fact_index].pair == cert.contradiction


# the fifteen-vertex example ------------------------------------------------------


RT5 = np.array([
    [0, 1, 1, 0, 0],
    [0, 0, 1, 1, 0],
    [0, 0, 0, 1, 1],
    [1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0],
])


def m15_pattern() -> PatternMatrix:
    """Block matrix with RT5 on the diagonal, J5 cyclically above, zeros elsewhere."""
    j, o = np.ones((5, 5), int), np.zeros((5, 5), int)
    return block_pattern([[RT5, j, o], [o, RT5, j], [j, o, RT5]])


def m15_tournament():
    """Three copies of the rotational 5-tournament {1, 2} over a 3-cycle."""
    r5 = rotational_from(5, {1, 2})
    return compose(three_cycle(), [r5, r5, r5])
