"""Isomorph-free generation of tournaments and the small-order sweeps built on it.

Classes of order ``n`` are produced from those of order ``n - 1`` by adding
a vertex in all ``2**(n-1)`` ways, canonicalising each candidate and
deduplicating the packed canonical keys.  Correctness is certified by the
orbit-counting identity ``sum(n! / |Aut|) == 2**(n(n-1)/2)``.
"""

from __future__ import annotations

import itertools
import math
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Optional

import numpy as np

from quadtourn import _batch, _canon
from quadtourn.quad import (
    CapExceeded,
    domination_number,
    is_strongly_quadrangular,
)
from quadtourn.tournament import Tournament, qr_tournament, three_cycle

MAX_ORDER = 10
LONG_ORDER = 10
CHUNK_CANDIDATES = 1 << 21
SHARDS = 16


class LongRunRequired(CapExceeded):
    """Order 10 sweeps need an explicit opt-in."""


@dataclass(frozen=True)
class ClassTable:
    n: int
    keys: np.ndarray  # sorted packed canonical keys (int64)
    aut: np.ndarray  # |Aut| per class

    def __len__(self) -> int:
        return int(self.keys.shape[0])

    def labeled_count(self) -> int:
        f = math.factorial(self.n)
        return sum(f // int(a) for a in self.aut)

    def tournament(self, i: int) -> Tournament:
        return key_to_tournament(int(self.keys[i]), self.n)


@dataclass(frozen=True)
class EnumerationSummary:
    n: int
    class_count: int
    labeled_check: int
    filter_name: str
    filter_count: int
    elapsed: float

    @property
    def labeled_check_ok(self) -> bool:
        return self.labeled_check == 2 ** (self.n * (self.n - 1) // 2)


def key_to_tournament(key: int, n: int) -> Tournament:
    rows = _canon.unpack_key(np.int64(key), n)
    return Tournament(n, tuple(int(r) for r in rows))


def tournament_key(t: Tournament) -> int:
    """Packed canonical key (orders up to 11)."""
    if t.n > 11:
        raise ValueError("packed keys only exist for n <= 11")
    _, best, _ = t._canon
    return int(_canon.pack_key(best, t.n))


def _check_order(n: int, long_run: bool) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise CapExceeded(f"enumeration supports 1 <= n <= {MAX_ORDER}, got {n}")
    if n >= LONG_ORDER and not long_run:
        raise LongRunRequired(f"order {n} enumeration is a long run; pass long_run=True")


def _extend_chunk(parents: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    size = parents.shape[0] << m
    keys = np.empty(size, np.int64)
    aut = np.empty(size, np.int64)
    _canon.extend_and_canonicalize(parents, m, keys, aut)
    keys, idx = np.unique(keys, return_index=True)
    return keys, aut[idx]


def _merge(parts: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    keys = np.concatenate([p[0] for p in parts])
    aut = np.concatenate([p[1] for p in parts])
    keys, idx = np.unique(keys, return_index=True)
    return keys, aut[idx]


def extend_level(parent: ClassTable, threads: int = 1,
                 workdir: Optional[os.PathLike] = None) -> ClassTable:
    """Generate order ``parent.n + 1`` from the classes of order ``parent.n``.

    With ``workdir`` every chunk's deduplicated keys are written as sharded
    ``.npz`` files, so an interrupted run resumes by skipping finished chunks
    and the final merge holds one shard at a time.
    """
    m = parent.n
    per_chunk = max(1, CHUNK_CANDIDATES >> m)
    chunks = [parent.keys[i:i + per_chunk] for i in range(0, len(parent), per_chunk)]

    if workdir is None:
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            parts = list(pool.map(lambda c: _extend_chunk(c, m), chunks))
        keys, aut = _merge(parts)
        return ClassTable(m + 1, keys, aut)

    wd = Path(workdir)
    wd.mkdir(parents=True, exist_ok=True)

    def run(i_chunk):
        i, chunk = i_chunk
        done = wd / f"chunk{i:06d}.done"
        if done.exists():
            return
        keys, aut = _extend_chunk(chunk, m)
        shard = keys % SHARDS
        for s in range(SHARDS):
            sel = shard == s
            np.savez(wd / f"chunk{i:06d}_s{s:02d}.npz", keys=keys[sel], aut=aut[sel])
        done.touch()

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        list(pool.map(run, enumerate(chunks)))
    key_parts, aut_parts = [], []
    for s in range(SHARDS):
        parts = []
        for i in range(len(chunks)):
            with np.load(wd / f"chunk{i:06d}_s{s:02d}.npz") as z:
                parts.append((z["keys"], z["aut"]))
        k, a = _merge(parts)
        key_parts.append(k)
        aut_parts.append(a)
    keys = np.concatenate(key_parts)
    aut = np.concatenate(aut_parts)
    order = np.argsort(keys)
    return ClassTable(m + 1, keys[order], aut[order])


@lru_cache(maxsize=None)
def _cached_table(n: int) -> ClassTable:
    if n == 1:
        return ClassTable(1, np.zeros(1, np.int64), np.ones(1, np.int64))
    return extend_level(_cached_table(n - 1))


def class_table(n: int, long_run: bool = False, threads: int = 1,
                workdir: Optional[os.PathLike] = None) -> ClassTable:
    """All isomorphism classes of order ``n`` as packed canonical keys."""
    _check_order(n, long_run)
    if n < LONG_ORDER:
        return _cached_table(n)
    return _long_table(n, threads, workdir)


_long_cache: dict[int, ClassTable] = {}


def _long_table(n: int, threads: int, workdir) -> ClassTable:
    if n not in _long_cache:
        parent = _cached_table(n - 1)
        if workdir is None:
            with tempfile.TemporaryDirectory(prefix=f"quadtourn{n}_") as tmp:
                _long_cache[n] = extend_level(parent, threads, tmp)
        else:
            _long_cache[n] = extend_level(parent, threads, workdir)
    return _long_cache[n]


def iter_classes(n: int, long_run: bool = False) -> Iterator[Tournament]:
    table = class_table(n, long_run)
    for key in table.keys:
        yield key_to_tournament(int(key), n)


def enumerate_classes(n: int, visitor: Optional[Callable[[Tournament], object]] = None,
                      long_run: bool = False, name: Optional[str] = None) -> EnumerationSummary:
    """Visit one representative per isomorphism class of order ``n``.

    ``filter_count`` counts representatives for which ``visitor`` returned a
    truthy value.
    """
    start = time.perf_counter()
    table = class_table(n, long_run)
    passed = 0
    if visitor is not None:
        for key in table.keys:
            if visitor(key_to_tournament(int(key), n)):
                passed += 1
    return EnumerationSummary(
        n=n,
        class_count=len(table),
        labeled_check=table.labeled_count(),
        filter_name=(name or getattr(visitor, "__name__", "visitor")) if visitor else "none",
        filter_count=passed,
        elapsed=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class ClassStats:
    outq: np.ndarray
    inq: np.ndarray
    min_out: np.ndarray
    min_in: np.ndarray
    gamma_le2: np.ndarray
    dual_gamma_le2: np.ndarray

    @property
    def quadrangular(self) -> np.ndarray:
        return self.outq & self.inq


_stats_cache: dict[int, ClassStats] = {}


def class_stats(n: int, long_run: bool = False) -> ClassStats:
    if n not in _stats_cache:
        keys = class_table(n, long_run).keys
        size = keys.shape[0]
        arrays = [np.empty(size, np.bool_), np.empty(size, np.bool_),
                  np.empty(size, np.int64), np.empty(size, np.int64),
                  np.empty(size, np.bool_), np.empty(size, np.bool_)]
        _batch.class_stats(keys, n, *arrays)
        _stats_cache[n] = ClassStats(*arrays)
    return _stats_cache[n]


def count_quadrangular(n: int, long_run: bool = False) -> tuple[int, int, list[Tournament]]:
    table = class_table(n, long_run)
    flags = class_stats(n, long_run).quadrangular
    reps = [key_to_tournament(int(k), n) for k in table.keys[flags]]
    return len(table), len(reps), reps


def order2_exceptions() -> list[Tournament]:
    """8-vertex classes with gamma(T) > 2 and gamma(dual T) > 2."""
    table = class_table(8)
    st = class_stats(8)
    bad = ~st.gamma_le2 & ~st.dual_gamma_le2
    return [key_to_tournament(int(k), 8) for k in table.keys[bad]]


def verify_order2() -> bool:
    return not order2_exceptions()


def order3_exceptions() -> tuple[list[Tournament], list[Tournament]]:
    """9-vertex classes violating the out statement, and the in statement."""
    table = class_table(9)
    st = class_stats(9)
    out_bad = (st.min_out >= 2) & st.outq
    in_bad = (st.min_in >= 2) & st.inq
    return ([key_to_tournament(int(k), 9) for k in table.keys[out_bad]],
            [key_to_tournament(int(k), 9) for k in table.keys[in_bad]])


def verify_order3() -> bool:
    out_bad, in_bad = order3_exceptions()
    return not out_bad and not in_bad


def gamma3_classes() -> list[Tournament]:
    table = class_table(7)
    return [key_to_tournament(int(k), 7) for k, g2 in zip(table.keys, class_stats(7).gamma_le2) if not g2]


def verify_unique_gamma3() -> bool:
    found = gamma3_classes()
    return (len(found) == 1
            and domination_number(found[0]).gamma == 3
            and found[0].is_isomorphic(qr_tournament(7)))


@dataclass(frozen=True)
class Elimination:
    tournament: Tournament
    reason: str  # "zero-line", "strong-quad", "survivor"
    detail: str


def final_theorem_report(n: int, long_run: bool = False) -> list[Elimination]:
    """Classify every quadrangular class of order ``n``."""
    _, _, reps = count_quadrangular(n, long_run)
    out = []
    c3 = three_cycle()
    for t in reps:
        if t.min_out_degree == 0:
            out.append(Elimination(t, "zero-line", f"row of zeros at vertex {t.receivers()[0]}"))
        elif t.min_in_degree == 0:
            out.append(Elimination(t, "zero-line", f"column of zeros at vertex {t.transmitters()[0]}"))
        else:
            w = is_strongly_quadrangular(t)
            if w is not None:
                out.append(Elimination(t, "strong-quad",
                                       f"{w.side} set {w.set_S.to_list()} union size {w.union_size}"))
            elif t.is_isomorphic(c3):
                out.append(Elimination(t, "survivor", "3-cycle: permutation pattern"))
            else:
                out.append(Elimination(t, "survivor", "not eliminated"))
    return out


def verify_final_theorem(n_max: int = 9, long_run: bool = False) -> bool:
    """Every quadrangular class with n <= n_max other than the 3-cycle is eliminated."""
    c3 = three_cycle()
    for n in range(1, n_max + 1):
        for e in final_theorem_report(n, long_run):
            if e.reason == "survivor" and not e.tournament.is_isomorphic(c3):
                return False
    return True


def write_census(n: int, path, long_run: bool = False, only_quadrangular: bool = False) -> int:
    """Stream ``.trn`` line pairs, one per class representative."""
    table = class_table(n, long_run)
    keys = table.keys
    if only_quadrangular:
        keys = keys[class_stats(n, long_run).quadrangular]
    with open(path, "w") as fh:
        for k in keys:
            fh.write(key_to_tournament(int(k), n).to_trn())
    return int(keys.shape[0])


def dual_key_set(n: int) -> set[int]:
    return {tournament_key(key_to_tournament(int(k), n).dual()) for k in class_table(n).keys}


def brute_force_class_count(n: int) -> int:
    """Count classes by sweeping labelled tournaments and marking whole orbits.

    Uses plain permutations only, so it is independent of the canonical
    labelling code.
    """
    m = n * (n - 1) // 2
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {p: t for t, p in enumerate(pairs)}
    seen = bytearray(1 << m)
    classes = 0
    for code in range(1 << m):
        if seen[code]:
            continue
        classes += 1
        beats = {}
        for t, (i, j) in enumerate(pairs):
            bit = code >> (m - 1 - t) & 1
            beats[i, j], beats[j, i] = bool(bit), not bit
        for perm in itertools.permutations(range(n)):
            img = 0
            for (i, j) in pairs:
                a, b = perm[i], perm[j]
                if a < b:
                    on = beats[i, j]
                else:
                    a, b, on = b, a, beats[j, i]
                if on:
                    img |= 1 << (m - 1 - index[a, b])
            seen[img] = 1
    return classes
