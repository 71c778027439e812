"""Bit-packed tournaments and the constructions used throughout the package."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from quadtourn import _canon

MAX_VERTICES = 64


class TournamentError(ValueError):
    """Invalid tournament data or an operation outside its preconditions."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``{0, ..., n-1}`` stored as a bitmask."""

    members: int
    n: int

    def __post_init__(self):
        if self.members < 0 or self.members >> self.n:
            raise TournamentError(f"vertex set {self.members:#x} not inside range({self.n})")

    @classmethod
    def of(cls, vertices: Iterable[int], n: int) -> VertexSet:
        mask = 0
        for v in vertices:
            if not 0 <= v < n:
                raise TournamentError(f"vertex {v} out of range for n={n}")
            mask |= 1 << v
        return cls(mask, n)

    def __iter__(self) -> Iterator[int]:
        return _bits(self.members)

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.members >> v & 1)

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.members & other.members, self.n)

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.members | other.members, self.n)

    def to_list(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()}, n={self.n})"


@dataclass(frozen=True)
class RotationalSymbol:
    """Symbol of a rotational tournament on ``Z_modulus``."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        n = self.modulus
        object.__setattr__(self, "residues", frozenset(self.residues))
        if n < 3 or n % 2 == 0:
            raise TournamentError(f"modulus must be odd and >= 3, got {n}")
        if any(not 1 <= s < n for s in self.residues):
            raise TournamentError(f"residues must lie in [1, {n - 1}]")
        for d in range(1, (n - 1) // 2 + 1):
            if (d in self.residues) == (n - d in self.residues):
                raise TournamentError(f"exactly one of {d}, {n - d} must be in the symbol")

    @property
    def k(self) -> int:
        return (self.modulus - 1) // 2

    @classmethod
    def all_symbols(cls, n: int) -> Iterator[RotationalSymbol]:
        """All ``2**k`` valid symbols for modulus ``n``."""
        k = (n - 1) // 2
        for choice in itertools.product((0, 1), repeat=k):
            yield cls(n, frozenset(d if c else n - d for d, c in zip(range(1, k + 1), choice)))


@dataclass(frozen=True)
class Tournament:
    """Tournament on vertices ``0..n-1``; ``rows[u]`` has bit ``v`` set iff u -> v."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= MAX_VERTICES:
            raise TournamentError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        if len(self.rows) != n:
            raise TournamentError("one adjacency row per vertex required")
        full = (1 << n) - 1
        for u, r in enumerate(self.rows):
            if r < 0 or r & ~full:
                raise TournamentError(f"row {u} has bits outside range({n})")
            if r >> u & 1:
                raise TournamentError(f"self-arc at vertex {u}")
        for u in range(n):
            for v in range(u + 1, n):
                if (self.rows[u] >> v & 1) == (self.rows[v] >> u & 1):
                    raise TournamentError(f"pair ({u}, {v}) must carry exactly one arc")

    # construction -------------------------------------------------------

    @classmethod
    def from_arc_bits(cls, n: int, upper_bits: Sequence[int] | str) -> Tournament:
        """Decode the upper-triangular row-major arc string (1 means i -> j, i < j)."""
        if not 1 <= n <= MAX_VERTICES:
            raise TournamentError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        bits = [int(b) for b in upper_bits]
        if len(bits) != n * (n - 1) // 2:
            raise TournamentError(f"expected {n * (n - 1) // 2} arc bits for n={n}, got {len(bits)}")
        rows = [0] * n
        t = 0
        for i in range(n):
            for j in range(i + 1, n):
                if bits[t] == 1:
                    rows[i] |= 1 << j
                elif bits[t] == 0:
                    rows[j] |= 1 << i
                else:
                    raise TournamentError(f"arc bit {t} is not 0/1")
                t += 1
        return cls(n, tuple(rows))

    @classmethod
    def from_relation(cls, n: int, beats) -> Tournament:
        """Build from a predicate ``beats(u, v)`` consulted for ``u < v``."""
        rows = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if beats(u, v):
                    rows[u] |= 1 << v
                else:
                    rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, matrix) -> Tournament:
        a = np.asarray(matrix)
        n = a.shape[0]
        rows = tuple(sum(1 << j for j in range(n) if a[i, j]) for i in range(n))
        return cls(n, rows)

    def arc_bits(self) -> str:
        return "".join(
            "1" if self.rows[i] >> j & 1 else "0"
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, r in enumerate(self.rows):
            for v in _bits(r):
                a[u, v] = 1
        return a

    # queries ------------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise TournamentError(f"vertex {v} out of range for n={self.n}")

    def beats(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    @cached_property
    def in_rows(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for u, r in enumerate(self.rows):
            for v in _bits(r):
                cols[v] |= 1 << u
        return tuple(cols)

    def out_set(self, v: int) -> VertexSet:
        self._check_vertex(v)
        return VertexSet(self.rows[v], self.n)

    def in_set(self, v: int) -> VertexSet:
        self._check_vertex(v)
        return VertexSet(self.in_rows[v], self.n)

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.rows[v].bit_count()

    def in_degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.n - 1 - self.rows[v].bit_count()

    def out_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def in_degrees(self) -> list[int]:
        return [self.n - 1 - r.bit_count() for r in self.rows]

    @property
    def min_out_degree(self) -> int:
        return min(self.out_degrees())

    @property
    def max_out_degree(self) -> int:
        return max(self.out_degrees())

    @property
    def min_in_degree(self) -> int:
        return min(self.in_degrees())

    @property
    def max_in_degree(self) -> int:
        return max(self.in_degrees())

    def transmitters(self) -> list[int]:
        return [v for v, d in enumerate(self.out_degrees()) if d == self.n - 1]

    def receivers(self) -> list[int]:
        return [v for v, d in enumerate(self.out_degrees()) if d == 0]

    def is_regular(self) -> bool:
        return len(set(self.out_degrees())) == 1

    def is_near_regular(self) -> bool:
        return self.max_out_degree - self.min_out_degree <= 1

    def is_strong(self) -> bool:
        """Strong connectivity via forward/backward reachability from vertex 0."""
        for rows in (self.rows, self.in_rows):
            seen, frontier = 1, 1
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= rows[v]
                frontier = nxt & ~seen
                seen |= nxt
            if seen != self.full_mask:
                return False
        return True

    # derived tournaments -----------------------------------------------

    def dual(self) -> Tournament:
        return Tournament(self.n, self.in_rows)

    def relabel(self, perm: Sequence[int]) -> Tournament:
        """Tournament in which old vertex ``perm[i]`` becomes vertex ``i``."""
        if sorted(perm) != list(range(self.n)):
            raise TournamentError("relabelling must be a permutation of the vertices")
        pos = {v: i for i, v in enumerate(perm)}
        rows = tuple(sum(1 << pos[w] for w in _bits(self.rows[v])) for v in perm)
        return Tournament(self.n, rows)

    def induced(self, w: VertexSet | Iterable[int]) -> Tournament:
        verts = sorted(w.to_list() if isinstance(w, VertexSet) else set(w))
        if not verts:
            raise TournamentError("induced subtournament needs a nonempty vertex set")
        for v in verts:
            self._check_vertex(v)
        pos = {v: i for i, v in enumerate(verts)}
        rows = tuple(
            sum(1 << pos[u] for u in _bits(self.rows[v]) if u in pos) for v in verts
        )
        return Tournament(len(verts), rows)

    def remove(self, *vertices: int) -> Tournament:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    # isomorphism ---------------------------------------------------------

    def _uint_rows(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint64)

    @cached_property
    def _canon(self):
        perm, best, aut = _canon.canonical_labelling(self._uint_rows(), self.n)
        return perm, best, int(aut)

    def canonical_form(self) -> str:
        """Arc-bit string of the canonical relabelling; equal iff isomorphic."""
        _, best, _ = self._canon
        n = self.n
        return "".join(
            format(int(best[i]), f"0{n - 1 - i}b") if i < n - 1 else ""
            for i in range(n)
        )

    def canonical(self) -> Tournament:
        return self.relabel([int(v) for v in self._canon[0]])

    def automorphism_count(self) -> int:
        return self._canon[2]

    def is_isomorphic(self, other: Tournament) -> bool:
        return self.n == other.n and self.canonical_form() == other.canonical_form()

    # text format ----------------------------------------------------------

    def to_trn(self) -> str:
        return f"{self.n}\n{self.arc_bits()}\n"

    def __repr__(self) -> str:
        return f"Tournament(n={self.n}, bits='{self.arc_bits()}')"


def parse_trn(text: str) -> Tournament:
    """Parse the two-line ``.trn`` format, reporting line/column on errors."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) not in (1, 2):
        raise TournamentError(f"line {min(len(lines), 3)}: expected 2 lines, got {len(lines)}")
    head = lines[0]
    if not head.isdigit():
        raise TournamentError(f"line 1, column 1: vertex count must be a decimal integer, got {head!r}")
    n = int(head)
    if not 1 <= n <= MAX_VERTICES:
        raise TournamentError(f"line 1: vertex count {n} outside [1, {MAX_VERTICES}]")
    body = lines[1] if len(lines) == 2 else ""
    if len(lines) == 1 and n > 1:
        raise TournamentError("line 2: missing arc string")
    for col, ch in enumerate(body, start=1):
        if ch not in "01":
            raise TournamentError(f"line 2, column {col}: invalid character {ch!r}")
    want = n * (n - 1) // 2
    if len(body) != want:
        raise TournamentError(f"line 2: expected {want} characters, got {len(body)}")
    return Tournament.from_arc_bits(n, body)


def read_trn(path) -> Tournament:
    with open(path) as fh:
        return parse_trn(fh.read())


def write_trn(t: Tournament, path) -> None:
    with open(path, "w") as fh:
        fh.write(t.to_trn())


# constructions ---------------------------------------------------------------


def single_vertex() -> Tournament:
    return Tournament(1, (0,))


def single_arc() -> Tournament:
    return Tournament(2, (0b10, 0))


def three_cycle() -> Tournament:
    """0 -> 1 -> 2 -> 0."""
    return Tournament.from_arc_bits(3, "101")


def transitive(n: int) -> Tournament:
    """Transitive tournament with ``i -> j`` for ``i < j``."""
    return Tournament.from_relation(n, lambda u, v: True)


def rotational(sym: RotationalSymbol) -> Tournament:
    n = sym.modulus
    res = sym.residues
    return Tournament.from_relation(n, lambda i, j: (j - i) % n in res)


def rotational_from(n: int, residues: Iterable[int]) -> Tournament:
    return rotational(RotationalSymbol(n, frozenset(residues)))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def quadratic_residues(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, p))


def qr_tournament(p: int) -> Tournament:
    if not is_prime(p) or p % 4 != 3:
        raise TournamentError(f"QR tournaments need a prime p = 3 (mod 4), got {p}")
    return rotational(RotationalSymbol(p, quadratic_residues(p)))


def compose(outer: Tournament, parts: Sequence[Tournament]) -> Tournament:
    """Replace vertex ``i`` of ``outer`` by ``parts[i]``; blocks laid out in order."""
    if len(parts) != outer.n:
        raise TournamentError(f"need {outer.n} parts, got {len(parts)}")
    total = sum(p.n for p in parts)
    if total > MAX_VERTICES:
        raise TournamentError(f"composition has {total} vertices, cap is {MAX_VERTICES}")
    offsets = list(itertools.accumulate((p.n for p in parts), initial=0))
    block_mask = [((1 << p.n) - 1) << off for p, off in zip(parts, offsets)]
    rows = []
    for i, part in enumerate(parts):
        beaten = 0
        for j in _bits(outer.rows[i]):
            beaten |= block_mask[j]
        rows.extend((r << offsets[i]) | beaten for r in part.rows)
    return Tournament(total, tuple(rows))


def add_transmitter(t: Tournament) -> Tournament:
    """Append a new vertex ``n`` beating every vertex of ``t``."""
    if t.n >= MAX_VERTICES:
        raise TournamentError("no room for another vertex")
    return Tournament(t.n + 1, t.rows + (t.full_mask,))


def add_receiver(t: Tournament) -> Tournament:
    """Append a new vertex ``n`` beaten by every vertex of ``t``."""
    if t.n >= MAX_VERTICES:
        raise TournamentError("no room for another vertex")
    return Tournament(t.n + 1, tuple(r | 1 << t.n for r in t.rows) + (0,))


def out_degree_one_extension(t: Tournament) -> Tournament:
    """Append ``x = n`` and ``y = n+1`` with x -> y and y => V(t) => x."""
    if t.n + 2 > MAX_VERTICES:
        raise TournamentError("no room for two more vertices")
    x, y = t.n, t.n + 1
    rows = tuple(r | 1 << x for r in t.rows) + (1 << y, t.full_mask)
    return Tournament(t.n + 2, rows)


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_tournament(n: int, seed: int, stream: int = 0) -> Tournament:
    """Uniform labelled tournament; ``(seed, stream)`` fixes the outcome."""
    if not 1 <= n <= MAX_VERTICES:
        raise TournamentError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
    bits = _rng(seed, stream).integers(0, 2, size=n * (n - 1) // 2)
    return Tournament.from_arc_bits(n, bits.tolist())


def random_permutation(n: int, rng: np.random.Generator) -> list[int]:
    return [int(v) for v in rng.permutation(n)]
