"""Square (0,1) support patterns and the ``.pat`` text format."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from quadtourn.tournament import Tournament


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class PatternMatrix:
    """Support pattern; bit ``j`` of ``rows[i]`` set means entry (i, j) must be nonzero."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise PatternError("pattern must be square with n >= 1")
        for i, r in enumerate(self.rows):
            if r < 0 or r >> self.n:
                raise PatternError(f"row {i} has entries outside {self.n} columns")

    @classmethod
    def from_array(cls, a) -> PatternMatrix:
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PatternError(f"pattern must be square, got shape {a.shape}")
        n = a.shape[0]
        return cls(n, tuple(sum(1 << j for j in range(n) if a[i, j] != 0) for i in range(n)))

    @classmethod
    def of_matrix(cls, m, tol: float = 0.0) -> PatternMatrix:
        """Pattern of a real matrix: entries with ``|x| > tol`` count as nonzero."""
        return cls.from_array(np.abs(np.asarray(m)) > tol)

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for i, r in enumerate(self.rows):
            for j in range(self.n):
                if r >> j & 1:
                    a[i, j] = 1
        return a

    @cached_property
    def cols(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << i for i in range(self.n) if self.rows[i] >> j & 1) for j in range(self.n)
        )

    def transpose(self) -> PatternMatrix:
        return PatternMatrix(self.n, self.cols)

    def zero_lines(self) -> tuple[list[int], list[int]]:
        """Indices of all-zero rows and all-zero columns."""
        return [i for i, r in enumerate(self.rows) if r == 0], [j for j, c in enumerate(self.cols) if c == 0]

    def has_zero_line(self) -> bool:
        zr, zc = self.zero_lines()
        return bool(zr or zc)

    def nonzeros(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def to_pat(self) -> str:
        return "".join(
            [f"{self.n}\n"]
            + ["".join("1" if r >> j & 1 else "0" for j in range(self.n)) + "\n" for r in self.rows]
        )


def pattern_of(t: Tournament) -> PatternMatrix:
    """Adjacency matrix of ``t`` as a pattern."""
    return PatternMatrix(t.n, t.rows)


def block_pattern(blocks) -> PatternMatrix:
    """Assemble a pattern from a square grid of equally sized 0/1 blocks."""
    return PatternMatrix.from_array(np.block([[np.asarray(b) for b in row] for row in blocks]))


def parse_pat(text: str) -> PatternMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise PatternError("line 1: empty input")
    if not lines[0].isdigit():
        raise PatternError(f"line 1, column 1: dimension must be a decimal integer, got {lines[0]!r}")
    n = int(lines[0])
    if n < 1:
        raise PatternError("line 1: dimension must be >= 1")
    if len(lines) != n + 1:
        raise PatternError(f"line {min(len(lines), n + 1) + 1}: expected {n} pattern rows, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        for col, ch in enumerate(line, start=1):
            if ch not in "01":
                raise PatternError(f"line {i}, column {col}: invalid character {ch!r}")
        if len(line) != n:
            raise PatternError(f"line {i}: expected {n} characters, got {len(line)}")
        rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
    return PatternMatrix(n, tuple(rows))


def read_pat(path) -> PatternMatrix:
    with open(path) as fh:
        return parse_pat(fh.read())


def write_pat(p: PatternMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(p.to_pat())
