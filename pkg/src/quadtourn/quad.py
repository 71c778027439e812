"""Quadrangularity, strong quadrangularity, domination and related checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from quadtourn import _strong
from quadtourn.pattern import PatternMatrix
from quadtourn.tournament import RotationalSymbol, Tournament, VertexSet, rotational

DEFAULT_STRONG_CAP = 24

Side = Literal["OUT", "IN"]


class CapExceeded(ValueError):
    """Input larger than a configured search cap."""


class HypothesisError(ValueError):
    """A characterization was applied to a tournament lacking its hypothesis."""


@dataclass(frozen=True)
class QuadReport:
    out_quadrangular: bool
    in_quadrangular: bool
    # (u, v, w): u < v share exactly the vertex w
    out_witness: Optional[tuple[int, int, int]] = None
    in_witness: Optional[tuple[int, int, int]] = None

    @property
    def quadrangular(self) -> bool:
        return self.out_quadrangular and self.in_quadrangular


@dataclass(frozen=True)
class StrongQuadWitness:
    side: Side
    set_S: VertexSet
    union_size: int


@dataclass(frozen=True)
class DominationResult:
    gamma: int
    witness: VertexSet


@dataclass(frozen=True)
class RotationalCriterion:
    holds: bool
    # m -> every ordered pair (i, j) of symbol elements with i - j = m (mod n)
    subsets: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    def table(self) -> dict[int, list[tuple[int, int]]]:
        """First two pairs per difference, or fewer where the criterion fails."""
        return {m: pairs[:2] for m, pairs in self.subsets.items()}


def _single_shared(rows: tuple[int, ...]) -> Optional[tuple[int, int, int]]:
    n = len(rows)
    for u in range(n):
        ru = rows[u]
        for v in range(u + 1, n):
            common = ru & rows[v]
            if common and not common & (common - 1):
                return u, v, common.bit_length() - 1
    return None


def out_quadrangular(t: Tournament) -> bool:
    return _single_shared(t.rows) is None


def in_quadrangular(t: Tournament) -> bool:
    return _single_shared(t.in_rows) is None


def quadrangularity(t: Tournament) -> QuadReport:
    ow = _single_shared(t.rows)
    iw = _single_shared(t.in_rows)
    return QuadReport(ow is None, iw is None, ow, iw)


def is_quadrangular(t: Tournament) -> bool:
    return out_quadrangular(t) and in_quadrangular(t)


# strong quadrangularity --------------------------------------------------


def shared_union(t: Tournament, s: VertexSet | set[int], side: Side = "OUT") -> VertexSet:
    """Union over distinct ``u, v`` in ``s`` of O(u)&O(v) (or I(u)&I(v))."""
    members = list(s)
    nbr = t.rows if side == "OUT" else t.in_rows
    union = 0
    for u, v in itertools.combinations(members, 2):
        union |= nbr[u] & nbr[v]
    return VertexSet(union, t.n)


def qualifies(t: Tournament, s: VertexSet | set[int], side: Side = "OUT") -> bool:
    """Each member of ``s`` shares an out- (in-) neighbour with another member."""
    members = list(s)
    nbr = t.rows if side == "OUT" else t.in_rows
    return bool(members) and all(
        any(v != u and nbr[u] & nbr[v] for v in members) for u in members
    )


def is_strongly_quadrangular(t: Tournament, cap: int = DEFAULT_STRONG_CAP) -> Optional[StrongQuadWitness]:
    """``None`` when strongly quadrangular, else a minimum-size violating set.

    Among violations of minimum size the out side wins, then the
    lexicographically least set.
    """
    if t.n > cap:
        raise CapExceeded(f"strong quadrangularity scan capped at n={cap}, got n={t.n}")
    out_rows = np.array(t.rows, dtype=np.uint64)
    in_rows = np.array(t.in_rows, dtype=np.uint64)
    side, mask = _strong.min_violation(out_rows, in_rows, t.n)
    if side < 0:
        return None
    s = VertexSet(int(mask), t.n)
    sd: Side = "OUT" if side == 0 else "IN"
    return StrongQuadWitness(sd, s, len(shared_union(t, s, sd)))


# domination ----------------------------------------------------------------


def dominates(t: Tournament, s) -> bool:
    covered = 0
    for v in s:
        covered |= t.rows[v] | 1 << v
    return covered == t.full_mask


def _greedy_dominating(t: Tournament) -> list[int]:
    covered, chosen = 0, []
    while covered != t.full_mask:
        v = max(range(t.n), key=lambda u: ((t.rows[u] | 1 << u) & ~covered).bit_count())
        chosen.append(v)
        covered |= t.rows[v] | 1 << v
    return chosen


def domination_number(t: Tournament) -> DominationResult:
    """Exact domination number by increasing-size search below a greedy bound."""
    greedy = _greedy_dominating(t)
    closed = [r | 1 << v for v, r in enumerate(t.rows)]
    full = t.full_mask
    for k in range(1, len(greedy)):
        for combo in itertools.combinations(range(t.n), k):
            covered = 0
            for v in combo:
                covered |= closed[v]
            if covered == full:
                return DominationResult(k, VertexSet.of(combo, t.n))
    return DominationResult(len(greedy), VertexSet.of(greedy, t.n))


def gamma(t: Tournament) -> int:
    return domination_number(t).gamma


def gamma_exceeds_two(t: Tournament) -> bool:
    """``gamma(t) > 2`` without the full search."""
    closed = [r | 1 << v for v, r in enumerate(t.rows)]
    full = t.full_mask
    if any(c == full for c in closed):
        return False
    return not any((a | b) == full for a, b in itertools.combinations(closed, 2))


# rotational criterion ------------------------------------------------------


def rotational_quadrangular(sym: RotationalSymbol) -> RotationalCriterion:
    """Difference criterion for rotational tournaments on n >= 5 vertices."""
    n = sym.modulus
    if n < 5:
        raise ValueError(f"criterion needs n >= 5, got {n}")
    elems = sorted(sym.residues)
    subsets: dict[int, list[tuple[int, int]]] = {}
    for m in range(1, (n - 1) // 2 + 1):
        subsets[m] = sorted(
            ((i, j) for i in elems for j in elems if i != j and (i - j) % n == m),
            key=lambda p: (p[1], p[0]),
        )
    holds = all(len(p) >= 2 for p in subsets.values())
    return RotationalCriterion(holds, subsets)


# patterns ------------------------------------------------------------------


def pattern_combinatorially_orthogonal(p: PatternMatrix) -> tuple[bool, Optional[tuple[str, int, int]]]:
    """True iff no two rows and no two columns share support in exactly one place.

    On failure the witness is ``("row" | "col", i, j)``, rows checked first.
    """
    if not isinstance(p, PatternMatrix):
        p = PatternMatrix.from_array(p)
    for kind, lines in (("row", p.rows), ("col", p.cols)):
        w = _single_shared(lines)
        if w is not None:
            return False, (kind, w[0], w[1])
    return True, None


# characterizations ---------------------------------------------------------


def _out_degree_one_arc(t: Tournament) -> tuple[int, int]:
    for x in range(t.n):
        if t.out_degree(x) == 1:
            return x, t.rows[x].bit_length() - 1
    raise HypothesisError("no vertex of out-degree 1")


def check_tourn7(t: Tournament) -> bool:
    """Out-degree-1 characterization: n >= 4 and x -> y with d+(x) = 1."""
    if t.n < 4:
        raise HypothesisError("needs at least 4 vertices")
    x, y = _out_degree_one_arc(t)
    rest = t.full_mask & ~(1 << x | 1 << y)
    if t.rows[y] != rest:
        return False
    core = t.remove(x, y)
    return gamma_exceeds_two(core) and gamma_exceeds_two(core.dual())


def check_tourn2(t: Tournament) -> bool:
    """Transmitter-and-receiver characterization (n >= 3)."""
    if t.n < 3 or not t.transmitters() or not t.receivers():
        raise HypothesisError("needs n >= 3 with a transmitter and a receiver")
    core = t.remove(t.transmitters()[0], t.receivers()[0])
    return gamma_exceeds_two(core) and gamma_exceeds_two(core.dual())


def check_tourn3(t: Tournament) -> bool:
    """Transmitter-without-receiver characterization."""
    if not t.transmitters() or t.receivers():
        raise HypothesisError("needs a transmitter and no receiver")
    core = t.remove(t.transmitters()[0])
    return gamma_exceeds_two(core) and out_quadrangular(core) and core.min_out_degree >= 2


def check_tourn4(t: Tournament) -> bool:
    """Receiver-without-transmitter characterization (dual of tourn3)."""
    if not t.receivers() or t.transmitters():
        raise HypothesisError("needs a receiver and no transmitter")
    core = t.remove(t.receivers()[0])
    return gamma_exceeds_two(core.dual()) and in_quadrangular(core) and core.min_in_degree >= 2


def applicable_checks(t: Tournament) -> dict[str, bool]:
    """Run every characterization whose hypothesis ``t`` meets."""
    out = {}
    for name, fn in (("tourn7", check_tourn7), ("tourn2", check_tourn2),
                     ("tourn3", check_tourn3), ("tourn4", check_tourn4)):
        try:
            out[name] = fn(t)
        except HypothesisError:
            pass
    return out


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str


def structural_lemma_audit(t: Tournament) -> list[Violation]:
    """Re-check necessary structure that quadrangular tournaments must have.

    An empty list is the expected outcome for every input; any entry means a
    counterexample to one of the imported structural results.
    """
    found = []
    rep = quadrangularity(t)
    if rep.out_quadrangular:
        for v in range(t.n):
            if t.rows[v]:
                sub = t.induced(t.out_set(v))
                if 1 in sub.out_degrees():
                    found.append(Violation("odeg23", f"T[O({v})] has an out-degree-1 vertex"))
        if t.min_out_degree >= 2 and t.min_out_degree < 4:
            found.append(Violation("tourn8", f"min out-degree {t.min_out_degree}"))
    if rep.in_quadrangular:
        for v in range(t.n):
            if t.in_rows[v]:
                sub = t.induced(t.in_set(v))
                if 1 in sub.in_degrees():
                    found.append(Violation("ideg23", f"T[I({v})] has an in-degree-1 vertex"))
    if rep.quadrangular and t.min_out_degree >= 2 and t.min_in_degree >= 2:
        if t.min_out_degree < 4 or t.min_in_degree < 4:
            found.append(Violation("tourn8b", "min degrees below 4"))
    if t.n >= 4 and not any(
        t.rows[a] & t.rows[b] for a, b in itertools.combinations(range(t.n), 2)
    ):
        found.append(Violation("comp", "no pair with a common out-neighbour"))
    return found


# convenience -----------------------------------------------------------------


def qr7_with_xy() -> Tournament:
    """QR7 on 0..6 plus x = 7, y = 8 with x -> y and y => QR7 => x."""
    from quadtourn.tournament import out_degree_one_extension, qr_tournament

    return out_degree_one_extension(qr_tournament(7))


def rotational_check(n: int, residues) -> tuple[RotationalCriterion, QuadReport]:
    sym = RotationalSymbol(n, frozenset(residues))
    return rotational_quadrangular(sym), quadrangularity(rotational(sym))
