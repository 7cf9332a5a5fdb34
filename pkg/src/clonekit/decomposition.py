"""Cylinder decompositions of row sets and the index families they use."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from clonekit.errors import InputError
from clonekit.galois import QSet, extend_qset, restrict_qset


@dataclass(frozen=True)
class SubsetFamily:
    """A family of subsets of ``Q = 0..m-1``."""

    m: int
    sets: tuple[tuple[int, ...], ...]
    allow_empty: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        canon = set()
        for s in self.sets:
            s = tuple(sorted(set(s)))
            if any(not 0 <= q < self.m for q in s):
                raise InputError(f"{s} is not a subset of 0..{self.m - 1}")
            if not s and not self.allow_empty:
                raise InputError("empty subset in family (its cylinder is the whole cube)")
            canon.add(s)
        object.__setattr__(self, "sets", tuple(sorted(canon, key=lambda s: (len(s), s))))

    @classmethod
    def of(cls, m: int, sets: Iterable[Iterable[int]], allow_empty: bool = False) -> "SubsetFamily":
        return cls(m, tuple(tuple(s) for s in sets), allow_empty)

    @classmethod
    def singletons(cls, m: int) -> "SubsetFamily":
        return cls(m, tuple((q,) for q in range(m)))

    def __len__(self) -> int:
        return len(self.sets)

    def union(self, other: "SubsetFamily") -> "SubsetFamily":
        if other.m != self.m:
            raise InputError("families over different index sets")
        return SubsetFamily(self.m, self.sets + other.sets, self.allow_empty or other.allow_empty)


def _check(H: QSet, fam: SubsetFamily) -> None:
    if fam.m != H.m:
        raise InputError(f"family over {fam.m} positions, set over {H.m}")


def intersection_of_cylinders(H: QSet, fam: SubsetFamily) -> QSet:
    """Rows g of A^Q with ``g|_R`` in ``H|_R`` for every R, by backtracking.

    A set R is tested as soon as its largest position is assigned.
    """
    _check(H, fam)
    if not fam.sets:
        raise InputError("empty family")
    m, k = H.m, H.k
    tests: list[list[tuple[tuple[int, ...], set]]] = [[] for _ in range(m)]
    for R in fam.sets:
        if not R:
            if not H.rows:
                return QSet(k, m, ())
            continue
        allowed = {tuple(h[q] for q in R) for h in H.rows}
        tests[R[-1]].append((R, allowed))
    out = []
    row = [0] * m

    def extend(q: int) -> None:
        if q == m:
            out.append(tuple(row))
            return
        for v in range(k):
            row[q] = v
            if all(tuple(row[p] for p in R) in allowed for R, allowed in tests[q]):
                extend(q + 1)

    extend(0)
    return QSet(k, m, tuple(out))


def decomposition_apply(H: QSet, fam: SubsetFamily) -> tuple[list[QSet], QSet]:
    """The cylinders ``(H|_R)|^Q`` for R in the family and their intersection."""
    _check(H, fam)
    if not fam.sets:
        raise InputError("empty family")
    cylinders = [extend_qset(restrict_qset(H, R), R, H.m) for R in fam.sets]
    return cylinders, intersection_of_cylinders(H, fam)


def is_decomposable(H: QSet, fam: SubsetFamily) -> bool:
    return intersection_of_cylinders(H, fam).rows == H.rows


def _pairs(m: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(m), 2))


def is_permutation_linked(H: QSet, p: int, q: int) -> bool:
    """``h(q) = sigma(h(p))`` on H for some permutation sigma."""
    forward: dict[int, int] = {}
    backward: dict[int, int] = {}
    for h in H.rows:
        a, b = h[p], h[q]
        if forward.setdefault(a, b) != b or backward.setdefault(b, a) != a:
            return False
    return True


def is_identity_linked(H: QSet, p: int, q: int) -> bool:
    return all(h[p] == h[q] for h in H.rows)


def disjunctive_anchor(H: QSet, p: int, q: int) -> tuple[int, int] | None:
    """Least ``(a, b)`` with ``h(p) = a or h(q) = b`` on all of H."""
    for a, b in itertools.product(range(H.k), repeat=2):
        if all(h[p] == a or h[q] == b for h in H.rows):
            return a, b
    return None


@dataclass(frozen=True)
class FamilyReport:
    """The derived index families of a row set.

    ``within`` maps each two-element subset B of the carrier to the positions
    whose column lies inside B.
    """

    permutation_pairs: tuple[tuple[int, int], ...]
    identity_pairs: tuple[tuple[int, int], ...]
    disjunctive_pairs: tuple[tuple[int, int], ...]
    small_columns: tuple[int, ...]
    n: int
    within: dict[tuple[int, int], tuple[int, ...]]


def index_families(H: QSet, n: int, B: Sequence[int] | None = None) -> FamilyReport:
    if n < 1:
        raise InputError("n must be >= 1")
    pairs = _pairs(H.m)
    cols = [H.column(q) for q in range(H.m)]
    if B is None:
        targets = list(itertools.combinations(range(H.k), 2))
    else:
        B = tuple(sorted(set(B)))
        if any(not 0 <= b < H.k for b in B):
            raise InputError(f"{B} is not a subset of the carrier")
        targets = [B]
    within = {b: tuple(q for q in range(H.m) if cols[q] <= set(b)) for b in targets}
    return FamilyReport(
        permutation_pairs=tuple(P for P in pairs if is_permutation_linked(H, *P)),
        identity_pairs=tuple(P for P in pairs if is_identity_linked(H, *P)),
        disjunctive_pairs=tuple(P for P in pairs if disjunctive_anchor(H, *P) is not None),
        small_columns=tuple(q for q in range(H.m) if len(cols[q]) < n),
        n=n,
        within=within,
    )


@dataclass(frozen=True)
class SeparationWitness:
    p: int
    q: int
    a: int
    rows: tuple[int, ...]


def _point_check(H: QSet, p: int, q: int, a: int) -> None:
    if a not in H.column(p):
        raise InputError(f"{a} is not in column {p}")


def weakly_separates(H: QSet, p: int, q: int, a: int) -> SeparationWitness | None:
    """Two rows agreeing on ``a`` at p and differing at q, if any."""
    _point_check(H, p, q, a)
    first: dict[int, int] = {}
    for i, h in enumerate(H.rows):
        if h[p] != a:
            continue
        for b, j in first.items():
            if b != h[q]:
                return SeparationWitness(p, q, a, (j, i))
        first.setdefault(h[q], i)
    return None


def strongly_separates(H: QSet, p: int, q: int, a: int) -> bool:
    _point_check(H, p, q, a)
    seen = {h[q] for h in H.rows if h[p] == a}
    return seen == set(H.column(q))


def strong_witness(H: QSet, p: int, q: int, a: int) -> SeparationWitness | None:
    """Per value b of column q, the first row with ``h(p) = a, h(q) = b``."""
    if not strongly_separates(H, p, q, a):
        return None
    picks = {}
    for i, h in enumerate(H.rows):
        if h[p] == a:
            picks.setdefault(h[q], i)
    return SeparationWitness(p, q, a, tuple(picks[b] for b in sorted(picks)))


def pair_shape(H: QSet, p: int, q: int) -> str | None:
    """Which of the three pair shapes ``H|_{p,q}`` has.

    ``"box"``: the full product of the two columns; ``"permutation"``: the
    graph of a bijection between them; ``"disjunctive"``: the product cut
    down by ``x = a or y = b``.  ``None`` when none fits.
    """
    cp, cq = H.column(p), H.column(q)
    seen = {(h[p], h[q]) for h in H.rows}
    box = {(x, y) for x in cp for y in cq}
    if seen == box:
        return "box"
    if is_permutation_linked(H, p, q):
        return "permutation"
    for a, b in itertools.product(range(H.k), repeat=2):
        if seen == {(x, y) for x, y in box if x == a or y == b}:
            return "disjunctive"
    return None
