"""Richness conditions on clones, rank-2 pair relations, u/v and Klein functions.

Every search runs on slices projected to the cells a condition inspects;
generation acts cellwise, so the projected slice is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from clonekit.clone import DEFAULT_CAP, GeneratorSet, projected_traces
from clonekit.core import (
    Cell,
    FiniteFunction,
    Permutation,
    cells_of_rank,
    majority_value,
    minority_value,
)
from clonekit.errors import InputError
from clonekit.post import D1, D2, L4, O1, PostClassId, in_class, restriction_table

Pair = tuple[int, int]


@dataclass(frozen=True)
class DeltaReport:
    """Outcome of a richness check.

    ``witnesses`` maps each demand to a trace over ``cells[demand]`` that meets
    it, so a positive report can be re-checked against the identities.
    """

    name: str
    holds: bool
    vacuous: bool = False
    witness_index: int | None = None
    counterexample: tuple | None = None
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)
    cells: dict = field(default_factory=dict, compare=False, repr=False)


def _low_cells(n: int, k: int) -> tuple[Cell, ...]:
    return tuple(cells_of_rank(n, k, below=n))


def delta_s(gens: GeneratorSet, n: int, cap: int = DEFAULT_CAP) -> DeltaReport:
    """Some index i such that every value on every rank-n cell is hit by a
    member that equals the i-th projection below rank n."""
    if n < 2:
        raise InputError("n must be >= 2")
    name = f"delta_s_{n}"
    k = gens.k
    if k < n:
        return DeltaReport(name, True, vacuous=True)
    low = _low_cells(n, k)
    top = cells_of_rank(n, k, exactly=n)
    reach: dict[Cell, list[tuple[set[int], dict]]] = {}
    for a in top:
        cells = low + (a,)
        per_index = [({}) for _ in range(n)]
        for t in projected_traces(gens, n, cells, cap):
            for i in range(n):
                if all(t[j] == c[i] for j, c in enumerate(low)):
                    per_index[i].setdefault(t[-1], t)
        reach[a] = per_index
    first_gap = None
    for i in range(n):
        gap = next(((a, v) for a in top for v in sorted(set(a)) if v not in reach[a][i]), None)
        if gap is None:
            witnesses = {(a, v): reach[a][i][v] for a in top for v in sorted(set(a))}
            cells = {(a, v): low + (a,) for a in top for v in sorted(set(a))}
            return DeltaReport(name, True, witness_index=i, witnesses=witnesses, cells=cells)
        if first_gap is None:
            first_gap = (i,) + gap
    return DeltaReport(name, False, counterexample=first_gap)


def delta_s_for_index(gens: GeneratorSet, n: int, j: int, cap: int = DEFAULT_CAP) -> bool:
    """Every rank-n demand is met by a member equal to the j-th projection below rank n."""
    k = gens.k
    low = _low_cells(n, k)
    for a in cells_of_rank(n, k, exactly=n):
        hit = {
            t[-1]
            for t in projected_traces(gens, n, low + (a,), cap)
            if all(t[p] == c[j] for p, c in enumerate(low))
        }
        if not set(a) <= hit:
            return False
    return True


def _d_cells(k: int) -> tuple[Cell, ...]:
    return tuple(cells_of_rank(3, k, below=3))


def delta_partial(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> DeltaReport:
    """Every value on every rank-3 ternary cell is hit by a majority-pattern member."""
    k = gens.k
    if k < 3:
        return DeltaReport("delta_partial", True, vacuous=True)
    low = _d_cells(k)
    pattern = tuple(majority_value(c) for c in low)
    witnesses, cells = {}, {}
    for a in cells_of_rank(3, k, exactly=3):
        hit = {}
        for t in projected_traces(gens, 3, low + (a,), cap):
            if t[:-1] == pattern:
                hit.setdefault(t[-1], t)
        for v in a:
            if v not in hit:
                return DeltaReport("delta_partial", False, counterexample=(a, v))
            witnesses[(a, v)] = hit[v]
            cells[(a, v)] = low + (a,)
    return DeltaReport("delta_partial", True, witnesses=witnesses, cells=cells)


def has_d_function(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> bool:
    low = _d_cells(gens.k)
    pattern = tuple(majority_value(c) for c in low)
    return pattern in set(projected_traces(gens, 3, low, cap))


def has_l_function(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> bool:
    low = _d_cells(gens.k)
    pattern = tuple(minority_value(c) for c in low)
    return pattern in set(projected_traces(gens, 3, low, cap))


def rank2_pairs(k: int) -> list[Pair]:
    return [c for c in itertools.product(range(k), repeat=2) if c[0] != c[1]]


def delta_2(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> DeltaReport:
    """Every pair of choices on two rank-2 cells with different ranges is hit
    by an idempotent binary member."""
    k = gens.k
    if k < 3:
        # every rank-2 pair has the same range
        return DeltaReport("delta_2", True, vacuous=True)
    diag = tuple((x, x) for x in range(k))
    ident = tuple(range(k))
    witnesses, cells = {}, {}
    for a, b in itertools.combinations(rank2_pairs(k), 2):
        if set(a) == set(b):
            continue
        hit = {}
        for t in projected_traces(gens, 2, diag + (a, b), cap):
            if t[:k] == ident:
                hit.setdefault(t[k:], t)
        for va in sorted(set(a)):
            for vb in sorted(set(b)):
                if (va, vb) not in hit:
                    return DeltaReport("delta_2", False, counterexample=(a, b, va, vb))
                witnesses[(a, b, va, vb)] = hit[(va, vb)]
                cells[(a, b, va, vb)] = diag + (a, b)
    return DeltaReport("delta_2", True, witnesses=witnesses, cells=cells)


@dataclass(frozen=True)
class BinaryPairRelation:
    """A set of ordered pairs of rank-2 pairs."""

    k: int
    pairs: frozenset[tuple[Pair, Pair]]

    def __contains__(self, item) -> bool:
        return item in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[Pair, Pair]]:
        return sorted(self.pairs)


def special_relation(kind: str, k: int) -> BinaryPairRelation:
    """``uparrow`` (three elements) or ``pm`` (four elements), from their formulas."""
    if kind == "uparrow":
        if k != 3:
            raise InputError("the uparrow relation is defined for k = 3")

        def rel(x, y):
            (a, b), (c, d) = x, y
            return x == y or (b == c and a != d) or (a == d and b != c)

    elif kind == "pm":
        if k != 4:
            raise InputError("the pm relation is defined for k = 4")

        def rel(x, y):
            return set(x) == set(y) or not set(x) & set(y)

    else:
        raise InputError(f"unknown relation kind {kind!r}")
    pairs = rank2_pairs(k)
    return BinaryPairRelation(k, frozenset((x, y) for x in pairs for y in pairs if rel(x, y)))


def pair_type(x: Sequence[int], y: Sequence[int]) -> str:
    """``"0"`` equal, ``"1"`` swapped, ``"ij"`` sharing ``x[i] = y[j]`` only,
    ``"2"`` disjoint."""
    x, y = tuple(x), tuple(y)
    if len(x) != 2 or len(y) != 2 or x[0] == x[1] or y[0] == y[1]:
        raise InputError("pair types are defined on rank-2 pairs")
    if x == y:
        return "0"
    if x == (y[1], y[0]):
        return "1"
    for i, j in itertools.product((0, 1), repeat=2):
        if x[i] == y[j] and x[1 - i] != y[1 - j]:
            return f"{i}{j}"
    return "2"


def triangle_rel(gens: GeneratorSet, i: int, cap: int = DEFAULT_CAP) -> BinaryPairRelation:
    """Pairs (x, y) such that every binary member taking ``x[i]`` at x takes ``y[i]`` at y."""
    if i not in (0, 1):
        raise InputError("i must be 0 or 1")
    pairs = rank2_pairs(gens.k)
    out = set()
    for x in pairs:
        for y in pairs:
            cells = (x,) if x == y else (x, y)
            traces = projected_traces(gens, 2, cells, cap)
            if x == y or all(t[1] == y[i] for t in traces if t[0] == x[i]):
                out.add((x, y))
    return BinaryPairRelation(gens.k, frozenset(out))


CASE_TYPE_SETS = (
    frozenset({"0", "1", "00", "01", "10", "11", "2"}),
    frozenset({"0"}),
    frozenset({"0", "1"}),
    frozenset({"0", "1", "2"}),
    frozenset({"0", "01", "10"}),
)


def realized_types(rel: BinaryPairRelation) -> frozenset[str]:
    return frozenset(pair_type(x, y) for x, y in rel.pairs)


def triangle_case(rel: BinaryPairRelation) -> int | None:
    """Which of the five type-set cases a relation matches exactly (1-based).

    A case requires the relation to be the full union of its types, and the
    four- and three-element cases also fix the carrier size.
    """
    k = rel.k
    pairs = rank2_pairs(k)
    for idx, types in enumerate(CASE_TYPE_SETS, start=1):
        if idx == 4 and k != 4 or idx == 5 and k != 3:
            continue
        expected = {(x, y) for x in pairs for y in pairs if pair_type(x, y) in types}
        if expected == set(rel.pairs):
            return idx
    return None


def uv_pair(k: int = 3) -> tuple[FiniteFunction, FiniteFunction]:
    """The two binary non-projections of the three-element exceptional clone."""
    if k != 3:
        raise InputError("u and v live on a three-element carrier")
    u = (0, 1, 0, 1, 1, 2, 0, 2, 2)
    v = (0, 0, 2, 0, 1, 1, 2, 1, 2)
    return FiniteFunction(3, 2, u), FiniteFunction(3, 2, v)


def klein_group(k: int = 4) -> list[Permutation]:
    if k != 4:
        raise InputError("the Klein group acts on a four-element carrier")
    return [Permutation(p) for p in ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))]


# the three Klein orbits of two-element subsets, each with a labeling per subset
# chosen so that the group element mapping one subset onto the other carries
# labels to labels
KLEIN_ORBITS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


def _orbit_of(values: frozenset[int]) -> tuple[int, tuple[int, int]]:
    for idx, (b0, b1) in enumerate(KLEIN_ORBITS):
        if values == frozenset(b0):
            return idx, b0
        if values == frozenset(b1):
            return idx, b1
    raise InputError(f"{sorted(values)} is not a two-element subset")


SELF_DUAL_PART = {"O1": O1, "D1": D1, "D2": D2, "L4": L4, "A4": D2, "C4": D1}

_SELF_DUAL_GENERATORS = {
    "O1": (),
    "D2": ((0, 0, 0, 1, 0, 1, 1, 1),),
    "D1": ((0, 1, 1, 1, 0, 0, 0, 1),),
    "L4": ((0, 1, 1, 0, 1, 0, 0, 1),),
}


def _self_dual_generators(P: PostClassId) -> GeneratorSet:
    if not P.is_named:
        raise InputError("Klein functions are defined here for the six named classes only")
    part = SELF_DUAL_PART[P.name]
    return GeneratorSet(2, tuple(FiniteFunction(2, 3, t) for t in _SELF_DUAL_GENERATORS[part.name]))


def _check_klein_cells(cells: Sequence[Cell]) -> int:
    n = None
    for c in cells:
        if n is None:
            n = len(c)
        if len(c) != n or len(set(c)) > 2 or any(not 0 <= v < 4 for v in c):
            raise InputError(f"{c} is not a rank <= 2 cell over four elements")
    return n or 0


def klein_traces(P: PostClassId, cells: Sequence[Cell], cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Values on rank <= 2 cells of all conservative Klein P-functions.

    Equivariance under the group element fixing an orbit while swapping inside
    it forces self-duality, so each orbit independently picks a member of the
    self-dual part of P, read through the orbit's labelings.  Rank-1 cells are
    fixed by conservativity.
    """
    cells = [tuple(c) for c in cells]
    n = _check_klein_cells(cells)
    gens = _self_dual_generators(P)
    fixed: dict[int, int] = {}
    by_orbit: dict[int, list[tuple[int, Cell, tuple[int, int]]]] = {}
    for pos, c in enumerate(cells):
        if len(set(c)) == 1:
            fixed[pos] = c[0]
            continue
        idx, labels = _orbit_of(frozenset(c))
        by_orbit.setdefault(idx, []).append((pos, c, labels))
    parts = []
    for idx in sorted(by_orbit):
        entries = by_orbit[idx]
        boolean_cells = tuple(dict.fromkeys(tuple(labels.index(v) for v in c) for _, c, labels in entries))
        traces = projected_traces(gens, n, boolean_cells, cap)
        where = {bc: i for i, bc in enumerate(boolean_cells)}
        options = []
        for t in traces:
            options.append(
                tuple((pos, labels[t[where[tuple(labels.index(v) for v in c)]]]) for pos, c, labels in entries)
            )
        parts.append(options)
    out = set()
    for combo in itertools.product(*parts):
        row = [0] * len(cells)
        for pos, v in fixed.items():
            row[pos] = v
        for assignment in combo:
            for pos, v in assignment:
                row[pos] = v
        out.add(tuple(row))
    return sorted(out)


def klein_rank2_slice(P: PostClassId, n: int) -> tuple[tuple[Cell, ...], list[tuple[int, ...]]]:
    """Cells of rank <= 2 in ``A^n`` (k = 4) and the Klein P-function traces on them."""
    if not 1 <= n <= 4:
        raise InputError("n must be between 1 and 4")
    cells = tuple(cells_of_rank(n, 4, below=3))
    return cells, klein_traces(P, cells)


def is_klein_P_function(f: FiniteFunction, P: PostClassId) -> bool:
    """Both Klein conditions, checked exhaustively on the table."""
    if f.k != 4:
        raise InputError("Klein functions live on a four-element carrier")
    if not P.is_named:
        raise InputError("Klein functions are defined here for the six named classes only")
    for B in itertools.combinations(range(4), 2):
        try:
            restricted = restriction_table(f, B)
        except InputError:
            return False
        if not in_class(restricted, P):
            return False
    group = klein_group()
    for c, v in f.cells():
        if len(set(c)) != 2:
            continue
        for s in group:
            if s(v) != f(*(s(a) for a in c)):
                return False
    return True


def preserved_by_klein(P: PostClassId, rows: Sequence[tuple[int, ...]]) -> bool:
    """Every conservative Klein P-function maps the rows back into the set.

    The rows are taken all at once as arguments (any tuple of rows factors
    through this one by identifying variables), so every column must have at
    most two values.
    """
    rows = sorted(set(tuple(r) for r in rows))
    if not rows:
        return True
    m = len(rows[0])
    cells = [tuple(r[q] for r in rows) for q in range(m)]
    present = set(rows)
    return all(tuple(t) in present for t in klein_traces(P, cells))


def minority_closure_ok(rows: Sequence[tuple[int, ...]]) -> bool:
    """Preserved by every ternary minority-pattern function.

    Columns have at most two values, so each pointwise triple has rank <= 2
    and the minority identities fix the image.
    """
    rows = sorted(set(tuple(r) for r in rows))
    if not rows:
        return True
    present = set(rows)
    for a, b, c in itertools.product(rows, repeat=3):
        image = []
        for x in zip(a, b, c):
            v = minority_value(x)
            if v is None:
                raise InputError("a column with three values reached the minority test")
            image.append(v)
        if tuple(image) not in present:
            return False
    return True
