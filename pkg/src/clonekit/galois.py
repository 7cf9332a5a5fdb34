"""Invariant sets H of A^Q and the functions preserving them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from clonekit import kernels
from clonekit.clone import DEFAULT_CAP, FunctionSet, GeneratorSet
from clonekit.core import FiniteFunction, encode_tuple
from clonekit.errors import CapacityError, InputError

Row = tuple[int, ...]


@dataclass(frozen=True, order=True)
class QSet:
    """A set of rows over ``Q = 0..m-1``, each row an m-tuple over ``0..k-1``."""

    k: int
    m: int
    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        if self.k < 2 or self.m < 0:
            raise InputError("need k >= 2 and m >= 0")
        rows = tuple(sorted({tuple(r) for r in self.rows}))
        for r in rows:
            if len(r) != self.m or any(not 0 <= v < self.k for v in r):
                raise InputError(f"row {r} is not an {self.m}-tuple over 0..{self.k - 1}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, k: int, m: int, rows: Iterable[Sequence[int]]) -> "QSet":
        return cls(k, m, tuple(tuple(r) for r in rows))

    @classmethod
    def full(cls, k: int, m: int) -> "QSet":
        return cls(k, m, tuple(itertools.product(range(k), repeat=m)))

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, row) -> bool:
        return tuple(row) in set(self.rows)

    def column(self, q: int) -> frozenset[int]:
        if not 0 <= q < self.m:
            raise InputError(f"position {q} outside Q")
        return frozenset(r[q] for r in self.rows)

    def profile(self) -> "ColumnProfile":
        return ColumnProfile(tuple(self.column(q) for q in range(self.m)))

    def is_full(self) -> bool:
        return len(self.rows) == self.k**self.m


@dataclass(frozen=True)
class ColumnProfile:
    columns: tuple[frozenset[int], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.columns)


def _same_carrier(k: int, H: QSet) -> None:
    if H.k != k:
        raise InputError(f"carrier mismatch: {k} vs {H.k}")


def preserves(f: FiniteFunction, H: QSet) -> bool:
    """Every cellwise image of an arity(f)-tuple of rows lies in H."""
    _same_carrier(f.k, H)
    present = set(H.rows)
    table, k = f.table, f.k
    for combo in itertools.product(H.rows, repeat=f.n):
        image = tuple(table[encode_tuple(col, k)] for col in zip(*combo))
        if image not in present:
            return False
    return True


def in_inv(gens: GeneratorSet, H: QSet) -> bool:
    """H is invariant under the whole generated clone.

    Terms act on rows as iterated cellwise generator applications, so closure
    under the generators is closure under every member.
    """
    _same_carrier(gens.k, H)
    if not H.rows or H.m == 0 or gens.is_empty():
        return True
    return kernels.first_escape(gens.k, H.rows, gens.kernel_spec) is None


def invariant_closure(gens: GeneratorSet, H0: QSet) -> QSet:
    _same_carrier(gens.k, H0)
    if not H0.rows or H0.m == 0 or gens.is_empty():
        return H0
    rows = kernels.close_traces(gens.k, H0.rows, gens.kernel_spec, gens.k**H0.m)
    return QSet(gens.k, H0.m, tuple(rows))


def enumerate_inv(gens: GeneratorSet, m: int, cell_cap: int = 16) -> list[QSet]:
    """All nonempty invariant subsets of A^m.

    Every invariant set is reachable from an invariant singleton closure by
    adding one row at a time and closing, so the search visits each once.
    """
    k = gens.k
    universe = list(itertools.product(range(k), repeat=m))
    if len(universe) > cell_cap:
        raise CapacityError(
            f"A^{m} has {len(universe)} rows, over cell_cap {cell_cap}; use sampled verification instead"
        )
    pos = {r: i for i, r in enumerate(universe)}

    def close(rows) -> int:
        closed = invariant_closure(gens, QSet(k, m, tuple(rows))).rows
        mask = 0
        for r in closed:
            mask |= 1 << pos[r]
        return mask

    if gens.is_empty():
        masks = range(1, 1 << len(universe))
        out = [QSet(k, m, tuple(universe[i] for i in range(len(universe)) if s >> i & 1)) for s in masks]
        return sorted(out, key=lambda H: (len(H), H.rows))
    seen: set[int] = set()
    frontier = {close([r]) for r in universe}
    while frontier:
        seen |= frontier
        nxt = set()
        for mask in frontier:
            members = [universe[i] for i in range(len(universe)) if mask >> i & 1]
            for i, r in enumerate(universe):
                if not mask >> i & 1:
                    nxt.add(close(members + [r]))
        frontier = nxt - seen
    out = [QSet(k, m, tuple(universe[i] for i in range(len(universe)) if mask >> i & 1)) for mask in seen]
    return sorted(out, key=lambda H: (len(H), H.rows))


def pol_bounded(Hs: Sequence[QSet], max_arity: int, k: int | None = None, cap: int = DEFAULT_CAP) -> FunctionSet:
    """All functions of arity 1..max_arity preserving every set in ``Hs``."""
    if k is None:
        if not Hs:
            raise InputError("carrier size needed when no sets are given")
        k = Hs[0].k
    for H in Hs:
        _same_carrier(k, H)
    graded = {}
    for n in range(1, max_arity + 1):
        count = k ** (k**n)
        if count > cap:
            raise CapacityError(f"{count} candidate functions of arity {n} exceed cap {cap}")
        graded[n] = tuple(
            f
            for f in (FiniteFunction(k, n, t) for t in itertools.product(range(k), repeat=k**n))
            if all(preserves(f, H) for H in Hs)
        )
    return FunctionSet(k, graded, max_arity)


def reindex(H: QSet, f: Sequence[int]) -> QSet:
    """Rows ``h o f`` over ``P = 0..len(f)-1``."""
    if any(not 0 <= q < H.m for q in f):
        raise InputError(f"map {tuple(f)} leaves 0..{H.m - 1}")
    return QSet(H.k, len(f), tuple(tuple(h[q] for q in f) for h in H.rows))


def restrict_qset(H: QSet, P: Iterable[int]) -> QSet:
    """``H|_P`` with coordinates in increasing order of P."""
    P = sorted(set(P))
    if any(not 0 <= q < H.m for q in P):
        raise InputError(f"{P} is not a subset of 0..{H.m - 1}")
    return reindex(H, P)


def extend_qset(Hp: QSet, P: Sequence[int], m: int) -> QSet:
    """All rows over ``0..m-1`` whose restriction to ``P`` is a row of Hp.

    ``P`` lists, in order, the position in Q of each coordinate of Hp.
    """
    P = list(P)
    if len(P) != Hp.m or len(set(P)) != len(P) or any(not 0 <= q < m for q in P):
        raise InputError(f"{P} is not an embedding of {Hp.m} coordinates into 0..{m - 1}")
    free = [q for q in range(m) if q not in set(P)]
    rows = []
    for base in Hp.rows:
        for fill in itertools.product(range(Hp.k), repeat=len(free)):
            row = [0] * m
            for q, v in zip(P, base):
                row[q] = v
            for q, v in zip(free, fill):
                row[q] = v
            rows.append(tuple(row))
    return QSet(Hp.k, m, tuple(rows))


def intersect(H: QSet, G: QSet) -> QSet:
    if (H.k, H.m) != (G.k, G.m):
        raise InputError("intersection needs equal carrier and index set")
    return QSet(H.k, H.m, tuple(set(H.rows) & set(G.rows)))


def slice_as_qset(fs: FunctionSet, n: int) -> QSet:
    """``F_[n]`` viewed as a subset of ``A^(A^n)``: one row per function."""
    members = fs.arity(n)
    return QSet(fs.k, fs.k**n, tuple(f.table for f in members))
