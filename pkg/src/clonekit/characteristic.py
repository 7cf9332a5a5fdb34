"""The characteristic (r, R, D, Pi) of a conservative clone and its case tag."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from clonekit.clone import DEFAULT_CAP, ArityVerdict, GeneratorSet, min_nonprojection_arity, projected_traces
from clonekit.conditions import special_relation
from clonekit.core import Cell, all_cells
from clonekit.errors import InputError
from clonekit.post import L4, PiFamily, PostClassId, pi_family, pi_zero


@dataclass(frozen=True)
class NTupleRelation:
    n: int
    k: int
    pairs: frozenset[tuple[Cell, Cell]]

    def __contains__(self, item) -> bool:
        return item in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[Cell, Cell]]:
        return sorted(self.pairs)

    def on_rank2(self) -> frozenset[tuple[Cell, Cell]]:
        """Only the pairs whose both sides are rank-2 pairs (n = 2)."""
        return frozenset((x, y) for x, y in self.pairs if len(set(x)) == 2 and len(set(y)) == 2)


def value_pairs(gens: GeneratorSet, x: Cell, y: Cell, cap: int = DEFAULT_CAP) -> set[tuple[int, int]]:
    """``{(f(x), f(y))}`` over the slice of arity ``len(x)``."""
    if x == y:
        return {(t[0], t[0]) for t in projected_traces(gens, len(x), (x,), cap)}
    a, b = (x, y) if x < y else (y, x)
    traces = projected_traces(gens, len(x), (a, b), cap)
    if a == x:
        return set(traces)
    return {(t[1], t[0]) for t in traces}


def is_injective_graph(pairs: set[tuple[int, int]]) -> bool:
    fwd, bwd = {}, {}
    for a, b in pairs:
        if fwd.setdefault(a, b) != b or bwd.setdefault(b, a) != a:
            return False
    return True


def has_disjunctive_anchor(pairs: set[tuple[int, int]], k: int) -> bool:
    return any(all(p == a or q == b for p, q in pairs) for a in range(k) for b in range(k))


def _relation(gens: GeneratorSet, n: int, test, cap: int) -> NTupleRelation:
    if n < 1:
        raise InputError("n must be >= 1")
    cells = all_cells(n, gens.k)
    out = set()
    for x, y in itertools.combinations_with_replacement(cells, 2):
        if test(value_pairs(gens, x, y, cap)):
            out.add((x, y))
            out.add((y, x))
    return NTupleRelation(n, gens.k, frozenset(out))


def relation_R(gens: GeneratorSet, n: int, cap: int = DEFAULT_CAP) -> NTupleRelation:
    """Pairs (x, y) with ``f(y) = sigma(f(x))`` for one permutation sigma and all members."""
    return _relation(gens, n, is_injective_graph, cap)


def relation_D(gens: GeneratorSet, n: int, cap: int = DEFAULT_CAP) -> NTupleRelation:
    """Pairs (x, y) with ``f(x) = a or f(y) = b`` for one (a, b) and all members."""
    k = gens.k
    return _relation(gens, n, lambda vp: has_disjunctive_anchor(vp, k), cap)


@dataclass(frozen=True)
class Characteristic:
    k: int
    r: ArityVerdict
    R: dict[int, NTupleRelation]
    D: dict[int, NTupleRelation]
    Pi: PiFamily
    bound: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Characteristic):
            return NotImplemented
        return (self.k, self.r, self.R, self.D, self.Pi, self.bound) == (
            other.k,
            other.r,
            other.R,
            other.D,
            other.Pi,
            other.bound,
        )

    def __hash__(self) -> int:
        return hash((self.k, self.r, self.bound))


def arity_parameter(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> ArityVerdict:
    """``r`` of a conservative clone, decided exactly.

    A rank-r cell needs r distinct values, so once ``r >= 4`` every member is
    a projection on every cell of rank below r; past ``max(3, k)`` that is all
    cells, and the clone has projections only.
    """
    return min_nonprojection_arity(gens, max(3, gens.k), cap)


def characteristic(gens: GeneratorSet, bound: int = 3, cap: int = DEFAULT_CAP) -> Characteristic:
    if not gens.is_conservative():
        raise InputError("the characteristic is defined for conservative generators")
    if bound < 2:
        raise InputError("bound must be >= 2")
    return Characteristic(
        k=gens.k,
        r=arity_parameter(gens, cap),
        R={n: relation_R(gens, n, cap) for n in range(2, bound + 1)},
        D={n: relation_D(gens, n, cap) for n in range(2, bound + 1)},
        Pi=pi_family(gens, bound),
        bound=bound,
    )


def chi_equal(a: Characteristic, b: Characteristic) -> bool:
    if a.bound != b.bound or a.k != b.k:
        raise InputError("characteristics computed on different carriers or bounds")
    return a == b


def chi_difference(a: Characteristic, b: Characteristic) -> list[str]:
    """Names of the components that differ."""
    out = []
    if a.r != b.r:
        out.append("r")
    out += [f"R_{n}" for n in sorted(a.R) if a.R[n] != b.R.get(n)]
    out += [f"D_{n}" for n in sorted(a.D) if a.D[n] != b.D.get(n)]
    if a.Pi != b.Pi:
        out.append("Pi")
    return out


def r2_matches(rel: NTupleRelation, kind: str) -> bool:
    special = special_relation(kind, rel.k)
    return rel.on_rank2() == special.pairs


def case_tag(k: int, r: ArityVerdict, pi0: PostClassId, R2: NTupleRelation) -> int:
    """Case tag 1..6 from ``r``, the common restriction class and ``R_2``."""
    if not r.exact or r.value >= 4:
        return 1
    if r.value == 3:
        return 3 if pi0 == L4 else 2
    if r.value != 2:
        raise InputError(f"r = {r} is impossible for a conservative clone")
    if k == 4 and r2_matches(R2, "pm"):
        return 5
    if k == 3 and r2_matches(R2, "uparrow"):
        return 6
    return 4


def classify_case(chi: Characteristic) -> int:
    """Case tag 1..6 of the classification theorem."""
    if chi.r.exact and chi.r.value < 4 and 2 not in chi.R:
        raise InputError("classification needs R_2")
    r = chi.r
    pi0 = pi_zero(chi.Pi) if r.exact and r.value < 4 else None
    return case_tag(chi.k, r, pi0, chi.R.get(2))


def case_of(gens: GeneratorSet, cap: int = DEFAULT_CAP) -> int:
    """Case tag computed from only the components it depends on."""
    r = arity_parameter(gens, cap)
    if not r.exact or r.value >= 4:
        return 1
    pi0 = pi_zero(pi_family(gens, 3))
    R2 = relation_R(gens, 2, cap) if r.value == 2 else None
    return case_tag(gens.k, r, pi0, R2)
