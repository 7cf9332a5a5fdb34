"""Per-arity slices of the clone generated by a finite set of operations.

Every subterm of an m-ary term over the generators is itself m-ary, so the
m-ary slice is the least set of m-ary tables that contains the projections and
is closed under applying each generator cellwise.  Because application is
cellwise, the same fixpoint computed on a subset of cells gives exactly the
projection of the slice onto those cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from clonekit import kernels
from clonekit.core import (
    Cell,
    CellFamily,
    FiniteFunction,
    Permutation,
    all_cells,
    conjugate,
    encode_tuple,
    is_conservative,
    projection,
)
from clonekit.errors import CapacityError, InputError

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class GeneratorSet:
    """Generators of a clone: explicit functions plus cell families.

    A ``CellFamily`` stands for all of its members at once; the kernels apply
    it without expanding the product.
    """

    k: int
    functions: tuple[FiniteFunction, ...] = ()
    families: tuple[CellFamily, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InputError("carrier size must be >= 2")
        fns = tuple(sorted(set(self.functions)))
        fams = tuple(sorted(set(self.families)))
        for f in fns:
            if f.k != self.k:
                raise InputError(f"generator on carrier {f.k} in a set over {self.k}")
        for fam in fams:
            if fam.k != self.k:
                raise InputError(f"family on carrier {fam.k} in a set over {self.k}")
        object.__setattr__(self, "functions", fns)
        object.__setattr__(self, "families", fams)

    @classmethod
    def of(cls, k: int, functions: Iterable[FiniteFunction] = (), families: Iterable[CellFamily] = ()) -> "GeneratorSet":
        return cls(k, tuple(functions), tuple(families))

    @cached_property
    def kernel_spec(self) -> list[tuple[int, tuple[int, ...]]]:
        spec = [(f.n, tuple(1 << v for v in f.table)) for f in self.functions]
        spec += [(fam.n, fam.allowed) for fam in self.families]
        return spec

    @property
    def max_arity(self) -> int:
        arities = [f.n for f in self.functions] + [fam.n for fam in self.families]
        return max(arities, default=0)

    def is_empty(self) -> bool:
        return not self.functions and not self.families

    def is_conservative(self) -> bool:
        return all(is_conservative(f) for f in self.functions) and all(
            fam.is_conservative() for fam in self.families
        )

    def expanded(self) -> list[FiniteFunction]:
        """Every generator as an explicit table (families expanded)."""
        out = set(self.functions)
        for fam in self.families:
            out.update(fam.members())
        return sorted(out)

    def union(self, other: "GeneratorSet") -> "GeneratorSet":
        if other.k != self.k:
            raise InputError("carrier mismatch")
        return GeneratorSet(self.k, self.functions + other.functions, self.families + other.families)


@dataclass(frozen=True)
class FunctionSet:
    """Arity-graded set of functions; every stored arity is an exact slice
    when the set came from ``clone_slices``/``slice``."""

    k: int
    by_arity: Mapping[int, tuple[FiniteFunction, ...]] = field(default_factory=dict)
    closed_up_to: int | None = None

    def __post_init__(self) -> None:
        graded = {}
        for n, members in self.by_arity.items():
            members = tuple(sorted(set(members)))
            for f in members:
                if f.k != self.k or f.n != n:
                    raise InputError(f"member {f!r} does not fit arity {n} over carrier {self.k}")
            graded[n] = members
        object.__setattr__(self, "by_arity", dict(sorted(graded.items())))

    @classmethod
    def from_functions(cls, k: int, functions: Iterable[FiniteFunction], closed_up_to: int | None = None) -> "FunctionSet":
        graded: dict[int, list[FiniteFunction]] = {}
        for f in functions:
            graded.setdefault(f.n, []).append(f)
        return cls(k, {n: tuple(fs) for n, fs in graded.items()}, closed_up_to)

    def arity(self, n: int) -> tuple[FiniteFunction, ...]:
        if n not in self.by_arity:
            raise InputError(f"arity {n} was not computed for this set")
        return self.by_arity[n]

    def functions(self) -> list[FiniteFunction]:
        return [f for n in self.by_arity for f in self.by_arity[n]]

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_arity.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionSet):
            return NotImplemented
        return (self.k, self.by_arity, self.closed_up_to) == (other.k, other.by_arity, other.closed_up_to)

    def __hash__(self) -> int:
        return hash((self.k, tuple(self.by_arity.items()), self.closed_up_to))


@dataclass(frozen=True)
class TraceSet:
    """An m-ary slice projected to the listed cells."""

    k: int
    m: int
    cells: tuple[Cell, ...]
    traces: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.traces)

    def values_at(self, cell: Cell) -> set[int]:
        i = self.cells.index(cell)
        return {t[i] for t in self.traces}


@dataclass(frozen=True)
class ArityVerdict:
    """``r(F)``: exact when a non-projection was found, else a lower bound."""

    value: int
    exact: bool

    @classmethod
    def finite(cls, r: int) -> "ArityVerdict":
        return cls(r, True)

    @classmethod
    def at_least(cls, r: int) -> "ArityVerdict":
        return cls(r, False)

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


def _projection_traces(k: int, m: int, cells: Sequence[Cell]) -> list[tuple[int, ...]]:
    return [tuple(c[i] for c in cells) for i in range(m)]


def _close(gens: GeneratorSet, m: int, cells: Sequence[Cell], cap: int, stop_at: int = 0) -> list[tuple[int, ...]]:
    limit = max(cap // max(len(cells), 1), m)
    try:
        return kernels.close_traces(gens.k, _projection_traces(gens.k, m, cells), gens.kernel_spec, limit, stop_at)
    except CapacityError as exc:
        raise CapacityError(
            f"arity-{m} slice over {len(cells)} cells exceeded cap {cap} "
            f"(reached {exc.args[0] if exc.args else '?'} members)"
        ) from None


def slice(gens: GeneratorSet, m: int, cells: Sequence[Cell] | None = None, cap: int = DEFAULT_CAP):
    """The m-ary slice of the generated clone.

    With ``cells`` the slice is returned projected onto those cells as a
    ``TraceSet``; otherwise as a ``FunctionSet`` holding arity ``m``.
    """
    if m < 1:
        raise InputError("slice arity must be >= 1")
    if cells is None:
        full = all_cells(m, gens.k)
        traces = _close(gens, m, full, cap)
        fns = [FiniteFunction(gens.k, m, t) for t in traces]
        return FunctionSet(gens.k, {m: tuple(fns)})
    cells = tuple(tuple(c) for c in cells)
    for c in cells:
        if len(c) != m or any(not 0 <= a < gens.k for a in c):
            raise InputError(f"cell {c} is not an {m}-tuple over the carrier")
    traces = _close(gens, m, cells, cap)
    return TraceSet(gens.k, m, cells, tuple(sorted(traces)))


@lru_cache(maxsize=8192)
def projected_traces(gens: GeneratorSet, m: int, cells: tuple[Cell, ...], cap: int = DEFAULT_CAP) -> tuple[tuple[int, ...], ...]:
    """Cached ``slice(gens, m, cells).traces``."""
    return slice(gens, m, cells, cap).traces


@lru_cache(maxsize=256)
def clone_slices(gens: GeneratorSet, bound: int, cap: int = DEFAULT_CAP) -> FunctionSet:
    """All slices of arity 1..bound, flagged closed up to ``bound``."""
    graded = {}
    for m in range(1, bound + 1):
        graded[m] = slice(gens, m, cap=cap).by_arity[m]
    return FunctionSet(gens.k, graded, bound)


def contains(fs: FunctionSet, f: FiniteFunction) -> bool:
    if f.k != fs.k:
        raise InputError("carrier mismatch")
    return f in set(fs.arity(f.n))


def symmetric_closure(gens: GeneratorSet) -> GeneratorSet:
    perms = Permutation.all(gens.k)
    fns = {conjugate(f, s) for f in gens.functions for s in perms}
    fams = {fam.conjugate(s) for fam in gens.families for s in perms}
    return GeneratorSet(gens.k, tuple(fns), tuple(fams))


def is_symmetric(gens: GeneratorSet) -> bool:
    """Generator set closed under conjugation (so the clone is symmetric)."""
    return symmetric_closure(gens) == gens


def restrict_function(f: FiniteFunction, B: Sequence[int]) -> FiniteFunction:
    """``f`` on ``B^n`` re-indexed along the order-preserving map ``B -> 0..|B|-1``."""
    B = sorted(B)
    pos = {b: i for i, b in enumerate(B)}
    table = []
    for c in itertools.product(B, repeat=f.n):
        v = f.table[encode_tuple(c, f.k)]
        if v not in pos:
            raise InputError(f"{f!r} maps {c} outside {B}")
        table.append(pos[v])
    return FiniteFunction(len(B), f.n, tuple(table))


def restrict_family(fam: CellFamily, B: Sequence[int]) -> CellFamily:
    B = sorted(B)
    pos = {b: i for i, b in enumerate(B)}
    masks = []
    for c in itertools.product(B, repeat=fam.n):
        mask = fam.allowed[encode_tuple(c, fam.k)]
        out = 0
        for v in range(fam.k):
            if mask >> v & 1:
                if v not in pos:
                    raise InputError(f"family allows a value outside {B} at {c}")
                out |= 1 << pos[v]
        masks.append(out)
    return CellFamily(len(B), fam.n, tuple(masks))


def restrict_generators(gens: GeneratorSet, B: Sequence[int]) -> GeneratorSet:
    """Generators of ``F|_B`` for a conservative ``F`` (restriction commutes
    with composition when every generator keeps ``B``)."""
    if len(set(B)) < 2:
        raise InputError("restriction needs at least two carrier elements")
    return GeneratorSet(
        len(set(B)),
        tuple(restrict_function(f, B) for f in gens.functions),
        tuple(restrict_family(fam, B) for fam in gens.families),
    )


def restrict_carrier(fs: FunctionSet, B: Sequence[int]) -> FunctionSet:
    B = sorted(set(B))
    if len(B) < 2 or any(not 0 <= b < fs.k for b in B):
        raise InputError(f"{B} is not a subset of the carrier with >= 2 elements")
    graded = {n: tuple(sorted({restrict_function(f, B) for f in members})) for n, members in fs.by_arity.items()}
    return FunctionSet(len(B), graded, fs.closed_up_to)


def min_nonprojection_arity(gens: GeneratorSet, bound: int, cap: int = DEFAULT_CAP) -> ArityVerdict:
    """Least arity whose slice holds a non-projection, searched up to ``bound``."""
    if bound < 2:
        raise InputError("bound must be >= 2")
    for m in range(1, bound + 1):
        # the m projections come first; any further member is a non-projection
        traces = _close(gens, m, all_cells(m, gens.k), cap, stop_at=m + 1)
        if len(traces) > m:
            return ArityVerdict.finite(m)
    return ArityVerdict.at_least(bound + 1)


def conservative_slice(k: int, m: int, cap: int = DEFAULT_CAP) -> FunctionSet:
    cells = all_cells(m, k)
    count = 1
    for c in cells:
        count *= len(set(c))
    if count * len(cells) > cap:
        raise CapacityError(f"conservative arity-{m} slice on k={k} has {count} members, over cap {cap}")
    choices = [sorted(set(c)) for c in cells]
    fns = tuple(FiniteFunction(k, m, t) for t in itertools.product(*choices))
    return FunctionSet(k, {m: fns})


def transport(f: FiniteFunction, sigma: Sequence[int], k_target: int) -> FiniteFunction:
    """``tau(f)`` with ``sigma(f(a)) = tau(f)(sigma(a))`` for a bijection ``sigma``."""
    if len(sigma) != f.k or sorted(sigma) != list(range(k_target)):
        raise InputError("sigma must be a bijection onto the target carrier")
    inv = {v: i for i, v in enumerate(sigma)}
    table = []
    for c in itertools.product(range(k_target), repeat=f.n):
        table.append(sigma[f(*(inv[x] for x in c))])
    return FiniteFunction(k_target, f.n, tuple(table))


def is_natural_isomorphism(sigma: Sequence[int], F: FunctionSet, G: FunctionSet, bound: int) -> bool:
    for fs in (F, G):
        if fs.closed_up_to is None or fs.closed_up_to < bound:
            raise InputError("both sets must be closed up to the bound")
    if len(sigma) != F.k or len(set(sigma)) != F.k or F.k != G.k:
        return False
    for n in range(1, bound + 1):
        moved = {transport(f, sigma, G.k) for f in F.arity(n)}
        if moved != set(G.arity(n)):
            return False
    return True
