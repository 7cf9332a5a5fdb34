"""Finite functions as value tables.

A function ``f: A^n -> A`` on the carrier ``A = {0, ..., k-1}`` is stored as
the tuple of its ``k**n`` values.  Cells are ordered big-endian: position 0 of
the argument tuple is the most significant digit, so the table of ``f`` is
``[f(t) for t in itertools.product(range(k), repeat=n)]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from clonekit.errors import InputError

Cell = tuple[int, ...]


def _check_carrier(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise InputError(f"carrier size must be an integer >= 2, got {k!r}")


def encode_tuple(tup: Sequence[int], k: int) -> int:
    """Index of ``tup`` in the big-endian table layout."""
    idx = 0
    for a in tup:
        if not 0 <= a < k:
            raise InputError(f"entry {a} out of range for carrier {k}")
        idx = idx * k + a
    return idx


def decode_tuple(index: int, n: int, k: int) -> Cell:
    if not 0 <= index < k**n:
        raise InputError(f"index {index} out of range for k={k}, n={n}")
    out = [0] * n
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, k)
    return tuple(out)


def all_cells(n: int, k: int) -> list[Cell]:
    """Every n-tuple over the carrier, in table order."""
    return list(itertools.product(range(k), repeat=n))


def rank(cell: Sequence[int]) -> int:
    return len(set(cell))


def cells_of_rank(n: int, k: int, below: int | None = None, exactly: int | None = None) -> list[Cell]:
    """Cells of ``A^n`` with rank ``< below`` or ``== exactly``, in table order."""
    out = []
    for c in itertools.product(range(k), repeat=n):
        r = len(set(c))
        if below is not None and r >= below:
            continue
        if exactly is not None and r != exactly:
            continue
        out.append(c)
    return out


@dataclass(frozen=True, order=True)
class FiniteFunction:
    """A total n-ary operation on ``{0..k-1}``; ordering is by (arity, table)."""

    k: int
    n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_carrier(self.k)
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"arity must be >= 1, got {self.n!r}")
        table = tuple(int(v) for v in self.table)
        if len(table) != self.k**self.n:
            raise InputError(
                f"table length {len(table)} != {self.k}**{self.n} = {self.k ** self.n}"
            )
        for v in table:
            if not 0 <= v < self.k:
                raise InputError(f"table value {v} out of range for carrier {self.k}")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_callable(cls, k: int, n: int, fn: Callable[..., int]) -> "FiniteFunction":
        return cls(k, n, tuple(fn(*c) for c in itertools.product(range(k), repeat=n)))

    def __call__(self, *args: int) -> int:
        if len(args) != self.n:
            raise InputError(f"expected {self.n} arguments, got {len(args)}")
        return self.table[encode_tuple(args, self.k)]

    def cells(self) -> Iterator[tuple[Cell, int]]:
        return zip(itertools.product(range(self.k), repeat=self.n), self.table)

    def __repr__(self) -> str:
        return f"FiniteFunction(k={self.k}, n={self.n}, table={list(self.table)})"


def apply(f: FiniteFunction, tup: Sequence[int]) -> int:
    if len(tup) != f.n:
        raise InputError(f"tuple length {len(tup)} does not match arity {f.n}")
    return f.table[encode_tuple(tup, f.k)]


def projection(k: int, n: int, i: int) -> FiniteFunction:
    if not 0 <= i < n:
        raise InputError(f"projection index {i} out of range for arity {n}")
    return FiniteFunction(k, n, tuple(c[i] for c in itertools.product(range(k), repeat=n)))


def projections(k: int, n: int) -> list[FiniteFunction]:
    return [projection(k, n, i) for i in range(n)]


def compose(f: FiniteFunction, gs: Sequence[FiniteFunction]) -> FiniteFunction:
    """The function ``x -> f(g_0(x), ..., g_{n-1}(x))``."""
    if len(gs) != f.n:
        raise InputError(f"need {f.n} inner functions, got {len(gs)}")
    if not gs:
        raise InputError("composition needs at least one inner function")
    m = gs[0].n
    for g in gs:
        if g.k != f.k:
            raise InputError("carrier mismatch in composition")
        if g.n != m:
            raise InputError("inner functions must share an arity")
    k = f.k
    table = []
    for values in zip(*(g.table for g in gs)):
        idx = 0
        for v in values:
            idx = idx * k + v
        table.append(f.table[idx])
    return FiniteFunction(k, m, tuple(table))


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(len(image))) or len(image) < 2:
            raise InputError(f"not a permutation of 0..k-1: {image}")
        object.__setattr__(self, "image", image)

    @property
    def k(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, v in enumerate(self.image):
            inv[v] = i
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """``other`` after ``self``."""
        return Permutation(tuple(other.image[v] for v in self.image))

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @classmethod
    def all(cls, k: int) -> list["Permutation"]:
        return [cls(p) for p in itertools.permutations(range(k))]


def _as_perm(sigma: Permutation | Sequence[int]) -> Permutation:
    return sigma if isinstance(sigma, Permutation) else Permutation(tuple(sigma))


def conjugate(f: FiniteFunction, sigma: Permutation | Sequence[int]) -> FiniteFunction:
    """``f_sigma(a) = sigma^-1(f(sigma(a)))``."""
    sigma = _as_perm(sigma)
    if sigma.k != f.k:
        raise InputError("permutation and function live on different carriers")
    s, inv = sigma.image, sigma.inverse().image
    k = f.k
    table = []
    for c in itertools.product(range(k), repeat=f.n):
        idx = 0
        for a in c:
            idx = idx * k + s[a]
        table.append(inv[f.table[idx]])
    return FiniteFunction(k, f.n, tuple(table))


def identify_vars(f: FiniteFunction, xi: Sequence[int], m: int) -> FiniteFunction:
    """``g(c_0..c_{m-1}) = f(c_{xi(0)}, ..., c_{xi(n-1)})``."""
    if len(xi) != f.n:
        raise InputError(f"variable map must have length {f.n}")
    for j in xi:
        if not 0 <= j < m:
            raise InputError(f"variable map value {j} out of range for arity {m}")
    return compose(f, [projection(f.k, m, j) for j in xi])


def majority_value(cell: Sequence[int]) -> int | None:
    """Value forced on a rank <= 2 ternary cell by the majority identities."""
    x, y, z = cell
    if x == y or x == z:
        return x
    if y == z:
        return y
    return None


def minority_value(cell: Sequence[int]) -> int | None:
    """Value forced on a rank <= 2 ternary cell by the minority identities."""
    x, y, z = cell
    if x == y == z:
        return x
    if y == z:
        return x
    if x == z:
        return y
    if x == y:
        return z
    return None


@dataclass(frozen=True)
class ShapeReport:
    projection_index: int | None
    is_conservative: bool
    is_idempotent: bool
    is_d_function: bool
    is_l_function: bool

    @property
    def is_projection(self) -> bool:
        return self.projection_index is not None


def classify_function(f: FiniteFunction) -> ShapeReport:
    """Scan the table once and report every shape predicate."""
    proj = [True] * f.n
    conservative = idempotent = True
    d_fun = l_fun = f.n == 3
    for c, v in f.cells():
        for i in range(f.n):
            if proj[i] and c[i] != v:
                proj[i] = False
        if v not in c:
            conservative = False
        if len(set(c)) == 1 and v != c[0]:
            idempotent = False
        if f.n == 3:
            maj = majority_value(c)
            if maj is not None:
                d_fun = d_fun and v == maj
                l_fun = l_fun and v == minority_value(c)
    index = next((i for i in range(f.n) if proj[i]), None)
    return ShapeReport(index, conservative, idempotent, d_fun, l_fun)


def is_conservative(f: FiniteFunction) -> bool:
    return all(v in c for c, v in f.cells())


@dataclass(frozen=True, order=True)
class CellFamily:
    """Every n-ary function whose value at each cell lies in a prescribed set.

    ``allowed[i]`` is a bitmask of the values permitted at cell ``i``.  A family
    with singleton masks is a single function; ``CellFamily.conservative(k, n)``
    is the whole n-ary slice of the conservative clone.
    """

    k: int
    n: int
    allowed: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_carrier(self.k)
        if self.n < 1:
            raise InputError("family arity must be >= 1")
        allowed = tuple(int(m) for m in self.allowed)
        if len(allowed) != self.k**self.n:
            raise InputError("family mask table has the wrong length")
        full = (1 << self.k) - 1
        for mask in allowed:
            if mask <= 0 or mask & ~full:
                raise InputError(f"invalid value mask {mask} for carrier {self.k}")
        object.__setattr__(self, "allowed", allowed)

    @classmethod
    def from_rule(cls, k: int, n: int, rule: Callable[[Cell], Iterable[int]]) -> "CellFamily":
        masks = []
        for c in itertools.product(range(k), repeat=n):
            mask = 0
            for v in rule(c):
                mask |= 1 << v
            masks.append(mask)
        return cls(k, n, tuple(masks))

    @classmethod
    def conservative(cls, k: int, n: int) -> "CellFamily":
        return cls.from_rule(k, n, lambda c: set(c))

    @classmethod
    def single(cls, f: FiniteFunction) -> "CellFamily":
        return cls(f.k, f.n, tuple(1 << v for v in f.table))

    def values_at(self, index: int) -> list[int]:
        mask = self.allowed[index]
        return [v for v in range(self.k) if mask >> v & 1]

    def size(self) -> int:
        total = 1
        for mask in self.allowed:
            total *= bin(mask).count("1")
        return total

    def members(self) -> Iterator[FiniteFunction]:
        choices = [self.values_at(i) for i in range(len(self.allowed))]
        for table in itertools.product(*choices):
            yield FiniteFunction(self.k, self.n, table)

    def contains(self, f: FiniteFunction) -> bool:
        return (f.k, f.n) == (self.k, self.n) and all(
            self.allowed[i] >> v & 1 for i, v in enumerate(f.table)
        )

    def conjugate(self, sigma: Permutation | Sequence[int]) -> "CellFamily":
        sigma = _as_perm(sigma)
        s, inv = sigma.image, sigma.inverse().image
        k = self.k
        masks = []
        for c in itertools.product(range(k), repeat=self.n):
            mask = self.allowed[encode_tuple([s[a] for a in c], k)]
            out = 0
            for v in range(k):
                if mask >> v & 1:
                    out |= 1 << inv[v]
            masks.append(out)
        return CellFamily(k, self.n, tuple(masks))

    def is_conservative(self) -> bool:
        for c, mask in zip(itertools.product(range(self.k), repeat=self.n), self.allowed):
            cmask = 0
            for a in c:
                cmask |= 1 << a
            if mask & ~cmask:
                return False
        return True
