"""Boolean conservative clones closed under duality, identified semantically.

The six classes are pinned down by predicate profiles on their members:

    O1  projections
    L4  affine, self-dual, 0- and 1-preserving
    D2  monotone, self-dual, 0- and 1-preserving
    D1  self-dual, 0- and 1-preserving
    A4  monotone, 0- and 1-preserving
    C4  0- and 1-preserving
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from clonekit.clone import FunctionSet, GeneratorSet, clone_slices, restrict_generators
from clonekit.core import FiniteFunction, classify_function, encode_tuple
from clonekit.errors import InputError

NAMED = ("O1", "D1", "D2", "L4", "A4", "C4")

Fingerprint = tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]


@dataclass(frozen=True, order=True)
class PostClassId:
    """One of the six named classes, or ``Other`` with a slice fingerprint."""

    name: str
    fingerprint: Fingerprint | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if self.name not in NAMED and self.name != "Other":
            raise InputError(f"unknown Post class {self.name!r}")
        if (self.name == "Other") != (self.fingerprint is not None):
            raise InputError("a fingerprint goes with Other and only with Other")

    @classmethod
    def named(cls, name: str) -> "PostClassId":
        return cls(name)

    @classmethod
    def other(cls, fingerprint: Fingerprint) -> "PostClassId":
        return cls("Other", fingerprint)

    @property
    def is_named(self) -> bool:
        return self.name != "Other"

    def __str__(self) -> str:
        return self.name


O1, D1, D2, L4, A4, C4 = (PostClassId(n) for n in NAMED)


def _boolean(f: FiniteFunction) -> None:
    if f.k != 2:
        raise InputError("duality is defined on the Boolean carrier only")


def dualize(f: FiniteFunction) -> FiniteFunction:
    """``not f(not x0, ..., not x_{n-1})``: reversing a table complements it."""
    _boolean(f)
    return FiniteFunction(2, f.n, tuple(1 - v for v in reversed(f.table)))


def is_self_dual(f: FiniteFunction) -> bool:
    return dualize(f) == f


def preserves_constants(f: FiniteFunction) -> bool:
    _boolean(f)
    return f.table[0] == 0 and f.table[-1] == 1


def is_monotone(f: FiniteFunction) -> bool:
    _boolean(f)
    t = f.table
    size = len(t)
    for bit in range(f.n):
        step = 1 << bit
        for i in range(size):
            if not i & step and t[i] > t[i | step]:
                return False
    return True


def is_affine(f: FiniteFunction) -> bool:
    """``f(x xor y) xor f(0) = f(x) xor f(y)`` for all x, y."""
    _boolean(f)
    t = f.table
    return all(t[x ^ y] ^ t[0] == t[x] ^ t[y] for x in range(len(t)) for y in range(x, len(t)))


def in_class(f: FiniteFunction, cls: PostClassId) -> bool:
    """Semantic membership of a Boolean function in a named class."""
    _boolean(f)
    name = cls.name
    if name == "O1":
        return classify_function(f).is_projection
    if not preserves_constants(f):
        return False
    if name == "C4":
        return True
    if name == "A4":
        return is_monotone(f)
    if not is_self_dual(f):
        return False
    if name == "D1":
        return True
    if name == "D2":
        return is_monotone(f)
    if name == "L4":
        return is_affine(f)
    raise InputError(f"no semantic predicate for {cls}")


@lru_cache(maxsize=None)
def class_members(cls: PostClassId, n: int) -> tuple[FiniteFunction, ...]:
    """The n-ary members of a named class, by filtering all Boolean functions."""
    if not cls.is_named:
        raise InputError("semantic slices exist only for the six named classes")
    if n > 4:
        raise InputError("semantic filtering is limited to arity 4")
    out = []
    for t in itertools.product((0, 1), repeat=2**n):
        f = FiniteFunction(2, n, t)
        if in_class(f, cls):
            out.append(f)
    return tuple(out)


def semantic_slice(cls: PostClassId, max_arity: int = 3) -> FunctionSet:
    if not 1 <= max_arity <= 3:
        raise InputError("semantic slices are computed up to arity 3")
    return FunctionSet(2, {n: class_members(cls, n) for n in range(1, max_arity + 1)}, max_arity)


def fingerprint(fs: FunctionSet, bound: int = 3) -> Fingerprint:
    return tuple((n, tuple(sorted(f.table for f in fs.arity(n)))) for n in range(1, bound + 1))


def identify_post_class(F2: FunctionSet, bound: int = 3) -> PostClassId:
    """The named class whose slices agree with F2 at every arity up to bound."""
    if F2.k != 2:
        raise InputError("identification needs a Boolean function set")
    if F2.closed_up_to is None or F2.closed_up_to < bound:
        raise InputError(f"function set is not closed up to arity {bound}")
    bound = min(bound, 3)
    for f in F2.functions():
        if f.n <= bound and not preserves_constants(f):
            raise InputError(f"{f!r} does not preserve 0 and 1")
    fp = fingerprint(F2, bound)
    for cls in (O1, D1, D2, L4, A4, C4):
        if fingerprint(semantic_slice(cls, bound), bound) == fp:
            return cls
    return PostClassId.other(fp)


def identify_generated(gens: GeneratorSet, bound: int = 3) -> PostClassId:
    """Identify the Boolean clone generated by ``gens``."""
    if gens.k != 2:
        raise InputError("identification needs Boolean generators")
    return identify_post_class(clone_slices(gens, bound), bound)


def dual_set(fs: FunctionSet) -> FunctionSet:
    return FunctionSet(2, {n: tuple(dualize(f) for f in fs.arity(n)) for n in fs.by_arity}, fs.closed_up_to)


@dataclass(frozen=True)
class PiFamily:
    """Per two-element subset B of the carrier: the class of the restricted
    clone and the labeling ``B -> {0, 1}`` used, as ``(element for 0, element for 1)``."""

    k: int
    classes: dict[tuple[int, int], PostClassId]
    labelings: dict[tuple[int, int], tuple[int, int]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiFamily):
            return NotImplemented
        return (self.k, self.classes, self.labelings) == (other.k, other.classes, other.labelings)

    def __hash__(self) -> int:
        return hash((self.k, tuple(self.classes.items()), tuple(self.labelings.items())))


def pi_family(gens: GeneratorSet, bound: int = 3) -> PiFamily:
    """Restrict to every two-element B, transport along both labelings and keep
    the one with the smaller fingerprint."""
    if not gens.is_conservative():
        raise InputError("the family of restrictions needs conservative generators")
    classes, labelings = {}, {}
    for B in itertools.combinations(range(gens.k), 2):
        straight = clone_slices(restrict_generators(gens, B), bound)
        swapped = dual_set(straight)
        fp_s, fp_w = fingerprint(straight, bound), fingerprint(swapped, bound)
        if fp_s <= fp_w:
            chosen, labeling = straight, (B[0], B[1])
        else:
            chosen, labeling = swapped, (B[1], B[0])
        classes[B] = identify_post_class(chosen, bound)
        labelings[B] = labeling
    return PiFamily(gens.k, classes, labelings)


def pi_zero(fam: PiFamily) -> PostClassId:
    items = sorted(fam.classes.items())
    first_B, first = items[0]
    for B, cls in items[1:]:
        if cls != first:
            raise InputError(f"restrictions differ: {first_B} gives {first}, {B} gives {cls}")
    return first


def restriction_table(f: FiniteFunction, labeling: tuple[int, int]) -> FiniteFunction:
    """``f`` on ``B^n`` for ``B = set(labeling)``, transported to ``{0, 1}``."""
    back = {v: i for i, v in enumerate(labeling)}
    table = []
    for c in itertools.product(labeling, repeat=f.n):
        v = f.table[encode_tuple(c, f.k)]
        if v not in back:
            raise InputError(f"{f!r} leaves {labeling} at {c}")
        table.append(back[v])
    return FiniteFunction(2, f.n, tuple(table))
