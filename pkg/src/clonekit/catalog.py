"""Named symmetric conservative clones used by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

from clonekit.clone import GeneratorSet, symmetric_closure
from clonekit.conditions import KLEIN_ORBITS, uv_pair
from clonekit.core import CellFamily, FiniteFunction, majority_value, minority_value
from clonekit.errors import InputError
from clonekit.post import NAMED, PostClassId, class_members


@dataclass(frozen=True)
class CloneCatalogEntry:
    """A generator set with the case tag and condition profile it should show.

    ``expected_delta`` maps ``"delta_partial"``, ``"delta_2"`` and
    ``"delta_s_<n>"`` to the expected (non-vacuous) outcome.
    """

    name: str
    gens: GeneratorSet
    expected_case: int
    expected_delta: dict[str, bool] = field(default_factory=dict, compare=False)
    note: str = field(default="", compare=False)

    @property
    def k(self) -> int:
        return self.gens.k


def _post_entry(name: str) -> CloneCatalogEntry:
    cls = PostClassId(name)
    nonproj = tuple(f for f in class_members(cls, 3) if f.table not in _PROJ3)
    case = {"O1": 1, "D1": 2, "D2": 2, "L4": 3, "A4": 4, "C4": 4}[name]
    return CloneCatalogEntry(
        name,
        GeneratorSet(2, nonproj),
        case,
        {"delta_2": False},
        note="generated by the ternary members of the class",
    )


_PROJ3 = {(0, 0, 0, 0, 1, 1, 1, 1), (0, 0, 1, 1, 0, 0, 1, 1), (0, 1, 0, 1, 0, 1, 0, 1)}


def ell_family(k: int) -> CellFamily:
    """All conservative ternary minority-pattern functions."""
    return CellFamily.from_rule(k, 3, lambda c: {minority_value(c)} if len(set(c)) < 3 else set(c))


def discriminator(k: int) -> FiniteFunction:
    """Majority on cells of rank <= 2, first argument elsewhere."""
    return FiniteFunction.from_callable(
        k, 3, lambda x, y, z: majority_value((x, y, z)) if len({x, y, z}) < 3 else x
    )


def klein_binary_functions() -> list[FiniteFunction]:
    """Binary functions picking one argument per Klein orbit of pairs."""
    out = []
    for choice in range(1, 7):
        picks = [(choice >> i) & 1 for i in range(3)]

        def f(x, y, picks=picks):
            if x == y:
                return x
            for idx, (b0, b1) in enumerate(KLEIN_ORBITS):
                if {x, y} in ({*b0}, {*b1}):
                    return (x, y)[picks[idx]]
            raise AssertionError("unreachable")

        out.append(FiniteFunction.from_callable(4, 2, f))
    return out


def rank4_function() -> FiniteFunction:
    """First argument, except the second one on cells of rank 4."""
    return FiniteFunction.from_callable(4, 4, lambda *c: c[1] if len(set(c)) == 4 else c[0])


def builtin_catalog(k: int) -> list[CloneCatalogEntry]:
    if k == 2:
        return [_post_entry(name) for name in NAMED]
    if k == 3:
        u, v = uv_pair()
        return [
            CloneCatalogEntry(
                "E3", GeneratorSet(3), 1, {"delta_partial": False, "delta_2": False, "delta_s_3": False}
            ),
            CloneCatalogEntry(
                "L3",
                GeneratorSet(3, (), (ell_family(3),)),
                3,
                {"delta_partial": False, "delta_2": False, "delta_s_3": True},
                note="all conservative minority-pattern functions",
            ),
            CloneCatalogEntry(
                "uv",
                symmetric_closure(GeneratorSet.of(3, [u, v])),
                6,
                {"delta_partial": True, "delta_2": False, "delta_s_3": True},
            ),
            CloneCatalogEntry(
                "cons2",
                GeneratorSet(3, (), (CellFamily.conservative(3, 2),)),
                4,
                {"delta_2": True},
                note="all binary conservative functions",
            ),
            CloneCatalogEntry(
                "disc3",
                symmetric_closure(GeneratorSet.of(3, [discriminator(3)])),
                2,
                {"delta_partial": True, "delta_2": False, "delta_s_3": False},
            ),
        ]
    if k == 4:
        return [
            CloneCatalogEntry(
                "E4", GeneratorSet(4), 1, {"delta_partial": False, "delta_2": False, "delta_s_3": False}
            ),
            CloneCatalogEntry(
                "klein",
                symmetric_closure(GeneratorSet.of(4, klein_binary_functions())),
                5,
                {"delta_2": False, "delta_s_3": True},
                note="binary Klein functions of the projection class",
            ),
            CloneCatalogEntry(
                "rank4",
                symmetric_closure(GeneratorSet.of(4, [rank4_function()])),
                1,
                {"delta_s_4": True, "delta_s_3": False, "delta_2": False},
            ),
        ]
    raise InputError(f"no built-in catalog for k={k}")


def catalog_entry(ref: str) -> CloneCatalogEntry:
    """Look up ``"<k>/<name>"`` or a bare unique name."""
    if "/" in ref:
        k_text, name = ref.split("/", 1)
        entries = builtin_catalog(int(k_text))
    else:
        name = ref
        entries = [e for k in (2, 3, 4) for e in builtin_catalog(k)]
    hits = [e for e in entries if e.name == name]
    if len(hits) != 1:
        raise InputError(f"unknown catalog entry {ref!r}")
    return hits[0]
