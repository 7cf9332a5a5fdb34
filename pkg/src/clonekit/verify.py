"""Executable cross-checks of the decomposition and classification results.

Every check compares a fast path against a second, independent computation
or against a definitional property, and records counterexamples instead of
raising.  All sampling goes through :class:`random.Random` with an explicit
seed, so reports are reproducible.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from clonekit.catalog import CloneCatalogEntry
from clonekit.characteristic import (
    arity_parameter,
    case_of,
    case_tag,
    characteristic,
    chi_difference,
    relation_R,
)
from clonekit.clone import (
    DEFAULT_CAP,
    GeneratorSet,
    clone_slices,
    is_symmetric,
    projected_traces,
    restrict_generators,
    symmetric_closure,
)
from clonekit.conditions import (
    delta_2,
    delta_partial,
    delta_s,
    delta_s_for_index,
    has_d_function,
    minority_closure_ok,
    preserved_by_klein,
    triangle_case,
    triangle_rel,
)
from clonekit.core import (
    Cell,
    FiniteFunction,
    all_cells,
    cells_of_rank,
    encode_tuple,
    is_conservative,
)
from clonekit.decomposition import (
    SubsetFamily,
    index_families,
    intersection_of_cylinders,
    is_decomposable,
    pair_shape,
    strongly_separates,
    weakly_separates,
)
from clonekit.errors import CapacityError, InputError, PremiseError
from clonekit.galois import (
    QSet,
    enumerate_inv,
    extend_qset,
    in_inv,
    intersect,
    invariant_closure,
    pol_bounded,
    reindex,
    restrict_qset,
    slice_as_qset,
)
from clonekit.post import pi_family, pi_zero

EXHAUSTIVE_ROW_LIMIT = 16
ORACLE_CAP = 1_000_000


@dataclass
class VerificationReport:
    """Outcome of one verification run.

    ``failures`` holds counterexample bundles: plain dicts carrying the set,
    the clone name and which side of the statement failed.  Theorem bundles
    also carry what :func:`replay` needs to re-run them.
    """

    statement: str
    mode: str = "exhaustive"
    seed: int | None = None
    instances: int = 0
    skipped: int = 0
    failures: list[dict] = field(default_factory=list)
    parts: list["VerificationReport"] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and all(p.passed for p in self.parts)

    def total_instances(self) -> int:
        return self.instances + sum(p.total_instances() for p in self.parts)

    def all_failures(self) -> list[dict]:
        out = list(self.failures)
        for p in self.parts:
            out += p.all_failures()
        return out


def plain(value):
    """Tuples to lists and frozensets to sorted lists, recursively."""
    if isinstance(value, dict):
        return {k if isinstance(k, str) else str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(plain(v) for v in value)
    return value


# ---------------------------------------------------------------- the oracle


@lru_cache(maxsize=128)
def _naive_slice(gens: GeneratorSet, n: int, cap: int) -> frozenset[tuple[int, ...]]:
    """Full tables of the n-ary members: close the projections under
    cellwise generator application, without any projection onto cells."""
    k = gens.k
    size = k**n
    seen = {tuple(c[i] for c in itertools.product(range(k), repeat=n)) for i in range(n)}
    done: list[tuple[int, ...]] = []
    fresh = list(seen)
    tables = [(g.n, g.table) for g in gens.expanded()]
    work = 0
    while fresh:
        everything = done + fresh
        found = []
        for arity, table in tables:
            work += len(everything) ** arity - len(done) ** arity
            if work > cap:
                raise CapacityError(f"naive closure at arity {n} exceeds {cap} compositions")
            w = [k ** (arity - 1 - j) for j in range(arity)]
            # the first argument drawn from the fresh members sits at position i
            for i in range(arity):
                pools = [done] * i + [fresh] + [everything] * (arity - 1 - i)
                for args in itertools.product(*pools):
                    image = tuple(table[sum(args[j][c] * w[j] for j in range(arity))] for c in range(size))
                    if image not in seen:
                        seen.add(image)
                        found.append(image)
        done, fresh = everything, found
    return frozenset(seen)


def oracle_in_inv(gens: GeneratorSet, H: QSet, cap: int = ORACLE_CAP) -> bool:
    """Invariance checked from the definition.

    Materializes every slice up to ``min(|H|, max(3, largest generator
    arity))`` by the naive closure and applies each member to every tuple of
    pairwise distinct rows.  A tuple with repeated rows is the image of a
    lower-arity member obtained by identifying variables, so distinct rows
    suffice; and a member of arity above ``|H|`` always sees repeats.
    """
    if H.k != gens.k:
        raise InputError(f"carrier mismatch: {gens.k} vs {H.k}")
    if not H.rows or H.m == 0:
        return True
    k = gens.k
    present = set(H.rows)
    bound = min(len(H.rows), max(3, gens.max_arity))
    for n in range(1, bound + 1):
        for table in _naive_slice(gens, n, cap):
            for combo in itertools.permutations(H.rows, n):
                image = tuple(table[encode_tuple(col, k)] for col in zip(*combo))
                if image not in present:
                    return False
    return True


# ---------------------------------------------------------------- sampling


def _universe(k: int, m: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(k), repeat=m))


def all_qsets(k: int, m: int) -> Iterable[QSet]:
    """Every nonempty subset of ``A^m``, by increasing bitmask."""
    universe = _universe(k, m)
    if len(universe) > EXHAUSTIVE_ROW_LIMIT:
        raise CapacityError(f"A^{m} has {len(universe)} rows; exhaustive mode allows {EXHAUSTIVE_ROW_LIMIT}")
    for mask in range(1, 1 << len(universe)):
        yield QSet(k, m, tuple(r for i, r in enumerate(universe) if mask >> i & 1))


def sample_qsets(
    k: int, m: int, count: int, seed: int, gens: GeneratorSet | None = None
) -> list[QSet]:
    """Seeded, size-stratified nonempty subsets of ``A^m``.

    Each batch of eight holds subsets with 1, 2, half and all-but-one rows,
    two of uniformly random size and, when generators are given, two
    invariant closures of 1 to 3 random rows.
    """
    if seed is None:
        raise InputError("sampled mode needs a seed")
    rng = random.Random(seed)
    universe = _universe(k, m)
    total = len(universe)
    fixed = [1, 2, math.ceil(total / 2), total - 1]
    out: list[QSet] = []
    while len(out) < count:
        batch = []
        for size in fixed:
            batch.append(rng.sample(universe, min(max(size, 1), total)))
        for _ in range(2):
            batch.append(rng.sample(universe, rng.randint(1, total)))
        for _ in range(2):
            seed_rows = rng.sample(universe, min(rng.randint(1, 3), total))
            if gens is None:
                batch.append(seed_rows)
            else:
                batch.append(invariant_closure(gens, QSet(k, m, tuple(seed_rows))).rows)
        out += [QSet(k, m, tuple(rows)) for rows in batch]
    return out[:count]


def _instances(k: int, m: int, mode: str, samples: int, seed: int | None, gens: GeneratorSet):
    if m < 1:
        raise InputError("m must be >= 1")
    if mode == "exhaustive":
        return all_qsets(k, m)
    if mode == "sampled":
        return sample_qsets(k, m, samples, seed, gens)
    raise InputError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- the theorems


@dataclass(frozen=True)
class _Sides:
    left: bool
    right: bool
    detail: str = ""


def _check_parts(gens: GeneratorSet, H: QSet, inv_parts, dec_parts, extra: Sequence[tuple[str, bool]] = ()) -> _Sides:
    left = in_inv(gens, H)
    bad = [P for P in inv_parts if not in_inv(gens, restrict_qset(H, P))]
    dec_ok = is_decomposable(H, SubsetFamily(H.m, tuple(dec_parts)))
    failed_extra = [name for name, ok in extra if not ok]
    right = not bad and dec_ok and not failed_extra
    bits = []
    if bad:
        bits.append(f"restrictions not invariant: {bad}")
    if not dec_ok:
        bits.append("not decomposable")
    bits += failed_extra
    return _Sides(left, right, "; ".join(bits))


def _singletons(m: int) -> list[tuple[int, ...]]:
    return [(q,) for q in range(m)]


def _nonempty(*sets: Sequence[int]) -> list[tuple[int, ...]]:
    return [tuple(s) for s in sets if s]


def theorem_sides(which: str, gens: GeneratorSet, H: QSet, n: int | None = None) -> _Sides:
    """Left side (invariance) and right side (restrictions plus decomposition)."""
    fam = index_families(H, n or 3)
    singles = _singletons(H.m)
    perm, disj = list(fam.permutation_pairs), list(fam.disjunctive_pairs)
    if which == "partial":
        parts = singles + perm + disj
        return _check_parts(gens, H, parts, parts)
    if which == "s3":
        parts = singles + perm + _nonempty(fam.small_columns)
        return _check_parts(gens, H, parts, parts)
    if which == "d2":
        blocks = _nonempty(*fam.within.values())
        return _check_parts(gens, H, singles + blocks, singles + list(fam.identity_pairs) + blocks)
    raise InputError(f"unknown theorem {which!r}")


def theorem_premise(which: str, gens: GeneratorSet, n: int | None = None) -> dict:
    """Check the richness condition a theorem needs; raise when it fails."""
    if which == "partial":
        rep = delta_partial(gens)
        if rep.holds and not rep.vacuous:
            return {"variant": "a"}
        if has_d_function(gens):
            return {"variant": "b"}
        raise PremiseError("the clone neither satisfies the majority-pattern richness condition nor has a majority-pattern member")
    if which == "s3":
        candidates = [n] if n is not None else list(range(3, max(3, gens.k) + 1))
        for cand in candidates:
            if cand < 3:
                raise InputError("n must be >= 3")
            rep = delta_s(gens, cand)
            if rep.holds:
                return {"n": cand, "vacuous": rep.vacuous}
        raise PremiseError(f"no n in {candidates} satisfies the rank-n richness condition")
    if which == "d2":
        rep = delta_2(gens)
        if rep.holds:
            return {"vacuous": rep.vacuous}
        raise PremiseError(f"the binary richness condition fails at {rep.counterexample}")
    raise InputError(f"unknown theorem {which!r}")


def _bundle(statement: str, name: str, H: QSet, sides: _Sides, **extra) -> dict:
    side = "if" if sides.right else "only if"
    return plain({
        "statement": statement,
        "clone": name,
        "k": H.k,
        "m": H.m,
        "rows": [list(r) for r in H.rows],
        "side": side,
        "left": sides.left,
        "right": sides.right,
        "artifact_bug": side == "if",
        "detail": sides.detail,
        **extra,
    })


def verify_decomposition_theorem(
    which: str,
    gens: GeneratorSet,
    m: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int | None = None,
    n: int | None = None,
    name: str = "gens",
) -> VerificationReport:
    premise = theorem_premise(which, gens, n)
    if which == "s3":
        n = premise["n"]
    report = VerificationReport(f"decomposition:{which}", mode, seed if mode == "sampled" else None)
    report.notes.update(premise)
    for H in _instances(gens.k, m, mode, samples, seed, gens):
        if premise.get("variant") == "b" and any(len(H.column(q)) > 2 for q in range(m)):
            report.skipped += 1
            continue
        report.instances += 1
        sides = theorem_sides(which, gens, H, n)
        if sides.left != sides.right:
            report.failures.append(_bundle(report.statement, name, H, sides, which=which, n=n))
    return report


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class CaseData:
    case: int
    r: object
    pi0: object


@lru_cache(maxsize=64)
def case_data(gens: GeneratorSet) -> CaseData:
    r = arity_parameter(gens)
    pi0 = pi_zero(pi_family(gens, 3)) if r.exact and r.value < 4 else None
    R2 = relation_R(gens, 2) if r.exact and r.value == 2 else None
    return CaseData(case_tag(gens.k, r, pi0, R2), r, pi0)


def main_sides(data: CaseData, gens: GeneratorSet, H: QSet) -> _Sides:
    """Both sides of the case-specific characterization of invariant sets."""
    case = data.case
    m = H.m
    singles = _singletons(m)
    if case in (2, 6):
        fam = index_families(H, 3)
        parts = list(fam.permutation_pairs) + list(fam.disjunctive_pairs)
        return _check_parts(gens, H, parts, singles + parts)
    if case == 4:
        fam = index_families(H, 3)
        blocks = _nonempty(*fam.within.values())
        # restrictions land in B^P, where the restricted clone acts as the clone
        return _check_parts(gens, H, blocks, singles + list(fam.identity_pairs) + blocks)
    n = 3
    if case == 1:
        n = data.r.value if data.r.exact else None
    fam = index_families(H, n or 1)
    perm = list(fam.permutation_pairs)
    small = list(fam.small_columns) if n else list(range(m))
    extra: list[tuple[str, bool]] = []
    if case == 3:
        extra.append(("minority closure fails", minority_closure_ok(restrict_qset(H, small).rows) if small else True))
    elif case == 5:
        extra.append(("Klein closure fails", preserved_by_klein(data.pi0, restrict_qset(H, small).rows) if small else True))
    return _check_parts(gens, H, perm, singles + perm + _nonempty(small), extra)


def verify_main(
    entry: CloneCatalogEntry,
    m: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int | None = None,
) -> VerificationReport:
    data = case_data(entry.gens)
    if data.case != entry.expected_case:
        raise PremiseError(f"{entry.name} classifies as case {data.case}, expected {entry.expected_case}")
    report = VerificationReport(f"main:case{data.case}", mode, seed if mode == "sampled" else None)
    report.notes["case"] = data.case
    report.notes["r"] = str(data.r)
    for H in _instances(entry.k, m, mode, samples, seed, entry.gens):
        report.instances += 1
        sides = main_sides(data, entry.gens, H)
        if sides.left != sides.right:
            report.failures.append(_bundle(report.statement, entry.name, H, sides, case=data.case))
    return report


def replay(bundle: dict, gens: GeneratorSet) -> bool:
    """Re-run a theorem or classification bundle; true when it still fails."""
    H = QSet.of(bundle["k"], bundle["m"], bundle["rows"])
    if "which" in bundle:
        sides = theorem_sides(bundle["which"], gens, H, bundle.get("n"))
    elif "case" in bundle:
        data = case_data(gens)
        if data.case != bundle["case"]:
            raise PremiseError("the generators classify differently from the bundle")
        sides = main_sides(data, gens, H)
    else:
        raise InputError("bundle does not describe a replayable set check")
    return sides.left != sides.right


# ---------------------------------------------------------------- lemma suites


class _Suite:
    """Collects instances and failures for one sub-suite."""

    def __init__(self, statement: str, seed: int | None) -> None:
        self.report = VerificationReport(statement, "sampled" if seed is not None else "exhaustive", seed)

    def check(self, ok: bool, **detail) -> None:
        self.report.instances += 1
        if not ok:
            self.report.failures.append(plain({"statement": self.report.statement, **detail}))


def _random_rows(rng: random.Random, k: int, m: int, lo: int = 1, hi: int = 3) -> list[tuple[int, ...]]:
    universe = _universe(k, m)
    return rng.sample(universe, min(rng.randint(lo, hi), len(universe)))


def _random_invariant(rng: random.Random, gens: GeneratorSet, m: int) -> QSet:
    return invariant_closure(gens, QSet(gens.k, m, tuple(_random_rows(rng, gens.k, m))))


def _random_subset(rng: random.Random, k: int, m: int) -> QSet:
    universe = _universe(k, m)
    return QSet(k, m, tuple(rng.sample(universe, rng.randint(1, len(universe)))))


def _dims(entry: CloneCatalogEntry) -> list[int]:
    return [2, 3] if entry.k <= 3 else [2]


def _round_robin(entries: Sequence[CloneCatalogEntry], count: int):
    for i in range(count):
        yield i, entries[i % len(entries)]


def _suite_prop1(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("galois:restriction-laws", seed)
    for i, e in _round_robin(catalog, samples):
        m = rng.choice(_dims(e))
        H, G = _random_invariant(rng, e.gens, m), _random_invariant(rng, e.gens, m)
        target = [rng.randrange(m) for _ in range(rng.randint(1, m + 1))]
        P = sorted(rng.sample(range(m), rng.randint(1, m)))
        wider = m + rng.randint(0, 1)
        ok = (
            in_inv(e.gens, reindex(H, target))
            and in_inv(e.gens, restrict_qset(H, P))
            and in_inv(e.gens, extend_qset(H, list(range(m)), wider))
            and in_inv(e.gens, intersect(H, G))
        )
        s.check(ok, clone=e.name, rows=[list(r) for r in H.rows], other=[list(r) for r in G.rows], map=target, P=P)
    return s.report


_POL_CACHE: dict = {}


def _pol_of_inv(gens: GeneratorSet) -> frozenset[tuple[int, ...]]:
    """Tables up to arity 3 preserving every invariant set over 1 and 2 positions."""
    if gens not in _POL_CACHE:
        Hs = enumerate_inv(gens, 1) + enumerate_inv(gens, 2)
        pol = pol_bounded(Hs, 3, k=gens.k)
        _POL_CACHE[gens] = frozenset(f.table for f in pol.functions())
    return _POL_CACHE[gens]


def _suite_prop2(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("galois:connection-laws", seed)
    boolean = [e for e in catalog if e.k == 2]
    if not boolean:
        return s.report
    for i, e in _round_robin(boolean, samples):
        # sets side: more sets, fewer polymorphisms; and Hs inside Inv Pol Hs
        m = rng.choice([1, 2])
        Hs = [_random_subset(rng, 2, m) for _ in range(rng.randint(1, 2))]
        more = Hs + [_random_subset(rng, 2, m)]
        pol_small = pol_bounded(Hs, 3, k=2)
        pol_big = pol_bounded(more, 3, k=2)
        antitone_sets = set(pol_big.functions()) <= set(pol_small.functions())
        polys = GeneratorSet(2, tuple(f for f in pol_small.functions() if f.n > 1))
        extensive_sets = all(in_inv(polys, H) for H in Hs)
        # function side: more generators, fewer invariant sets; and F inside Pol Inv F
        members = list(e.gens.expanded())
        sub = GeneratorSet(2, tuple(rng.sample(members, rng.randint(0, min(2, len(members))))))
        H = _random_subset(rng, 2, rng.choice([2, 3]))
        antitone_funcs = not in_inv(e.gens, H) or in_inv(sub, H)
        slices = clone_slices(sub, 3)
        extensive_funcs = {f.table for f in slices.functions()} <= _pol_of_inv(sub)
        s.check(
            antitone_sets and extensive_sets and antitone_funcs and extensive_funcs,
            clone=e.name,
            sets=[[list(r) for r in X.rows] for X in more],
            laws=[antitone_sets, extensive_sets, antitone_funcs, extensive_funcs],
        )
    return s.report


def _suite_prop3(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("decomposition:cylinder-laws", seed)
    for i, e in _round_robin(catalog, samples):
        m = rng.choice(_dims(e))
        H = _random_subset(rng, e.k, m)
        fam = SubsetFamily.of(m, [rng.sample(range(m), rng.randint(1, m)) for _ in range(rng.randint(1, 3))])
        meet = intersection_of_cylinders(H, fam)
        contains = set(H.rows) <= set(meet.rows)
        same = all(restrict_qset(meet, R) == restrict_qset(H, R) for R in fam.sets)
        s.check(contains and same, k=e.k, rows=[list(r) for r in H.rows], family=[list(R) for R in fam.sets])
    return s.report


def _maps(k: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(k), repeat=k))


def rigidity_violations(gens: GeneratorSet, r: int, max_arity: int = 3) -> Iterable[tuple[tuple[int, ...], Cell, tuple]]:
    """Traces, cells of rank below r and maps sigma with ``f(sigma a) != sigma(f(a))``.

    Only cells of rank below r take part and sigma never raises the rank, so
    the slice projected onto those cells decides the claim exactly.
    """
    k = gens.k
    maps = _maps(k)
    for n in range(1, max_arity + 1):
        low = tuple(cells_of_rank(n, k, below=r))
        where = {c: i for i, c in enumerate(low)}
        for t in projected_traces(gens, n, low):
            for a, fa in zip(low, t):
                for sigma in maps:
                    if t[where[tuple(sigma[x] for x in a)]] != sigma[fa]:
                        yield t, a, sigma


def _suite_rigidity(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("conservative:rigidity", None)
    for e in catalog:
        r = arity_parameter(e.gens)
        if not r.exact or r.value < 3:
            continue
        bad = next(iter(rigidity_violations(e.gens, r.value, 3)), None)
        s.check(bad is None, clone=e.name, witness=bad)
    return s.report


def projection_violations(gens: GeneratorSet, r: int | None, max_arity: int) -> Iterable[tuple[int, tuple]]:
    """Traces on cells of rank below r (all cells when r is None) that match no projection."""
    k = gens.k
    for n in range(1, max_arity + 1):
        cells = tuple(cells_of_rank(n, k, below=r) if r else all_cells(n, k))
        if not cells:
            continue
        proj = {tuple(c[i] for c in cells) for i in range(n)}
        for t in projected_traces(gens, n, cells):
            if t not in proj:
                yield n, t


def _suite_projection(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("conservative:projection-below-r", None)
    for e in catalog:
        r = arity_parameter(e.gens)
        if r.exact and r.value < 4:
            continue
        bad = next(iter(projection_violations(e.gens, r.value if r.exact else None, max(4, e.k) if r.exact else max(3, e.k))), None)
        s.check(bad is None, clone=e.name, r=str(r), witness=bad)
    return s.report


def _separation_targets(catalog) -> list[tuple[CloneCatalogEntry, str, int]]:
    """Entries with a verified premise: ("partial", 3) or ("s", n).

    The case tag says which condition to try, which keeps the expensive
    ternary checks away from clones that cannot satisfy them.
    """
    out = []
    for e in catalog:
        data = case_data(e.gens)
        if data.case in (2, 6) or (e.k == 2 and data.case == 4):
            part = delta_partial(e.gens)
            if (part.holds and not part.vacuous) or (e.k == 2 and has_d_function(e.gens)):
                out.append((e, "partial", 3))
        elif data.case in (1, 3, 5) and data.r.exact:
            n = data.r.value if data.case == 1 else 3
            rep = delta_s(e.gens, n)
            if rep.holds and not rep.vacuous:
                out.append((e, "s", n))
    return out


def _suite_separation(catalog, rng, samples, seed, targets) -> VerificationReport:
    """Weak separation forces strong separation, and pair shapes are as listed."""
    s = _Suite("decomposition:separation", seed)
    if not targets:
        return s.report
    for i in range(samples):
        e, kind, n = targets[i % len(targets)]
        m = rng.choice(_dims(e))
        H = _random_invariant(rng, e.gens, m)
        ok = True
        for p, q in itertools.permutations(range(m), 2):
            if kind == "s" and len(H.column(q)) < n:
                continue
            for a in H.column(p):
                if weakly_separates(H, p, q, a) is not None and not strongly_separates(H, p, q, a):
                    ok = False
        small = set(index_families(H, n).small_columns)
        for p, q in itertools.combinations(range(m), 2):
            shape = pair_shape(H, p, q)
            if kind == "partial" and shape is None:
                ok = False
            if kind == "s" and not {p, q} <= small and shape not in ("box", "permutation"):
                ok = False
        s.check(ok, clone=e.name, rows=[list(r) for r in H.rows])
    return s.report


def random_rank_clone(rng: random.Random, k: int = 3, n: int = 3) -> GeneratorSet:
    """Symmetric closure of a conservative n-ary function that is a fixed
    projection below rank n and random on rank-n cells."""
    i = rng.randrange(n)
    f = FiniteFunction.from_callable(
        k, n, lambda *c: c[i] if len(set(c)) < n else rng.choice(c)
    )
    return symmetric_closure(GeneratorSet.of(k, [f]))


def _suite_all_indices(catalog, rng, samples, seed, targets) -> VerificationReport:
    s = _Suite("conditions:every-index", seed)
    pool = [(e.gens, n, e.name) for e, kind, n in targets if kind == "s"]
    attempts = 0
    while s.report.instances < samples and attempts < 20 * samples:
        attempts += 1
        if pool and attempts % 4 == 0:
            gens, n, name = pool[(attempts // 4) % len(pool)]
        else:
            gens, n, name = random_rank_clone(rng), 3, "random"
        rep = delta_s(gens, n)
        if not rep.holds or rep.vacuous:
            continue
        ok = all(delta_s_for_index(gens, n, j) for j in range(n))
        s.check(ok, clone=name, n=n, gens=[list(f.table) for f in gens.functions])
    return s.report


def _suite_triangles(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("conservative:triangle-relations", None)
    for e in catalog:
        r = arity_parameter(e.gens)
        if not (r.exact and r.value == 2):
            continue
        t0, t1 = triangle_rel(e.gens, 0), triangle_rel(e.gens, 1)
        R2 = relation_R(e.gens, 2).on_rank2()
        ok = t0.pairs == t1.pairs == R2 and triangle_case(t0) is not None
        s.check(ok, clone=e.name, case=triangle_case(t0))
    return s.report


def _suite_slices_invariant(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("galois:slices-are-invariant", seed)
    pool = [e for e in catalog if e.k <= 3]
    if not pool:
        return s.report
    for i, e in _round_robin(pool, samples):
        members = list(e.gens.expanded())
        if len(members) > 64:
            members = rng.sample(members, 64)
        sub = GeneratorSet(e.k, tuple(rng.sample(members, rng.randint(min(1, len(members)), min(3, len(members))))))
        n = rng.choice([1, 2, 3] if e.k == 2 else [1, 2])
        rows = slice_as_qset(clone_slices(sub, n), n)
        s.check(in_inv(sub, rows), clone=e.name, n=n, gens=[list(f.table) for f in sub.functions])
    return s.report


def delta_expectations(gens: GeneratorSet, data: CaseData) -> list[tuple[str, bool]]:
    """The richness conditions a clone of the given case must satisfy."""
    case, k = data.case, gens.k
    if case == 1:
        if not data.r.exact:
            return []
        return [(f"delta_s_{data.r.value}", delta_s(gens, data.r.value).holds)]
    if case in (2, 6):
        return [("delta_partial", delta_partial(gens).holds)]
    if case == 3:
        return [("delta_s_3", delta_s(gens, 3).holds)]
    if case == 4:
        return [("delta_2", delta_2(gens).holds)]
    out = [("delta_s_3", delta_s(gens, 3).holds)]
    for B in itertools.combinations(range(k), 3):
        out.append((f"delta_2 on {B}", delta_2(restrict_generators(gens, B)).holds))
    return out


def _suite_delta_by_case(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("conservative:richness-by-case", None)
    for e in catalog:
        data = case_data(e.gens)
        for name, ok in delta_expectations(e.gens, data):
            s.check(ok, clone=e.name, case=data.case, condition=name)
    return s.report


def observed_delta(gens: GeneratorSet, name: str) -> bool:
    """Whether a named richness condition holds non-vacuously."""
    if name == "delta_partial":
        rep = delta_partial(gens)
    elif name == "delta_2":
        rep = delta_2(gens)
    elif name.startswith("delta_s_"):
        rep = delta_s(gens, int(name.rsplit("_", 1)[1]))
    else:
        raise InputError(f"unknown condition {name!r}")
    return rep.holds and not rep.vacuous


def _suite_entries(catalog, rng, samples, seed) -> VerificationReport:
    s = _Suite("catalog:entries", None)
    for e in catalog:
        conservative = all(is_conservative(f) for f in e.gens.expanded())
        symmetric = conservative and is_symmetric(e.gens)
        s.check(symmetric, clone=e.name, property="conservative and symmetric")
        if not symmetric:
            continue
        case = case_of(e.gens)
        s.check(case == e.expected_case, clone=e.name, property="case", observed=case, expected=e.expected_case)
        if case != e.expected_case:
            # already broken; its condition profile may be far too costly to search
            continue
        for name, expected in sorted(e.expected_delta.items()):
            seen = observed_delta(e.gens, name)
            s.check(seen == expected, clone=e.name, property=name, observed=seen, expected=expected)
    return s.report


def verify_lemma_suite(
    catalog: Sequence[CloneCatalogEntry], seed: int = 0, samples: int = 100
) -> VerificationReport:
    """Run every sub-suite on the entries it applies to.

    Entries that fail the symmetry or classification checks are reported and
    kept out of the remaining sub-suites.
    """
    report = VerificationReport("lemmas", "sampled", seed)
    if not catalog:
        return report
    rng = random.Random(seed)
    entries = _suite_entries(catalog, rng, samples, seed)
    report.parts.append(entries)
    broken = {f["clone"] for f in entries.failures}
    good = [e for e in catalog if e.name not in broken]
    if not good:
        return report
    targets = _separation_targets(good)
    suites: list[Callable] = [
        _suite_prop1,
        _suite_prop2,
        _suite_prop3,
        _suite_rigidity,
        _suite_projection,
        _suite_triangles,
        _suite_slices_invariant,
        _suite_delta_by_case,
    ]
    for suite in suites:
        report.parts.append(suite(good, rng, samples, seed))
    report.parts.append(_suite_separation(good, rng, samples, seed, targets))
    report.parts.append(_suite_all_indices(good, rng, samples, seed, targets))
    return report


# ---------------------------------------------------------------- uniqueness


def _windows(k: int, n: int) -> list[tuple[Cell, ...]]:
    cells = all_cells(n, k)
    if len(cells) <= 9:
        return [tuple(cells)]
    return [tuple(w) for w in itertools.combinations(cells, 2)]


def slices_agree(a: GeneratorSet, b: GeneratorSet, bound: int) -> bool:
    """Equal slices up to ``bound``: whole tables where the cube is small,
    else every projection onto two cells."""
    if a.k != b.k:
        return False
    for n in range(1, bound + 1):
        for w in _windows(a.k, n):
            if set(projected_traces(a, n, w)) != set(projected_traces(b, n, w)):
                return False
    return True


def chi_injectivity_check(catalog: Sequence[CloneCatalogEntry], bound: int = 3) -> VerificationReport:
    """Distinct slices must come with distinct characteristics."""
    report = VerificationReport("characteristic:injective", "exhaustive")
    chis = {e.name: characteristic(e.gens, bound) for e in catalog}
    duplicates = []
    for a, b in itertools.combinations(catalog, 2):
        if a.k != b.k:
            continue
        if slices_agree(a.gens, b.gens, bound):
            duplicates.append([a.name, b.name])
            report.skipped += 1
            continue
        report.instances += 1
        diff = chi_difference(chis[a.name], chis[b.name])
        if not diff:
            report.failures.append({"statement": report.statement, "clones": [a.name, b.name], "side": "equal characteristics"})
    report.notes["identical_slices"] = duplicates
    return report

