"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import itertools
from contextlib import contextmanager

from clonekit import (
    FiniteFunction,
    GeneratorSet,
    PostClassId,
    builtin_catalog,
    chi_injectivity_check,
    compose,
    delta_s,
    identify_generated,
    in_inv,
    oracle_in_inv,
    projection,
    relation_R,
    special_relation,
    triangle_case,
    triangle_rel,
    uv_pair,
    verify_decomposition_theorem,
    verify_lemma_suite,
)
from clonekit.catalog import catalog_entry
from clonekit.characteristic import arity_parameter
from clonekit.core import classify_function, majority_value
from clonekit.post import NAMED, dual_set, semantic_slice
from clonekit.verify import all_qsets, projection_violations, rigidity_violations, sample_qsets, theorem_premise

from conftest import MAJ, XOR


@contextmanager
def criterion(capsys, number, text):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}")


def _theorem_runs(which, gens, samples, seed):
    premise = theorem_premise(which, gens)
    small = verify_decomposition_theorem(which, gens, 2, "exhaustive")
    large = verify_decomposition_theorem(which, gens, 3, "sampled", samples=samples, seed=seed)
    return premise, small, large


def test_uv_composite_is_a_majority_pattern_function(capsys):
    with criterion(capsys, 1, "u/v composite satisfies the majority identities on all 27 cells"):
        u, v = uv_pair()
        x = [projection(3, 3, i) for i in range(3)]
        f = compose(v, [compose(v, [compose(u, [x[0], x[1]]), compose(u, [x[0], x[2]])]), compose(u, [x[1], x[2]])])
        cells = list(itertools.product(range(3), repeat=3))
        assert len(cells) == 27
        for cell in cells:
            maj = majority_value(cell)
            if maj is not None:
                assert f(*cell) == maj
            assert f(*cell) in cell
        for a, b in itertools.product(range(3), repeat=2):
            assert f(a, a, b) == f(a, b, a) == f(b, a, a) == a
        assert classify_function(f).is_d_function


def test_boolean_class_identification(capsys):
    with criterion(capsys, 2, "six Boolean classes distinct, nested, duality-closed, identified from generators"):
        slices = {name: semantic_slice(PostClassId(name), 3) for name in NAMED}
        members = {name: frozenset(fs.functions()) for name, fs in slices.items()}
        assert len(set(members.values())) == 6
        assert members["L4"] | members["D2"] <= members["D1"]
        for fs in slices.values():
            assert dual_set(fs) == fs
        odd = FiniteFunction.from_callable(2, 3, lambda x, y, z: ((1 - x) & y) | ((1 - x) & z) | (y & z))
        assert odd.table == (0, 1, 1, 1, 0, 0, 0, 1)
        assert identify_generated(GeneratorSet.of(2, [MAJ])) == PostClassId("D2")
        assert identify_generated(GeneratorSet.of(2, [XOR])) == PostClassId("L4")
        assert identify_generated(GeneratorSet.of(2, [odd])) == PostClassId("D1")
        assert identify_generated(GeneratorSet(2)) == PostClassId("O1")


def test_binary_richness_theorem(capsys):
    with criterion(capsys, 3, "binary theorem on all binary conservative functions: 511 exhaustive + 10,000 sampled"):
        gens = catalog_entry("3/cons2").gens
        premise, small, large = _theorem_runs("d2", gens, 10_000, seed=20240301)
        assert premise == {"vacuous": False}
        assert small.instances == 511 and small.passed
        assert large.instances == 10_000 and large.passed


def test_majority_pattern_theorem(capsys):
    with criterion(capsys, 4, "majority-pattern theorem on symmetric <u,v>: 511 exhaustive + 2,000 sampled"):
        gens = catalog_entry("3/uv").gens
        premise, small, large = _theorem_runs("partial", gens, 2_000, seed=20240302)
        assert premise == {"variant": "a"}
        assert small.instances == 511 and small.passed
        assert large.instances == 2_000 and large.passed and large.skipped == 0


def test_rank_three_theorem(capsys):
    with criterion(capsys, 5, "rank-3 theorem on all minority-pattern functions: 511 exhaustive + 2,000 sampled"):
        gens = catalog_entry("3/L3").gens
        rep = delta_s(gens, 3)
        assert rep.holds and not rep.vacuous
        premise, small, large = _theorem_runs("s3", gens, 2_000, seed=20240303)
        assert premise["n"] == 3
        assert small.instances == 511 and small.passed
        assert large.instances == 2_000 and large.passed


def test_special_relations(capsys):
    with criterion(capsys, 6, "binary relation of <u,v> is the uparrow relation, of the Klein clone the pm relation"):
        uv = relation_R(catalog_entry("3/uv").gens, 2).on_rank2()
        klein = relation_R(catalog_entry("4/klein").gens, 2).on_rank2()
        assert uv == special_relation("uparrow", 3).pairs
        assert klein == special_relation("pm", 4).pairs


def test_triangle_relations(capsys):
    with criterion(capsys, 7, "both triangle relations equal the binary relation for every r=2 entry"):
        seen = []
        for k in (2, 3, 4):
            for entry in builtin_catalog(k):
                r = arity_parameter(entry.gens)
                if not (r.exact and r.value == 2):
                    continue
                t0, t1 = triangle_rel(entry.gens, 0), triangle_rel(entry.gens, 1)
                assert t0.pairs == t1.pairs == relation_R(entry.gens, 2).on_rank2()
                assert triangle_case(t0) is not None
                seen.append(entry.name)
        assert sorted(seen) == ["A4", "C4", "cons2", "klein", "uv"]


def test_rigidity(capsys):
    with criterion(capsys, 8, "minority clone rigid below rank 3; rank-4 clone is projective below rank 4"):
        ell = catalog_entry("3/L3").gens
        assert next(iter(rigidity_violations(ell, 3, 3)), None) is None
        rank4 = catalog_entry("4/rank4").gens
        assert str(arity_parameter(rank4)) == "4"
        assert next(iter(projection_violations(rank4, 4, 4)), None) is None


def test_property_suites(capsys):
    with criterion(capsys, 9, "lemma and proposition suites, >= 100 seeded instances each, zero failures"):
        catalog = [e for k in (2, 3, 4) for e in builtin_catalog(k)]
        report = verify_lemma_suite(catalog, seed=20240309, samples=100)
        counts = {p.statement: p.instances for p in report.parts}
        for statement in (
            "galois:restriction-laws",
            "galois:connection-laws",
            "decomposition:cylinder-laws",
            "decomposition:separation",
            "conditions:every-index",
            "galois:slices-are-invariant",
        ):
            assert counts[statement] >= 100, statement
        assert report.all_failures() == []
        assert report.passed


def test_characteristic_injectivity(capsys):
    with criterion(capsys, 10, "distinct clones have distinct characteristics on the two- and three-element catalogs"):
        two = chi_injectivity_check(builtin_catalog(2), bound=3)
        three = chi_injectivity_check(builtin_catalog(3), bound=3)
        assert two.instances == 15 and two.passed
        assert three.instances == 10 and three.passed
        assert two.skipped == three.skipped == 0


def test_oracle_agreement(capsys):
    with criterion(capsys, 11, "fixpoint invariance agrees with the naive oracle: exhaustive k=2, 500 sampled k=3"):
        checked = 0
        for f in (MAJ, XOR):
            gens = GeneratorSet.of(2, [f])
            for m in (1, 2, 3):
                for H in all_qsets(2, m):
                    assert in_inv(gens, H) == oracle_in_inv(gens, H)
                    checked += 1
        assert checked == 2 * (3 + 15 + 255)
        clones = [catalog_entry(name).gens for name in ("3/uv", "3/disc3", "3/E3")]
        sampled = 0
        for i, gens in enumerate(clones):
            for m in (2, 3):
                count = 84 if i < 2 else 82
                for H in sample_qsets(3, m, count, seed=20240311 + 10 * i + m, gens=gens):
                    assert in_inv(gens, H) == oracle_in_inv(gens, H)
                    sampled += 1
        assert sampled == 500
