import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonekit import (
    CapacityError,
    CellFamily,
    GeneratorSet,
    InputError,
    QSet,
    enumerate_inv,
    in_inv,
    invariant_closure,
    pol_bounded,
    preserves,
    projection,
)
from clonekit.clone import conservative_slice
from clonekit.clone import clone_slices
from clonekit.galois import extend_qset, intersect, reindex, restrict_qset, slice_as_qset
from clonekit.catalog import catalog_entry
from clonekit.verify import oracle_in_inv

from conftest import EVEN, MAJ, XOR


def qsets(k=2, max_m=3):
    return st.integers(1, max_m).flatmap(
        lambda m: st.lists(st.tuples(*[st.integers(0, k - 1)] * m), min_size=1, max_size=k**m).map(
            lambda rows: QSet.of(k, m, rows)
        )
    )


def test_qset_validation():
    with pytest.raises(InputError):
        QSet.of(2, 2, [(0, 2)])
    with pytest.raises(InputError):
        QSet.of(2, 2, [(0,)])
    assert QSet.of(2, 1, [(1,), (1,), (0,)]).rows == ((0,), (1,))


def test_preserves_examples():
    assert preserves(XOR, EVEN)
    assert not preserves(MAJ, EVEN)
    full = QSet.full(2, 3)
    assert preserves(MAJ, full) and preserves(XOR, full)


def test_majority_witness_on_even_rows():
    rows = [(0, 0, 0), (0, 1, 1), (1, 0, 1)]
    image = tuple(MAJ(*col) for col in zip(*rows))
    assert image == (0, 0, 1) and image not in EVEN


def test_in_inv_examples(maj_gens, xor_gens):
    assert in_inv(xor_gens, EVEN)
    assert not in_inv(maj_gens, EVEN)
    assert in_inv(maj_gens, QSet.full(2, 3))


def test_in_inv_carrier_mismatch(maj_gens):
    with pytest.raises(InputError):
        in_inv(maj_gens, QSet.full(3, 2))


def test_invariant_closure_examples(maj_gens):
    start = QSet.of(2, 3, [(0, 0, 0), (0, 1, 1), (1, 0, 1)])
    closed = invariant_closure(maj_gens, start)
    assert (0, 0, 1) in closed
    assert set(start.rows) <= set(closed.rows)
    assert in_inv(maj_gens, closed)
    single = QSet.of(2, 3, [(1, 0, 1)])
    assert invariant_closure(maj_gens, single) == single
    assert invariant_closure(GeneratorSet(2), start) == start


def test_enumerate_inv_counts(maj_gens, xor_gens):
    assert len(enumerate_inv(maj_gens, 2)) == 15
    xor_sets = enumerate_inv(xor_gens, 2)
    assert len(xor_sets) == 11
    assert sorted(len(H) for H in xor_sets) == [1] * 4 + [2] * 6 + [4]
    assert [H.rows for H in enumerate_inv(GeneratorSet(2), 1)] == [((0,),), ((1,),), ((0,), (1,))]


def test_enumerate_inv_cap(maj_gens):
    with pytest.raises(CapacityError):
        enumerate_inv(maj_gens, 5)


def test_pol_of_even_rows():
    pol = pol_bounded([EVEN], 3)
    assert XOR in pol.arity(3) and MAJ not in pol.arity(3)


def test_pol_of_unary_subsets_is_conservative():
    subsets = [QSet.of(3, 1, [(a,) for a in B]) for size in (1, 2) for B in itertools.combinations(range(3), size)]
    pol = pol_bounded(subsets, 2)
    assert set(pol.arity(2)) == set(conservative_slice(3, 2).arity(2))


def test_pol_of_unary_singletons_is_idempotent():
    singletons = [QSet.of(3, 1, [(a,)]) for a in range(3)]
    members = pol_bounded(singletons, 2).arity(2)
    assert len(members) == 3**6
    assert all(f(a, a) == a for f in members for a in range(3))


def test_pol_of_nothing_is_everything():
    assert len(pol_bounded([], 2, k=2).arity(2)) == 16
    with pytest.raises(InputError):
        pol_bounded([], 2)


def test_restriction_operations_examples():
    assert reindex(EVEN, (0, 1, 2)) == EVEN
    assert reindex(EVEN, (0, 1)) == QSet.full(2, 2)
    assert reindex(EVEN, (2, 2)).rows == ((0, 0), (1, 1))
    assert restrict_qset(EVEN, (0, 1)) == QSet.full(2, 2)
    assert restrict_qset(EVEN, (1,)).rows == ((0,), (1,))
    assert extend_qset(QSet.of(2, 1, [(0,)]), (0,), 2).rows == ((0, 0), (0, 1))
    assert extend_qset(QSet.full(2, 2), (0, 1), 3) == QSet.full(2, 3)
    assert extend_qset(EVEN, (0, 1, 2), 3) == EVEN


def test_oracle_agrees_on_small_sets(maj_gens):
    sets = enumerate_inv(GeneratorSet(2), 2)
    assert len(sets) == 15
    for H in sets:
        assert oracle_in_inv(maj_gens, H) == in_inv(maj_gens, H)
    assert oracle_in_inv(maj_gens, QSet.full(2, 2))
    assert not oracle_in_inv(maj_gens, EVEN)


@given(qsets())
def test_closure_is_least_invariant_superset(H):
    gens = GeneratorSet.of(2, [MAJ])
    closed = invariant_closure(gens, H)
    assert set(H.rows) <= set(closed.rows)
    assert in_inv(gens, closed)
    assert invariant_closure(gens, closed) == closed


@given(qsets(), st.sampled_from([MAJ, XOR]))
def test_in_inv_matches_preserves_for_one_generator(H, f):
    assert in_inv(GeneratorSet.of(2, [f]), H) == preserves(f, H)


@given(qsets(), st.data())
def test_invariance_survives_reindexing(H, data):
    gens = GeneratorSet.of(2, [XOR])
    closed = invariant_closure(gens, H)
    f = data.draw(st.lists(st.integers(0, H.m - 1), min_size=1, max_size=3))
    assert in_inv(gens, reindex(closed, f))


@given(qsets(), qsets())
def test_invariant_sets_meet_in_invariant_sets(H, G):
    if H.m != G.m:
        return
    gens = GeneratorSet.of(2, [MAJ])
    meet = intersect(invariant_closure(gens, H), invariant_closure(gens, G))
    assert in_inv(gens, meet)


@given(qsets(max_m=2), st.data())
def test_restrict_then_extend_contains_original(H, data):
    P = sorted(data.draw(st.sets(st.integers(0, H.m - 1), min_size=1)))
    assert set(H.rows) <= set(extend_qset(restrict_qset(H, P), P, H.m).rows)
    assert restrict_qset(extend_qset(restrict_qset(H, P), P, H.m), P) == restrict_qset(H, P)


@given(st.lists(st.tuples(st.integers(0, 2)), min_size=1, max_size=3))
def test_projections_preserve_everything(rows):
    H = QSet.of(3, 1, rows)
    for n, i in itertools.product((1, 2, 3), range(3)):
        if i < n:
            assert preserves(projection(3, n, i), H)


def test_conservative_family_invariance_matches_members():
    fam = CellFamily.conservative(2, 2)
    gens = GeneratorSet(2, (), (fam,))
    for H in enumerate_inv(GeneratorSet(2), 2):
        assert in_inv(gens, H) == all(preserves(f, H) for f in fam.members())


def test_galois_laws_for_majority(maj_gens):
    sets = enumerate_inv(maj_gens, 2)
    members = clone_slices(maj_gens, 3)
    for H in sets:
        assert all(preserves(f, H) for f in members.functions())
    pol = pol_bounded(sets, 3)
    assert MAJ in pol.arity(3)
    assert set(members.arity(3)) <= set(pol.arity(3))


@given(st.lists(qsets(max_m=2), max_size=3), st.lists(qsets(max_m=2), max_size=2))
def test_more_sets_fewer_polymorphisms(Hs, extra):
    few = pol_bounded(Hs, 2, k=2)
    more = pol_bounded(Hs + extra, 2, k=2)
    assert set(more.functions()) <= set(few.functions())


@pytest.mark.parametrize("gens", [GeneratorSet.of(2, [MAJ]), catalog_entry("3/uv").gens], ids=["maj", "uv"])
@pytest.mark.parametrize("n", [2, 3])
def test_slices_are_invariant(gens, n):
    rows = slice_as_qset(clone_slices(gens, n), n)
    assert in_inv(gens, rows)
