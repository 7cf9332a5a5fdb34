import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonekit import (
    CellFamily,
    FiniteFunction,
    GeneratorSet,
    InputError,
    delta_2,
    delta_partial,
    delta_s,
    klein_rank2_slice,
    projection,
    special_relation,
    symmetric_closure,
    triangle_case,
    triangle_rel,
    uv_pair,
)
from clonekit.catalog import catalog_entry, discriminator, ell_family, klein_binary_functions
from clonekit.conditions import (
    has_d_function,
    has_l_function,
    is_klein_P_function,
    klein_group,
    klein_traces,
    minority_closure_ok,
    pair_type,
    preserved_by_klein,
    rank2_pairs,
)
from clonekit.core import minority_value
from clonekit.post import D1, D2, L4, O1

UV = catalog_entry("3/uv").gens
L3 = catalog_entry("3/L3").gens
CONS2 = catalog_entry("3/cons2").gens
KLEIN = catalog_entry("4/klein").gens
ELL = GeneratorSet.of(
    3, [FiniteFunction.from_callable(3, 3, lambda x, y, z: minority_value((x, y, z)) if len({x, y, z}) < 3 else x)]
)


def test_rank_n_condition():
    assert delta_s(L3, 3).holds
    assert not delta_s(GeneratorSet(3), 3).holds
    assert delta_s(KLEIN, 3).holds
    assert delta_s(GeneratorSet(2), 3).vacuous


def test_rank_n_condition_witnesses_are_traces():
    rep = delta_s(L3, 3)
    assert rep.witnesses
    assert rep.witness_index in (0, 1, 2)


def test_majority_pattern_condition():
    assert delta_partial(UV).holds
    assert delta_partial(symmetric_closure(GeneratorSet.of(3, [discriminator(3)]))).holds
    assert not delta_partial(symmetric_closure(ELL)).holds
    assert not delta_partial(L3).holds


def test_binary_condition():
    assert delta_2(CONS2).holds
    assert not delta_2(UV).holds
    rep = delta_2(GeneratorSet(3))
    assert not rep.holds and rep.counterexample is not None


def test_binary_condition_is_vacuous_on_two_elements():
    rep = delta_2(GeneratorSet(2))
    assert rep.holds and rep.vacuous


def test_pattern_members():
    assert has_d_function(UV)
    assert not has_d_function(L3)
    assert has_l_function(L3)
    assert not has_l_function(GeneratorSet(3))


def test_special_relations():
    up = special_relation("uparrow", 3)
    assert ((0, 1), (1, 2)) in up
    assert ((0, 1), (1, 0)) not in up
    pm = special_relation("pm", 4)
    assert ((0, 1), (2, 3)) in pm
    assert ((0, 1), (0, 2)) not in pm
    with pytest.raises(InputError):
        special_relation("uparrow", 4)
    with pytest.raises(InputError):
        special_relation("pm", 3)


def test_pair_types():
    assert pair_type((0, 1), (0, 1)) == "0"
    assert pair_type((0, 1), (1, 0)) == "1"
    assert pair_type((0, 1), (1, 2)) == "10"
    assert pair_type((0, 1), (0, 2)) == "00"
    assert pair_type((0, 1), (2, 3)) == "2"
    with pytest.raises(InputError):
        pair_type((0, 0), (0, 1))


@given(st.sampled_from(rank2_pairs(4)), st.sampled_from(rank2_pairs(4)))
def test_pair_type_swap_symmetry(x, y):
    swapped = pair_type(y, x)
    t = pair_type(x, y)
    assert swapped == (t[::-1] if len(t) == 2 else t)


def test_triangle_relations():
    up = special_relation("uparrow", 3)
    for i in (0, 1):
        assert triangle_rel(UV, i).pairs == up.pairs
    assert triangle_case(triangle_rel(UV, 0)) == 5
    assert triangle_case(triangle_rel(CONS2, 0)) == 2
    full = triangle_rel(GeneratorSet(3), 0)
    assert len(full) == len(rank2_pairs(3)) ** 2
    assert triangle_case(full) == 1


def test_only_equal_pairs_for_all_binary_conservative():
    assert {pair_type(x, y) for x, y in triangle_rel(CONS2, 1).pairs} == {"0"}


def test_uv_tables():
    u, v = uv_pair()
    assert (u(0, 2), u(1, 2), v(1, 2), v(0, 2)) == (0, 2, 1, 2)
    with pytest.raises(InputError):
        uv_pair(4)


def test_klein_group():
    group = klein_group()
    assert len(group) == 4
    ident = group[0]
    assert ident.image == (0, 1, 2, 3)
    for s in group[1:]:
        assert all(s(x) != x and s(s(x)) == x for x in range(4))
    images = {s.image for s in group}
    assert all(s.then(t).image in images for s, t in itertools.product(group, repeat=2))


def test_klein_functions():
    for n in (2, 3):
        for i in range(n):
            assert is_klein_P_function(projection(4, n, i), O1)
    mixed = klein_binary_functions()
    assert all(is_klein_P_function(f, O1) for f in mixed)
    assert all(f not in (projection(4, 2, 0), projection(4, 2, 1)) for f in mixed)
    broken = list(projection(4, 2, 0).table)
    broken[1] = 1
    assert not is_klein_P_function(FiniteFunction(4, 2, tuple(broken)), O1)


def test_klein_binary_slice():
    cells, traces = klein_rank2_slice(O1, 2)
    assert len(cells) == 16
    assert len(traces) == 8
    for i in range(2):
        assert tuple(c[i] for c in cells) in traces


def test_klein_traces_grow_with_the_class():
    cells, _ = klein_rank2_slice(O1, 3)
    assert set(klein_traces(O1, cells)) <= set(klein_traces(D2, cells)) <= set(klein_traces(D1, cells))
    assert set(klein_traces(O1, cells)) <= set(klein_traces(L4, cells))


def test_closure_helpers():
    rows = [(0, 0), (1, 1)]
    assert preserved_by_klein(O1, rows)
    assert minority_closure_ok([(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)])
    assert not minority_closure_ok([(0, 0), (0, 1), (1, 0)])
