import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonekit import CellFamily, FiniteFunction, InputError, Permutation, classify_function, compose, conjugate, identify_vars, projection
from clonekit.conditions import uv_pair
from clonekit.core import apply, decode_tuple, encode_tuple, is_conservative

from conftest import MAJ, XOR


def functions(max_k=3, max_n=3):
    return st.integers(2, max_k).flatmap(
        lambda k: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.integers(0, k - 1), min_size=k**n, max_size=k**n).map(
                lambda t: FiniteFunction(k, n, tuple(t))
            )
        )
    )


def test_encode_examples():
    assert encode_tuple((2, 0, 1), 3) == 19
    assert encode_tuple((0, 0, 0), 2) == 0
    assert encode_tuple((3,), 4) == 3


def test_decode_examples():
    assert decode_tuple(19, 3, 3) == (2, 0, 1)
    assert decode_tuple(0, 2, 2) == (0, 0)
    assert decode_tuple(5, 2, 3) == (1, 2)


def test_encode_rejects_out_of_range():
    with pytest.raises(InputError):
        encode_tuple((3,), 3)
    with pytest.raises(InputError):
        decode_tuple(9, 2, 3)


@given(st.integers(2, 4), st.integers(1, 5), st.data())
def test_decode_inverts_encode(k, n, data):
    index = data.draw(st.integers(0, k**n - 1))
    assert encode_tuple(decode_tuple(index, n, k), k) == index


def test_projection_tables():
    assert projection(2, 2, 1).table == (0, 1, 0, 1)
    assert projection(3, 1, 0).table == (0, 1, 2)
    assert projection(3, 2, 0).table == (0, 0, 0, 1, 1, 1, 2, 2, 2)
    with pytest.raises(InputError):
        projection(2, 2, 2)


def test_apply_uv():
    u, v = uv_pair()
    assert apply(u, (0, 2)) == 0
    assert apply(v, (1, 2)) == 1
    assert u(1, 2) == 2
    assert v(0, 2) == 2
    assert all(u(x, x) == x and v(x, x) == x for x in range(3))


def test_bad_tables_rejected():
    with pytest.raises(InputError):
        FiniteFunction(2, 2, (0, 1, 1))
    with pytest.raises(InputError):
        FiniteFunction(2, 1, (0, 2))
    with pytest.raises(InputError):
        FiniteFunction(1, 1, (0,))


def test_uv_composite_at_012():
    u, v = uv_pair()
    e = [projection(3, 3, i) for i in range(3)]
    u01, u02, u12 = compose(u, [e[0], e[1]]), compose(u, [e[0], e[2]]), compose(u, [e[1], e[2]])
    f = compose(v, [compose(v, [u01, u02]), u12])
    assert f(0, 1, 2) == 2


def test_compose_with_projections():
    g, h = FiniteFunction(2, 2, (0, 0, 0, 1)), FiniteFunction(2, 2, (0, 1, 1, 1))
    assert compose(projection(2, 2, 0), [g, h]) == g
    assert compose(MAJ, [projection(2, 3, i) for i in range(3)]) == MAJ


def test_compose_rejects_mismatch():
    with pytest.raises(InputError):
        compose(MAJ, [projection(2, 3, 0)])
    with pytest.raises(InputError):
        compose(projection(2, 2, 0), [projection(2, 2, 0), projection(2, 3, 0)])


@given(functions())
def test_compose_identity_law(f):
    assert compose(f, [projection(f.k, f.n, i) for i in range(f.n)]) == f


def test_conjugate_examples():
    u, _ = uv_pair()
    swap = Permutation((1, 0, 2))
    expected = FiniteFunction.from_callable(3, 2, lambda x, y: swap.image[u(swap.image[x], swap.image[y])])
    assert conjugate(u, swap) == expected
    assert conjugate(u, Permutation.identity(3)) == u
    for sigma in Permutation.all(3):
        assert conjugate(projection(3, 2, 1), sigma) == projection(3, 2, 1)


@given(functions(max_k=4, max_n=2), st.data())
def test_conjugate_is_an_action(f, data):
    perms = st.permutations(range(f.k)).map(Permutation)
    s, t = data.draw(perms), data.draw(perms)
    assert conjugate(conjugate(f, s), s.inverse()) == f
    assert conjugate(conjugate(f, s), t) == conjugate(f, t.then(s))


def test_permutation_validation():
    with pytest.raises(InputError):
        Permutation((0, 0, 1))


def test_identify_vars_examples():
    f = FiniteFunction(2, 2, (1, 0, 1, 0))
    assert identify_vars(f, (0, 0), 1).table == (1, 0)
    assert identify_vars(MAJ, (0, 0, 1), 2) == projection(2, 2, 0)
    assert identify_vars(MAJ, (0, 1, 2), 3) == MAJ


@given(functions(max_k=3, max_n=3), st.data())
def test_identify_vars_matches_pointwise(f, data):
    m = data.draw(st.integers(1, 3))
    xi = data.draw(st.lists(st.integers(0, m - 1), min_size=f.n, max_size=f.n))
    g = identify_vars(f, xi, m)
    for cell in itertools.product(range(f.k), repeat=m):
        assert g(*cell) == f(*(cell[j] for j in xi))


def test_classify_function():
    maj = classify_function(MAJ)
    assert (maj.is_conservative, maj.is_idempotent, maj.is_d_function, maj.is_l_function) == (True, True, True, False)
    xor = classify_function(XOR)
    assert (xor.is_conservative, xor.is_idempotent, xor.is_d_function, xor.is_l_function) == (True, True, False, True)
    proj = classify_function(projection(2, 3, 1))
    assert proj.projection_index == 1 and proj.is_projection
    assert proj.is_conservative and proj.is_idempotent
    assert not proj.is_d_function and not proj.is_l_function


@given(functions())
def test_conservative_implies_idempotent(f):
    report = classify_function(f)
    assert report.is_conservative == is_conservative(f)
    if report.is_conservative:
        assert report.is_idempotent


def test_cell_family_members():
    fam = CellFamily.conservative(3, 2)
    assert fam.size() == 64
    assert fam.is_conservative()
    assert all(is_conservative(f) for f in fam.members())
    assert CellFamily.single(MAJ).size() == 1
    assert CellFamily.single(MAJ).contains(MAJ)
    assert not CellFamily.single(MAJ).contains(XOR)


def test_cell_family_rejects_empty_mask():
    with pytest.raises(InputError):
        CellFamily(2, 1, (0, 1))


@given(st.permutations(range(3)))
def test_cell_family_conjugation_matches_members(image):
    u, _ = uv_pair()
    sigma = Permutation(tuple(image))
    fam = CellFamily.from_rule(3, 2, lambda c: {u(*c), c[0]})
    moved = {conjugate(f, sigma) for f in fam.members()}
    assert moved == set(fam.conjugate(sigma).members())


@given(functions(max_k=3, max_n=2), st.data())
def test_composition_is_evaluated_cellwise(f, data):
    m = data.draw(st.integers(1, 2))
    inner = st.lists(st.integers(0, f.k - 1), min_size=f.k**m, max_size=f.k**m).map(lambda t: FiniteFunction(f.k, m, tuple(t)))
    gs = data.draw(st.lists(inner, min_size=f.n, max_size=f.n))
    h = compose(f, gs)
    for cell in itertools.product(range(f.k), repeat=m):
        assert h(*cell) == f(*(g(*cell) for g in gs))


@given(functions(max_k=3, max_n=2), st.data())
def test_conjugation_commutes_with_composition(f, data):
    sigma = Permutation(tuple(data.draw(st.permutations(range(f.k)))))
    inner = st.lists(st.integers(0, f.k - 1), min_size=f.k**2, max_size=f.k**2).map(lambda t: FiniteFunction(f.k, 2, tuple(t)))
    gs = data.draw(st.lists(inner, min_size=f.n, max_size=f.n))
    assert conjugate(compose(f, gs), sigma) == compose(conjugate(f, sigma), [conjugate(g, sigma) for g in gs])


@given(st.integers(2, 3).flatmap(lambda k: st.lists(st.integers(0, k - 1), min_size=k**3, max_size=k**3).map(lambda t: FiniteFunction(k, 3, tuple(t)))))
def test_pattern_predicates_match_cell_scan(f):
    low = [c for c in itertools.product(range(f.k), repeat=3) if len(set(c)) < 3]
    majority = all(f(*c) == max(set(c), key=c.count) for c in low)
    minority = all(f(*c) == (min(set(c), key=c.count) if len(set(c)) == 2 else c[0]) for c in low)
    report = classify_function(f)
    assert report.is_d_function == majority
    assert report.is_l_function == minority
